#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "entloc/constructions.hpp"
#include "entloc/io.hpp"
#include "entloc/random.hpp"

using namespace entloc;

namespace {

json pure_doc(json data) {
    return {{"dims", {{{"label", "A"}, {"dim", 2}, {"role", "A"}}, {{"label", "B"}, {"dim", 2}, {"role", "B"}}}},
            {"kind", "pure"},
            {"data", std::move(data)}};
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("entloc_test_" + name);
}

}  // namespace

TEST_SUITE("states") {
    TEST_CASE("pure round trip") {
        Rng rng(1);
        const DimSpec dims({{"A", 2, Role::A}, {"B", 3, Role::B}, {"C", 2, Role::Z}});
        const PureState psi = random_pure(dims, rng);
        const json doc = state_to_json(psi);
        const AnyState back = state_from_json(doc);
        REQUIRE(std::holds_alternative<PureState>(back));
        const auto& p = std::get<PureState>(back);
        CHECK(p.dims() == dims);
        CHECK(max_abs_diff(p.amplitudes(), psi.amplitudes()) == 0.0);
        CHECK(state_to_json(back) == doc);
    }

    TEST_CASE("density round trip") {
        Rng rng(2);
        const auto rho = random_density(DimSpec({{"A", 2, Role::A}, {"B", 2, Role::B}}), 3, rng);
        const json doc = state_to_json(rho);
        const AnyState back = state_from_json(json::parse(doc.dump()));
        REQUIRE(std::holds_alternative<DensityOperator>(back));
        CHECK(max_abs_diff(std::get<DensityOperator>(back).matrix(), rho.matrix()) == 0.0);
        CHECK(state_to_json(back) == doc);
        CHECK(max_abs_diff(as_density(state_from_json(state_to_json(bell_state()))).matrix(),
                           DensityOperator(bell_state()).matrix()) < 1e-15);
    }

    TEST_CASE("malformed documents are parse errors") {
        const double h = M_SQRT1_2;
        CHECK_NOTHROW(state_from_json(pure_doc({{h, 0}, {0, 0}, {0, 0}, {h, 0}})));
        CHECK_THROWS_AS(state_from_json(json::array()), ParseError);
        CHECK_THROWS_AS(state_from_json(pure_doc("oops")), ParseError);
        CHECK_THROWS_AS(state_from_json(pure_doc({{h, 0, 1}, {0, 0}, {0, 0}, {h, 0}})), ParseError);
        CHECK_THROWS_AS(state_from_json(pure_doc({{1, 0}, {0, 0}, {0, 0}, {1, 0}})), ParseError);
        json bad_kind = pure_doc({{1, 0}, {0, 0}, {0, 0}, {0, 0}});
        bad_kind["kind"] = "mixed";
        CHECK_THROWS_AS(state_from_json(bad_kind), ParseError);
        json bad_role = pure_doc({{1, 0}, {0, 0}, {0, 0}, {0, 0}});
        bad_role["dims"][0]["role"] = "Q";
        CHECK_THROWS_AS(state_from_json(bad_role), ParseError);
        json missing = pure_doc({{1, 0}, {0, 0}, {0, 0}, {0, 0}});
        missing.erase("dims");
        CHECK_THROWS_AS(state_from_json(missing), ParseError);
    }

    TEST_CASE("length mismatch is a dimension error") {
        CHECK_THROWS_AS(state_from_json(pure_doc({{1, 0}, {0, 0}, {0, 0}})), DimensionError);
        json density = state_to_json(DensityOperator(bell_state()));
        density["data"].erase(0);
        CHECK_THROWS(state_from_json(density));
        CHECK_THROWS_AS(matrix_from_json(json::array({json::array({1, 0}), json::array({0, 0})})), DimensionError);
    }
}

TEST_SUITE("protocols and configs") {
    TEST_CASE("locked-state protocol round trip evaluates identically") {
        const ProtocolTree tree = paper_eoc_protocol();
        const json doc = protocol_to_json(tree);
        const ProtocolTree back = protocol_from_json(json::parse(doc.dump()));
        CHECK(protocol_to_json(back) == doc);
        CHECK(back.depth() == 2);
        const DensityOperator rho(build_locked_state());
        const auto a = evaluate_protocol(rho, tree, RootMeasure::entropy());
        const auto b = evaluate_protocol(rho, back, RootMeasure::entropy());
        CHECK(a.average == b.average);
        const json out = protocol_result_to_json(a);
        CHECK(out["leaves"].size() == 4);
        CHECK(out["bound"] == "lower bound");
    }

    TEST_CASE("leaf encodings") {
        CHECK(protocol_from_json(json::object()).depth() == 0);
        CHECK(protocol_from_json(json(nullptr)).depth() == 0);
        json node = protocol_to_json(ProtocolTree::terminal(computational_measurement("C", 2)));
        node["children"] = {{"0", nullptr}};
        CHECK(protocol_from_json(node).depth() == 1);
        node["children"] = {{"7", json::object()}};
        CHECK_THROWS_AS(protocol_from_json(node), ParseError);
        node["children"] = {{"x", json::object()}};
        CHECK_THROWS_AS(protocol_from_json(node), ParseError);
        node["instrument"] = "none";
        CHECK_THROWS_AS(protocol_from_json(node), ParseError);
    }

    TEST_CASE("roof config") {
        const RoofConfig defaults;
        const RoofConfig parsed = roof_config_from_json(json::object());
        CHECK(parsed.restarts == defaults.restarts);
        CHECK(parsed.tol == defaults.tol);
        RoofConfig c;
        c.restarts = 3;
        c.ensemble_size = 5;
        c.max_iters = 40;
        c.tol = 1e-7;
        c.seed = 11;
        CHECK(roof_config_to_json(roof_config_from_json(roof_config_to_json(c))) == roof_config_to_json(c));
        CHECK_THROWS_AS(roof_config_from_json(json{{"restarts", 0}}), ParseError);
        CHECK_THROWS_AS(roof_config_from_json(json{{"tol", "small"}}), ParseError);
        CHECK_THROWS_AS(roof_config_from_json(json::array()), ParseError);
    }
}

TEST_SUITE("results and files") {
    TEST_CASE("LE result fields") {
        LeConfig c;
        c.restarts = 2;
        c.seed = 9;
        const auto r = optimize_le(DensityOperator(ghz_state(3)), RootMeasure::entropy(), c);
        const json j = le_result_to_json(r);
        for (const char* key : {"value", "bound", "measure", "converged", "seed", "restarts", "iterations",
                                "best_restart", "branches", "povm"})
            CHECK(j.contains(key));
        CHECK(j["bound"] == "lower bound");
        CHECK(j["seed"] == 9);
        CHECK(j["value"].get<double>() == r.value);
        double p = 0.0;
        for (const auto& b : j["branches"]) p += b["p"].get<double>();
        CHECK(p == doctest::Approx(1.0));
    }

    TEST_CASE("file round trip and missing files") {
        const auto path = temp_file("state.json");
        write_json_file(path, state_to_json(ghz_state(3)));
        CHECK(read_json_file(path) == state_to_json(ghz_state(3)));
        std::ofstream(path) << "{ not json";
        CHECK_THROWS_AS(read_json_file(path), ParseError);
        std::filesystem::remove(path);
        CHECK_THROWS_AS(read_json_file(path), ParseError);
    }
}
