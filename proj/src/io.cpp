#include "entloc/io.hpp"

#include <cmath>
#include <fstream>

namespace entloc {

namespace {

template <class F>
auto parsing(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    } catch (const ValueError& e) {
        throw ParseError(e.what());
    }
}

cplx complex_from_json(const json& c) {
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
        throw ParseError("complex numbers are encoded as [re, im]");
    return {c[0].get<double>(), c[1].get<double>()};
}

}  // namespace

json complex_list(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
    return out;
}

json matrix_to_json(const Matrix& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back({m(i, j).real(), m(i, j).imag()});
    return out;
}

Vector vector_from_json(const json& data) {
    if (!data.is_array()) throw ParseError("\"data\" must be an array of [re, im] pairs");
    Vector v(static_cast<Eigen::Index>(data.size()));
    for (std::size_t i = 0; i < data.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(data[i]);
    return v;
}

Matrix matrix_from_json(const json& data) {
    const Vector flat = vector_from_json(data);
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(flat.size()))));
    if (d * d != flat.size() || d == 0) throw DimensionError("matrix data is not a non-empty square");
    return reshape_rows(flat, static_cast<int>(d), static_cast<int>(d));
}

json dims_to_json(const DimSpec& dims) {
    json out = json::array();
    for (const auto& p : dims.parties())
        out.push_back({{"label", p.label}, {"dim", p.dim}, {"role", std::string(to_string(p.role))}});
    return out;
}

DimSpec dims_from_json(const json& j) {
    return parsing([&] {
        if (!j.is_array() || j.empty()) throw ParseError("\"dims\" must be a non-empty array");
        std::vector<Party> parties;
        for (const auto& p : j)
            parties.push_back({p.at("label").get<std::string>(), p.at("dim").get<int>(),
                               role_from_string(p.at("role").get<std::string>())});
        return DimSpec(std::move(parties));
    });
}

json state_to_json(const PureState& psi) {
    return {{"dims", dims_to_json(psi.dims())}, {"kind", "pure"}, {"data", complex_list(psi.amplitudes())}};
}

json state_to_json(const DensityOperator& rho) {
    return {{"dims", dims_to_json(rho.dims())}, {"kind", "density"}, {"data", matrix_to_json(rho.matrix())}};
}

json state_to_json(const AnyState& state) {
    return std::visit([](const auto& s) { return state_to_json(s); }, state);
}

AnyState state_from_json(const json& j) {
    return parsing([&]() -> AnyState {
        if (!j.is_object()) throw ParseError("state document must be a JSON object");
        DimSpec dims = dims_from_json(j.at("dims"));
        const auto kind = j.at("kind").get<std::string>();
        const json& data = j.at("data");
        const auto d = static_cast<std::size_t>(dims.total_dim());
        if (!data.is_array()) throw ParseError("\"data\" must be an array of [re, im] pairs");
        if (kind == "pure") {
            if (data.size() != d)
                throw DimensionError("pure state data length does not match the declared dimensions");
            return PureState(vector_from_json(data), std::move(dims));
        }
        if (kind == "density") {
            if (data.size() != d * d)
                throw DimensionError("density data length does not match the declared dimensions");
            return DensityOperator(matrix_from_json(data), std::move(dims));
        }
        throw ParseError("\"kind\" must be \"pure\" or \"density\"");
    });
}

DensityOperator as_density(const AnyState& state) {
    if (const auto* psi = std::get_if<PureState>(&state)) return DensityOperator(*psi);
    return std::get<DensityOperator>(state);
}

json protocol_to_json(const ProtocolTree& tree) {
    if (tree.is_leaf()) return json::object();
    json instrument = json::array();
    for (const auto& outcome : tree.instrument->kraus) {
        json ops = json::array();
        for (const auto& m : outcome) ops.push_back(matrix_to_json(m));
        instrument.push_back(std::move(ops));
    }
    json children = json::object();
    for (std::size_t k = 0; k < tree.children.size(); ++k)
        if (!tree.children[k].is_leaf()) children[std::to_string(k)] = protocol_to_json(tree.children[k]);
    return {{"party", tree.instrument->party}, {"instrument", instrument}, {"children", children}};
}

ProtocolTree protocol_from_json(const json& j) {
    return parsing([&]() -> ProtocolTree {
        if (j.is_null()) return ProtocolTree::leaf();
        if (!j.is_object()) throw ParseError("protocol node must be an object");
        if (!j.contains("party")) {
            if (j.contains("instrument")) throw ParseError("protocol node with an instrument needs a \"party\"");
            return ProtocolTree::leaf();
        }
        Instrument inst{j.at("party").get<std::string>(), {}};
        for (const auto& outcome : j.at("instrument")) {
            std::vector<Matrix> ops;
            for (const auto& k : outcome) ops.push_back(matrix_from_json(k));
            inst.kraus.push_back(std::move(ops));
        }
        std::vector<ProtocolTree> children(inst.kraus.size());
        if (j.contains("children")) {
            for (const auto& [key, child] : j.at("children").items()) {
                std::size_t idx = 0;
                try {
                    idx = std::stoul(key);
                } catch (const std::exception&) {
                    throw ParseError("protocol child keys must be outcome indices");
                }
                if (idx >= children.size()) throw ParseError("protocol child index out of range");
                children[idx] = protocol_from_json(child);
            }
        }
        return ProtocolTree::node(std::move(inst), std::move(children));
    });
}

json roof_config_to_json(const RoofConfig& c) {
    return {{"restarts", c.restarts}, {"ensemble_size", c.ensemble_size}, {"max_iters", c.max_iters},
            {"tol", c.tol}, {"seed", c.seed}};
}

RoofConfig roof_config_from_json(const json& j) {
    return parsing([&] {
        RoofConfig c;
        if (!j.is_object()) throw ParseError("optimizer config must be an object");
        c.restarts = j.value("restarts", c.restarts);
        c.ensemble_size = j.value("ensemble_size", c.ensemble_size);
        c.max_iters = j.value("max_iters", c.max_iters);
        c.tol = j.value("tol", c.tol);
        c.seed = j.value("seed", c.seed);
        if (c.restarts < 1 || c.max_iters < 0 || c.ensemble_size < 0 || !(c.tol >= 0.0))
            throw ParseError("optimizer config values out of range");
        return c;
    });
}

json povm_to_json(const ProductPovm& povm) {
    json outcomes = json::array();
    for (const auto& outcome : povm.outcomes()) {
        json factors = json::array();
        for (std::size_t i = 0; i < outcome.size(); ++i)
            factors.push_back({{"party", povm.parties()[i]}, {"matrix", matrix_to_json(outcome[i])}});
        outcomes.push_back(std::move(factors));
    }
    return outcomes;
}

json le_result_to_json(const LEResult& r) {
    json branches = json::array();
    for (const auto& b : r.branches)
        branches.push_back({{"outcome", b.outcome}, {"p", b.probability}, {"branch_value", b.value}});
    return {{"value", r.value},           {"bound", "lower bound"},       {"measure", r.measure},
            {"converged", r.converged},   {"seed", r.seed},         {"restarts", r.restarts},
            {"iterations", r.iterations}, {"best_restart", r.best_restart}, {"branches", branches},
            {"povm", povm_to_json(r.povm)}};
}

json roof_result_to_json(const RoofResult& r) {
    return {{"value", r.value},
            {"bound", "upper bound"},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"restarts", r.restarts},
            {"ensemble_size", r.ensemble.states.size()},
            {"weights", r.ensemble.weights}};
}

json protocol_result_to_json(const ProtocolResult& r) {
    json leaves = json::array();
    for (const auto& l : r.leaves)
        leaves.push_back({{"path", l.path}, {"p", l.probability}, {"value", l.value}});
    return {{"average", r.average}, {"bound", "lower bound"}, {"leaves", leaves}, {"dropped_probability", r.dropped_probability}};
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError("'" + path.string() + "': " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

}  // namespace entloc
