// entloc: command-line front end for the localizable-entanglement library.
//
// Exit codes: 0 ok, 1 property violation, 2 malformed input, 3 dimension mismatch.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entloc/collaborate.hpp"
#include "entloc/constructions.hpp"
#include "entloc/io.hpp"
#include "entloc/localize.hpp"
#include "entloc/measures.hpp"
#include "entloc/properties.hpp"
#include "entloc/random.hpp"
#include "entloc/version.hpp"

using namespace entloc;

namespace {

struct Options {
    std::uint64_t seed = 0;
    std::optional<int> restarts;
    std::optional<double> tol;
    int threads = 1;
    std::string out;
    std::string format = "text";
    std::string measure = "entropy";
    std::string cut;
    std::string roof_config;
    std::optional<int> roof_restarts;
    std::optional<int> outcomes;
};

/// What a command hands back for printing.
struct Outcome {
    json config = json::object();
    json results = json::object();
    std::vector<std::string> text;
    std::vector<std::vector<std::string>> csv;
    int exit_code = 0;
};

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string exact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_labels(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

RoofConfig roof_config(const Options& o) {
    RoofConfig c;
    if (!o.roof_config.empty()) c = roof_config_from_json(read_json_file(o.roof_config));
    if (o.roof_restarts) c.restarts = *o.roof_restarts;
    if (o.tol) c.tol = *o.tol;
    if (o.roof_config.empty()) c.seed = derive_seed(o.seed, 0x600f);
    c.threads = o.threads;
    return c;
}

LeConfig le_config(const Options& o, int default_restarts) {
    LeConfig c;
    c.restarts = o.restarts.value_or(default_restarts);
    if (o.tol) c.tol = *o.tol;
    if (o.outcomes) c.outcomes = *o.outcomes;
    c.seed = o.seed;
    c.threads = o.threads;
    return c;
}

json le_config_json(const LeConfig& c) {
    return {{"restarts", c.restarts}, {"outcomes", c.outcomes}, {"tol", c.tol}, {"threads", c.threads}};
}

const DimSpec& dims_of(const AnyState& s) {
    return std::visit([](const auto& x) -> const DimSpec& { return x.dims(); }, s);
}

// ------------------------------------------------------------------ measure

Outcome cmd_measure(const Options& o, const std::string& path) {
    const AnyState state = state_from_json(read_json_file(path));
    const MeasureKind kind = measure_from_string(o.measure);
    const DimSpec& dims = dims_of(state);

    const auto left = o.cut.empty() ? dims.labels_with_role(Role::A) : split_labels(o.cut);
    for (const auto& l : left) dims.index_of(l);
    const auto right = complement(dims, left);
    if (left.empty() || right.empty()) throw DimensionError("the cut must leave parties on both sides");
    const int da = dims.dim_of(left);
    const int db = dims.dim_of(right);

    std::vector<std::string> order = left;
    order.insert(order.end(), right.begin(), right.end());

    std::optional<Matrix> coefficients;
    Matrix sigma;
    if (const auto* psi = std::get_if<PureState>(&state)) {
        coefficients = coefficient_matrix(*psi, left);
    } else {
        sigma = permute(std::get<DensityOperator>(state), order).matrix();
        if (auto v = pure_part(sigma)) coefficients = reshape_rows(*v, da, db);
    }

    const auto require_qubits = [&] {
        if (da != 2 || db != 2) throw DimensionError("the Wootters concurrence needs a 2x2 cut");
    };

    Outcome out;
    out.config = {{"state", path}, {"measure", std::string(to_string(kind))}, {"cut", left}};
    double value = 0.0;
    std::string method = "closed form";
    std::string bound = "exact";
    bool converged = true;
    if (coefficients) {
        switch (kind) {
            case MeasureKind::Entropy: value = entropy_from_coefficients(*coefficients); break;
            case MeasureKind::GConcurrence:
                value = gconcurrence_from_coefficients(*coefficients / coefficients->norm());
                break;
            case MeasureKind::Wootters:
                require_qubits();
                value = wootters_from_coefficients(*coefficients);
                break;
        }
        method = "closed form (pure state)";
    } else if (kind == MeasureKind::Wootters) {
        require_qubits();
        value = wootters_concurrence(sigma);
    } else if (kind == MeasureKind::GConcurrence && da != db) {
        method = "closed form (vanishes for unequal local dimensions)";
    } else {
        const RoofConfig rc = roof_config(o);
        const RoofResult r = convex_roof(sigma, da, db, kind, rc);
        value = r.value;
        converged = r.converged;
        method = "convex-roof optimizer";
        bound = "upper bound";
        out.config["roof"] = roof_config_to_json(rc);
        out.results["roof"] = roof_result_to_json(r);
    }

    out.results["value"] = value;
    out.results["measure"] = std::string(to_string(kind));
    out.results["method"] = method;
    out.results["bound"] = bound;
    out.results["converged"] = converged;
    out.text.push_back(std::string(to_string(kind)) + " = " + fixed(value, 9) + "  [" + method + ", " + bound +
                       (converged ? "" : ", not converged") + "]");
    out.csv = {{"measure", "value", "method", "bound", "converged"},
               {std::string(to_string(kind)), exact(value), method, bound, converged ? "true" : "false"}};
    return out;
}

// ------------------------------------------------------------------ le

Outcome cmd_le(const Options& o, const std::string& path) {
    const DensityOperator rho = as_density(state_from_json(read_json_file(path)));
    const MeasureKind kind = measure_from_string(o.measure);
    const RoofConfig rc = roof_config(o);
    const LeConfig cfg = le_config(o, 16);
    const LEResult r = optimize_le(rho, RootMeasure(kind, rc), cfg);

    Outcome out;
    out.config = le_config_json(cfg);
    out.config["state"] = path;
    out.config["measure"] = std::string(to_string(kind));
    out.config["roof"] = roof_config_to_json(rc);
    out.results = le_result_to_json(r);
    out.results["bound"] = "lower bound";
    out.text.push_back("LE(" + std::string(to_string(kind)) + ") >= " + fixed(r.value, 9) +
                       "  [optimizer lower bound, " + std::to_string(r.restarts) + " restarts, best restart " +
                       std::to_string(r.best_restart) + (r.converged ? "" : ", not converged") + "]");
    for (const auto& b : r.branches)
        out.text.push_back("  outcome " + std::to_string(b.outcome) + ": p = " + fixed(b.probability, 9) +
                           ", value = " + fixed(b.value, 9));
    out.csv.push_back({"outcome", "p", "branch_value"});
    for (const auto& b : r.branches) out.csv.push_back({std::to_string(b.outcome), exact(b.probability), exact(b.value)});
    return out;
}

// ------------------------------------------------------------------ protocol

Outcome cmd_protocol(const Options& o, const std::string& state_path, const std::string& protocol_path) {
    const DensityOperator rho = as_density(state_from_json(read_json_file(state_path)));
    const ProtocolTree tree = protocol_from_json(read_json_file(protocol_path));
    const MeasureKind kind = measure_from_string(o.measure);
    const RoofConfig rc = roof_config(o);
    const ProtocolResult r = evaluate_protocol(rho, tree, RootMeasure(kind, rc));

    Outcome out;
    out.config = {{"state", state_path}, {"protocol", protocol_path}, {"measure", std::string(to_string(kind))}};
    out.results = protocol_result_to_json(r);
    out.results["bound"] = "lower bound";
    out.text.push_back("protocol average(" + std::string(to_string(kind)) + ") = " + fixed(r.average, 9) +
                       "  [lower bound on the entanglement of collaboration]");
    out.csv.push_back({"path", "p", "value"});
    for (const auto& l : r.leaves) {
        std::string p;
        for (int k : l.path) p += (p.empty() ? "" : "-") + std::to_string(k);
        out.text.push_back("  leaf " + p + ": p = " + fixed(l.probability, 9) + ", value = " + fixed(l.value, 9));
        out.csv.push_back({p, exact(l.probability), exact(l.value)});
    }
    return out;
}

// ------------------------------------------------------------------ reproduce

Outcome cmd_reproduce(const Options& o) {
    const LockedStateSpec spec = LockedStateSpec::defaults();
    const DensityOperator rho(build_locked_state(spec));
    const ProtocolTree protocol = paper_eoc_protocol(spec);
    const RoofConfig rc = roof_config(o);
    const LeConfig cfg = le_config(o, 64);

    const ProtocolResult eoc = evaluate_protocol(rho, protocol, RootMeasure::entropy(rc));
    double min_fidelity = 1.0;
    for (const auto& leaf : eoc.leaves) {
        const int x = leaf.path.at(0);
        const int y = leaf.path.at(1);
        const Vector ab = kron(Matrix::Identity(4, 4), spec.u[x][y]) * phi_plus(4).amplitudes();
        min_fidelity = std::min(min_fidelity, fidelity(kron(basis_vector(2, x), ab), leaf.state.matrix()));
    }
    const LEResult le = optimize_le(rho, RootMeasure::entropy(rc), cfg);
    double best_restart = 0.0;
    for (double v : le.restart_values) best_restart = std::max(best_restart, v);

    const ProtocolResult eoc_g = evaluate_protocol(rho, protocol, RootMeasure::g_concurrence(rc));
    const LEResult le_g = optimize_le(rho, RootMeasure::g_concurrence(rc), cfg);

    Outcome out;
    out.config = le_config_json(cfg);
    out.config["state"] = "locked 8x4x2";
    out.config["V1"] = "(I + i sigma_y)/sqrt(2)";
    out.results = {{"eoc_entropy", eoc.average},
                   {"eoc_entropy_bound", "lower bound (explicit protocol)"},
                   {"leaf_min_fidelity", min_fidelity},
                   {"le_entropy", le.value},
                   {"le_entropy_bound", "lower bound (optimizer)"},
                   {"le_entropy_restart_values", le.restart_values},
                   {"le_entropy_converged", le.converged},
                   {"eoc_minus_le_entropy", eoc.average - le.value},
                   {"eoc_gconc", eoc_g.average},
                   {"le_gconc", le_g.value},
                   {"eoc_protocol", protocol_result_to_json(eoc)},
                   {"le_povm", povm_to_json(le.povm)}};

    out.text = {
        "Locked state on a(2) A(4) | B(4) with helper C(2), V1 = (I + i sigma_y)/sqrt(2)",
        "",
        "  EoC(entropy) = " + fixed(eoc.average) + "   two-round protocol, min leaf fidelity " + fixed(min_fidelity, 12),
        "  LE(entropy) >= " + fixed(le.value) + "   optimizer lower bound, " + std::to_string(le.restarts) +
            " restarts, best restart " + fixed(best_restart),
        "  EoC - LE      <= " + fixed(eoc.average - le.value) + "   LE(entropy) < 2 is strict",
        "  EoC(G) = LE(G) = " + fixed(std::max(eoc_g.average, le_g.value)) + "   G vanishes on the 8x4 cut",
        "",
        std::string("EoC > LE for entropy: ") + (eoc.average > best_restart ? "yes" : "no") +
            "; EoC = LE for G: " + (eoc_g.average == 0.0 && le_g.value == 0.0 ? "yes" : "no"),
    };
    out.csv = {{"quantity", "measure", "value", "bound"},
               {"EoC", "entropy", exact(eoc.average), "lower bound (explicit protocol)"},
               {"LE", "entropy", exact(le.value), "lower bound (optimizer)"},
               {"EoC", "gconc", exact(eoc_g.average), "exact"},
               {"LE", "gconc", exact(le_g.value), "exact"}};
    return out;
}

// ------------------------------------------------------------------ properties

Outcome cmd_properties(const Options& o, const std::string& suite_name, int trials) {
    const Suite suite = suite_from_string(suite_name);
    MonotonicityOptions mo;
    if (o.restarts) mo.le.restarts = *o.restarts;
    if (o.roof_restarts) mo.roof.restarts = *o.roof_restarts;
    mo.le.threads = o.threads;
    const SuiteReport rep = run_suite(suite, trials, o.seed, mo);

    Outcome out;
    out.config = {{"suite", suite_name}, {"trials", trials}};
    if (suite == Suite::Monotonicity)
        out.config["le"] = le_config_json(mo.le), out.config["roof"] = roof_config_to_json(mo.roof);
    json summary = json::array();
    out.csv.push_back({"check", "limit", "max", "mean"});
    for (const auto& s : rep.summary) {
        summary.push_back({{"check", s.name}, {"limit", s.limit}, {"max", s.max}, {"mean", s.mean}});
        out.text.push_back(s.name + ": max " + exact(s.max) + ", mean " + exact(s.mean) + ", limit " + exact(s.limit));
        out.csv.push_back({s.name, exact(s.limit), exact(s.max), exact(s.mean)});
    }
    out.results = {{"suite", suite_name}, {"trials", rep.trials}, {"failures", rep.failures}, {"summary", summary}};
    out.text.push_back(std::to_string(rep.trials - rep.failures) + "/" + std::to_string(rep.trials) + " trials passed");
    if (!rep.passed()) {
        out.results["first_failure"] = *rep.first_failure;
        out.results["first_failure_seed"] = *rep.first_failure_seed;
        out.text.push_back("FAIL: trial " + std::to_string(*rep.first_failure) + " (trial seed " +
                           std::to_string(*rep.first_failure_seed) + "); rerun with --seed " + std::to_string(o.seed) +
                           " --trials " + std::to_string(*rep.first_failure + 1));
        out.exit_code = 1;
    }
    return out;
}

// ------------------------------------------------------------------ emit

json emit_document(const std::string& name, int dim, int parties, double p) {
    if (name == "bell") return state_to_json(bell_state());
    if (name == "phi_plus") return state_to_json(phi_plus(dim));
    if (name == "ghz") return state_to_json(ghz_state(parties));
    if (name == "w") return state_to_json(w_state(parties));
    if (name == "werner") return state_to_json(werner_state(p));
    if (name == "locked") return state_to_json(build_locked_state());
    if (name == "locked-protocol") return protocol_to_json(paper_eoc_protocol());
    if (name == "uncorrelated") {
        const PureState c(basis_vector(2, 0), DimSpec({{"C", 2, Role::Z}}));
        return state_to_json(DensityOperator(tensor_product(DensityOperator(bell_state()), DensityOperator(c))));
    }
    throw ValueError("unknown state '" + name + "'");
}

void print(const Outcome& out, const std::string& format, const json& report) {
    if (format == "json") {
        std::cout << report.dump(2) << '\n';
    } else if (format == "csv") {
        for (const auto& row : out.csv) {
            for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << row[i];
            std::cout << '\n';
        }
    } else {
        for (const auto& line : out.text) std::cout << line << '\n';
    }
}

std::uint64_t default_seed() {
    const char* env = std::getenv("ENTLOC_SEED");
    if (!env || !*env) return 0;
    try {
        std::size_t used = 0;
        const auto v = std::stoull(env, &used, 0);
        if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("ENTLOC_SEED is not an unsigned integer: '") + env + "'");
    }
}

int run(int argc, char** argv) {
    Options o;
    o.seed = default_seed();

    CLI::App app{"Localizable entanglement and entanglement of collaboration"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", o.seed, "Master seed (default: $ENTLOC_SEED or 0)");
    app.add_option("--restarts", o.restarts, "Optimizer restarts");
    app.add_option("--tol", o.tol, "Optimizer tolerance")->check(CLI::NonNegativeNumber);
    app.add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", o.out, "Write the JSON run report (or emitted document) here");
    app.add_option("--format", o.format, "Standard output format")->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--measure", o.measure, "Root measure: entropy, wootters or gconc");
    app.add_option("--roof-restarts", o.roof_restarts, "Convex-roof optimizer restarts");
    app.add_option("--roof-config", o.roof_config, "JSON file with convex-roof optimizer settings");

    std::string state_path, protocol_path, suite = "jamio", emit_name;
    int trials = 100, dim = 2, parties = 3;
    double werner_p = 0.8;

    auto* measure = app.add_subcommand("measure", "Entanglement of an A|B state");
    measure->add_option("state", state_path, "State file")->required();
    measure->add_option("--cut", o.cut, "Comma-separated labels on the left of the cut (default: A-role parties)");

    auto* le = app.add_subcommand("le", "Optimize the localizable entanglement (lower bound)");
    le->add_option("state", state_path, "State file")->required();
    le->add_option("--outcomes", o.outcomes, "POVM outcomes per helper party (default d^2)");

    auto* protocol = app.add_subcommand("protocol", "Evaluate an LOCC protocol tree");
    protocol->add_option("state", state_path, "State file")->required();
    protocol->add_option("protocol", protocol_path, "Protocol file")->required();

    auto* reproduce = app.add_subcommand("reproduce", "Locked-state comparison of EoC and LE");

    auto* properties = app.add_subcommand("properties", "Run a seeded property suite");
    properties->add_option("--suite", suite, "jamio, gconc, convexity or monotonicity")
        ->check(CLI::IsMember({"jamio", "gconc", "convexity", "monotonicity"}));
    properties->add_option("--trials", trials, "Number of trials")->check(CLI::NonNegativeNumber);

    auto* emit = app.add_subcommand("emit", "Write a canonical state or protocol file");
    emit->add_option("name", emit_name,
                     "bell, phi_plus, ghz, w, werner, locked, locked-protocol or uncorrelated")
        ->required();
    emit->add_option("--dim", dim, "Local dimension for phi_plus")->check(CLI::PositiveNumber);
    emit->add_option("--parties", parties, "Number of qubits for ghz and w")->check(CLI::Range(2, 12));
    emit->add_option("--p", werner_p, "Werner mixing parameter");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (emit->parsed()) {
        const json doc = emit_document(emit_name, dim, parties, werner_p);
        if (o.out.empty())
            std::cout << doc.dump(2) << '\n';
        else
            write_json_file(o.out, doc);
        return 0;
    }

    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    std::string command;
    if (measure->parsed()) {
        command = "measure";
        out = cmd_measure(o, state_path);
    } else if (le->parsed()) {
        command = "le";
        out = cmd_le(o, state_path);
    } else if (protocol->parsed()) {
        command = "protocol";
        out = cmd_protocol(o, state_path, protocol_path);
    } else if (reproduce->parsed()) {
        command = "reproduce";
        out = cmd_reproduce(o);
    } else {
        command = "properties";
        out = cmd_properties(o, suite, trials);
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const json report = {{"command", command}, {"version", kVersion}, {"seed", o.seed},
                         {"config", out.config}, {"wall_time", wall}, {"results", out.results}};
    print(out, o.format, report);
    if (!o.out.empty()) write_json_file(o.out, report);
    return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const DimensionError& e) {
        std::cerr << "dimension error: " << e.what() << '\n';
        return 3;
    } catch (const ValueError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
