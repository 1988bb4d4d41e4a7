#include "entloc/properties.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "entloc/collaborate.hpp"
#include "entloc/constructions.hpp"
#include "entloc/jamiolkowski.hpp"
#include "entloc/random.hpp"

namespace entloc {

std::string_view to_string(Suite suite) {
    switch (suite) {
        case Suite::Jamio: return "jamio";
        case Suite::GConc: return "gconc";
        case Suite::Convexity: return "convexity";
        case Suite::Monotonicity: return "monotonicity";
    }
    return "?";
}

Suite suite_from_string(std::string_view name) {
    for (Suite s : {Suite::Jamio, Suite::GConc, Suite::Convexity, Suite::Monotonicity})
        if (to_string(s) == name) return s;
    throw ValueError("unknown property suite '" + std::string(name) + "'");
}

bool TrialResult::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok(); });
}

namespace {

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double relative_error(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

DimSpec random_jamio_dims(Rng& rng) {
    std::vector<Party> parties{{"A", uniform_int(rng, 2, 3), Role::A}, {"B", uniform_int(rng, 2, 3), Role::B}};
    const int nz = uniform_int(rng, 1, 2);
    for (int k = 0; k < nz; ++k) parties.push_back({"C" + std::to_string(k + 1), uniform_int(rng, 2, 3), Role::Z});
    // Place a Z party first now and then, so non-contiguous layouts are covered.
    if (uniform_int(rng, 0, 2) == 0) std::rotate(parties.begin(), parties.begin() + 2, parties.begin() + 3);
    return DimSpec(std::move(parties));
}

/// A random effect 0 <= Q <= I on the Z parties.
Matrix random_effect(int dim, Rng& rng) {
    const int outcomes = uniform_int(rng, 2, 4);
    return random_povm(dim, outcomes, rng, uniform_int(rng, (dim + outcomes - 1) / outcomes, dim))[0];
}

}  // namespace

TrialResult jamio_trial(std::uint64_t seed, bool locked_state) {
    Rng rng(seed);
    const DensityOperator rho = locked_state
                                    ? DensityOperator(build_locked_state())
                                    : [&] {
                                          const DimSpec dims = random_jamio_dims(rng);
                                          return random_density(dims, uniform_int(rng, 1, 4), rng);
                                      }();
    const auto jmap = JamiolkowskiMap::from_state(rho);
    const double roundtrip = max_abs_diff(jmap.reconstruct().matrix(), rho.matrix());

    double branch = 0.0;
    const Matrix q = random_effect(jmap.input_dim(), rng);
    const Branch direct = conditional_state(rho, q);
    if (direct.state) {
        const Matrix via_map = jmap.apply(q.transpose()) / direct.probability;
        branch = max_abs_diff(via_map, direct.state->matrix());
    }
    return {seed, {{"roundtrip_error", roundtrip, 1e-12}, {"branch_error", branch, 1e-10}}};
}

TrialResult gconc_trial(std::uint64_t seed) {
    Rng rng(seed);
    const int d = uniform_int(rng, 2, 4);
    const double dd = d;
    const Matrix psi = complex_gaussian(d, d, rng) / std::sqrt(dd * dd);
    const Matrix a = complex_gaussian(d, d, rng) / std::sqrt(dd);
    const Matrix b = complex_gaussian(d, d, rng) / std::sqrt(dd);
    const cplx c = complex_gaussian(1, 1, rng)(0, 0);

    const double g = gconcurrence_from_coefficients(psi);
    const double homogeneity = relative_error(gconcurrence_from_coefficients(c * psi), std::norm(c) * g);

    // (A (x) B) psi has coefficient matrix A M B^T.
    const double lhs = gconcurrence_from_coefficients(a * psi * b.transpose());
    const double rhs = std::pow(std::abs(a.determinant()), 2.0 / dd) * std::pow(std::abs(b.determinant()), 2.0 / dd) * g;
    const double multiplicativity = relative_error(lhs, rhs);

    const double maximal = std::abs(gconcurrence_pure(phi_plus(d)) - 1.0);
    return {seed,
            {{"homogeneity_error", homogeneity, 1e-12},
             {"multiplicativity_error", multiplicativity, 1e-10},
             {"maximally_entangled_error", maximal, 1e-12}}};
}

TrialResult convexity_trial(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Party> parties{{"A", 2, Role::A}, {"B", 2, Role::B}};
    std::vector<LocalPovm> local;
    switch (uniform_int(rng, 0, 2)) {
        case 0: parties.push_back({"C", 2, Role::Z}); break;
        case 1: parties.push_back({"C", 3, Role::Z}); break;
        default:
            parties.push_back({"C1", 2, Role::Z});
            parties.push_back({"C2", 2, Role::Z});
    }
    const DimSpec dims(parties);
    for (const auto& z : dims.z_labels()) {
        const int dz = dims.dim_of(std::vector<std::string>{z});
        const int outcomes = uniform_int(rng, 2, dz * dz);
        const int min_rank = (dz + outcomes - 1) / outcomes;
        local.push_back({z, random_povm(dz, outcomes, rng, uniform_int(rng, min_rank, std::max(min_rank, dz - 1)))});
    }
    const ProductPovm povm = ProductPovm::from_local(local);

    const int mixands = uniform_int(rng, 2, 3);
    std::vector<DensityOperator> parts;
    std::vector<double> t;
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    Matrix mix = Matrix::Zero(dims.total_dim(), dims.total_dim());
    for (int l = 0; l < mixands; ++l) {
        parts.push_back(random_density(dims, uniform_int(rng, 1, 2), rng));
        t.push_back(unit(rng));
    }
    double total = 0.0;
    for (double w : t) total += w;
    for (int l = 0; l < mixands; ++l) {
        t[l] /= total;
        mix += t[l] * parts[l].matrix();
    }
    const DensityOperator rho(0.5 * (mix + mix.adjoint()), dims);
    const RootMeasure measure = RootMeasure::wootters();

    double per_outcome = 0.0;
    for (std::size_t k = 0; k < povm.size(); ++k) {
        const Matrix q = povm.element(k);
        const Branch whole = conditional_state(rho, q);
        if (!whole.state) continue;
        double rhs = 0.0;
        for (int l = 0; l < mixands; ++l) {
            const Branch part = conditional_state(parts[l], q);
            if (part.state) rhs += t[l] * part.probability / whole.probability * measure(*part.state);
        }
        per_outcome = std::max(per_outcome, measure(*whole.state) - rhs);
    }

    double averaged_rhs = 0.0;
    for (int l = 0; l < mixands; ++l) averaged_rhs += t[l] * average_root_entanglement(parts[l], povm, measure).value;
    const double averaged = average_root_entanglement(rho, povm, measure).value - averaged_rhs;
    return {seed, {{"per_outcome_violation", per_outcome, 1e-9}, {"average_violation", averaged, 1e-9}}};
}

TrialResult monotonicity_trial(std::uint64_t seed, bool mixed_branches, const MonotonicityOptions& options) {
    Rng rng(seed);
    const DimSpec dims({{"A", 2, Role::A}, {"B", 2, Role::B}, {"C", 2, Role::Z}});
    const DensityOperator rho(random_pure(dims, rng));

    std::vector<int> counts(static_cast<std::size_t>(uniform_int(rng, 2, 3)), 1);
    if (mixed_branches) counts[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(counts.size()) - 1))] = 2;
    const Instrument inst{"A", random_instrument_kraus(2, counts, rng)};

    LeConfig le = options.le;
    le.seed = derive_seed(seed, 1);
    const RootMeasure measure = RootMeasure::g_concurrence(options.roof);
    const double rhs = optimize_le(rho, measure, le).value;
    double lhs = 0.0;
    for (const auto& b : apply_instrument(rho, inst))
        if (b.state) lhs += b.probability * optimize_le(*b.state, measure, le).value;
    return {seed, {{"gap", lhs - rhs, 2e-3}}};
}

SuiteReport run_suite(Suite suite, int trials, std::uint64_t seed, const MonotonicityOptions& options) {
    if (trials < 0) throw ValueError("trial count must be non-negative");
    SuiteReport report;
    report.suite = suite;
    report.seed = seed;
    report.trials = trials;
    for (int i = 0; i < trials; ++i) {
        const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
        TrialResult r;
        switch (suite) {
            case Suite::Jamio: r = jamio_trial(s, i == 0); break;
            case Suite::GConc: r = gconc_trial(s); break;
            case Suite::Convexity: r = convexity_trial(s); break;
            case Suite::Monotonicity:
                r = monotonicity_trial(s, options.mixed_every > 0 && i % options.mixed_every == options.mixed_every - 1,
                                       options);
                break;
        }
        if (!r.passed()) {
            ++report.failures;
            if (!report.first_failure) {
                report.first_failure = i;
                report.first_failure_seed = s;
            }
        }
        report.results.push_back(std::move(r));
    }
    if (!report.results.empty()) {
        for (std::size_t c = 0; c < report.results.front().checks.size(); ++c) {
            CheckSummary s{report.results.front().checks[c].name, report.results.front().checks[c].limit,
                           -std::numeric_limits<double>::infinity(), 0.0};
            for (const auto& r : report.results) {
                s.max = std::max(s.max, r.checks[c].value);
                s.mean += r.checks[c].value / static_cast<double>(trials);
            }
            report.summary.push_back(s);
        }
    }
    return report;
}

}  // namespace entloc
