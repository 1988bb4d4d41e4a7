#pragma once

// Seeded property suites shared by the CLI and the test binaries. Trial t of a
// run with master seed s draws everything from derive_seed(s, t), so a failing
// trial can be replayed on its own.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entloc/localize.hpp"
#include "entloc/measures.hpp"

namespace entloc {

enum class Suite { Jamio, GConc, Convexity, Monotonicity };

std::string_view to_string(Suite suite);
Suite suite_from_string(std::string_view name);

/// One checked quantity of a trial together with its allowed maximum.
struct Check {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    bool ok() const { return value <= limit; }
};

struct TrialResult {
    std::uint64_t seed = 0;
    std::vector<Check> checks;
    bool passed() const;
};

struct CheckSummary {
    std::string name;
    double limit = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

struct SuiteReport {
    Suite suite = Suite::Jamio;
    std::uint64_t seed = 0;
    int trials = 0;
    int failures = 0;
    std::vector<CheckSummary> summary;
    /// Trial index and seed of the first failing trial.
    std::optional<int> first_failure;
    std::optional<std::uint64_t> first_failure_seed;
    std::vector<TrialResult> results;
    bool passed() const { return failures == 0; }
};

struct MonotonicityOptions {
    LeConfig le{.restarts = 8};
    RoofConfig roof{.restarts = 2};
    /// Every n-th trial gives one outcome two Kraus operators (mixed branches).
    int mixed_every = 5;
};

/// reconstruct(from_state(rho)) = rho and apply(Q^t)/p = conditional_state(rho, Q).
/// Trial index 0 uses the locked 8x4x2 state.
TrialResult jamio_trial(std::uint64_t seed, bool locked_state = false);
/// G homogeneity, multiplicativity under local operators, and G = 1 on the
/// maximally entangled state, for d in {2, 3, 4}.
TrialResult gconc_trial(std::uint64_t seed);
/// Convexity of the average root entanglement at a fixed random product POVM
/// (per outcome and on average), concurrence root on 2x2 A|B.
TrialResult convexity_trial(std::uint64_t seed);
/// One-step monotonicity gap of G-rooted LE for a random instrument on A of a
/// random 2x2x2 pure state.
TrialResult monotonicity_trial(std::uint64_t seed, bool mixed_branches, const MonotonicityOptions& options = {});

SuiteReport run_suite(Suite suite, int trials, std::uint64_t seed, const MonotonicityOptions& options = {});

}  // namespace entloc
