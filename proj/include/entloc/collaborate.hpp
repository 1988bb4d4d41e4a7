#pragma once

// Finite LOCC protocols in which every party, A and B included, may act.
// Classical communication is implicit: each outcome selects the subtree that
// runs next, so all outcomes are effectively broadcast.

#include <optional>
#include <vector>

#include "entloc/constructions.hpp"
#include "entloc/localize.hpp"
#include "entloc/measures.hpp"

namespace entloc {

struct ProtocolTree {
    /// Empty for a leaf.
    std::optional<Instrument> instrument;
    /// One subtree per instrument outcome.
    std::vector<ProtocolTree> children;

    static ProtocolTree leaf() { return {}; }
    /// A node whose outcomes all end the protocol.
    static ProtocolTree terminal(Instrument instrument);
    static ProtocolTree node(Instrument instrument, std::vector<ProtocolTree> children);

    bool is_leaf() const { return !instrument.has_value(); }
    int depth() const;
    /// Parties exist, instruments are trace preserving, one child per outcome.
    void validate(const DimSpec& dims) const;
};

struct LeafRecord {
    /// Outcome index chosen at each level.
    std::vector<int> path;
    double probability = 0.0;
    /// Normalized A|B state (A-role parties first).
    DensityOperator state;
    double value = 0.0;
};

struct ProtocolResult {
    double average = 0.0;
    std::vector<LeafRecord> leaves;
    /// Probability carried by branches dropped as null (p < 1e-14).
    double dropped_probability = 0.0;
};

/// Depth-first evaluation: apply each outcome's Kraus maps on the acting party,
/// branch with probability = trace, and score the A|B state at every leaf.
ProtocolResult evaluate_protocol(const DensityOperator& rho, const ProtocolTree& protocol, const RootMeasure& measure);

/// Outcomes of a local instrument: q_j = Tr E_j(rho) and E_j(rho)/q_j (empty for null outcomes).
std::vector<Branch> apply_instrument(const DensityOperator& rho, const Instrument& instrument);

struct GapReport {
    /// sum_j q_j avg(rho_j, povm) and avg(rho, povm) at the caller's POVM.
    double fixed_lhs = 0.0;
    double fixed_rhs = 0.0;
    double fixed_gap = 0.0;
    /// Same comparison with every side optimized independently (matched budgets).
    double optimized_lhs = 0.0;
    double optimized_rhs = 0.0;
    double optimized_gap = 0.0;
    std::vector<double> outcome_probabilities;
    /// f(E_j) = sum_k |Det M_jk|^{2/d}.
    std::vector<double> f_values;
};

/// LHS - RHS of sum_j q_j E_loc(rho_j) <= E_loc(rho) for a local instrument on
/// an A- or B-role party. A positive gap means the instrument increased the
/// localizable entanglement on average.
GapReport monotonicity_gap(const DensityOperator& rho, const Instrument& instrument, const RootMeasure& measure,
                           const ProductPovm& povm, const LeConfig& config = {});

/// Two rounds on the locked state: Alice measures a in the computational basis
/// and announces x; Charlie applies V_x^dagger and measures C, obtaining y.
ProtocolTree paper_eoc_protocol(const LockedStateSpec& spec = LockedStateSpec::defaults());

/// Projective measurement in the computational basis as an instrument.
Instrument computational_measurement(const std::string& party, int dim);

}  // namespace entloc
