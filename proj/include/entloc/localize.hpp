#pragma once

// Localizable entanglement: the best average root entanglement that the Z
// parties can leave on A|B by a product measurement,
//
//   E_loc(rho) = max_{Q} sum_k p_k E(sigma_k),
//   p_k = Tr[rho (I (x) Q_k)],  sigma_k = Tr_Z[rho (I (x) Q_k)] / p_k,
//
// with Q_k = Q_k^{C1} (x) ... (x) Q_k^{Cn}. Branches are always computed in
// the physical convention above; the Jamiolkowski form J(Q^t) is only a
// cross-check.

#include <cstdint>
#include <string>
#include <vector>

#include "entloc/measures.hpp"
#include "entloc/qcore.hpp"

namespace entloc {

/// One party's POVM.
struct LocalPovm {
    std::string party;
    std::vector<Matrix> elements;
};

/// Finite family of product POVM elements on the Z parties.
class ProductPovm {
public:
    ProductPovm() = default;
    /// outcomes[k][i] is the factor of outcome k acting on parties[i].
    ProductPovm(std::vector<std::string> parties, std::vector<std::vector<Matrix>> outcomes);

    /// Every combination of the local outcomes (first party most significant).
    static ProductPovm from_local(const std::vector<LocalPovm>& local);

    const std::vector<std::string>& parties() const { return parties_; }
    const std::vector<std::vector<Matrix>>& outcomes() const { return outcomes_; }
    std::size_t size() const { return outcomes_.size(); }

    /// Q_k as the Kronecker product of its factors.
    Matrix element(std::size_t k) const;
    /// sum_k Q_k
    Matrix total() const;

    /// Parties must be exactly the Z parties of `dims` in spec order, each factor
    /// positive semidefinite, and the elements must sum to the identity.
    void validate(const DimSpec& dims, double tol = 1e-10) const;

private:
    std::vector<std::string> parties_;
    std::vector<std::vector<Matrix>> outcomes_;
};

struct BranchRecord {
    std::size_t outcome = 0;
    double probability = 0.0;
    /// Normalized A|B state (A-role parties first).
    DensityOperator state;
    double value = 0.0;
};

struct LEResult {
    double value = 0.0;
    std::string measure;
    ProductPovm povm;
    /// Non-null branches only (p >= 1e-14).
    std::vector<BranchRecord> branches;
    bool converged = true;
    std::uint64_t seed = 0;
    int iterations = 0;
    int restarts = 0;
    int best_restart = 0;
    /// Best value reached by each restart, in restart order.
    std::vector<double> restart_values;
};

struct LeConfig {
    int restarts = 16;
    /// Outcomes per party; 0 means dim^2.
    int outcomes = 0;
    /// Rank of each local POVM element.
    int outcome_rank = 1;
    /// Cap on proposal rounds per restart (one round perturbs every party once).
    int max_iters = 4000;
    /// A proposal is accepted only if it improves the value by more than tol / 10.
    double tol = 1e-9;
    double initial_step = 0.3;
    /// A restart has converged once every party's step size falls below this.
    double min_step = 1e-5;
    std::uint64_t seed = 0;
    int threads = 1;
};

/// sum_k p_k E(sigma_k) for a fixed product POVM; null branches contribute 0.
LEResult average_root_entanglement(const DensityOperator& rho, const ProductPovm& povm, const RootMeasure& measure);

/// Multi-start ascent over product POVMs. The result is a lower bound on the
/// localizable entanglement.
LEResult optimize_le(const DensityOperator& rho, const RootMeasure& measure, const LeConfig& config = {});

/// Best two-outcome projective measurement of a single-qubit Z party over a
/// Bloch-angle grid: theta = pi i / resolution (i = 0..resolution),
/// phi = 2 pi j / resolution (j < resolution). A lower bound on the LE
/// restricted to projective measurements.
struct GridOracleResult {
    double value = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};
GridOracleResult grid_oracle_le(const DensityOperator& rho, const RootMeasure& measure, int resolution);

/// Rank-one projector |n><n| with n = (cos(theta/2), e^{i phi} sin(theta/2)).
Matrix bloch_projector(double theta, double phi);

}  // namespace entloc
