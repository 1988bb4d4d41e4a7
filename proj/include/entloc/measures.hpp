#pragma once

// Root entanglement measures for the bipartite A|B system: entropy of
// entanglement, Wootters concurrence, and the G-concurrence together with its
// convex-roof extension. Also the Kraus-instrument type and its f-factor.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entloc/qcore.hpp"

namespace entloc {

/// Convex-roof optimizer settings.
struct RoofConfig {
    /// Number of pure states in the decomposition; 0 means rank + 2.
    int ensemble_size = 0;
    int restarts = 32;
    int max_iters = 2000;
    /// Stop once the objective decreases by less than this for several steps.
    double tol = 1e-9;
    std::uint64_t seed = 0x5eedULL;
    int threads = 1;
};

struct DecompositionEnsemble {
    std::vector<double> weights;
    std::vector<Vector> states;

    /// sum_i p_i |psi_i><psi_i|
    Matrix mixture() const;
};

struct RoofResult {
    /// sum_i p_i E(psi_i) of `ensemble`; an upper bound on the convex roof.
    double value = 0.0;
    DecompositionEnsemble ensemble;
    bool converged = false;
    int iterations = 0;
    int restarts = 0;
};

enum class MeasureKind { Entropy, Wootters, GConcurrence };

std::string_view to_string(MeasureKind kind);
/// Accepts "entropy", "wootters", "gconc" (and "g_concurrence").
MeasureKind measure_from_string(std::string_view name);

// ---------------------------------------------------------- pure-state forms

/// Von Neumann entropy (bits) of the reduced state; coefficients are normalized first.
double entropy_from_coefficients(const Matrix& coefficients);

/// d |Det A|^{2/d} for square A, exactly 0 when A is not square.
/// Homogeneous: scaling A by c scales the value by |c|^2.
double gconcurrence_from_coefficients(const Matrix& coefficients);

/// |psi^T (sigma_y (x) sigma_y) psi| / |psi|^2 for a 2x2 coefficient matrix.
double wootters_from_coefficients(const Matrix& coefficients);

double entropy_of_entanglement(const PureState& psi, std::span<const std::string> left);
/// Cut between the A-role and B-role parties.
double entropy_of_entanglement(const PureState& psi);

double gconcurrence_pure(const PureState& psi, std::span<const std::string> left);
double gconcurrence_pure(const PureState& psi);

// ---------------------------------------------------------- mixed-state forms

/// Closed form max(0, mu1 - mu2 - mu3 - mu4) for a 4x4 two-qubit density matrix.
double wootters_concurrence(const Matrix& rho);
double wootters_concurrence(const DensityOperator& rho);

/// Convex roof of the G-concurrence over decompositions of a dA*dB density matrix.
RoofResult gconcurrence_roof(const Matrix& rho, int dim_a, int dim_b, const RoofConfig& config = {});
RoofResult gconcurrence_mixed(const DensityOperator& rho, std::span<const std::string> left,
                              const RoofConfig& config = {});
RoofResult gconcurrence_mixed(const DensityOperator& rho, const RoofConfig& config = {});

/// Convex roof of the entropy of entanglement (entanglement of formation).
RoofResult entanglement_of_formation(const Matrix& rho, int dim_a, int dim_b, const RoofConfig& config = {});

/// Generic convex-roof minimization for the entropy or G-concurrence pure forms.
RoofResult convex_roof(const Matrix& rho, int dim_a, int dim_b, MeasureKind kind, const RoofConfig& config);

// ---------------------------------------------------------- root measure

/// Tagged choice of root measure with evaluation on pure and mixed A|B states.
///
/// Mixed inputs of numerical rank one are evaluated through their pure form.
/// Otherwise entropy and G-concurrence use the convex-roof optimizer (upper
/// bounds) and Wootters uses its closed form.
class RootMeasure {
public:
    explicit RootMeasure(MeasureKind kind, RoofConfig roof = {}) : kind_(kind), roof_(roof) {}

    static RootMeasure entropy(RoofConfig roof = {}) { return RootMeasure(MeasureKind::Entropy, roof); }
    static RootMeasure wootters() { return RootMeasure(MeasureKind::Wootters); }
    static RootMeasure g_concurrence(RoofConfig roof = {}) { return RootMeasure(MeasureKind::GConcurrence, roof); }

    MeasureKind kind() const { return kind_; }
    std::string_view name() const { return to_string(kind_); }
    const RoofConfig& roof() const { return roof_; }

    /// Normalized (or normalizable) pure state given by its dA x dB coefficient matrix.
    double on_coefficients(const Matrix& coefficients) const;
    /// Normalized dA*dB density matrix in A-then-B order.
    double on_density(const Matrix& sigma, int dim_a, int dim_b) const;

    /// A|B states: every party must have role A or B.
    double operator()(const PureState& psi) const;
    double operator()(const DensityOperator& rho) const;

    /// Whether on_density is exact (closed form or trivially zero) for these dimensions.
    bool exact_on_mixed(int dim_a, int dim_b) const;

private:
    MeasureKind kind_;
    RoofConfig roof_;
};

/// Leading eigenvector scaled by sqrt of its eigenvalue when the remaining
/// spectrum carries weight <= tol * trace; empty otherwise.
std::optional<Vector> pure_part(const Matrix& sigma, double tol = 1e-12);

// ---------------------------------------------------------- instruments

/// Local instrument on one party: outcome j applies the Kraus operators
/// kraus[j][k], all square with the party's dimension.
struct Instrument {
    std::string party;
    std::vector<std::vector<Matrix>> kraus;

    int outcomes() const { return static_cast<int>(kraus.size()); }
    int dim() const;
    /// sum_{jk} M_jk^dagger M_jk
    Matrix completeness() const;
    bool trace_preserving(double tol = 1e-10) const;
    /// Throws unless the party exists, operators are square of its dimension,
    /// and the instrument is trace preserving.
    void validate(const DimSpec& dims, double tol = 1e-10) const;
};

/// f(E_j) = sum_k |Det M_jk|^{2/d} over one outcome's Kraus operators.
double f_factor(std::span<const Matrix> kraus, int dim);
/// f for every outcome of an instrument.
std::vector<double> f_factors(const Instrument& instrument);

}  // namespace entloc
