#pragma once

// Dense multipartite state bookkeeping: party layouts, pure states, density
// operators, tensor products, partial traces, Schmidt decompositions and
// post-measurement branches.
//
// Flattening convention: the first party in a DimSpec is the most significant
// index, i.e. |i_0 i_1 ... i_{n-1}> sits at sum_k i_k * stride_k with the last
// party varying fastest (the Kronecker-product convention).

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "entloc/error.hpp"

namespace entloc {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kNormTol = 1e-12;
inline constexpr double kNullBranch = 1e-14;

enum class Role { A, B, Z };

std::string_view to_string(Role role);
Role role_from_string(std::string_view text);

struct Party {
    std::string label;
    int dim = 1;
    Role role = Role::Z;

    bool operator==(const Party&) const = default;
};

/// Ordered list of tensor factors with their dimensions and roles.
///
/// Y is the set of A- and B-role parties, Z the remaining (assisting) parties.
/// Several parties may share a role: in the locked-state example Alice holds
/// two factors, `a` and `A`.
class DimSpec {
public:
    DimSpec() = default;
    explicit DimSpec(std::vector<Party> parties);

    const std::vector<Party>& parties() const { return parties_; }
    std::size_t size() const { return parties_.size(); }
    bool empty() const { return parties_.empty(); }
    const Party& operator[](std::size_t i) const { return parties_[i]; }

    int total_dim() const;
    bool contains(std::string_view label) const;
    /// Position of `label`; throws DimensionError if absent.
    std::size_t index_of(std::string_view label) const;
    /// Product of the dimensions of `labels`.
    int dim_of(std::span<const std::string> labels) const;

    std::vector<std::string> labels() const;
    std::vector<std::string> labels_with_role(Role role) const;
    std::vector<std::string> y_labels() const;
    std::vector<std::string> z_labels() const;

    /// Parties named in `labels`, in the order they appear in this spec.
    DimSpec subset(std::span<const std::string> labels) const;
    /// Parties named in `order`, in exactly that order.
    DimSpec reordered(std::span<const std::string> order) const;
    DimSpec concat(const DimSpec& other) const;

    /// Throws unless there is at least one A-role and one B-role party.
    void require_ab() const;

    bool operator==(const DimSpec&) const = default;

private:
    std::vector<Party> parties_;
};

/// Labels of `spec` that are not in `labels`, in spec order.
std::vector<std::string> complement(const DimSpec& spec, std::span<const std::string> labels);

/// Normalization handling for state constructors.
enum class Norm { Checked, Unnormalized };

class PureState {
public:
    PureState() = default;
    PureState(Vector amplitudes, DimSpec dims, Norm norm = Norm::Checked);

    const Vector& amplitudes() const { return amplitudes_; }
    const DimSpec& dims() const { return dims_; }
    bool normalized() const { return normalized_; }
    double norm() const { return amplitudes_.norm(); }

private:
    Vector amplitudes_;
    DimSpec dims_;
    bool normalized_ = true;
};

class DensityOperator {
public:
    DensityOperator() = default;
    DensityOperator(Matrix matrix, DimSpec dims, Norm norm = Norm::Checked);
    explicit DensityOperator(const PureState& psi);

    /// Skips the Hermiticity/positivity/trace checks. For internal hot paths.
    static DensityOperator unchecked(Matrix matrix, DimSpec dims);

    const Matrix& matrix() const { return matrix_; }
    const DimSpec& dims() const { return dims_; }
    bool normalized() const { return normalized_; }
    double trace() const { return matrix_.trace().real(); }

private:
    Matrix matrix_;
    DimSpec dims_;
    bool normalized_ = true;
};

struct SchmidtDecomposition {
    /// Squared Schmidt coefficients, non-increasing, zero-padded to max(dA, dB).
    RealVector schmidt_numbers;
    /// Left (dA x rank) and right (dB x rank) orthonormal vectors.
    Matrix left;
    Matrix right;
    int dim_left = 0;
    int dim_right = 0;
    int rank = 0;

    /// sum_i sqrt(lambda_i) |u_i>|v_i>
    Vector reconstruct() const;
};

// ---------------------------------------------------------------- basic ops

PureState tensor_product(const PureState& x, const PureState& y);
DensityOperator tensor_product(const DensityOperator& x, const DensityOperator& y);

/// Reorders tensor factors so that the parties appear in `order`.
PureState permute(const PureState& psi, std::span<const std::string> order);
DensityOperator permute(const DensityOperator& rho, std::span<const std::string> order);

/// Index map of a factor permutation: new flat index -> old flat index.
std::vector<int> permutation_map(const DimSpec& dims, std::span<const std::string> order);

DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::string> keep);

/// Coefficient matrix a_ij with |psi> = sum a_ij |i>_left |j>_right.
Matrix coefficient_matrix(const PureState& psi, std::span<const std::string> left);
/// Reshapes a flat vector (left factor most significant) into dL x dR.
Matrix reshape_rows(const Vector& flat, int rows, int cols);

SchmidtDecomposition schmidt_decompose(const PureState& psi, std::span<const std::string> left);
SchmidtDecomposition schmidt_decompose(const Matrix& coefficients);

/// Result of measuring the Z parties with a single POVM element.
struct Branch {
    double probability = 0.0;
    /// Normalized state on Y; empty for a null branch (probability < 1e-14).
    std::optional<DensityOperator> state;
};

/// p = Tr[rho (I_Y (x) Q)], sigma = Tr_Z[rho (I_Y (x) Q)] / p.
/// Q acts on the Z-role parties in spec order.
Branch conditional_state(const DensityOperator& rho, const Matrix& q);

// ---------------------------------------------------------------- helpers

/// Eigenvalues of a Hermitian matrix with values in [-1e-12, 0) clipped to 0.
RealVector clipped_eigenvalues(const Matrix& hermitian);
/// -sum x log2 x over the given (clipped) probabilities.
double shannon_entropy_bits(const RealVector& probs);
double von_neumann_entropy_bits(const Matrix& rho);

/// |<a|b>|^2 / (|a|^2 |b|^2)
double fidelity(const Vector& a, const Vector& b);
/// <psi| sigma |psi> for normalized psi.
double fidelity(const Vector& psi, const Matrix& sigma);

/// Multiplies by a global phase so that the first nonzero amplitude is real positive.
Vector canonical_phase(const Vector& v, double zero_tol = 1e-12);

bool is_hermitian(const Matrix& m, double tol);
bool is_unitary(const Matrix& m, double tol);
double max_abs_diff(const Matrix& a, const Matrix& b);

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);
/// Embeds an operator acting on one party into the full space.
Matrix embed(const DimSpec& dims, std::string_view label, const Matrix& op);

Vector basis_vector(int dim, int index);

}  // namespace entloc
