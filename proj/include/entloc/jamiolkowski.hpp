#pragma once

#include <string>
#include <vector>

#include "entloc/qcore.hpp"

namespace entloc {

/// The CP map J: B(H_Z) -> B(H_Y) paired with a state rho^{YZ} through
/// rho^{YZ} = (J (x) id)(|psi+><psi+|), |psi+> = sum_i |i>|i> (unnormalized).
///
/// Transpose convention: apply(Q) = Tr_Z[rho (I_Y (x) Q^t)]. The physical
/// post-measurement operator for a POVM element Q is therefore apply(Q^t),
/// exposed as apply_physical(Q).
class JamiolkowskiMap {
public:
    /// Partition taken from the party roles (Y = A and B roles, Z = the rest).
    static JamiolkowskiMap from_state(const DensityOperator& rho);
    /// Explicit partition; the two label lists must cover every party exactly once.
    static JamiolkowskiMap from_state(const DensityOperator& rho, std::vector<std::string> y_labels,
                                      std::vector<std::string> z_labels);

    /// Unnormalized operator on Y: Tr_Z[rho (I (x) Q^t)].
    Matrix apply(const Matrix& q) const;
    /// Tr_Z[rho (I (x) Q)], i.e. apply(Q^t).
    Matrix apply_physical(const Matrix& q) const;
    /// (J (x) id)(|psi+><psi+|), reordered back to the source layout.
    DensityOperator reconstruct() const;

    int input_dim() const { return dim_z_; }
    int output_dim() const { return dim_y_; }
    const DimSpec& source_dims() const { return source_dims_; }
    const std::vector<std::string>& y_labels() const { return y_labels_; }
    const std::vector<std::string>& z_labels() const { return z_labels_; }
    DimSpec y_dims() const { return source_dims_.reordered(y_labels_); }

private:
    JamiolkowskiMap() = default;

    Matrix ordered_;  // rho with factors reordered to (Y..., Z...)
    DimSpec source_dims_;
    std::vector<std::string> y_labels_;
    std::vector<std::string> z_labels_;
    int dim_y_ = 0;
    int dim_z_ = 0;
};

/// Unnormalized maximally entangled vector sum_i |i>|i> on C^d (x) C^d (norm sqrt(d)).
Vector psi_plus(int dim);

}  // namespace entloc
