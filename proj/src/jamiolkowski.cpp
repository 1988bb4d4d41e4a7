#include "entloc/jamiolkowski.hpp"

#include <algorithm>

namespace entloc {

JamiolkowskiMap JamiolkowskiMap::from_state(const DensityOperator& rho) {
    return from_state(rho, rho.dims().y_labels(), rho.dims().z_labels());
}

JamiolkowskiMap JamiolkowskiMap::from_state(const DensityOperator& rho, std::vector<std::string> y_labels,
                                            std::vector<std::string> z_labels) {
    if (y_labels.size() + z_labels.size() != rho.dims().size())
        throw DimensionError("Y/Z partition must cover every party exactly once");
    if (y_labels.empty() || z_labels.empty()) throw DimensionError("Y and Z must both be non-empty");
    std::vector<std::string> order = y_labels;
    order.insert(order.end(), z_labels.begin(), z_labels.end());

    JamiolkowskiMap j;
    j.ordered_ = permute(rho, order).matrix();  // also validates the partition
    j.source_dims_ = rho.dims();
    j.dim_y_ = rho.dims().dim_of(y_labels);
    j.dim_z_ = rho.dims().dim_of(z_labels);
    j.y_labels_ = std::move(y_labels);
    j.z_labels_ = std::move(z_labels);
    return j;
}

Matrix JamiolkowskiMap::apply(const Matrix& q) const {
    if (q.rows() != dim_z_ || q.cols() != dim_z_)
        throw DimensionError("map input must be " + std::to_string(dim_z_) + "x" + std::to_string(dim_z_));
    // out_{y y'} = sum_{z z'} rho_{(y z),(y' z')} (Q^t)_{z' z} = sum rho_{(y z),(y' z')} Q_{z z'}
    Matrix out = Matrix::Zero(dim_y_, dim_y_);
    for (int y = 0; y < dim_y_; ++y)
        for (int yp = 0; yp < dim_y_; ++yp) {
            cplx s = 0.0;
            for (int z = 0; z < dim_z_; ++z)
                for (int zp = 0; zp < dim_z_; ++zp)
                    s += ordered_(y * dim_z_ + z, yp * dim_z_ + zp) * q(z, zp);
            out(y, yp) = s;
        }
    return out;
}

Matrix JamiolkowskiMap::apply_physical(const Matrix& q) const { return apply(q.transpose()); }

DensityOperator JamiolkowskiMap::reconstruct() const {
    const Vector plus = psi_plus(dim_z_);
    const Matrix projector = plus * plus.adjoint();  // on Z (x) Z'

    // Apply J to the first Z factor: for each matrix unit |i'><j'| of the
    // second factor collect the first-factor operator and map it.
    const int dz = dim_z_;
    Matrix out = Matrix::Zero(dim_y_ * dz, dim_y_ * dz);
    for (int ip = 0; ip < dz; ++ip)
        for (int jp = 0; jp < dz; ++jp) {
            Matrix first(dz, dz);
            for (int i = 0; i < dz; ++i)
                for (int j = 0; j < dz; ++j) first(i, j) = projector(i * dz + ip, j * dz + jp);
            const Matrix image = apply(first);
            for (int y = 0; y < dim_y_; ++y)
                for (int yp = 0; yp < dim_y_; ++yp) out(y * dz + ip, yp * dz + jp) = image(y, yp);
        }

    std::vector<std::string> order = y_labels_;
    order.insert(order.end(), z_labels_.begin(), z_labels_.end());
    const DensityOperator in_yz = DensityOperator::unchecked(std::move(out), source_dims_.reordered(order));
    return permute(in_yz, source_dims_.labels());
}

Vector psi_plus(int dim) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim) * dim);
    for (int i = 0; i < dim; ++i) v(i * dim + i) = 1.0;
    return v;
}

}  // namespace entloc
