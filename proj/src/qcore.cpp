#include "entloc/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace entloc {

std::string_view to_string(Role role) {
    switch (role) {
    case Role::A: return "A";
    case Role::B: return "B";
    case Role::Z: return "Z";
    }
    return "Z";
}

Role role_from_string(std::string_view text) {
    if (text == "A") return Role::A;
    if (text == "B") return Role::B;
    if (text == "Z") return Role::Z;
    throw ParseError("unknown party role '" + std::string(text) + "'");
}

// ------------------------------------------------------------------ DimSpec

DimSpec::DimSpec(std::vector<Party> parties) : parties_(std::move(parties)) {
    std::set<std::string> seen;
    for (const auto& p : parties_) {
        if (p.dim < 1) throw DimensionError("party '" + p.label + "' has dimension < 1");
        if (p.label.empty()) throw DimensionError("empty party label");
        if (!seen.insert(p.label).second) throw DimensionError("duplicate party label '" + p.label + "'");
    }
}

int DimSpec::total_dim() const {
    int d = 1;
    for (const auto& p : parties_) d *= p.dim;
    return d;
}

bool DimSpec::contains(std::string_view label) const {
    return std::any_of(parties_.begin(), parties_.end(), [&](const Party& p) { return p.label == label; });
}

std::size_t DimSpec::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < parties_.size(); ++i)
        if (parties_[i].label == label) return i;
    throw DimensionError("unknown party label '" + std::string(label) + "'");
}

int DimSpec::dim_of(std::span<const std::string> labels) const {
    int d = 1;
    for (const auto& l : labels) d *= parties_[index_of(l)].dim;
    return d;
}

std::vector<std::string> DimSpec::labels() const {
    std::vector<std::string> out;
    for (const auto& p : parties_) out.push_back(p.label);
    return out;
}

std::vector<std::string> DimSpec::labels_with_role(Role role) const {
    std::vector<std::string> out;
    for (const auto& p : parties_)
        if (p.role == role) out.push_back(p.label);
    return out;
}

std::vector<std::string> DimSpec::y_labels() const {
    std::vector<std::string> out;
    for (const auto& p : parties_)
        if (p.role != Role::Z) out.push_back(p.label);
    return out;
}

std::vector<std::string> DimSpec::z_labels() const { return labels_with_role(Role::Z); }

DimSpec DimSpec::subset(std::span<const std::string> labels) const {
    for (const auto& l : labels) (void)index_of(l);
    std::vector<Party> out;
    for (const auto& p : parties_)
        if (std::find(labels.begin(), labels.end(), p.label) != labels.end()) out.push_back(p);
    return DimSpec(std::move(out));
}

DimSpec DimSpec::reordered(std::span<const std::string> order) const {
    std::vector<Party> out;
    for (const auto& l : order) out.push_back(parties_[index_of(l)]);
    return DimSpec(std::move(out));
}

DimSpec DimSpec::concat(const DimSpec& other) const {
    std::vector<Party> out = parties_;
    out.insert(out.end(), other.parties_.begin(), other.parties_.end());
    return DimSpec(std::move(out));
}

void DimSpec::require_ab() const {
    if (labels_with_role(Role::A).empty() || labels_with_role(Role::B).empty())
        throw DimensionError("layout needs at least one A-role and one B-role party");
}

std::vector<std::string> complement(const DimSpec& spec, std::span<const std::string> labels) {
    for (const auto& l : labels) (void)spec.index_of(l);
    std::vector<std::string> out;
    for (const auto& p : spec.parties())
        if (std::find(labels.begin(), labels.end(), p.label) == labels.end()) out.push_back(p.label);
    return out;
}

// ------------------------------------------------------------------ states

PureState::PureState(Vector amplitudes, DimSpec dims, Norm norm)
    : amplitudes_(std::move(amplitudes)), dims_(std::move(dims)), normalized_(norm == Norm::Checked) {
    if (amplitudes_.size() != dims_.total_dim())
        throw DimensionError("amplitude vector length " + std::to_string(amplitudes_.size()) +
                             " does not match total dimension " + std::to_string(dims_.total_dim()));
    if (normalized_ && std::abs(amplitudes_.norm() - 1.0) > kNormTol)
        throw ValueError("pure state is not normalized (norm " + std::to_string(amplitudes_.norm()) + ")");
}

DensityOperator::DensityOperator(Matrix matrix, DimSpec dims, Norm norm)
    : matrix_(std::move(matrix)), dims_(std::move(dims)), normalized_(norm == Norm::Checked) {
    const int d = dims_.total_dim();
    if (matrix_.rows() != d || matrix_.cols() != d)
        throw DimensionError("density matrix shape does not match total dimension " + std::to_string(d));
    if (!is_hermitian(matrix_, kNormTol)) throw ValueError("density matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kNormTol) throw ValueError("density matrix is not positive semidefinite");
    if (normalized_ && std::abs(trace() - 1.0) > kNormTol) throw ValueError("density matrix trace is not 1");
}

DensityOperator::DensityOperator(const PureState& psi)
    : matrix_(psi.amplitudes() * psi.amplitudes().adjoint()), dims_(psi.dims()), normalized_(psi.normalized()) {}

DensityOperator DensityOperator::unchecked(Matrix matrix, DimSpec dims) {
    DensityOperator out;
    out.matrix_ = std::move(matrix);
    out.dims_ = std::move(dims);
    out.normalized_ = false;
    return out;
}

Vector SchmidtDecomposition::reconstruct() const {
    Vector out = Vector::Zero(static_cast<Eigen::Index>(dim_left) * dim_right);
    for (int i = 0; i < rank; ++i) {
        out += std::sqrt(schmidt_numbers(i)) * kron(Vector(left.col(i)), Vector(right.col(i)));
    }
    return out;
}

// ------------------------------------------------------------------ helpers

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vector kron(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

Vector basis_vector(int dim, int index) {
    Vector v = Vector::Zero(dim);
    v(index) = 1.0;
    return v;
}

Matrix embed(const DimSpec& dims, std::string_view label, const Matrix& op) {
    const std::size_t pos = dims.index_of(label);
    const int d = dims[pos].dim;
    if (op.rows() != d || op.cols() != d)
        throw DimensionError("operator on '" + std::string(label) + "' must be " + std::to_string(d) + "x" +
                             std::to_string(d));
    int before = 1, after = 1;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i < pos) before *= dims[i].dim;
        if (i > pos) after *= dims[i].dim;
    }
    return kron(kron(Matrix::Identity(before, before), op), Matrix::Identity(after, after));
}

bool is_hermitian(const Matrix& m, double tol) {
    return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("shape mismatch in comparison");
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

RealVector clipped_eigenvalues(const Matrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
    RealVector ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) < 0.0 && ev(i) >= -kNormTol) ev(i) = 0.0;
    return ev;
}

double shannon_entropy_bits(const RealVector& probs) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
        const double p = probs(i);
        if (p > 0.0) s -= p * std::log2(p);
    }
    return s;
}

double von_neumann_entropy_bits(const Matrix& rho) { return shannon_entropy_bits(clipped_eigenvalues(rho)); }

double fidelity(const Vector& a, const Vector& b) {
    const double na = a.squaredNorm(), nb = b.squaredNorm();
    return std::norm(a.dot(b)) / (na * nb);
}

double fidelity(const Vector& psi, const Matrix& sigma) { return psi.dot(sigma * psi).real(); }

Vector canonical_phase(const Vector& v, double zero_tol) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > zero_tol) return v * (std::abs(v(i)) / v(i));
    }
    return v;
}

// ------------------------------------------------------------------ ops

std::vector<int> permutation_map(const DimSpec& dims, std::span<const std::string> order) {
    if (order.size() != dims.size()) throw DimensionError("permutation must name every party exactly once");
    const std::size_t n = dims.size();
    std::vector<std::size_t> src(n);
    std::set<std::size_t> seen;
    for (std::size_t k = 0; k < n; ++k) {
        src[k] = dims.index_of(order[k]);
        if (!seen.insert(src[k]).second) throw DimensionError("permutation repeats a party");
    }
    // Strides of the original layout.
    std::vector<int> old_stride(n, 1);
    for (std::size_t i = n; i-- > 1;) old_stride[i - 1] = old_stride[i] * dims[i].dim;

    const int total = dims.total_dim();
    std::vector<int> map(total);
    std::vector<int> digit(n, 0);  // digits in the new order
    for (int idx = 0; idx < total; ++idx) {
        int old = 0;
        for (std::size_t k = 0; k < n; ++k) old += digit[k] * old_stride[src[k]];
        map[idx] = old;
        for (std::size_t k = n; k-- > 0;) {
            if (++digit[k] < dims[src[k]].dim) break;
            digit[k] = 0;
        }
    }
    return map;
}

PureState permute(const PureState& psi, std::span<const std::string> order) {
    const auto map = permutation_map(psi.dims(), order);
    Vector out(psi.amplitudes().size());
    for (std::size_t i = 0; i < map.size(); ++i) out(static_cast<Eigen::Index>(i)) = psi.amplitudes()(map[i]);
    return PureState(std::move(out), psi.dims().reordered(order), Norm::Unnormalized);
}

DensityOperator permute(const DensityOperator& rho, std::span<const std::string> order) {
    const auto map = permutation_map(rho.dims(), order);
    const auto d = static_cast<Eigen::Index>(map.size());
    Matrix out(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) out(i, j) = rho.matrix()(map[i], map[j]);
    return DensityOperator::unchecked(std::move(out), rho.dims().reordered(order));
}

PureState tensor_product(const PureState& x, const PureState& y) {
    DimSpec dims = x.dims().concat(y.dims());
    const Norm norm = (x.normalized() && y.normalized()) ? Norm::Checked : Norm::Unnormalized;
    return PureState(kron(x.amplitudes(), y.amplitudes()), std::move(dims), norm);
}

DensityOperator tensor_product(const DensityOperator& x, const DensityOperator& y) {
    DimSpec dims = x.dims().concat(y.dims());
    Matrix m = kron(x.matrix(), y.matrix());
    if (x.normalized() && y.normalized()) return DensityOperator(std::move(m), std::move(dims));
    return DensityOperator::unchecked(std::move(m), std::move(dims));
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::string> keep) {
    const auto traced = complement(rho.dims(), keep);
    const DimSpec kept_dims = rho.dims().subset(keep);
    std::vector<std::string> order = kept_dims.labels();
    order.insert(order.end(), traced.begin(), traced.end());
    const DensityOperator p = permute(rho, order);

    const int dk = kept_dims.total_dim();
    const int dt = rho.dims().dim_of(traced);
    Matrix out = Matrix::Zero(dk, dk);
    for (int a = 0; a < dk; ++a)
        for (int b = 0; b < dk; ++b) {
            cplx s = 0.0;
            for (int t = 0; t < dt; ++t) s += p.matrix()(a * dt + t, b * dt + t);
            out(a, b) = s;
        }
    if (rho.normalized()) return DensityOperator(std::move(out), kept_dims);
    return DensityOperator::unchecked(std::move(out), kept_dims);
}

Matrix reshape_rows(const Vector& flat, int rows, int cols) {
    if (flat.size() != static_cast<Eigen::Index>(rows) * cols) throw DimensionError("reshape size mismatch");
    Matrix out(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) out(i, j) = flat(static_cast<Eigen::Index>(i) * cols + j);
    return out;
}

Matrix coefficient_matrix(const PureState& psi, std::span<const std::string> left) {
    const auto right = complement(psi.dims(), left);
    const DimSpec left_dims = psi.dims().subset(left);
    std::vector<std::string> order = left_dims.labels();
    order.insert(order.end(), right.begin(), right.end());
    const PureState p = permute(psi, order);
    return reshape_rows(p.amplitudes(), left_dims.total_dim(), psi.dims().dim_of(right));
}

SchmidtDecomposition schmidt_decompose(const Matrix& coefficients) {
    SchmidtDecomposition out;
    out.dim_left = static_cast<int>(coefficients.rows());
    out.dim_right = static_cast<int>(coefficients.cols());
    const int d = std::max(out.dim_left, out.dim_right);
    Eigen::JacobiSVD<Matrix> svd(coefficients, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& s = svd.singularValues();
    out.schmidt_numbers = RealVector::Zero(d);
    for (Eigen::Index i = 0; i < s.size(); ++i) out.schmidt_numbers(i) = s(i) * s(i);
    const double scale = std::max(1.0, s.size() > 0 ? s(0) : 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > 1e-14 * scale) ++rank;
    out.rank = rank;
    out.left = svd.matrixU().leftCols(rank);
    out.right = svd.matrixV().leftCols(rank).conjugate();
    return out;
}

SchmidtDecomposition schmidt_decompose(const PureState& psi, std::span<const std::string> left) {
    if (!psi.normalized() && std::abs(psi.norm() - 1.0) > kNormTol)
        throw ValueError("Schmidt decomposition of an unnormalized state requires the unnormalized flag");
    return schmidt_decompose(coefficient_matrix(psi, left));
}

Branch conditional_state(const DensityOperator& rho, const Matrix& q) {
    const auto y = rho.dims().y_labels();
    const auto z = rho.dims().z_labels();
    const int dz = rho.dims().dim_of(z);
    const int dy = rho.dims().dim_of(y);
    if (q.rows() != dz || q.cols() != dz)
        throw DimensionError("POVM element must be " + std::to_string(dz) + "x" + std::to_string(dz));
    if (!is_hermitian(q, 1e-10)) throw ValueError("POVM element is not Hermitian");
    const RealVector ev = clipped_eigenvalues(q);
    if (ev.minCoeff() < -1e-10 || ev.maxCoeff() > 1.0 + 1e-10) throw ValueError("POVM element must satisfy 0 <= Q <= I");

    std::vector<std::string> order = y;
    order.insert(order.end(), z.begin(), z.end());
    const DensityOperator ordered = permute(rho, order);
    const Matrix weighted = ordered.matrix() * kron(Matrix::Identity(dy, dy), q);
    const DensityOperator unnormalized = partial_trace(
        DensityOperator::unchecked(weighted, ordered.dims()), std::span<const std::string>(y));

    Branch out;
    out.probability = unnormalized.trace();
    if (out.probability < kNullBranch) return out;
    Matrix sigma = unnormalized.matrix() / out.probability;
    sigma = 0.5 * (sigma + sigma.adjoint()).eval();
    out.state = DensityOperator::unchecked(std::move(sigma), rho.dims().subset(y));
    return out;
}

}  // namespace entloc
