#include "entloc/random.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace entloc {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Matrix complex_gaussian(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    Matrix m(rows, cols);
    // Column-major fill order is part of the seeded contract.
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            m(i, j) = cplx(re, im);
        }
    return m;
}

Matrix random_unitary(int dim, Rng& rng) {
    if (dim < 1) throw DimensionError("unitary dimension must be >= 1");
    const Matrix g = complex_gaussian(dim, dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        const cplx d = r(i, i);
        const double a = std::abs(d);
        if (a > 0.0) q.col(i) *= d / a;
    }
    return q;
}

Matrix random_isometry(int rows, int cols, Rng& rng) {
    if (cols < 1 || rows < cols) throw DimensionError("isometry needs rows >= cols >= 1");
    return random_unitary(rows, rng).leftCols(cols);
}

PureState random_pure(const DimSpec& dims, Rng& rng) {
    Vector v = complex_gaussian(dims.total_dim(), 1, rng).col(0);
    v.normalize();
    return PureState(std::move(v), dims);
}

DensityOperator random_density(const DimSpec& dims, int rank, Rng& rng) {
    const int d = dims.total_dim();
    if (rank < 1 || rank > d) throw DimensionError("rank must lie in [1, total dimension]");
    Matrix g = complex_gaussian(d, rank, rng);
    g /= g.norm();
    Matrix rho = g * g.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityOperator(std::move(rho), dims);
}

std::vector<Matrix> random_povm(int dim, int outcomes, Rng& rng, int rank) {
    if (outcomes < 1 || rank < 1) throw DimensionError("POVM needs at least one outcome of rank >= 1");
    if (rank > dim) throw DimensionError("POVM element rank exceeds dimension");
    if (outcomes * rank < dim) throw DimensionError("too few outcomes to resolve the identity");
    const Matrix w = random_isometry(outcomes * rank, dim, rng);
    std::vector<Matrix> out;
    for (int k = 0; k < outcomes; ++k) {
        const Matrix block = w.middleRows(k * rank, rank);
        Matrix q = block.adjoint() * block;
        q = 0.5 * (q + q.adjoint()).eval();
        out.push_back(std::move(q));
    }
    return out;
}

std::vector<std::vector<Matrix>> random_instrument_kraus(int dim, const std::vector<int>& kraus_counts, Rng& rng) {
    if (kraus_counts.empty()) throw DimensionError("instrument needs at least one outcome");
    int total = 0;
    for (int c : kraus_counts) {
        if (c < 1) throw DimensionError("each outcome needs at least one Kraus operator");
        total += c;
    }
    const Matrix w = random_isometry(total * dim, dim, rng);
    std::vector<std::vector<Matrix>> out;
    int row = 0;
    for (int c : kraus_counts) {
        std::vector<Matrix> ops;
        for (int k = 0; k < c; ++k, row += dim) ops.push_back(w.middleRows(row, dim));
        out.push_back(std::move(ops));
    }
    return out;
}

Matrix polar_isometry(const Matrix& x) {
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace entloc
