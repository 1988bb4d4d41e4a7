#include "entloc/constructions.hpp"

#include <cmath>

namespace entloc {

Matrix pauli_y() {
    Matrix sy(2, 2);
    sy << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
    return sy;
}

Matrix paper_v1_matrix() {
    return (Matrix::Identity(2, 2) + cplx(0.0, 1.0) * pauli_y()) / std::sqrt(2.0);
}

Matrix paper_v1_literal() { return (Matrix::Identity(2, 2) + pauli_y()) / std::sqrt(2.0); }

namespace {

Matrix diag4(cplx a, cplx b, cplx c, cplx d) {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    m(3, 3) = d;
    return m;
}

}  // namespace

LockedStateSpec LockedStateSpec::defaults() {
    const cplx i(0.0, 1.0);
    LockedStateSpec s;
    s.v = {Matrix::Identity(2, 2), paper_v1_matrix()};
    s.u[0][0] = Matrix::Identity(4, 4);
    s.u[1][0] = Matrix::Identity(4, 4);
    s.u[0][1] = diag4(i, 1.0, -i, -1.0);
    s.u[1][1] = diag4(i, 1.0, i, 1.0);
    return s;
}

void LockedStateSpec::validate() const {
    for (int x = 0; x < 2; ++x) {
        if (v[x].rows() != 2 || !is_unitary(v[x], 1e-12))
            throw ValueError("V_" + std::to_string(x) + " must be a 2x2 unitary");
        for (int y = 0; y < 2; ++y)
            if (u[x][y].rows() != 4 || !is_unitary(u[x][y], 1e-12))
                throw ValueError("U_" + std::to_string(x) + std::to_string(y) + " must be a 4x4 unitary");
    }
}

DimSpec locked_state_dims() {
    return DimSpec({{"a", 2, Role::A}, {"A", 4, Role::A}, {"B", 4, Role::B}, {"C", 2, Role::Z}});
}

PureState build_locked_state(const LockedStateSpec& spec) {
    spec.validate();
    const Vector phi = phi_plus(4).amplitudes();
    Vector psi = Vector::Zero(64);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const Vector ab = kron(Matrix::Identity(4, 4), spec.u[x][y]) * phi;
            const Vector c = spec.v[x] * basis_vector(2, y);
            psi += 0.5 * kron(kron(basis_vector(2, x), ab), c);
        }
    return PureState(std::move(psi), locked_state_dims());
}

PureState bell_state() { return phi_plus(2); }

PureState phi_plus(int dim) {
    if (dim < 1) throw ValueError("dimension must be >= 1");
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim) * dim);
    for (int i = 0; i < dim; ++i) v(i * dim + i) = 1.0 / std::sqrt(static_cast<double>(dim));
    return PureState(std::move(v), DimSpec({{"A", dim, Role::A}, {"B", dim, Role::B}}));
}

DimSpec qubit_chain_dims(int n) {
    if (n < 2) throw ValueError("need at least two parties");
    std::vector<Party> parties{{"A", 2, Role::A}, {"B", 2, Role::B}};
    if (n == 3) {
        parties.push_back({"C", 2, Role::Z});
    } else {
        for (int k = 1; k <= n - 2; ++k) parties.push_back({"C" + std::to_string(k), 2, Role::Z});
    }
    return DimSpec(std::move(parties));
}

PureState ghz_state(int n) {
    DimSpec dims = qubit_chain_dims(n);
    Vector v = Vector::Zero(dims.total_dim());
    v(0) = v(v.size() - 1) = 1.0 / std::sqrt(2.0);
    return PureState(std::move(v), std::move(dims));
}

PureState w_state(int n) {
    DimSpec dims = qubit_chain_dims(n);
    Vector v = Vector::Zero(dims.total_dim());
    for (int k = 0; k < n; ++k) v(1 << k) = 1.0 / std::sqrt(static_cast<double>(n));
    return PureState(std::move(v), std::move(dims));
}

DensityOperator werner_state(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValueError("Werner parameter must lie in [0, 1]");
    const DensityOperator bell(bell_state());
    Matrix m = p * bell.matrix() + (1.0 - p) * Matrix::Identity(4, 4) / 4.0;
    return DensityOperator(std::move(m), bell.dims());
}

}  // namespace entloc
