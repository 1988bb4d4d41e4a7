#include <doctest.h>

#include <cmath>

#include "entloc/constructions.hpp"
#include "entloc/measures.hpp"
#include "entloc/random.hpp"
#include "oracles.hpp"

using namespace entloc;

namespace {

/// Amplitude of |x>_a |ab>_{AB} |c>_C in the 2 x 16 x 2 layout.
cplx amp(const Vector& psi, int x, int ab, int c) { return psi(x * 32 + ab * 2 + c); }

}  // namespace

TEST_CASE("V1 is (I + i sigma_y)/sqrt(2)") {
    const Matrix v1 = paper_v1_matrix();
    CHECK(max_abs_diff(v1 * v1.adjoint(), Matrix::Identity(2, 2)) < 1e-15);
    const double h = 1.0 / std::sqrt(2.0);
    Matrix want(2, 2);
    want << h, h, -h, h;
    CHECK(max_abs_diff(v1, want) < 1e-15);
}

TEST_CASE("the literal (I + sigma_y)/sqrt(2) is not unitary and is rejected") {
    const Matrix lit = paper_v1_literal();
    CHECK_FALSE(is_unitary(lit, 1e-6));
    CHECK(std::abs((lit.adjoint() * lit).determinant() - 1.0) > 0.5);
    LockedStateSpec spec = LockedStateSpec::defaults();
    spec.v[1] = lit;
    CHECK_THROWS_AS(spec.validate(), ValueError);
    CHECK_THROWS_AS(build_locked_state(spec), ValueError);
}

TEST_CASE("default locked state: layout, normalization, marginal on C") {
    const PureState psi = build_locked_state();
    CHECK(psi.dims() == locked_state_dims());
    CHECK(psi.dims().total_dim() == 64);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
    const auto rc = partial_trace(DensityOperator(psi), std::vector<std::string>{"C"});
    CHECK(rc.trace() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("default locked state: diagonal unitaries as specified") {
    const LockedStateSpec s = LockedStateSpec::defaults();
    const cplx i(0, 1);
    CHECK(s.u[0][1](0, 0) == i);
    CHECK(s.u[0][1](2, 2) == -i);
    CHECK(s.u[0][1](3, 3) == cplx(-1.0));
    CHECK(s.u[1][1](2, 2) == i);
    CHECK(max_abs_diff(s.u[0][0], Matrix::Identity(4, 4)) == 0.0);
    CHECK(max_abs_diff(s.v[0], Matrix::Identity(2, 2)) == 0.0);
}

TEST_CASE("conditioning on x and on V_x|y> leaves (I (x) U_xy)|phi+> with probability 1/4") {
    const LockedStateSpec spec = LockedStateSpec::defaults();
    const Vector psi = build_locked_state(spec).amplitudes();
    const Vector phi = phi_plus(4).amplitudes();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const Vector c = spec.v[x] * oracle::basis(2, y);
            Vector branch = Vector::Zero(16);
            for (int ab = 0; ab < 16; ++ab)
                for (int k = 0; k < 2; ++k) branch(ab) += std::conj(c(k)) * amp(psi, x, ab, k);
            CHECK(branch.squaredNorm() == doctest::Approx(0.25).epsilon(1e-12));
            const Vector want = oracle::kron(Matrix(Matrix::Identity(4, 4)), spec.u[x][y]) * phi;
            CHECK(fidelity(want, Vector(branch / branch.norm())) == doctest::Approx(1.0).epsilon(1e-12));
        }
}

TEST_CASE("all-identity spec factorizes into |+> |phi+> |+>") {
    LockedStateSpec spec;
    spec.v = {Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
    for (auto& row : spec.u)
        for (auto& u : row) u = Matrix::Identity(4, 4);
    const PureState psi = build_locked_state(spec);
    const Vector plus = oracle::ket({M_SQRT1_2, M_SQRT1_2});
    const Vector want = oracle::kron(oracle::kron(plus, phi_plus(4).amplitudes()), plus);
    CHECK(max_abs_diff(psi.amplitudes(), want) < 1e-15);
    for (const char* cut : {"a", "C"}) {
        const auto s = schmidt_decompose(psi, std::vector<std::string>{cut});
        CHECK(s.rank == 1);
    }
    CHECK(entropy_of_entanglement(psi, std::vector<std::string>{"A"}) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("a local unitary on B appended to every U_xy leaves the measures unchanged") {
    Rng rng(3);
    const Matrix w = random_unitary(4, rng);
    LockedStateSpec spec = LockedStateSpec::defaults();
    const PureState before = build_locked_state(spec);
    for (auto& row : spec.u)
        for (auto& u : row) u = w * u;
    const PureState after = build_locked_state(spec);
    for (const auto& cut : {std::vector<std::string>{"a", "A"}, std::vector<std::string>{"a", "A", "C"},
                            std::vector<std::string>{"C"}}) {
        CHECK(std::abs(entropy_of_entanglement(before, cut) - entropy_of_entanglement(after, cut)) < 1e-10);
        CHECK(std::abs(gconcurrence_pure(before, cut) - gconcurrence_pure(after, cut)) < 1e-10);
    }
}

TEST_CASE("canonical states") {
    CHECK(entropy_of_entanglement(phi_plus(4)) == doctest::Approx(2.0).epsilon(1e-12));
    const PureState ghz = ghz_state(3);
    for (const char* cut : {"A", "B", "C"}) {
        const auto s = schmidt_decompose(ghz, std::vector<std::string>{cut});
        CHECK(s.schmidt_numbers(0) == doctest::Approx(0.5));
        CHECK(s.schmidt_numbers(1) == doctest::Approx(0.5));
    }
    CHECK(wootters_concurrence(werner_state(1.0 / 3.0)) < 1e-12);
    CHECK_THROWS_AS(werner_state(1.5), ValueError);
    CHECK_THROWS_AS(werner_state(-0.1), ValueError);
    CHECK(w_state(4).amplitudes()(8).real() == doctest::Approx(0.5));
    CHECK(qubit_chain_dims(4).z_labels() == std::vector<std::string>{"C1", "C2"});
    CHECK(qubit_chain_dims(3).z_labels() == std::vector<std::string>{"C"});
    CHECK_THROWS_AS(phi_plus(0), ValueError);
}
