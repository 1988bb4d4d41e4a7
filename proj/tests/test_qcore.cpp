#include <doctest.h>

#include <cmath>

#include "entloc/constructions.hpp"
#include "entloc/qcore.hpp"
#include "entloc/random.hpp"
#include "oracles.hpp"

using namespace entloc;

namespace {

DimSpec qubits_ab() { return DimSpec({{"A", 2, Role::A}, {"B", 2, Role::B}}); }

DensityOperator maximally_mixed(const DimSpec& dims) {
    const int d = dims.total_dim();
    return DensityOperator(Matrix::Identity(d, d) / static_cast<double>(d), dims);
}

std::vector<int> dim_list(const DimSpec& dims) {
    std::vector<int> out;
    for (const auto& p : dims.parties()) out.push_back(p.dim);
    return out;
}

}  // namespace

TEST_SUITE("dimspec") {
    TEST_CASE("total dimension and lookups") {
        const DimSpec dims = locked_state_dims();
        CHECK(dims.total_dim() == 64);
        CHECK(dims.index_of("B") == 2);
        CHECK(dims.y_labels() == std::vector<std::string>{"a", "A", "B"});
        CHECK(dims.z_labels() == std::vector<std::string>{"C"});
        CHECK(dims.labels_with_role(Role::A) == std::vector<std::string>{"a", "A"});
        CHECK_THROWS_AS(dims.index_of("D"), DimensionError);
    }

    TEST_CASE("invalid layouts are rejected") {
        CHECK_THROWS_AS(DimSpec({{"A", 2, Role::A}, {"A", 2, Role::B}}), DimensionError);
        CHECK_THROWS_AS(DimSpec({{"A", 0, Role::A}}), DimensionError);
        CHECK_THROWS_AS(DimSpec({{"A", 2, Role::A}, {"C", 2, Role::Z}}).require_ab(), DimensionError);
        CHECK_THROWS_AS(role_from_string("X"), ParseError);
    }

    TEST_CASE("subset keeps layout order, reordered follows the request") {
        const DimSpec dims = locked_state_dims();
        const std::vector<std::string> pick{"C", "a"};
        CHECK(dims.subset(pick).labels() == std::vector<std::string>{"a", "C"});
        CHECK(dims.reordered(pick).labels() == std::vector<std::string>{"C", "a"});
        CHECK(complement(dims, pick) == std::vector<std::string>{"A", "B"});
    }
}

TEST_SUITE("states") {
    TEST_CASE("pure state validation") {
        CHECK_THROWS_AS(PureState(Vector::Ones(3), qubits_ab()), DimensionError);
        CHECK_THROWS_AS(PureState(Vector::Ones(4), qubits_ab()), ValueError);
        const PureState loose(Vector::Ones(4), qubits_ab(), Norm::Unnormalized);
        CHECK(loose.norm() == doctest::Approx(2.0));
    }

    TEST_CASE("density validation") {
        Matrix m = Matrix::Identity(4, 4) / 4.0;
        m(0, 1) = 0.1;
        CHECK_THROWS_AS(DensityOperator(m, qubits_ab()), ValueError);
        Matrix neg = Matrix::Zero(4, 4);
        neg(0, 0) = 1.5;
        neg(1, 1) = -0.5;
        CHECK_THROWS_AS(DensityOperator(neg, qubits_ab()), ValueError);
        CHECK_THROWS_AS(DensityOperator(Matrix::Identity(4, 4), qubits_ab()), ValueError);
        CHECK_NOTHROW(DensityOperator(Matrix::Identity(4, 4), qubits_ab(), Norm::Unnormalized));
        CHECK_THROWS_AS(DensityOperator(Matrix::Identity(3, 3) / 3.0, qubits_ab()), DimensionError);
    }
}

TEST_SUITE("tensor_product") {
    TEST_CASE("|0> (x) |1> is |01>") {
        const PureState zero(oracle::basis(2, 0), DimSpec({{"A", 2, Role::A}}));
        const PureState one(oracle::basis(2, 1), DimSpec({{"B", 2, Role::B}}));
        const PureState both = tensor_product(zero, one);
        CHECK(max_abs_diff(both.amplitudes(), oracle::basis(4, 1)) == 0.0);
        CHECK(both.dims() == qubits_ab());
    }

    TEST_CASE("maximally mixed factors") {
        const auto x = maximally_mixed(DimSpec({{"A", 2, Role::A}}));
        const auto y = maximally_mixed(DimSpec({{"B", 2, Role::B}}));
        CHECK(max_abs_diff(tensor_product(x, y).matrix(), Matrix::Identity(4, 4) / 4.0) < 1e-15);
    }

    TEST_CASE("two Bell pairs have four equal Schmidt numbers across the paired cut") {
        const PureState p1 = bell_state();
        const PureState p2(bell_state().amplitudes(), DimSpec({{"A2", 2, Role::A}, {"B2", 2, Role::B}}));
        const PureState both = tensor_product(p1, p2);
        const std::vector<std::string> left{"A", "A2"};
        const auto s = schmidt_decompose(both, left);
        // Oracle: SVD of the coefficient matrix assembled by hand.
        Matrix c = Matrix::Zero(4, 4);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int a2 = 0; a2 < 2; ++a2)
                    for (int b2 = 0; b2 < 2; ++b2)
                        c(a * 2 + a2, b * 2 + b2) = both.amplitudes()(a * 8 + b * 4 + a2 * 2 + b2);
        const RealVector sv = Eigen::JacobiSVD<Matrix>(c).singularValues();
        for (int i = 0; i < 4; ++i) {
            CHECK(s.schmidt_numbers(i) == doctest::Approx(0.25).epsilon(1e-12));
            CHECK(sv(i) * sv(i) == doctest::Approx(0.25).epsilon(1e-12));
        }
    }

    TEST_CASE("label collision") {
        CHECK_THROWS_AS(tensor_product(bell_state(), bell_state()), DimensionError);
    }

    TEST_CASE("matches the loop oracle and traces back to the factors") {
        Rng rng(17);
        const auto x = random_density(DimSpec({{"A", 2, Role::A}, {"C", 3, Role::Z}}), 2, rng);
        const auto y = random_density(DimSpec({{"B", 3, Role::B}}), 3, rng);
        const auto xy = tensor_product(x, y);
        CHECK(max_abs_diff(xy.matrix(), oracle::kron(x.matrix(), y.matrix())) < 1e-15);
        const std::vector<std::string> keep{"A", "C"};
        CHECK(max_abs_diff(partial_trace(xy, keep).matrix(), x.matrix()) < 1e-12);
    }
}

TEST_SUITE("partial_trace") {
    TEST_CASE("Bell reduction is I/2") {
        const DensityOperator bell(bell_state());
        const std::vector<std::string> keep{"A"};
        CHECK(max_abs_diff(partial_trace(bell, keep).matrix(), Matrix::Identity(2, 2) / 2.0) < 1e-15);
    }

    TEST_CASE("product state reduction") {
        const DensityOperator zz(PureState(oracle::basis(4, 0), qubits_ab()));
        const std::vector<std::string> keep{"A"};
        CHECK(max_abs_diff(partial_trace(zz, keep).matrix(), oracle::projector(oracle::basis(2, 0))) == 0.0);
    }

    TEST_CASE("tracing C from the locked state leaves a rank-2 operator on 8x4") {
        const DensityOperator rho(build_locked_state());
        const std::vector<std::string> keep{"a", "A", "B"};
        const Matrix got = partial_trace(rho, keep).matrix();
        const Matrix want = oracle::partial_trace(rho.matrix(), {2, 4, 4, 2}, {0, 1, 2});
        CHECK(max_abs_diff(got, want) < 1e-14);
        int rank = 0;
        for (double l : oracle::hermitian_eigenvalues(want)) rank += l > 1e-10;
        CHECK(rank == 2);
    }

    TEST_CASE("random layouts against the loop oracle") {
        Rng rng(5);
        const DimSpec dims({{"C", 2, Role::Z}, {"A", 3, Role::A}, {"D", 2, Role::Z}, {"B", 2, Role::B}});
        const auto rho = random_density(dims, 3, rng);
        const std::vector<std::string> keep{"A", "B"};
        const auto red = partial_trace(rho, keep);
        CHECK(max_abs_diff(red.matrix(), oracle::partial_trace(rho.matrix(), dim_list(dims), {1, 3})) < 1e-14);
        CHECK(red.trace() == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(oracle::hermitian_eigenvalues(red.matrix()).minCoeff() > -1e-13);
        CHECK_THROWS_AS(partial_trace(rho, std::vector<std::string>{"Q"}), DimensionError);
    }
}

TEST_SUITE("permute") {
    TEST_CASE("round trip and product reordering") {
        Rng rng(8);
        const DimSpec dims({{"A", 2, Role::A}, {"B", 3, Role::B}, {"C", 2, Role::Z}});
        const auto psi = random_pure(dims, rng);
        const std::vector<std::string> order{"C", "A", "B"};
        const auto moved = permute(psi, order);
        CHECK(moved.dims().labels() == order);
        CHECK(max_abs_diff(permute(moved, dims.labels()).amplitudes(), psi.amplitudes()) == 0.0);

        const Vector a = random_pure(DimSpec({{"A", 2, Role::A}}), rng).amplitudes();
        const Vector b = random_pure(DimSpec({{"B", 3, Role::B}}), rng).amplitudes();
        const PureState ab(oracle::kron(a, b), DimSpec({{"A", 2, Role::A}, {"B", 3, Role::B}}));
        const std::vector<std::string> swap{"B", "A"};
        CHECK(max_abs_diff(permute(ab, swap).amplitudes(), oracle::kron(b, a)) < 1e-15);
    }
}

TEST_SUITE("schmidt") {
    TEST_CASE("canonical spectra") {
        const auto bell = schmidt_decompose(bell_state(), std::vector<std::string>{"A"});
        CHECK(bell.schmidt_numbers(0) == doctest::Approx(0.5));
        CHECK(bell.schmidt_numbers(1) == doctest::Approx(0.5));

        const auto zz = schmidt_decompose(PureState(oracle::basis(4, 0), qubits_ab()), std::vector<std::string>{"A"});
        CHECK(zz.schmidt_numbers(0) == doctest::Approx(1.0));
        CHECK(zz.schmidt_numbers(1) == 0.0);
        CHECK(zz.rank == 1);

        const PureState skew(oracle::ket({std::sqrt(0.9), 0, 0, std::sqrt(0.1)}), qubits_ab());
        const auto s = schmidt_decompose(skew, std::vector<std::string>{"A"});
        CHECK(s.schmidt_numbers(0) == doctest::Approx(0.9).epsilon(1e-14));
        CHECK(s.schmidt_numbers(1) == doctest::Approx(0.1).epsilon(1e-14));
    }

    TEST_CASE("zero padding to max(dA, dB)") {
        Rng rng(3);
        const DimSpec dims({{"A", 2, Role::A}, {"B", 3, Role::B}});
        const auto s = schmidt_decompose(random_pure(dims, rng), std::vector<std::string>{"A"});
        REQUIRE(s.schmidt_numbers.size() == 3);
        CHECK(s.schmidt_numbers(2) == 0.0);
        CHECK(s.schmidt_numbers.sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s.rank == 2);
    }

    TEST_CASE("reconstruction and unnormalized inputs") {
        Rng rng(4);
        const DimSpec dims({{"A", 3, Role::A}, {"B", 4, Role::B}});
        const auto psi = random_pure(dims, rng);
        const auto s = schmidt_decompose(psi, std::vector<std::string>{"A"});
        CHECK(max_abs_diff(canonical_phase(s.reconstruct()), canonical_phase(psi.amplitudes())) < 1e-10);
        const PureState loose(2.0 * psi.amplitudes(), dims, Norm::Unnormalized);
        CHECK_THROWS_AS(schmidt_decompose(loose, std::vector<std::string>{"A"}), ValueError);
    }

    TEST_CASE("local unitaries leave the spectrum unchanged") {
        Rng rng(12);
        const DimSpec dims({{"A", 3, Role::A}, {"B", 3, Role::B}});
        for (int t = 0; t < 20; ++t) {
            const auto psi = random_pure(dims, rng);
            const Matrix u = oracle::kron(random_unitary(3, rng), random_unitary(3, rng));
            const PureState moved(u * psi.amplitudes(), dims);
            const auto s0 = schmidt_decompose(psi, std::vector<std::string>{"A"});
            const auto s1 = schmidt_decompose(moved, std::vector<std::string>{"A"});
            CHECK((s0.schmidt_numbers - s1.schmidt_numbers).cwiseAbs().maxCoeff() < 1e-10);
        }
    }

    TEST_CASE("entropy of either reduction agrees") {
        Rng rng(13);
        const DimSpec dims({{"A", 2, Role::A}, {"B", 4, Role::B}});
        for (int t = 0; t < 20; ++t) {
            const DensityOperator rho(random_pure(dims, rng));
            const double sa = von_neumann_entropy_bits(partial_trace(rho, std::vector<std::string>{"A"}).matrix());
            const double sb = von_neumann_entropy_bits(partial_trace(rho, std::vector<std::string>{"B"}).matrix());
            CHECK(std::abs(sa - sb) < 1e-10);
        }
    }
}

TEST_SUITE("conditional_state") {
    const DimSpec yz({{"A", 2, Role::A}, {"C", 2, Role::Z}});

    TEST_CASE("Bell pair conditioned on |0>") {
        const DensityOperator rho(PureState(bell_state().amplitudes(), yz));
        const Branch b = conditional_state(rho, oracle::projector(oracle::basis(2, 0)));
        CHECK(b.probability == doctest::Approx(0.5));
        REQUIRE(b.state);
        CHECK(max_abs_diff(b.state->matrix(), oracle::projector(oracle::basis(2, 0))) < 1e-15);
    }

    TEST_CASE("identity element returns the Y marginal") {
        Rng rng(21);
        const auto rho = random_density(yz, 3, rng);
        const Branch b = conditional_state(rho, Matrix::Identity(2, 2));
        CHECK(b.probability == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(max_abs_diff(b.state->matrix(), partial_trace(rho, std::vector<std::string>{"A"}).matrix()) < 1e-14);
    }

    TEST_CASE("null branches and invalid elements") {
        const DensityOperator rho(PureState(oracle::basis(4, 0), yz));
        const Branch b = conditional_state(rho, oracle::projector(oracle::basis(2, 1)));
        CHECK(b.probability < kNullBranch);
        CHECK_FALSE(b.state);
        CHECK_THROWS_AS(conditional_state(rho, 2.0 * Matrix::Identity(2, 2)), ValueError);
        CHECK_THROWS_AS(conditional_state(rho, Matrix::Identity(3, 3)), DimensionError);
    }

    TEST_CASE("locked state branch after V0|0><0|V0^dagger on C") {
        const DensityOperator rho(build_locked_state());
        const LockedStateSpec spec = LockedStateSpec::defaults();
        const Vector c0 = spec.v[0] * oracle::basis(2, 0);
        const Branch b = conditional_state(rho, oracle::projector(c0));
        // Dense oracle: (I (x) Q) on the full space, then trace C by loops.
        const Matrix lifted = rho.matrix() * oracle::embed(oracle::projector(c0), {2, 4, 4, 2}, {3});
        const Matrix y = oracle::partial_trace(lifted, {2, 4, 4, 2}, {0, 1, 2});
        const double p = y.trace().real();
        CHECK(b.probability == doctest::Approx(p).epsilon(1e-14));
        CHECK(max_abs_diff(b.state->matrix(), y / p) < 1e-14);
        // Entropy across aA|B of the branch, computed from the oracle matrix.
        const Matrix ab = oracle::partial_trace(y / p, {8, 4}, {0});
        CHECK(von_neumann_entropy_bits(partial_trace(*b.state, std::vector<std::string>{"a", "A"}).matrix()) ==
              doctest::Approx(oracle::entropy_bits(ab)).epsilon(1e-10));
    }

    TEST_CASE("complete POVMs conserve probability and average back to the marginal") {
        Rng rng(31);
        const DimSpec dims({{"A", 2, Role::A}, {"C", 3, Role::Z}, {"B", 2, Role::B}});
        for (int t = 0; t < 25; ++t) {
            const auto rho = random_density(dims, 1 + t % 4, rng);
            const auto povm = random_povm(3, 2 + t % 5, rng, t % 5 == 0 ? 2 : 1);
            double total = 0.0;
            Matrix avg = Matrix::Zero(4, 4);
            for (const auto& q : povm) {
                const Branch b = conditional_state(rho, q);
                total += b.probability;
                if (b.state) avg += b.probability * b.state->matrix();
            }
            CHECK(std::abs(total - 1.0) < 1e-10);
            const auto marginal = partial_trace(rho, std::vector<std::string>{"A", "B"});
            CHECK(max_abs_diff(avg, marginal.matrix()) < 1e-10);
        }
    }
}

TEST_SUITE("numerics") {
    TEST_CASE("eigenvalue clipping and entropies") {
        Matrix m = Matrix::Zero(2, 2);
        m(0, 0) = 1.0 + 5e-13;
        m(1, 1) = -5e-13;
        const RealVector ev = clipped_eigenvalues(m);
        CHECK(ev.minCoeff() >= 0.0);
        CHECK(von_neumann_entropy_bits(Matrix::Identity(4, 4) / 4.0) == doctest::Approx(2.0));
        RealVector p(2);
        p << 0.9, 0.1;
        CHECK(shannon_entropy_bits(p) == doctest::Approx(-0.9 * std::log2(0.9) - 0.1 * std::log2(0.1)));
    }

    TEST_CASE("canonical phase makes the first nonzero amplitude real positive") {
        const Vector v = oracle::ket({0.0, cplx(0.0, -0.6), 0.8});
        const Vector c = canonical_phase(v);
        CHECK(c(1).imag() == doctest::Approx(0.0));
        CHECK(c(1).real() == doctest::Approx(0.6));
        CHECK(fidelity(v, c) == doctest::Approx(1.0));
    }

    TEST_CASE("embed matches the loop oracle") {
        Rng rng(2);
        const DimSpec dims({{"A", 2, Role::A}, {"B", 3, Role::B}, {"C", 2, Role::Z}});
        const Matrix op = complex_gaussian(3, 3, rng);
        CHECK(max_abs_diff(embed(dims, "B", op), oracle::embed(op, {2, 3, 2}, {1})) < 1e-15);
    }
}
