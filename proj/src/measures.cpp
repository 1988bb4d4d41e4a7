#include "entloc/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "entloc/parallel.hpp"
#include "entloc/random.hpp"

namespace entloc {

std::string_view to_string(MeasureKind kind) {
    switch (kind) {
    case MeasureKind::Entropy: return "entropy";
    case MeasureKind::Wootters: return "wootters";
    case MeasureKind::GConcurrence: return "gconc";
    }
    return "entropy";
}

MeasureKind measure_from_string(std::string_view name) {
    if (name == "entropy") return MeasureKind::Entropy;
    if (name == "wootters" || name == "concurrence") return MeasureKind::Wootters;
    if (name == "gconc" || name == "g_concurrence") return MeasureKind::GConcurrence;
    throw ParseError("unknown measure '" + std::string(name) + "'");
}

Matrix DecompositionEnsemble::mixture() const {
    if (states.empty()) return {};
    const auto d = states.front().size();
    Matrix out = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < states.size(); ++i) out += weights[i] * states[i] * states[i].adjoint();
    return out;
}

// ------------------------------------------------------------------ pure forms

double entropy_from_coefficients(const Matrix& coefficients) {
    Eigen::JacobiSVD<Matrix> svd(coefficients);
    RealVector lambda = svd.singularValues().array().square();
    const double n = lambda.sum();
    if (n <= 0.0) return 0.0;
    return shannon_entropy_bits(lambda / n);
}

double gconcurrence_from_coefficients(const Matrix& coefficients) {
    if (coefficients.rows() != coefficients.cols()) return 0.0;
    const auto d = static_cast<double>(coefficients.rows());
    // |det| as a product of singular values; values at rounding level count as zero.
    const RealVector sv = Eigen::JacobiSVD<Matrix>(coefficients).singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) return 0.0;
    const double floor = 8.0 * d * std::numeric_limits<double>::epsilon() * sv(0);
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) <= floor) return 0.0;
        log_det += std::log(sv(i));
    }
    return d * std::exp(2.0 * log_det / d);
}

double wootters_from_coefficients(const Matrix& coefficients) {
    if (coefficients.rows() != 2 || coefficients.cols() != 2)
        throw DimensionError("Wootters concurrence needs a two-qubit state");
    // psi^T (sy (x) sy) psi = -2 (a00 a11 - a01 a10)
    const double n = coefficients.squaredNorm();
    if (n <= 0.0) return 0.0;
    const cplx det = coefficients(0, 0) * coefficients(1, 1) - coefficients(0, 1) * coefficients(1, 0);
    return 2.0 * std::abs(det) / n;
}

namespace {

/// Default A|B cut: every party must be A- or B-role.
std::vector<std::string> default_left(const DimSpec& dims) {
    if (!dims.z_labels().empty()) throw DimensionError("root measures act on A|B states; trace out Z first");
    dims.require_ab();
    return dims.labels_with_role(Role::A);
}

}  // namespace

double entropy_of_entanglement(const PureState& psi, std::span<const std::string> left) {
    if (!psi.normalized() && std::abs(psi.norm() - 1.0) > kNormTol)
        throw ValueError("entropy of entanglement needs a normalized pure state");
    return entropy_from_coefficients(coefficient_matrix(psi, left));
}

double entropy_of_entanglement(const PureState& psi) {
    const auto left = default_left(psi.dims());
    return entropy_of_entanglement(psi, left);
}

double gconcurrence_pure(const PureState& psi, std::span<const std::string> left) {
    return gconcurrence_from_coefficients(coefficient_matrix(psi, left));
}

double gconcurrence_pure(const PureState& psi) {
    const auto left = default_left(psi.dims());
    return gconcurrence_pure(psi, left);
}

// ------------------------------------------------------------------ Wootters

double wootters_concurrence(const Matrix& rho) {
    if (rho.rows() != 4 || rho.cols() != 4) throw DimensionError("Wootters concurrence needs a 4x4 density matrix");
    Matrix sy(2, 2);
    sy << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
    const Matrix yy = kron(sy, sy);

    // mu_i are the singular values of tau = W^T (sy (x) sy) W for any rho = W W^dagger.
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()));
    const RealVector& lambda = es.eigenvalues();
    const double floor = 1e-14 * std::max(lambda.maxCoeff(), 0.0);
    Matrix w = Matrix::Zero(4, 4);
    for (Eigen::Index i = 0; i < 4; ++i)
        if (lambda(i) > floor) w.col(i) = std::sqrt(lambda(i)) * es.eigenvectors().col(i);
    const Matrix tau = w.transpose() * yy * w;
    RealVector mu = Eigen::JacobiSVD<Matrix>(tau).singularValues();
    std::sort(mu.data(), mu.data() + mu.size(), std::greater<>());
    return std::max(0.0, mu(0) - mu(1) - mu(2) - mu(3));
}

double wootters_concurrence(const DensityOperator& rho) {
    const auto left = default_left(rho.dims());
    const auto right = complement(rho.dims(), left);
    if (rho.dims().dim_of(left) != 2 || rho.dims().dim_of(right) != 2)
        throw DimensionError("Wootters concurrence needs a 2x2 bipartite state");
    std::vector<std::string> order = left;
    order.insert(order.end(), right.begin(), right.end());
    return wootters_concurrence(permute(rho, order).matrix());
}

// ------------------------------------------------------------------ convex roof

namespace {

struct Functional {
    MeasureKind kind;

    /// Homogeneous of degree one in |A|^2.
    double value(const Matrix& a) const {
        if (kind == MeasureKind::GConcurrence) {
            if (a.rows() != a.cols()) return 0.0;
            if (a.rows() == 2) return 2.0 * std::abs(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0));
            return gconcurrence_from_coefficients(a);
        }
        Eigen::JacobiSVD<Matrix> svd(a);
        const RealVector s2 = svd.singularValues().array().square();
        const double n = s2.sum();
        if (n <= 0.0) return 0.0;
        return n * shannon_entropy_bits(s2 / n);
    }

    /// Wirtinger derivative d value / d conj(A).
    Matrix gradient(const Matrix& a) const {
        if (kind == MeasureKind::GConcurrence) {
            if (a.rows() != a.cols()) return Matrix::Zero(a.rows(), a.cols());
            if (a.rows() == 2) {
                // 2|det A| -> (det/|det|) adj(A)^dagger; 0 is a subgradient at det = 0.
                const cplx det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
                const double r = std::abs(det);
                Matrix g = Matrix::Zero(2, 2);
                if (r == 0.0) return g;
                const cplx phase = det / r;
                g(0, 0) = phase * std::conj(a(1, 1));
                g(0, 1) = -phase * std::conj(a(1, 0));
                g(1, 0) = -phase * std::conj(a(0, 1));
                g(1, 1) = phase * std::conj(a(0, 0));
                return g;
            }
            // d |det A|^{2/d} -> |det A|^{2/d} A^{-dagger}, via the SVD to stay finite near singular A.
            Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
            const RealVector& s = svd.singularValues();
            const double e = 2.0 / static_cast<double>(a.rows());
            RealVector c = RealVector::Zero(s.size());
            for (Eigen::Index i = 0; i < s.size(); ++i) {
                if (s(i) <= 0.0) continue;  // subgradient choice at the cusp
                double others = 1.0;
                for (Eigen::Index j = 0; j < s.size(); ++j)
                    if (j != i) others *= std::pow(s(j), e);
                c(i) = others * std::pow(s(i), e - 1.0);
            }
            return svd.matrixU() * c.asDiagonal() * svd.matrixV().adjoint();
        }
        Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const RealVector& s = svd.singularValues();
        const double n = s.squaredNorm();
        RealVector c = RealVector::Zero(s.size());
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s(i) > 0.0) c(i) = -s(i) * std::log(s(i) * s(i) / n) / std::log(2.0);
        return svd.matrixU() * c.asDiagonal() * svd.matrixV().adjoint();
    }
};

struct RoofProblem {
    Functional f;
    std::vector<Matrix> weighted;  // sqrt(lambda_i) e_i reshaped to dA x dB
    int dim_a;
    int dim_b;
    int ensemble;

    int rank() const { return static_cast<int>(weighted.size()); }

    std::vector<Matrix> members(const Matrix& v) const {
        std::vector<Matrix> out(ensemble, Matrix::Zero(dim_a, dim_b));
        for (int j = 0; j < ensemble; ++j)
            for (int i = 0; i < rank(); ++i) out[j] += v(j, i) * weighted[i];
        return out;
    }

    double objective(const Matrix& v) const {
        double total = 0.0;
        for (const auto& a : members(v)) total += f.value(a);
        return total;
    }

    /// Euclidean gradient with respect to conj(V).
    Matrix gradient(const Matrix& v) const {
        Matrix g = Matrix::Zero(ensemble, ensemble);
        const auto as = members(v);
        for (int j = 0; j < ensemble; ++j) {
            const Matrix gj = f.gradient(as[j]);
            for (int i = 0; i < rank(); ++i) g(j, i) = (gj.array() * weighted[i].array().conjugate()).sum();
        }
        return g;
    }
};

struct LocalRun {
    double value = std::numeric_limits<double>::infinity();
    Matrix v;
    bool converged = false;
    int iterations = 0;
};

/// Skew-Hermitian body-frame direction of steepest ascent at V.
Matrix body_gradient(const RoofProblem& prob, const Matrix& v) {
    const Matrix x = v.adjoint() * prob.gradient(v);
    return x - x.adjoint();
}

double inner(const Matrix& a, const Matrix& b) { return (a.adjoint() * b).trace().real(); }

/// Polak-Ribiere conjugate gradient on U(m), moving along V exp(t D) with
/// Armijo backtracking. Directions are carried in the body frame.
LocalRun descend(const RoofProblem& prob, Matrix v, const RoofConfig& cfg) {
    LocalRun run;
    double value = prob.objective(v);
    Matrix grad = body_gradient(prob, v);
    Matrix dir = -grad;
    Matrix prev_grad;
    double step = -1.0;
    int stalls = 0;
    int it = 0;
    for (; it < cfg.max_iters; ++it) {
        // d/dt f(V exp(tD)) at 0 equals Re tr(G^dagger D) with G the body gradient above.
        double slope = inner(grad, dir);
        if (!(slope < 0.0)) {
            dir = -grad;
            slope = inner(grad, dir);
        }
        if (!(slope < -1e-300)) {
            run.converged = true;
            break;
        }
        const Matrix h = cplx(0.0, 1.0) * dir;  // Hermitian generator, D = -i h
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
        const double norm = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
        if (step <= 0.0) step = 0.25 / norm;
        double t = std::min(2.0 * step, 1.0 / norm);

        bool accepted = false;
        Matrix next;
        double next_value = value;
        Vector phases(es.eigenvalues().size());
        for (int bt = 0; bt < 60; ++bt, t *= 0.5) {
            for (Eigen::Index k = 0; k < phases.size(); ++k)
                phases(k) = std::exp(cplx(0.0, -t * es.eigenvalues()(k)));
            next = v * (es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint());
            next_value = prob.objective(next);
            if (next_value <= value + 1e-4 * t * slope) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (dir.isApprox(-grad)) {
                run.converged = true;
                break;
            }
            dir = -grad;  // restart conjugacy and retry
            step = -1.0;
            continue;
        }
        step = t;
        const double decrease = value - next_value;
        v = std::move(next);
        if (it % 16 == 15) v = polar_isometry(v);
        value = prob.objective(v);

        prev_grad = std::move(grad);
        grad = body_gradient(prob, v);
        const double denom = inner(prev_grad, prev_grad);
        const double beta = denom > 0.0 ? std::max(0.0, inner(grad, grad - prev_grad) / denom) : 0.0;
        dir = -grad + beta * dir;

        if (decrease < cfg.tol) {
            if (++stalls >= 5) {
                run.converged = true;
                ++it;
                break;
            }
        } else {
            stalls = 0;
        }
    }
    run.value = value;
    run.v = std::move(v);
    run.iterations = it;
    return run;
}

}  // namespace

RoofResult convex_roof(const Matrix& rho, int dim_a, int dim_b, MeasureKind kind, const RoofConfig& cfg) {
    if (kind == MeasureKind::Wootters) throw ValueError("Wootters concurrence has a closed form; no roof needed");
    if (rho.rows() != static_cast<Eigen::Index>(dim_a) * dim_b || rho.cols() != rho.rows())
        throw DimensionError("density matrix shape does not match dA*dB");
    if (cfg.restarts < 1) throw ValueError("roof optimizer needs at least one restart");

    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()));
    const RealVector& ev = es.eigenvalues();
    const double cut = 1e-13 * std::max(1.0, ev.cwiseAbs().maxCoeff());

    RoofProblem prob{Functional{kind}, {}, dim_a, dim_b, 0};
    for (Eigen::Index i = ev.size(); i-- > 0;) {
        if (ev(i) <= cut) continue;
        prob.weighted.push_back(reshape_rows(Vector(std::sqrt(ev(i)) * es.eigenvectors().col(i)), dim_a, dim_b));
    }
    RoofResult result;
    if (prob.rank() == 0) return result;

    const int m = cfg.ensemble_size > 0 ? std::max(cfg.ensemble_size, prob.rank()) : prob.rank() + 2;
    prob.ensemble = m;

    const bool trivially_zero = kind == MeasureKind::GConcurrence && dim_a != dim_b;
    const int restarts = (prob.rank() == 1 || trivially_zero) ? 1 : cfg.restarts;

    std::vector<LocalRun> runs(restarts);
    parallel_for(restarts, cfg.threads, [&](int r) {
        Matrix v0;
        if (r == 0) {
            v0 = Matrix::Identity(m, m);
        } else {
            Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
            v0 = random_unitary(m, rng);
        }
        if (prob.rank() == 1 || trivially_zero) {
            runs[r] = LocalRun{prob.objective(v0), v0, true, 0};
        } else {
            runs[r] = descend(prob, std::move(v0), cfg);
        }
    });

    int best = 0;
    for (int r = 1; r < restarts; ++r)
        if (runs[r].value < runs[best].value) best = r;

    result.restarts = restarts;
    result.converged = runs[best].converged;
    for (const auto& run : runs) result.iterations += run.iterations;

    const auto members = prob.members(runs[best].v);
    double total = 0.0;
    for (const auto& a : members) {
        const double p = a.squaredNorm();
        if (p < 1e-15) continue;
        Vector flat(static_cast<Eigen::Index>(dim_a) * dim_b);
        for (int i = 0; i < dim_a; ++i)
            for (int j = 0; j < dim_b; ++j) flat(i * dim_b + j) = a(i, j);
        total += prob.f.value(a);
        result.ensemble.weights.push_back(p);
        result.ensemble.states.push_back(flat / std::sqrt(p));
    }
    result.value = total;
    return result;
}

RoofResult gconcurrence_roof(const Matrix& rho, int dim_a, int dim_b, const RoofConfig& config) {
    return convex_roof(rho, dim_a, dim_b, MeasureKind::GConcurrence, config);
}

RoofResult entanglement_of_formation(const Matrix& rho, int dim_a, int dim_b, const RoofConfig& config) {
    return convex_roof(rho, dim_a, dim_b, MeasureKind::Entropy, config);
}

RoofResult gconcurrence_mixed(const DensityOperator& rho, std::span<const std::string> left,
                              const RoofConfig& config) {
    const auto right = complement(rho.dims(), left);
    std::vector<std::string> order(left.begin(), left.end());
    order.insert(order.end(), right.begin(), right.end());
    return gconcurrence_roof(permute(rho, order).matrix(), rho.dims().dim_of(left), rho.dims().dim_of(right),
                             config);
}

RoofResult gconcurrence_mixed(const DensityOperator& rho, const RoofConfig& config) {
    const auto left = default_left(rho.dims());
    return gconcurrence_mixed(rho, left, config);
}

// ------------------------------------------------------------------ RootMeasure

std::optional<Vector> pure_part(const Matrix& sigma, double tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (sigma + sigma.adjoint()));
    const RealVector& ev = es.eigenvalues();
    const Eigen::Index top = ev.size() - 1;
    const double trace = ev.sum();
    if (trace <= 0.0) return std::nullopt;
    double rest = 0.0;
    for (Eigen::Index i = 0; i < top; ++i) rest += std::abs(ev(i));
    if (rest > tol * trace) return std::nullopt;
    return Vector(std::sqrt(ev(top)) * es.eigenvectors().col(top));
}

double RootMeasure::on_coefficients(const Matrix& coefficients) const {
    const double n = coefficients.squaredNorm();
    if (n <= 0.0) return 0.0;
    switch (kind_) {
    case MeasureKind::Entropy: return entropy_from_coefficients(coefficients);
    case MeasureKind::Wootters: return wootters_from_coefficients(coefficients);
    case MeasureKind::GConcurrence: return gconcurrence_from_coefficients(coefficients) / n;
    }
    return 0.0;
}

bool RootMeasure::exact_on_mixed(int dim_a, int dim_b) const {
    if (kind_ == MeasureKind::Wootters) return true;
    return kind_ == MeasureKind::GConcurrence && dim_a != dim_b;
}

double RootMeasure::on_density(const Matrix& sigma, int dim_a, int dim_b) const {
    if (kind_ == MeasureKind::GConcurrence && dim_a != dim_b) return 0.0;
    if (auto v = pure_part(sigma)) return on_coefficients(reshape_rows(*v, dim_a, dim_b));
    const Matrix normalized = sigma / sigma.trace().real();
    switch (kind_) {
    case MeasureKind::Wootters:
        if (dim_a != 2 || dim_b != 2) throw DimensionError("Wootters concurrence needs a two-qubit state");
        return wootters_concurrence(normalized);
    case MeasureKind::Entropy:
    case MeasureKind::GConcurrence: return convex_roof(normalized, dim_a, dim_b, kind_, roof_).value;
    }
    return 0.0;
}

double RootMeasure::operator()(const PureState& psi) const {
    const auto left = default_left(psi.dims());
    return on_coefficients(coefficient_matrix(psi, left));
}

double RootMeasure::operator()(const DensityOperator& rho) const {
    const auto left = default_left(rho.dims());
    const auto right = complement(rho.dims(), left);
    std::vector<std::string> order = left;
    order.insert(order.end(), right.begin(), right.end());
    return on_density(permute(rho, order).matrix(), rho.dims().dim_of(left), rho.dims().dim_of(right));
}

// ------------------------------------------------------------------ instruments

int Instrument::dim() const {
    for (const auto& outcome : kraus)
        if (!outcome.empty()) return static_cast<int>(outcome.front().rows());
    return 0;
}

Matrix Instrument::completeness() const {
    const int d = dim();
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& outcome : kraus)
        for (const auto& m : outcome) sum += m.adjoint() * m;
    return sum;
}

bool Instrument::trace_preserving(double tol) const {
    const int d = dim();
    if (d == 0) return false;
    return max_abs_diff(completeness(), Matrix::Identity(d, d)) <= tol;
}

void Instrument::validate(const DimSpec& dims, double tol) const {
    const int d = dims[dims.index_of(party)].dim;
    if (kraus.empty()) throw ValueError("instrument has no outcomes");
    for (const auto& outcome : kraus) {
        if (outcome.empty()) throw ValueError("instrument outcome has no Kraus operators");
        for (const auto& m : outcome)
            if (m.rows() != d || m.cols() != d)
                throw DimensionError("Kraus operators on '" + party + "' must be " + std::to_string(d) + "x" +
                                     std::to_string(d));
    }
    if (!trace_preserving(tol)) throw ValueError("instrument is not trace preserving");
}

double f_factor(std::span<const Matrix> kraus, int dim) {
    double f = 0.0;
    for (const auto& m : kraus) {
        if (m.rows() != dim || m.cols() != dim)
            throw DimensionError("f-factor needs square Kraus operators of dimension " + std::to_string(dim));
        f += std::pow(std::abs(m.partialPivLu().determinant()), 2.0 / dim);
    }
    return f;
}

std::vector<double> f_factors(const Instrument& instrument) {
    std::vector<double> out;
    for (const auto& outcome : instrument.kraus) out.push_back(f_factor(outcome, instrument.dim()));
    return out;
}

}  // namespace entloc
