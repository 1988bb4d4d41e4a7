#include "entloc/localize.hpp"

#include <cmath>
#include <numbers>

#include "entloc/parallel.hpp"
#include "entloc/random.hpp"

namespace entloc {

// ------------------------------------------------------------------ ProductPovm

ProductPovm::ProductPovm(std::vector<std::string> parties, std::vector<std::vector<Matrix>> outcomes)
    : parties_(std::move(parties)), outcomes_(std::move(outcomes)) {
    for (const auto& outcome : outcomes_)
        if (outcome.size() != parties_.size())
            throw DimensionError("each POVM outcome needs one factor per party");
}

ProductPovm ProductPovm::from_local(const std::vector<LocalPovm>& local) {
    std::vector<std::string> parties;
    for (const auto& l : local) {
        if (l.elements.empty()) throw ValueError("local POVM on '" + l.party + "' has no elements");
        parties.push_back(l.party);
    }
    std::vector<std::vector<Matrix>> outcomes{{}};
    for (const auto& l : local) {
        std::vector<std::vector<Matrix>> next;
        for (const auto& prefix : outcomes)
            for (const auto& e : l.elements) {
                auto o = prefix;
                o.push_back(e);
                next.push_back(std::move(o));
            }
        outcomes = std::move(next);
    }
    return ProductPovm(std::move(parties), std::move(outcomes));
}

Matrix ProductPovm::element(std::size_t k) const {
    const auto& factors = outcomes_.at(k);
    Matrix out = Matrix::Identity(1, 1);
    for (const auto& f : factors) out = kron(out, f);
    return out;
}

Matrix ProductPovm::total() const {
    if (outcomes_.empty()) return {};
    Matrix sum = element(0);
    for (std::size_t k = 1; k < outcomes_.size(); ++k) sum += element(k);
    return sum;
}

void ProductPovm::validate(const DimSpec& dims, double tol) const {
    if (parties_ != dims.z_labels()) throw DimensionError("POVM parties must be the Z parties in layout order");
    if (outcomes_.empty()) throw ValueError("POVM has no outcomes");
    for (const auto& outcome : outcomes_)
        for (std::size_t i = 0; i < parties_.size(); ++i) {
            const Matrix& f = outcome[i];
            const int d = dims[dims.index_of(parties_[i])].dim;
            if (f.rows() != d || f.cols() != d)
                throw DimensionError("POVM factor on '" + parties_[i] + "' has the wrong shape");
            if (!is_hermitian(f, tol)) throw ValueError("POVM factor is not Hermitian");
            if (clipped_eigenvalues(f).minCoeff() < -tol) throw ValueError("POVM factor is not positive");
        }
    const Matrix sum = total();
    if (max_abs_diff(sum, Matrix::Identity(sum.rows(), sum.cols())) > tol)
        throw ValueError("POVM elements do not sum to the identity");
}

// ------------------------------------------------------------------ fixed POVM

namespace {

std::vector<std::string> ab_order(const DimSpec& dims) {
    auto order = dims.labels_with_role(Role::A);
    const auto b = dims.labels_with_role(Role::B);
    order.insert(order.end(), b.begin(), b.end());
    return order;
}

void require_localizable(const DimSpec& dims) {
    dims.require_ab();
    if (dims.z_labels().empty()) throw DimensionError("localization needs at least one Z party");
}

}  // namespace

LEResult average_root_entanglement(const DensityOperator& rho, const ProductPovm& povm, const RootMeasure& measure) {
    require_localizable(rho.dims());
    povm.validate(rho.dims());
    const auto order = ab_order(rho.dims());

    LEResult out;
    out.measure = std::string(measure.name());
    out.povm = povm;
    for (std::size_t k = 0; k < povm.size(); ++k) {
        const Branch b = conditional_state(rho, povm.element(k));
        if (!b.state) continue;
        BranchRecord rec;
        rec.outcome = k;
        rec.probability = b.probability;
        rec.state = permute(*b.state, order);
        rec.value = measure(rec.state);
        out.value += rec.probability * rec.value;
        out.branches.push_back(std::move(rec));
    }
    return out;
}

// ------------------------------------------------------------------ optimizer

namespace {

/// Precomputed layout for fast branch evaluation: rho in (A, B, Z) order, and
/// its dY x dZ amplitude matrix when rho is pure.
struct Localizer {
    const RootMeasure* measure;
    Matrix rho;
    std::optional<Matrix> amplitudes;
    int dim_a = 0;
    int dim_b = 0;
    int dim_z = 0;
    std::vector<int> z_dims;

    int dim_y() const { return dim_a * dim_b; }

    /// sum_k p_k E(sigma_k) where outcome k of party i uses row block k of isometries[i].
    double evaluate(const std::vector<Matrix>& isometries, int rank) const {
        const std::size_t n = isometries.size();
        std::vector<int> counts(n);
        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i) {
            counts[i] = static_cast<int>(isometries[i].rows()) / rank;
            total *= counts[i];
        }
        std::vector<int> digit(n, 0);
        double value = 0.0;
        for (std::size_t k = 0; k < total; ++k) {
            value += branch_value(isometries, rank, digit);
            for (std::size_t i = n; i-- > 0;) {
                if (++digit[i] < counts[i]) break;
                digit[i] = 0;
            }
        }
        return value;
    }

    /// p E(sigma) for one product outcome.
    double branch_value(const std::vector<Matrix>& isometries, int rank, const std::vector<int>& digit) const {
        // Rows r of the combined block: Q = sum_r row_r^dagger row_r.
        std::vector<Vector> rows{Vector::Ones(1)};
        for (std::size_t i = 0; i < isometries.size(); ++i) {
            std::vector<Vector> next;
            for (const auto& prefix : rows)
                for (int r = 0; r < rank; ++r)
                    next.push_back(kron(prefix, Vector(isometries[i].row(digit[i] * rank + r).transpose())));
            rows = std::move(next);
        }
        if (amplitudes && rows.size() == 1) {
            const Vector b = (*amplitudes) * rows.front();
            const double p = b.squaredNorm();
            if (p < kNullBranch) return 0.0;
            return p * measure->on_coefficients(reshape_rows(b, dim_a, dim_b));
        }
        Matrix sigma = Matrix::Zero(dim_y(), dim_y());
        if (amplitudes) {
            for (const auto& row : rows) {
                const Vector b = (*amplitudes) * row;
                sigma += b * b.adjoint();
            }
        } else {
            for (const auto& row : rows) {
                // sigma_{yy'} += sum_{zz'} row_z rho_{(yz),(y'z')} conj(row_z')
                Matrix left(dim_y(), dim_y() * dim_z);
                for (int y = 0; y < dim_y(); ++y)
                    for (int c = 0; c < dim_y() * dim_z; ++c) {
                        cplx s = 0.0;
                        for (int z = 0; z < dim_z; ++z) s += row(z) * rho(y * dim_z + z, c);
                        left(y, c) = s;
                    }
                for (int y = 0; y < dim_y(); ++y)
                    for (int yp = 0; yp < dim_y(); ++yp) {
                        cplx s = 0.0;
                        for (int z = 0; z < dim_z; ++z) s += left(y, yp * dim_z + z) * std::conj(row(z));
                        sigma(y, yp) += s;
                    }
            }
        }
        const double p = sigma.trace().real();
        if (p < kNullBranch) return 0.0;
        return p * measure->on_density(sigma / p, dim_a, dim_b);
    }
};

struct RestartOutcome {
    double value = -1.0;
    std::vector<Matrix> isometries;
    bool converged = false;
    int iterations = 0;
};

RestartOutcome run_restart(const Localizer& loc, const LeConfig& cfg, int counts_per_party_override, Rng rng) {
    const std::size_t n = loc.z_dims.size();
    std::vector<Matrix> iso(n);
    std::vector<double> step(n, cfg.initial_step);
    for (std::size_t i = 0; i < n; ++i) {
        const int d = loc.z_dims[i];
        const int k = counts_per_party_override > 0 ? counts_per_party_override : d * d;
        iso[i] = random_isometry(k * cfg.outcome_rank, d, rng);
    }
    double value = loc.evaluate(iso, cfg.outcome_rank);

    RestartOutcome out;
    int it = 0;
    for (; it < cfg.max_iters; ++it) {
        bool all_small = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (step[i] < cfg.min_step) continue;
            all_small = false;
            const Matrix& w = iso[i];
            const Matrix noise = complex_gaussian(static_cast<int>(w.rows()), static_cast<int>(w.cols()), rng);
            Matrix saved = w;
            iso[i] = polar_isometry(w + (step[i] / std::sqrt(static_cast<double>(w.rows()))) * noise);
            const double candidate = loc.evaluate(iso, cfg.outcome_rank);
            if (candidate > value + cfg.tol / 10.0) {
                value = candidate;
                step[i] = std::min(1.0, step[i] * 1.5);
            } else {
                iso[i] = std::move(saved);
                step[i] *= 0.85;
            }
        }
        if (all_small) {
            out.converged = true;
            break;
        }
    }
    out.value = value;
    out.isometries = std::move(iso);
    out.iterations = it;
    return out;
}

}  // namespace

LEResult optimize_le(const DensityOperator& rho, const RootMeasure& measure, const LeConfig& cfg) {
    require_localizable(rho.dims());
    if (cfg.restarts < 1) throw ValueError("LE optimizer needs at least one restart");
    if (cfg.outcome_rank < 1) throw ValueError("outcome rank must be >= 1");

    const DimSpec& dims = rho.dims();
    auto order = ab_order(dims);
    const auto z = dims.z_labels();
    order.insert(order.end(), z.begin(), z.end());

    Localizer loc;
    loc.measure = &measure;
    loc.rho = permute(rho, order).matrix();
    loc.dim_a = dims.dim_of(dims.labels_with_role(Role::A));
    loc.dim_b = dims.dim_of(dims.labels_with_role(Role::B));
    loc.dim_z = dims.dim_of(z);
    for (const auto& l : z) {
        const int d = dims[dims.index_of(l)].dim;
        loc.z_dims.push_back(d);
        const int k = cfg.outcomes > 0 ? cfg.outcomes : d * d;
        if (k * cfg.outcome_rank < d) throw DimensionError("too few POVM outcomes for party '" + l + "'");
    }
    if (auto v = pure_part(loc.rho)) loc.amplitudes = reshape_rows(*v, loc.dim_a * loc.dim_b, loc.dim_z);

    std::vector<RestartOutcome> runs(cfg.restarts);
    parallel_for(cfg.restarts, cfg.threads, [&](int r) {
        runs[r] = run_restart(loc, cfg, cfg.outcomes, Rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r))));
    });

    int best = 0;
    for (int r = 1; r < cfg.restarts; ++r)
        if (runs[r].value > runs[best].value) best = r;

    // Express the winning isometries as a product POVM and re-evaluate it on the reference path.
    std::vector<LocalPovm> local;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const Matrix& w = runs[best].isometries[i];
        LocalPovm lp{z[i], {}};
        for (Eigen::Index k = 0; k < w.rows() / cfg.outcome_rank; ++k) {
            const Matrix block = w.middleRows(k * cfg.outcome_rank, cfg.outcome_rank);
            Matrix q = block.adjoint() * block;
            lp.elements.push_back(0.5 * (q + q.adjoint()));
        }
        local.push_back(std::move(lp));
    }
    LEResult result = average_root_entanglement(rho, ProductPovm::from_local(local), measure);
    result.seed = cfg.seed;
    result.restarts = cfg.restarts;
    result.best_restart = best;
    result.converged = runs[best].converged;
    for (const auto& run : runs) {
        result.iterations += run.iterations;
        result.restart_values.push_back(run.value);
    }
    return result;
}

// ------------------------------------------------------------------ grid oracle

Matrix bloch_projector(double theta, double phi) {
    Vector n(2);
    n << std::cos(theta / 2.0), std::exp(cplx(0.0, phi)) * std::sin(theta / 2.0);
    return n * n.adjoint();
}

GridOracleResult grid_oracle_le(const DensityOperator& rho, const RootMeasure& measure, int resolution) {
    require_localizable(rho.dims());
    const auto z = rho.dims().z_labels();
    if (z.size() != 1 || rho.dims()[rho.dims().index_of(z.front())].dim != 2)
        throw DimensionError("grid oracle needs exactly one qubit Z party");
    if (resolution < 1) throw ValueError("grid resolution must be >= 1");

    const auto order = ab_order(rho.dims());
    GridOracleResult best{-1.0, 0.0, 0.0};
    for (int i = 0; i <= resolution; ++i) {
        const double theta = std::numbers::pi * i / resolution;
        for (int j = 0; j < resolution; ++j) {
            const double phi = 2.0 * std::numbers::pi * j / resolution;
            const Matrix q0 = bloch_projector(theta, phi);
            const Matrix q1 = Matrix::Identity(2, 2) - q0;
            double value = 0.0;
            for (const Matrix* q : {&q0, &q1}) {
                const Branch b = conditional_state(rho, *q);
                if (b.state) value += b.probability * measure(permute(*b.state, order));
            }
            if (value > best.value) best = {value, theta, phi};
        }
    }
    return best;
}

}  // namespace entloc
