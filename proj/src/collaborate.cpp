#include "entloc/collaborate.hpp"

#include <algorithm>

namespace entloc {

ProtocolTree ProtocolTree::terminal(Instrument instrument) {
    const auto n = static_cast<std::size_t>(instrument.outcomes());
    return node(std::move(instrument), std::vector<ProtocolTree>(n));
}

ProtocolTree ProtocolTree::node(Instrument instrument, std::vector<ProtocolTree> children) {
    ProtocolTree t;
    if (children.size() != instrument.kraus.size())
        throw ValueError("protocol node needs one child per instrument outcome");
    t.instrument = std::move(instrument);
    t.children = std::move(children);
    return t;
}

int ProtocolTree::depth() const {
    if (is_leaf()) return 0;
    int d = 0;
    for (const auto& c : children) d = std::max(d, c.depth());
    return d + 1;
}

void ProtocolTree::validate(const DimSpec& dims) const {
    if (is_leaf()) {
        if (!children.empty()) throw ValueError("protocol leaf must not have children");
        return;
    }
    instrument->validate(dims);
    if (children.size() != instrument->kraus.size())
        throw ValueError("protocol node needs one child per instrument outcome");
    for (const auto& c : children) c.validate(dims);
}

namespace {

/// Unnormalized E_j(rho) for every outcome j.
std::vector<Matrix> outcome_images(const Matrix& rho, const DimSpec& dims, const Instrument& instrument) {
    std::vector<Matrix> out;
    for (const auto& outcome : instrument.kraus) {
        Matrix image = Matrix::Zero(rho.rows(), rho.cols());
        for (const auto& m : outcome) {
            const Matrix e = embed(dims, instrument.party, m);
            image += e * rho * e.adjoint();
        }
        out.push_back(0.5 * (image + image.adjoint()));
    }
    return out;
}

struct Walker {
    const DimSpec& dims;
    const RootMeasure& measure;
    std::vector<std::string> y_order;
    ProtocolResult result;

    void visit(const Matrix& rho, double probability, const ProtocolTree& node, std::vector<int>& path) {
        if (node.is_leaf()) {
            const auto y = dims.y_labels();
            const DensityOperator full = DensityOperator::unchecked(rho / probability, dims);
            LeafRecord leaf;
            leaf.path = path;
            leaf.probability = probability;
            leaf.state = permute(partial_trace(full, y), y_order);
            leaf.value = measure(leaf.state);
            result.average += probability * leaf.value;
            result.leaves.push_back(std::move(leaf));
            return;
        }
        const auto images = outcome_images(rho, dims, *node.instrument);
        for (std::size_t j = 0; j < images.size(); ++j) {
            const double p = images[j].trace().real();
            if (p < kNullBranch) {
                result.dropped_probability += std::max(0.0, p);
                continue;
            }
            path.push_back(static_cast<int>(j));
            visit(images[j], p, node.children[j], path);
            path.pop_back();
        }
    }
};

}  // namespace

ProtocolResult evaluate_protocol(const DensityOperator& rho, const ProtocolTree& protocol, const RootMeasure& measure) {
    const DimSpec& dims = rho.dims();
    dims.require_ab();
    protocol.validate(dims);

    auto y_order = dims.labels_with_role(Role::A);
    const auto b = dims.labels_with_role(Role::B);
    y_order.insert(y_order.end(), b.begin(), b.end());

    Walker walker{dims, measure, y_order, {}};
    std::vector<int> path;
    const double trace = rho.trace();
    walker.visit(rho.matrix(), trace, protocol, path);
    return walker.result;
}

std::vector<Branch> apply_instrument(const DensityOperator& rho, const Instrument& instrument) {
    instrument.validate(rho.dims());
    std::vector<Branch> out;
    for (auto& image : outcome_images(rho.matrix(), rho.dims(), instrument)) {
        Branch b;
        b.probability = image.trace().real();
        if (b.probability >= kNullBranch) b.state = DensityOperator::unchecked(image / b.probability, rho.dims());
        out.push_back(std::move(b));
    }
    return out;
}

GapReport monotonicity_gap(const DensityOperator& rho, const Instrument& instrument, const RootMeasure& measure,
                           const ProductPovm& povm, const LeConfig& config) {
    const Role role = rho.dims()[rho.dims().index_of(instrument.party)].role;
    if (role == Role::Z) throw ValueError("monotonicity instrument must act on an A- or B-role party");

    GapReport report;
    report.f_values = f_factors(instrument);
    const auto branches = apply_instrument(rho, instrument);

    report.fixed_rhs = average_root_entanglement(rho, povm, measure).value;
    report.optimized_rhs = optimize_le(rho, measure, config).value;
    for (const auto& b : branches) {
        report.outcome_probabilities.push_back(b.probability);
        if (!b.state) continue;
        report.fixed_lhs += b.probability * average_root_entanglement(*b.state, povm, measure).value;
        report.optimized_lhs += b.probability * optimize_le(*b.state, measure, config).value;
    }
    report.fixed_gap = report.fixed_lhs - report.fixed_rhs;
    report.optimized_gap = report.optimized_lhs - report.optimized_rhs;
    return report;
}

Instrument computational_measurement(const std::string& party, int dim) {
    Instrument inst{party, {}};
    for (int k = 0; k < dim; ++k) {
        Matrix p = Matrix::Zero(dim, dim);
        p(k, k) = 1.0;
        inst.kraus.push_back({p});
    }
    return inst;
}

ProtocolTree paper_eoc_protocol(const LockedStateSpec& spec) {
    spec.validate();
    std::vector<ProtocolTree> charlie;
    for (int x = 0; x < 2; ++x) {
        Instrument measure_y{"C", {}};
        for (int y = 0; y < 2; ++y) {
            const Vector e = basis_vector(2, y);
            measure_y.kraus.push_back({e * e.adjoint() * spec.v[x].adjoint()});
        }
        charlie.push_back(ProtocolTree::terminal(std::move(measure_y)));
    }
    return ProtocolTree::node(computational_measurement("a", 2), std::move(charlie));
}

}  // namespace entloc
