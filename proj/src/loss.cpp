#include "pinncontact/loss.hpp"

#include <cmath>

#include "pinncontact/error.hpp"

namespace pinncontact {

using autodiff::PointVars;
using autodiff::ResidualBlock;
using autodiff::Tape;
using autodiff::Var;

void LossWeights::validate() const {
    const auto check = [](double w) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw ConfigurationError("loss weights must be finite and non-negative");
        }
    };
    for (double w : momentum) check(w);
    for (double w : coupling) check(w);
    for (double w : dirichlet) check(w);
    for (double w : neumann) check(w);
    for (double w : data) check(w);
    check(fs_xi);
    check(fs_eta);
    check(kkt);
}

const std::array<std::string, kLossPartCount>& loss_part_names() {
    static const std::array<std::string, kLossPartCount> names = {
        "pde_momentum", "pde_coupling", "dirichlet", "neumann", "data", "sliding", "kkt"};
    return names;
}

LossBreakdown LossBreakdown::from_parts(std::span<const double> parts) {
    if (parts.size() != kLossPartCount) {
        throw ConfigurationError("loss breakdown needs one value per part");
    }
    LossBreakdown b;
    b.pde_momentum = parts[kPdeMomentum];
    b.pde_coupling = parts[kPdeCoupling];
    b.dirichlet = parts[kDirichlet];
    b.neumann = parts[kNeumann];
    b.data = parts[kData];
    b.sliding = parts[kSliding];
    b.kkt = parts[kKkt];
    b.total = 0.0;
    for (double p : parts) {
        b.total += p;
    }
    return b;
}

std::array<double, kLossPartCount> LossBreakdown::parts() const {
    return {pde_momentum, pde_coupling, dirichlet, neumann, data, sliding, kkt};
}

namespace {

TransformedOutputs<Var> transformed(const OutputTransform& transform, const PointVars& in) {
    return apply_transform<Var>(transform, in.x, in.value, in.d_dx);
}

ResidualBlock interior_block(const PointSet& interior, const MaterialParams& material,
                             const OutputTransform& transform, const LossWeights& weights, const Vec3& body_force) {
    ResidualBlock block;
    block.name = "interior";
    block.points = interior.points;
    block.residual_count = 9;
    block.part_of_residual = {kPdeMomentum, kPdeMomentum, kPdeMomentum, kPdeCoupling, kPdeCoupling,
                              kPdeCoupling, kPdeCoupling, kPdeCoupling, kPdeCoupling};
    std::array<double, 9> w{};
    std::copy(weights.momentum.begin(), weights.momentum.end(), w.begin());
    std::copy(weights.coupling.begin(), weights.coupling.end(), w.begin() + 3);
    block.set_uniform_scale(w);
    block.residuals = [transform, material, body_force](Tape&, const PointVars& in, std::span<Var> out) {
        const auto t = transformed(transform, in);
        const auto field = t.field();
        const auto momentum = momentum_residual<Var>(divergence_of_stress<Var>(t.stress_jacobian()), body_force);
        const auto coupling = stress_coupling_residual<Var>(field.sigma, t.displacement_gradient(), material);
        for (std::size_t i = 0; i < 3; ++i) {
            out[i] = momentum[i];
        }
        for (std::size_t i = 0; i < 6; ++i) {
            out[3 + i] = coupling[i];
        }
    };
    return block;
}

/// Scale weight_c / count_c for every point measuring channel c.
std::vector<double> masked_scale(const PointSet& set, std::span<const double> channel_weights,
                                 std::size_t first_channel, const char* what) {
    const std::size_t n = set.size();
    const std::size_t rc = channel_weights.size();
    if (set.mask.size() != n || set.measured.size() != n) {
        throw ConfigurationError(std::string(what) + " points need measured values and a mask");
    }
    std::vector<std::size_t> counts(rc, 0);
    for (std::size_t p = 0; p < n; ++p) {
        bool any = false;
        for (std::size_t c = 0; c < rc; ++c) {
            if (set.mask[p][first_channel + c]) {
                ++counts[c];
                any = true;
            }
        }
        if (!any) {
            throw ConfigurationError(std::string(what) + " point with an empty measurement mask");
        }
    }
    std::vector<double> scale(n * rc, 0.0);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t c = 0; c < rc; ++c) {
            if (set.mask[p][first_channel + c]) {
                scale[p * rc + c] = channel_weights[c] / static_cast<double>(counts[c]);
            }
        }
    }
    return scale;
}

ResidualBlock measured_block(const PointSet& set, const OutputTransform& transform,
                             std::span<const double> channel_weights, std::size_t first_channel, LossPart part,
                             const char* name) {
    ResidualBlock block;
    block.name = name;
    block.points = set.points;
    block.residual_count = channel_weights.size();
    block.part_of_residual.assign(block.residual_count, part);
    block.scale = masked_scale(set, channel_weights, first_channel, name);
    auto measured = std::make_shared<std::vector<std::array<double, kOutputCount>>>(set.measured);
    const std::size_t rc = block.residual_count;
    block.residuals = [transform, measured, first_channel, rc](Tape&, const PointVars& in, std::span<Var> out) {
        const auto t = transformed(transform, in);
        const auto& target = (*measured)[in.index];
        for (std::size_t c = 0; c < rc; ++c) {
            out[c] = t.value[first_channel + c] - target[first_channel + c];
        }
    };
    return block;
}

ResidualBlock neumann_block(const PointSet& set, const OutputTransform& transform, const LossWeights& weights) {
    if (set.normals.size() != set.size() || set.tractions.size() != set.size()) {
        throw ConfigurationError("Neumann points need normals and prescribed tractions");
    }
    ResidualBlock block;
    block.name = "neumann";
    block.points = set.points;
    block.residual_count = 3;
    block.part_of_residual = {kNeumann, kNeumann, kNeumann};
    block.set_uniform_scale(weights.neumann);
    auto normals = std::make_shared<std::vector<Vec3>>(set.normals);
    auto tractions = std::make_shared<std::vector<Vec3>>(set.tractions);
    block.residuals = [transform, normals, tractions](Tape&, const PointVars& in, std::span<Var> out) {
        const auto sigma = transformed(transform, in).field().sigma;
        const Vec3& n = (*normals)[in.index];
        const Vec3& t = (*tractions)[in.index];
        for (std::size_t i = 0; i < 3; ++i) {
            out[i] = sigma.at(i, 0) * n[0] + sigma.at(i, 1) * n[1] + sigma.at(i, 2) * n[2] - t[i];
        }
    };
    return block;
}

ResidualBlock contact_block(const PointSet& set, const OutputTransform& transform, const RigidPlane& plane,
                            const LossWeights& weights) {
    plane.validate();
    ResidualBlock block;
    block.name = "contact";
    block.points = set.points;
    block.residual_count = 3;
    block.part_of_residual = {kSliding, kSliding, kKkt};
    const std::array<double, 3> w{weights.fs_xi, weights.fs_eta, weights.kkt};
    block.set_uniform_scale(w);
    block.residuals = [transform, plane](Tape&, const PointVars& in, std::span<Var> out) {
        const auto field = transformed(transform, in).field();
        const Var g = gap<Var>(in.x, field.u, plane);
        const auto tr = traction_decomposition<Var>(field.sigma, plane);
        const auto sliding = sliding_residuals<Var>(tr.tangent_xi, tr.tangent_eta);
        out[0] = sliding[0];
        out[1] = sliding[1];
        out[2] = kkt_residual<Var>(g, tr.pressure);
    };
    return block;
}

const PointSet* find(const PointSets& sets, PointRole role) {
    auto it = sets.find(role);
    if (it == sets.end() || it->second.empty()) {
        return nullptr;
    }
    return &it->second;
}

autodiff::Objective single_block_objective(ResidualBlock block) {
    autodiff::Objective obj;
    obj.part_names.assign(loss_part_names().begin(), loss_part_names().end());
    obj.blocks.push_back(std::move(block));
    return obj;
}

} // namespace

autodiff::Objective build_objective(const ContactProblem& problem) {
    problem.weights.validate();
    autodiff::Objective obj;
    obj.part_names.assign(loss_part_names().begin(), loss_part_names().end());
    const auto& sets = problem.points;
    const PointSet* interior = find(sets, PointRole::interior);
    if (interior == nullptr) {
        throw ConfigurationError("the objective needs interior collocation points");
    }
    obj.blocks.push_back(
        interior_block(*interior, problem.material, problem.transform, problem.weights, problem.body_force));
    if (const PointSet* d = find(sets, PointRole::dirichlet)) {
        obj.blocks.push_back(measured_block(*d, problem.transform, problem.weights.dirichlet, 0, kDirichlet, "dirichlet"));
    }
    if (const PointSet* nb = find(sets, PointRole::neumann_soft)) {
        obj.blocks.push_back(neumann_block(*nb, problem.transform, problem.weights));
    }
    if (const PointSet* c = find(sets, PointRole::contact)) {
        obj.blocks.push_back(contact_block(*c, problem.transform, problem.plane, problem.weights));
    }
    if (problem.use_data) {
        if (const PointSet* d = find(sets, PointRole::data)) {
            obj.blocks.push_back(measured_block(*d, problem.transform, problem.weights.data, 0, kData, "data"));
        }
    }
    return obj;
}

LossEvaluation evaluate_loss(const autodiff::Objective& objective, const Architecture& arch,
                             const ParameterVector& params, bool with_gradient) {
    autodiff::EvaluationOptions options;
    options.with_gradient = with_gradient;
    auto value = autodiff::evaluate_objective(arch, params, objective, options);
    LossEvaluation out;
    out.breakdown = LossBreakdown::from_parts(value.parts);
    out.gradient = std::move(value.gradient);
    return out;
}

std::pair<double, double> pde_loss(const ParameterVector& params, const Architecture& arch, const PointSet& interior,
                                   const MaterialParams& material, const OutputTransform& transform,
                                   const LossWeights& weights, const Vec3& body_force) {
    if (interior.empty()) {
        throw ConfigurationError("pde_loss: empty interior point set");
    }
    weights.validate();
    const auto obj = single_block_objective(interior_block(interior, material, transform, weights, body_force));
    const auto b = evaluate_loss(obj, arch, params, false).breakdown;
    return {b.pde_momentum, b.pde_coupling};
}

double data_loss(const ParameterVector& params, const Architecture& arch, const PointSet& data,
                 const OutputTransform& transform, const LossWeights& weights) {
    weights.validate();
    if (data.empty()) {
        return 0.0;
    }
    const auto obj = single_block_objective(measured_block(data, transform, weights.data, 0, kData, "data"));
    return evaluate_loss(obj, arch, params, false).breakdown.data;
}

std::pair<double, double> contact_losses(const ParameterVector& params, const Architecture& arch,
                                         const PointSet& contact, const OutputTransform& transform,
                                         const RigidPlane& plane, const LossWeights& weights) {
    weights.validate();
    if (contact.empty()) {
        return {0.0, 0.0};
    }
    const auto obj = single_block_objective(contact_block(contact, transform, plane, weights));
    const auto b = evaluate_loss(obj, arch, params, false).breakdown;
    return {b.sliding, b.kkt};
}

LossBreakdown total_loss(const ParameterVector& params, const ContactProblem& problem) {
    return evaluate_loss(build_objective(problem), problem.arch, params, false).breakdown;
}

} // namespace pinncontact
