#pragma once

#include <array>
#include <memory>
#include <string>
#include <utility>

#include "pinncontact/architecture.hpp"
#include "pinncontact/autodiff/objective.hpp"
#include "pinncontact/contact.hpp"
#include "pinncontact/elasticity.hpp"
#include "pinncontact/geometry.hpp"
#include "pinncontact/network.hpp"

namespace pinncontact {

/// Per-residual weights; all default to 1.
struct LossWeights {
    std::array<double, 3> momentum{1.0, 1.0, 1.0};
    std::array<double, 6> coupling{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    std::array<double, 3> dirichlet{1.0, 1.0, 1.0};
    std::array<double, 3> neumann{1.0, 1.0, 1.0};
    std::array<double, kOutputCount> data{1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    double fs_xi = 1.0;
    double fs_eta = 1.0;
    double kkt = 1.0;

    /// Throws ConfigurationError on a negative or non-finite weight.
    void validate() const;
};

enum LossPart : std::size_t {
    kPdeMomentum = 0,
    kPdeCoupling,
    kDirichlet,
    kNeumann,
    kData,
    kSliding,
    kKkt,
    kLossPartCount,
};

const std::array<std::string, kLossPartCount>& loss_part_names();

struct LossBreakdown {
    double pde_momentum = 0.0;
    double pde_coupling = 0.0;
    double dirichlet = 0.0;
    double neumann = 0.0;
    double data = 0.0;
    double sliding = 0.0;
    double kkt = 0.0;
    double total = 0.0;

    static LossBreakdown from_parts(std::span<const double> parts);
    std::array<double, kLossPartCount> parts() const;
};

/// Everything the objective depends on besides θ.
struct ContactProblem {
    Architecture arch;
    MaterialParams material{1.0, 0.0};
    OutputTransform transform;
    RigidPlane plane;
    Vec3 body_force{0.0, 0.0, 0.0};
    LossWeights weights;
    /// Sets used: interior, dirichlet, neumann_soft, contact, data. Missing
    /// roles contribute zero.
    PointSets points;
    /// Plain-vanilla runs switch the data term off.
    bool use_data = true;
};

/// Builds the mean-square objective L = L_pde + L_dbc + L_nbc + L_data + L_fs + L_kkt.
autodiff::Objective build_objective(const ContactProblem& problem);

struct LossEvaluation {
    LossBreakdown breakdown;
    Eigen::VectorXd gradient;
};

LossEvaluation evaluate_loss(const autodiff::Objective& objective, const Architecture& arch,
                             const ParameterVector& params, bool with_gradient = true);

/// (momentum part, coupling part) over interior points.
std::pair<double, double> pde_loss(const ParameterVector& params, const Architecture& arch, const PointSet& interior,
                                   const MaterialParams& material, const OutputTransform& transform,
                                   const LossWeights& weights, const Vec3& body_force = {0.0, 0.0, 0.0});

/// Weighted mean square over the masked components of each data point.
double data_loss(const ParameterVector& params, const Architecture& arch, const PointSet& data,
                 const OutputTransform& transform, const LossWeights& weights);

/// (sliding, kkt) over contact points.
std::pair<double, double> contact_losses(const ParameterVector& params, const Architecture& arch,
                                         const PointSet& contact, const OutputTransform& transform,
                                         const RigidPlane& plane, const LossWeights& weights);

LossBreakdown total_loss(const ParameterVector& params, const ContactProblem& problem);

} // namespace pinncontact
