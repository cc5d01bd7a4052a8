#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pinncontact/oracles.hpp"
#include "pinncontact/types.hpp"

namespace pinncontact {

enum class PointRole { interior, dirichlet, neumann_soft, contact, data, evaluation };

std::string to_string(PointRole role);

/// Labeled collocation points with optional per-point attachments.
struct PointSet {
    PointRole role = PointRole::interior;
    std::vector<Vec3> points;
    /// Outward unit normals (boundary roles).
    std::vector<Vec3> normals;
    /// Prescribed traction (neumann_soft).
    std::vector<Vec3> tractions;
    /// Measured outputs in channel order with the measured-component mask
    /// (data). Dirichlet sets use the same slots for prescribed displacements.
    std::vector<std::array<double, kOutputCount>> measured;
    std::vector<std::array<bool, kOutputCount>> mask;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

using PointSets = std::map<PointRole, PointSet>;

/// Unit cube [0,l]x[0,h]x[0,w] resting on the plane y = 0, pressed by p on y = h.
struct PatchDomain {
    double l = 1.0;
    double h = 1.0;
    double w = 1.0;
    double p = 0.1;

    bool contains(const Vec3& x, double tol = 1e-12) const;
};

/// Quarter cylinder {x >= 0, y <= 0, x² + y² <= R², -w <= z <= 0} on the
/// rigid plane y = -R; the contact sector spans polar angles up to α,
/// measured from the downward vertical.
struct HertzDomain {
    double radius = 1.0;
    double width = 1.0;
    double p = 0.5;
    double contact_angle_deg = 15.0;

    bool contains(const Vec3& x, double tol = 1e-12) const;
    bool on_curved_surface(const Vec3& x, double tol = 1e-12) const;
    /// atan2(x, -y): 0 at the lowest line of the cylinder.
    static double polar_angle(const Vec3& x);
    double contact_angle() const;
};

struct PatchCounts {
    std::size_t interior = 2000;
    std::size_t contact = 400;
    std::size_t evaluation_per_axis = 21;
};

struct HertzCounts {
    std::size_t interior = 5000;
    std::size_t curved = 1000;
    std::size_t contact = 500;
    std::size_t evaluation = 200;
    /// Evaluation line (x = 0, z = evaluation_z) spans y in [-R, evaluation_y_end].
    double evaluation_z = -0.75;
    double evaluation_y_end = -0.7642;
};

/// Interior points (shifted Halton), contact grid on y = 0 and the 21³
/// evaluation lattice.
PointSets sample_patch(const PatchDomain& domain, const PatchCounts& counts, std::uint64_t seed);

/// Interior points, traction-free curved surface outside the contact sector,
/// contact sector grid and the evaluation line.
PointSets sample_hertz(const HertzDomain& domain, const HertzCounts& counts, std::uint64_t seed);

/// Three lines x = 0 at z in {-w, -w/2, 0}, y from -R to y_end, carrying the
/// analytical σ_xx, σ_yy, σ_zz as measurements.
PointSet hertz_data_lines(const HertzDomain& domain, const oracles::HertzConstants& constants, double poisson,
                          std::size_t per_line = 50, double y_end = -0.7642);

/// Low-discrepancy point in [0,1)^3: radical inverses in bases 2, 3, 5 with a
/// Cranley-Patterson shift.
class ShiftedHalton {
public:
    explicit ShiftedHalton(std::uint64_t seed);
    Vec3 next();

private:
    std::uint64_t index_ = 1;
    Vec3 shift_{};
};

/// Columns x,y,z then role-specific attachments.
void write_point_set_csv(const PointSet& set, const std::filesystem::path& path);

/// n values from a to b inclusive (n >= 2), or {a} for n == 1.
std::vector<double> linspace(double a, double b, std::size_t n);

} // namespace pinncontact
