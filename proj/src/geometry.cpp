#include "pinncontact/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "pinncontact/error.hpp"

namespace pinncontact {

namespace {

double radical_inverse(std::uint64_t index, unsigned base) {
    double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (index > 0) {
        r += f * static_cast<double>(index % base);
        index /= base;
        f *= inv;
    }
    return r;
}

/// Rows x columns with rows/columns close to `aspect`, rows*columns >= n.
std::pair<std::size_t, std::size_t> grid_shape(std::size_t n, double aspect) {
    auto rows = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(n) * aspect)));
    rows = std::clamp<std::size_t>(rows, 1, n);
    const std::size_t cols = (n + rows - 1) / rows;
    return {rows, cols};
}

void require_positive(std::size_t n, const char* what) {
    if (n == 0) {
        throw ConfigurationError(std::string("sampling count must be positive: ") + what);
    }
}

const char* const kChannelNames[kOutputCount] = {"ux", "uy", "uz", "sxx", "syy", "szz", "sxy", "syz", "sxz"};

} // namespace

std::string to_string(PointRole role) {
    switch (role) {
    case PointRole::interior:
        return "interior";
    case PointRole::dirichlet:
        return "dirichlet";
    case PointRole::neumann_soft:
        return "neumann_soft";
    case PointRole::contact:
        return "contact";
    case PointRole::data:
        return "data";
    case PointRole::evaluation:
        return "evaluation";
    }
    return "unknown";
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v;
    if (n == 0) {
        return v;
    }
    if (n == 1) {
        return {a};
    }
    v.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        v.push_back(k + 1 == n ? b : a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
    }
    return v;
}

ShiftedHalton::ShiftedHalton(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& s : shift_) {
        s = unit(rng);
    }
}

Vec3 ShiftedHalton::next() {
    constexpr unsigned bases[3] = {2, 3, 5};
    Vec3 u;
    for (std::size_t k = 0; k < 3; ++k) {
        double v = radical_inverse(index_, bases[k]) + shift_[k];
        u[k] = v >= 1.0 ? v - 1.0 : v;
    }
    ++index_;
    return u;
}

bool PatchDomain::contains(const Vec3& x, double tol) const {
    return x[0] >= -tol && x[0] <= l + tol && x[1] >= -tol && x[1] <= h + tol && x[2] >= -tol && x[2] <= w + tol;
}

bool HertzDomain::contains(const Vec3& x, double tol) const {
    return x[0] >= -tol && x[1] <= tol && x[2] >= -width - tol && x[2] <= tol &&
           std::sqrt(x[0] * x[0] + x[1] * x[1]) <= radius + tol;
}

bool HertzDomain::on_curved_surface(const Vec3& x, double tol) const {
    return contains(x, tol) && std::abs(std::sqrt(x[0] * x[0] + x[1] * x[1]) - radius) <= tol;
}

double HertzDomain::polar_angle(const Vec3& x) {
    return std::atan2(x[0], -x[1]);
}

double HertzDomain::contact_angle() const {
    return contact_angle_deg * std::numbers::pi / 180.0;
}

PointSets sample_patch(const PatchDomain& domain, const PatchCounts& counts, std::uint64_t seed) {
    require_positive(counts.interior, "interior");
    require_positive(counts.contact, "contact");
    require_positive(counts.evaluation_per_axis, "evaluation");
    PointSets sets;

    PointSet& interior = sets[PointRole::interior];
    interior.role = PointRole::interior;
    ShiftedHalton halton(seed);
    while (interior.size() < counts.interior) {
        const Vec3 u = halton.next();
        if (u[0] == 0.0 || u[1] == 0.0 || u[2] == 0.0) {
            continue;
        }
        interior.points.push_back({domain.l * u[0], domain.h * u[1], domain.w * u[2]});
    }

    PointSet& contact = sets[PointRole::contact];
    contact.role = PointRole::contact;
    const auto [nx, nz] = grid_shape(counts.contact, domain.l / domain.w);
    for (std::size_t i = 0; i < nx && contact.size() < counts.contact; ++i) {
        for (std::size_t k = 0; k < nz && contact.size() < counts.contact; ++k) {
            const double x = domain.l * (static_cast<double>(i) + 0.5) / static_cast<double>(nx);
            const double z = domain.w * (static_cast<double>(k) + 0.5) / static_cast<double>(nz);
            contact.points.push_back({x, 0.0, z});
            contact.normals.push_back({0.0, -1.0, 0.0});
        }
    }

    PointSet& eval = sets[PointRole::evaluation];
    eval.role = PointRole::evaluation;
    const auto xs = linspace(0.0, domain.l, counts.evaluation_per_axis);
    const auto ys = linspace(0.0, domain.h, counts.evaluation_per_axis);
    const auto zs = linspace(0.0, domain.w, counts.evaluation_per_axis);
    for (double x : xs) {
        for (double y : ys) {
            for (double z : zs) {
                eval.points.push_back({x, y, z});
            }
        }
    }
    return sets;
}

PointSets sample_hertz(const HertzDomain& domain, const HertzCounts& counts, std::uint64_t seed) {
    require_positive(counts.interior, "interior");
    require_positive(counts.curved, "curved");
    require_positive(counts.contact, "contact");
    require_positive(counts.evaluation, "evaluation");
    const double R = domain.radius;
    const double w = domain.width;
    const double alpha = domain.contact_angle();
    const double half_pi = std::numbers::pi / 2.0;
    PointSets sets;

    PointSet& interior = sets[PointRole::interior];
    interior.role = PointRole::interior;
    ShiftedHalton halton(seed);
    while (interior.size() < counts.interior) {
        const Vec3 u = halton.next();
        if (u[0] == 0.0 || u[1] == 0.0 || u[2] == 0.0) {
            continue;
        }
        // area-uniform map of the unit square onto the quarter disc
        const double r = R * std::sqrt(u[0]);
        const double phi = half_pi * u[1];
        interior.points.push_back({r * std::sin(phi), -r * std::cos(phi), -w * u[2]});
    }

    const auto surface = [&](PointSet& set, std::size_t n, double angle_lo, double angle_hi, bool include_lo,
                             double aspect) {
        const auto [na, nz] = grid_shape(n, aspect);
        for (std::size_t i = 0; i < na && set.size() < n; ++i) {
            double t;
            if (include_lo) {
                t = na == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(na - 1);
            } else {
                t = (static_cast<double>(i) + 0.5) / static_cast<double>(na);
            }
            const double theta = angle_lo + (angle_hi - angle_lo) * t;
            const double s = std::sin(theta);
            const double c = std::cos(theta);
            for (std::size_t k = 0; k < nz && set.size() < n; ++k) {
                const double z = -w * (static_cast<double>(k) + 0.5) / static_cast<double>(nz);
                set.points.push_back({R * s, -R * c, z});
                set.normals.push_back({s, -c, 0.0});
            }
        }
    };

    PointSet& curved = sets[PointRole::neumann_soft];
    curved.role = PointRole::neumann_soft;
    surface(curved, counts.curved, alpha, half_pi, false, 1.6);
    curved.tractions.assign(curved.size(), Vec3{0.0, 0.0, 0.0});

    PointSet& contact = sets[PointRole::contact];
    contact.role = PointRole::contact;
    surface(contact, counts.contact, 0.0, alpha, true, 1.25);

    PointSet& eval = sets[PointRole::evaluation];
    eval.role = PointRole::evaluation;
    for (double y : linspace(-R, counts.evaluation_y_end, counts.evaluation)) {
        eval.points.push_back({0.0, y, counts.evaluation_z});
    }
    return sets;
}

PointSet hertz_data_lines(const HertzDomain& domain, const oracles::HertzConstants& constants, double poisson,
                          std::size_t per_line, double y_end) {
    require_positive(per_line, "data line");
    PointSet data;
    data.role = PointRole::data;
    const double w = domain.width;
    for (double z : {-w, -0.5 * w, 0.0}) {
        for (double y : linspace(-domain.radius, y_end, per_line)) {
            const Vec3 x{0.0, y, z};
            const auto s = oracles::hertz_field_at(x, constants, poisson, domain.radius);
            std::array<double, kOutputCount> measured{};
            std::array<bool, kOutputCount> mask{};
            measured[kSxx] = s.sxx;
            measured[kSyy] = s.syy;
            measured[kSzz] = s.szz;
            mask[kSxx] = mask[kSyy] = mask[kSzz] = true;
            data.points.push_back(x);
            data.measured.push_back(measured);
            data.mask.push_back(mask);
        }
    }
    return data;
}

void write_point_set_csv(const PointSet& set, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << "x,y,z";
    const bool has_normals = set.normals.size() == set.size() && !set.empty();
    const bool has_tractions = set.tractions.size() == set.size() && !set.empty();
    const bool has_data = set.measured.size() == set.size() && set.mask.size() == set.size() && !set.empty();
    if (has_normals) {
        out << ",nx,ny,nz";
    }
    if (has_tractions) {
        out << ",tx,ty,tz";
    }
    if (has_data) {
        for (const char* name : kChannelNames) {
            out << ',' << name;
        }
    }
    out << '\n';
    for (std::size_t p = 0; p < set.size(); ++p) {
        const auto& x = set.points[p];
        out << fmt::format("{:.17g},{:.17g},{:.17g}", x[0], x[1], x[2]);
        if (has_normals) {
            const auto& n = set.normals[p];
            out << fmt::format(",{:.17g},{:.17g},{:.17g}", n[0], n[1], n[2]);
        }
        if (has_tractions) {
            const auto& t = set.tractions[p];
            out << fmt::format(",{:.17g},{:.17g},{:.17g}", t[0], t[1], t[2]);
        }
        if (has_data) {
            for (std::size_t c = 0; c < kOutputCount; ++c) {
                out << ',';
                if (set.mask[p][c]) {
                    out << fmt::format("{:.17g}", set.measured[p][c]);
                }
            }
        }
        out << '\n';
    }
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

} // namespace pinncontact
