#pragma once

#include <array>
#include <cstddef>

namespace pinncontact {

template <class T>
using Vec3T = std::array<T, 3>;

/// Row-major 3x3, m[i][j].
template <class T>
using Mat3T = std::array<std::array<T, 3>, 3>;

using Vec3 = Vec3T<double>;
using Mat3 = Mat3T<double>;

/// Number of network outputs: u_x, u_y, u_z, then the stress in Voigt order.
inline constexpr std::size_t kOutputCount = 9;
inline constexpr std::size_t kSpatialDim = 3;

/// Output channel indices.
enum Channel : std::size_t {
    kUx = 0,
    kUy = 1,
    kUz = 2,
    kSxx = 3,
    kSyy = 4,
    kSzz = 5,
    kSxy = 6,
    kSyz = 7,
    kSxz = 8,
};

inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

} // namespace pinncontact
