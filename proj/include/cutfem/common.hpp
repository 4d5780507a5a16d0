#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>

namespace cutfem {

using Vec3 = Eigen::Vector3d;
using Index = int;

/// Marker for a face with a single adjacent tetrahedron.
inline constexpr Index kBoundary = -1;

// Error taxonomy. Every pipeline stage throws one of these on a violated
// input invariant; nothing is allowed to propagate NaNs silently.

class GeometryError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class TopologyError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DegenerateError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class SingularSystemError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class PreconditionError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Signed volume of the tetrahedron (a, b, c, d); positive for a
/// right-handed ordering.
inline double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

inline double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * (b - a).cross(c - a).norm();
}

}  // namespace cutfem
