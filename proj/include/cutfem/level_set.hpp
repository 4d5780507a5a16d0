#pragma once

#include "cutfem/common.hpp"
#include "cutfem/mesh.hpp"

#include <functional>
#include <variant>
#include <vector>

namespace cutfem {

struct Sphere {
    Vec3 center = Vec3::Zero();
    double radius = 1.0;
};

/// Half-space {x : normal.(x - point) < 0}; `normal` is normalized on
/// construction.
struct Plane {
    Vec3 point = Vec3::Zero();
    Vec3 normal = Vec3::UnitZ();
};

/// Smooth surface given implicitly by its signed distance. New kinds are
/// added as further variant alternatives.
class ImplicitSurface {
  public:
    using Kind = std::variant<Sphere, Plane>;

    explicit ImplicitSurface(Kind kind);
    static ImplicitSurface sphere(const Vec3& center, double radius);
    static ImplicitSurface plane(const Vec3& point, const Vec3& normal);

    [[nodiscard]] const Kind& kind() const { return kind_; }

    /// Negative inside, positive outside.
    [[nodiscard]] double signed_distance(const Vec3& x) const;

    /// Throws DegenerateError on the medial set (the sphere center).
    [[nodiscard]] Vec3 closest_point(const Vec3& x) const;

    /// Exterior unit normal at a point of the surface. Throws
    /// PreconditionError if x is farther than `tolerance` from the surface.
    [[nodiscard]] Vec3 exact_normal(const Vec3& x, double tolerance = 1e-10) const;

    /// Normal of the closest point, n(p(x)); the extension n^e.
    [[nodiscard]] Vec3 extended_normal(const Vec3& x) const;

    /// Total curvature (sum of principal curvatures) at a surface point.
    [[nodiscard]] double total_curvature(const Vec3& x) const;

  private:
    Kind kind_;
};

/// v^e(x) = v(p(x)). Throws DegenerateError where p is not unique.
double extend_surface_function(const ImplicitSurface& surface, const std::function<double(const Vec3&)>& f,
                               const Vec3& x);

/// Per-vertex values of the P1 level set; negative inside.
struct NodalLevelSet {
    std::vector<double> values;
};

/// Samples the exact signed distance at every mesh vertex. Throws
/// GeometryError if all values share one sign.
NodalLevelSet sample_nodal(const ImplicitSurface& surface, const BackgroundMesh& mesh);

}  // namespace cutfem
