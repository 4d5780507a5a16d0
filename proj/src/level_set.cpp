#include "cutfem/level_set.hpp"

#include <cmath>
#include <stdexcept>

namespace cutfem {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

ImplicitSurface::ImplicitSurface(Kind kind) : kind_(std::move(kind)) {
    std::visit(Overloaded{[](const Sphere& s) {
                              if (!(s.radius > 0.0)) throw std::invalid_argument("sphere radius must be positive");
                          },
                          [](Plane& p) {
                              const double n = p.normal.norm();
                              if (!(n > 0.0)) throw std::invalid_argument("plane normal must be nonzero");
                              p.normal /= n;
                          }},
               kind_);
}

ImplicitSurface ImplicitSurface::sphere(const Vec3& center, double radius) {
    return ImplicitSurface(Sphere{center, radius});
}

ImplicitSurface ImplicitSurface::plane(const Vec3& point, const Vec3& normal) {
    return ImplicitSurface(Plane{point, normal});
}

double ImplicitSurface::signed_distance(const Vec3& x) const {
    return std::visit(Overloaded{[&](const Sphere& s) { return (x - s.center).norm() - s.radius; },
                                 [&](const Plane& p) { return p.normal.dot(x - p.point); }},
                      kind_);
}

Vec3 ImplicitSurface::closest_point(const Vec3& x) const {
    return std::visit(Overloaded{[&](const Sphere& s) -> Vec3 {
                          const Vec3 d = x - s.center;
                          const double r = d.norm();
                          if (r <= 1e-14 * s.radius) throw DegenerateError("closest point undefined at sphere center");
                          return s.center + (s.radius / r) * d;
                      },
                                 [&](const Plane& p) -> Vec3 { return x - p.normal.dot(x - p.point) * p.normal; }},
                      kind_);
}

Vec3 ImplicitSurface::exact_normal(const Vec3& x, double tolerance) const {
    if (std::abs(signed_distance(x)) > tolerance) throw PreconditionError("exact_normal: point is not on the surface");
    return extended_normal(x);
}

Vec3 ImplicitSurface::extended_normal(const Vec3& x) const {
    return std::visit(Overloaded{[&](const Sphere& s) -> Vec3 {
                          const Vec3 d = x - s.center;
                          const double r = d.norm();
                          if (r <= 1e-14 * s.radius) throw DegenerateError("normal undefined at sphere center");
                          return d / r;
                      },
                                 [](const Plane& p) -> Vec3 { return p.normal; }},
                      kind_);
}

double ImplicitSurface::total_curvature(const Vec3&) const {
    return std::visit(Overloaded{[](const Sphere& s) { return 2.0 / s.radius; }, [](const Plane&) { return 0.0; }},
                      kind_);
}

double extend_surface_function(const ImplicitSurface& surface, const std::function<double(const Vec3&)>& f,
                               const Vec3& x) {
    return f(surface.closest_point(x));
}

NodalLevelSet sample_nodal(const ImplicitSurface& surface, const BackgroundMesh& mesh) {
    NodalLevelSet ls;
    ls.values.reserve(mesh.num_vertices());
    bool any_neg = false;
    bool any_pos = false;
    for (const Vec3& x : mesh.vertices) {
        const double v = surface.signed_distance(x);
        if (!std::isfinite(v)) throw GeometryError("non-finite level-set value");
        any_neg = any_neg || v < 0.0;
        any_pos = any_pos || v > 0.0;
        ls.values.push_back(v);
    }
    if (!any_neg || !any_pos) throw GeometryError("level set does not change sign on the mesh; surface is empty");
    return ls;
}

}  // namespace cutfem
