#pragma once

#include "cutfem/common.hpp"
#include "cutfem/level_set.hpp"
#include "cutfem/model.hpp"

#include <Eigen/Core>

namespace cutfem {

/// Exact solution of the coupled problem on a sphere.
///
/// In coordinates y = x - c relative to the sphere center,
///
///   u_B = exp(g),  g = -y1 (y1 - 1) - y2 (y2 - 1)
///   u_S = (b_B u_B + k_B n.grad u_B) / b_S   on Gamma
///
/// so the Robin exchange condition holds identically. On the unit sphere at
/// the origin with unit coefficients this is
/// u_S = (1 + x (1 - 2x) + y (1 - 2y)) exp(g).
///
/// Surface quantities are evaluated at the closest point p(x), i.e. they are
/// extended constantly along normals.
class ManufacturedProblem {
  public:
    ManufacturedProblem(const Sphere& sphere, const ModelCoefficients& coeffs);

    [[nodiscard]] const ImplicitSurface& surface() const { return surface_; }
    [[nodiscard]] const ModelCoefficients& coefficients() const { return coeffs_; }

    [[nodiscard]] double u_bulk(const Vec3& x) const;
    [[nodiscard]] Vec3 grad_u_bulk(const Vec3& x) const;
    [[nodiscard]] double f_bulk(const Vec3& x) const;

    [[nodiscard]] double u_surface(const Vec3& x) const;
    [[nodiscard]] Vec3 surface_grad_u_surface(const Vec3& x) const;
    /// Laplace-Beltrami of u_S at p(x).
    [[nodiscard]] double surface_laplacian_u_surface(const Vec3& x) const;
    [[nodiscard]] double f_surface(const Vec3& x) const;

    /// -k_B n.grad u_B - (b_B u_B - b_S u_S) at p(x); zero for the exact pair.
    [[nodiscard]] double compatibility_residual(const Vec3& x) const;

    /// Smooth ambient function whose trace on Gamma is u_S (not constant
    /// along normals).
    [[nodiscard]] double u_surface_ambient(const Vec3& x) const;
    [[nodiscard]] Vec3 grad_u_surface_ambient(const Vec3& x) const;
    [[nodiscard]] Eigen::Matrix3d hess_u_surface_ambient(const Vec3& x) const;

  private:
    Sphere sphere_;
    ImplicitSurface surface_;
    ModelCoefficients coeffs_;
};

}  // namespace cutfem
