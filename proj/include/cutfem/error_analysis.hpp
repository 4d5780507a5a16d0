#pragma once

#include "cutfem/cut_geometry.hpp"
#include "cutfem/fe_space.hpp"
#include "cutfem/level_set.hpp"
#include "cutfem/mesh.hpp"

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <span>

namespace cutfem {

struct FieldErrors {
    double l2 = 0.0;
    double h1 = 0.0;  // gradient (semi-norm) error
};

using ScalarFn = std::function<double(const Vec3&)>;
using VectorFn = std::function<Vec3(const Vec3&)>;

/// Mean of `f` over Gamma_h (degree-4 rule).
double surface_mean(const CutGeometry& geometry, const ScalarFn& f);

/// L2 and H1-seminorm errors over Omega_h of the bulk field.
FieldErrors bulk_errors(const BackgroundMesh& mesh, const CutGeometry& geometry, const DofMap& dofs,
                        const Eigen::VectorXd& u_B, const ScalarFn& exact, const VectorFn& exact_grad);

/// Errors over Gamma_h of the surface field. `exact` and `exact_surface_grad`
/// are evaluated at Gamma_h points and must already include the closest-point
/// extension. The exact trace is shifted to zero mean over Gamma_h first.
FieldErrors surface_errors(const BackgroundMesh& mesh, const CutGeometry& geometry, const DofMap& dofs,
                           const Eigen::VectorXd& u_S, const ScalarFn& exact, const VectorFn& exact_surface_grad);

struct GeometryReport {
    double max_distance = 0.0;   // max |rho| on Gamma_h
    double max_normal_dev = 0.0;  // max |n(p(x)) - n_h|
};

/// Maxima over the vertices and degree-4 quadrature points of every surface
/// triangle.
GeometryReport geometry_assumption_report(const CutGeometry& geometry, const ImplicitSurface& surface);

/// Observed order between two successive levels.
double eoc(double error_coarse, double error_fine, double h_coarse, double h_fine);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace cutfem
