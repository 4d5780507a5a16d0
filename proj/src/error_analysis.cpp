#include "cutfem/error_analysis.hpp"

#include "cutfem/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace cutfem {

FieldErrors bulk_errors(const BackgroundMesh& mesh, const CutGeometry& geometry, const DofMap& dofs,
                        const Eigen::VectorXd& u_B, const ScalarFn& exact, const VectorFn& exact_grad) {
    double l2 = 0.0;
    double h1 = 0.0;
    for (const SubTet& sub : geometry.inside) {
        const TetPoints tet = mesh.tet_vertices(sub.tet);
        const ShapeGradients g = shape_gradients(tet);
        std::array<double, 4> coef{};
        Vec3 grad_h = Vec3::Zero();
        for (int i = 0; i < 4; ++i) {
            coef[i] = u_B[dofs.bulk[mesh.tets[sub.tet][i]]];
            grad_h += coef[i] * g.row(i).transpose();
        }
        for (const auto& q : quadrature::tet_degree5()) {
            const Vec3 x = quadrature::map_point<4>(sub.x, q.bary);
            const auto lam = barycentric(tet, g, x);
            double uh = 0.0;
            for (int i = 0; i < 4; ++i) uh += coef[i] * lam[i];
            const double w = q.weight * sub.volume;
            l2 += w * std::pow(exact(x) - uh, 2);
            h1 += w * (exact_grad(x) - grad_h).squaredNorm();
        }
    }
    return {std::sqrt(l2), std::sqrt(h1)};
}

double surface_mean(const CutGeometry& geometry, const ScalarFn& f) {
    double integral = 0.0;
    double area = 0.0;
    for (const SurfaceTriangle& tri : geometry.surface) {
        for (const auto& q : quadrature::tri_degree4())
            integral += q.weight * tri.area * f(quadrature::map_point<3>(tri.x, q.bary));
        area += tri.area;
    }
    if (!(area > 0.0)) throw GeometryError("surface_mean: empty surface");
    return integral / area;
}

FieldErrors surface_errors(const BackgroundMesh& mesh, const CutGeometry& geometry, const DofMap& dofs,
                           const Eigen::VectorXd& u_S, const ScalarFn& exact, const VectorFn& exact_surface_grad) {
    const double mean = surface_mean(geometry, exact);

    double l2 = 0.0;
    double h1 = 0.0;
    for (const SurfaceTriangle& tri : geometry.surface) {
        const TetPoints tet = mesh.tet_vertices(tri.tet);
        const ShapeGradients g = shape_gradients(tet);
        const Eigen::Matrix3d proj = Eigen::Matrix3d::Identity() - tri.normal * tri.normal.transpose();
        std::array<double, 4> coef{};
        Vec3 grad_h = Vec3::Zero();
        for (int i = 0; i < 4; ++i) {
            coef[i] = u_S[dofs.surf[mesh.tets[tri.tet][i]]];
            grad_h += coef[i] * g.row(i).transpose();
        }
        const Vec3 tgrad_h = proj * grad_h;
        for (const auto& q : quadrature::tri_degree4()) {
            const Vec3 x = quadrature::map_point<3>(tri.x, q.bary);
            const auto lam = barycentric(tet, g, x);
            double uh = 0.0;
            for (int i = 0; i < 4; ++i) uh += coef[i] * lam[i];
            const double w = q.weight * tri.area;
            l2 += w * std::pow(exact(x) - mean - uh, 2);
            h1 += w * (proj * exact_surface_grad(x) - tgrad_h).squaredNorm();
        }
    }
    return {std::sqrt(l2), std::sqrt(h1)};
}

GeometryReport geometry_assumption_report(const CutGeometry& geometry, const ImplicitSurface& surface) {
    GeometryReport r;
    const auto visit = [&](const Vec3& x, const Vec3& nh) {
        r.max_distance = std::max(r.max_distance, std::abs(surface.signed_distance(x)));
        r.max_normal_dev = std::max(r.max_normal_dev, (surface.extended_normal(x) - nh).norm());
    };
    for (const SurfaceTriangle& tri : geometry.surface) {
        for (const Vec3& x : tri.x) visit(x, tri.normal);
        for (const auto& q : quadrature::tri_degree4()) visit(quadrature::map_point<3>(tri.x, q.bary), tri.normal);
    }
    return r;
}

double eoc(double error_coarse, double error_fine, double h_coarse, double h_fine) {
    return std::log(error_coarse / error_fine) / std::log(h_coarse / h_fine);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 paired samples");
    const auto n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace cutfem
