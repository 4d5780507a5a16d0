#include "cutfem/fe_space.hpp"

#include "cutfem/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace cutfem {

ShapeGradients shape_gradients(const TetPoints& x) {
    Eigen::Matrix3d jac;
    jac.col(0) = x[1] - x[0];
    jac.col(1) = x[2] - x[0];
    jac.col(2) = x[3] - x[0];
    const double det = jac.determinant();
    const double scale = std::max({jac.col(0).norm(), jac.col(1).norm(), jac.col(2).norm()});
    if (!(std::abs(det) > 1e-14 * scale * scale * scale)) throw DegenerateError("shape_gradients: degenerate tet");
    const Eigen::Matrix3d inv = jac.inverse();
    ShapeGradients g;
    g.row(1) = inv.row(0);
    g.row(2) = inv.row(1);
    g.row(3) = inv.row(2);
    g.row(0) = -(g.row(1) + g.row(2) + g.row(3));
    return g;
}

std::array<double, 4> barycentric(const TetPoints& tet, const ShapeGradients& grads, const Vec3& x) {
    const Vec3 d = x - tet[0];
    std::array<double, 4> l{};
    l[1] = grads.row(1).dot(d);
    l[2] = grads.row(2).dot(d);
    l[3] = grads.row(3).dot(d);
    l[0] = 1.0 - l[1] - l[2] - l[3];
    return l;
}

DofMap build_dofmaps(const BackgroundMesh& mesh, const std::vector<ElementClass>& classes) {
    std::vector<char> in_bulk(mesh.num_vertices(), 0);
    std::vector<char> in_surf(mesh.num_vertices(), 0);
    for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
        if (classes[t] == ElementClass::Outside) continue;
        for (Index v : mesh.tets[t]) {
            in_bulk[v] = 1;
            if (classes[t] == ElementClass::Cut) in_surf[v] = 1;
        }
    }
    DofMap dofs;
    dofs.bulk.assign(mesh.num_vertices(), -1);
    dofs.surf.assign(mesh.num_vertices(), -1);
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
        if (in_bulk[v]) dofs.bulk[v] = dofs.num_bulk++;
        if (in_surf[v]) dofs.surf[v] = dofs.num_surf++;
    }
    if (dofs.num_bulk == 0 || dofs.num_surf == 0) throw GeometryError("build_dofmaps: empty element set");
    return dofs;
}

MeanConstraint mean_weights(const BackgroundMesh& mesh, const CutGeometry& geometry, const DofMap& dofs) {
    MeanConstraint mc;
    mc.weights = Eigen::VectorXd::Zero(dofs.num_surf);
    for (const SurfaceTriangle& tri : geometry.surface) {
        const TetPoints tet = mesh.tet_vertices(tri.tet);
        const ShapeGradients grads = shape_gradients(tet);
        const Tet& ids = mesh.tets[tri.tet];
        for (const auto& q : quadrature::tri_degree2()) {
            const auto lam = barycentric(tet, grads, quadrature::map_point<3>(tri.x, q.bary));
            for (int i = 0; i < 4; ++i) mc.weights[dofs.surf[ids[i]]] += q.weight * tri.area * lam[i];
        }
        mc.total += tri.area;
    }
    return mc;
}

}  // namespace cutfem
