#pragma once

// Test-only helpers: hand-built meshes and oracles that do not go through
// the library's own quadrature or assembly paths.

#include "cutfem/assembly.hpp"
#include "cutfem/cut_geometry.hpp"
#include "cutfem/fe_space.hpp"
#include "cutfem/mesh.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

namespace cutfem::test {

inline BackgroundMesh make_mesh(std::vector<Vec3> vertices, std::vector<Tet> tets, double h = 1.0) {
    BackgroundMesh m;
    m.vertices = std::move(vertices);
    m.tets = std::move(tets);
    m.h = h;
    FaceTable ft = face_table(m.tets);
    m.faces = std::move(ft.faces);
    m.tet_faces = std::move(ft.tet_faces);
    return m;
}

inline TetPoints reference_tet() {
    return {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
}

/// Reference tet plus its mirror image through the face x + y + z = 1.
inline BackgroundMesh two_tet_mesh() {
    return make_mesh({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1), Vec3(1, 1, 1) * (2.0 / 3.0)},
                     {{0, 1, 2, 3}, {1, 2, 4, 3}});
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (z * p1 - p0) / (z * z - 1.0);
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

/// Integral over the exact sphere with Gauss-Legendre in cos(theta) and the
/// trapezoidal rule in phi (spectrally accurate for smooth integrands).
inline double sphere_integral(const Vec3& center, double radius, const std::function<double(const Vec3&)>& f,
                              int n = 48) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    const int nphi = 2 * n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double ct = x[i];
        const double st = std::sqrt(1.0 - ct * ct);
        for (int j = 0; j < nphi; ++j) {
            const double phi = 2.0 * std::numbers::pi * j / nphi;
            const Vec3 p = center + radius * Vec3(st * std::cos(phi), st * std::sin(phi), ct);
            sum += w[i] * (2.0 * std::numbers::pi / nphi) * f(p);
        }
    }
    return sum * radius * radius;
}

/// Uniform random point on the unit sphere.
inline Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    Vec3 v(n(rng), n(rng), n(rng));
    return v.normalized();
}

/// Second-order central-difference Laplacian.
inline double fd_laplacian(const std::function<double(const Vec3&)>& f, const Vec3& x, double step) {
    double s = -6.0 * f(x);
    for (int d = 0; d < 3; ++d) {
        Vec3 e = Vec3::Zero();
        e[d] = step;
        s += f(x + e) + f(x - e);
    }
    return s / (step * step);
}

inline Vec3 fd_gradient(const std::function<double(const Vec3&)>& f, const Vec3& x, double step) {
    Vec3 g;
    for (int d = 0; d < 3; ++d) {
        Vec3 e = Vec3::Zero();
        e[d] = step;
        g[d] = (f(x + e) - f(x - e)) / (2.0 * step);
    }
    return g;
}


/// Mesh, cut geometry, face sets and DOF maps for a sphere in the standard
/// box [-1.5, 1.5]^3.
struct SphereCase {
    BackgroundMesh mesh;
    CutGeometry geometry;
    StabilizedFaceSets faces;
    DofMap dofs;

    explicit SphereCase(double h, const Vec3& center = Vec3::Zero(), double radius = 1.0)
        : mesh(build_box_mesh(Vec3::Constant(-1.5), Vec3::Constant(3.0), h)),
          geometry(build_cut_geometry(mesh, sample_nodal(ImplicitSurface::sphere(center, radius), mesh))),
          faces(build_face_sets(mesh, geometry.classes)),
          dofs(build_dofmaps(mesh, geometry.classes)) {}

    [[nodiscard]] Discretization disc() const { return {mesh, geometry, faces, dofs}; }

    /// Nodal interpolants stacked as [bulk | surface].
    [[nodiscard]] Eigen::VectorXd interpolate(const std::function<double(const Vec3&)>& fb,
                                              const std::function<double(const Vec3&)>& fs) const {
        Eigen::VectorXd v(dofs.size());
        for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
            if (dofs.bulk[i] >= 0) v[dofs.bulk[i]] = fb(mesh.vertices[i]);
            if (dofs.surf[i] >= 0) v[dofs.surf_row(static_cast<Index>(i))] = fs(mesh.vertices[i]);
        }
        return v;
    }
};

}  // namespace cutfem::test
