#include "cutfem/assembly.hpp"

#include "cutfem/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <ostream>

namespace cutfem {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix to_matrix(Index n, const Triplets& triplets) {
    SparseMatrix m(n, n);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

std::array<Index, 4> rows_of(const Tet& tet, const std::vector<Index>& map, Index offset) {
    std::array<Index, 4> rows{};
    for (int i = 0; i < 4; ++i) {
        const Index r = map[tet[i]];
        if (r < 0) throw std::logic_error("assembly: vertex without DOF in active element");
        rows[i] = offset + r;
    }
    return rows;
}

void add_local(Triplets& out, const std::array<Index, 4>& rows, const std::array<Index, 4>& cols,
               const Eigen::Matrix4d& local) {
    // Read only the upper triangle so that mirrored entries are bitwise equal.
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out.emplace_back(rows[i], cols[j], i <= j ? local(i, j) : local(j, i));
}

}  // namespace

SparseMatrix bulk_stiffness(const Discretization& d, const ModelCoefficients& c) {
    const Index n = d.dofs.size();
    Triplets trip;
    for (std::size_t t = 0; t < d.mesh.num_tets(); ++t) {
        const double vol = d.geometry.inside_volume[t];
        if (vol == 0.0) continue;
        const ShapeGradients g = shape_gradients(d.mesh.tet_vertices(static_cast<Index>(t)));
        const Eigen::Matrix4d local = c.b_B * c.k_B * vol * (g * g.transpose());
        const auto rows = rows_of(d.mesh.tets[t], d.dofs.bulk, 0);
        add_local(trip, rows, rows, local);
    }
    return to_matrix(n, trip);
}

SparseMatrix surface_stiffness(const Discretization& d, const ModelCoefficients& c) {
    const Index n = d.dofs.size();
    Triplets trip;
    for (const SurfaceTriangle& tri : d.geometry.surface) {
        if (std::abs(tri.normal.norm() - 1.0) > 1e-12) throw std::logic_error("surface_stiffness: non-unit normal");
        const ShapeGradients g = shape_gradients(d.mesh.tet_vertices(tri.tet));
        const Eigen::Matrix3d proj = Eigen::Matrix3d::Identity() - tri.normal * tri.normal.transpose();
        const Eigen::Matrix<double, 4, 3> pg = g * proj;
        const Eigen::Matrix4d local = c.b_S * c.k_S * tri.area * (pg * pg.transpose());
        const auto rows = rows_of(d.mesh.tets[tri.tet], d.dofs.surf, d.dofs.num_bulk);
        add_local(trip, rows, rows, local);
    }
    return to_matrix(n, trip);
}

SparseMatrix coupling_matrix(const Discretization& d, const ModelCoefficients& c) {
    const Index n = d.dofs.size();
    Triplets trip;
    for (const SurfaceTriangle& tri : d.geometry.surface) {
        const TetPoints tet = d.mesh.tet_vertices(tri.tet);
        const ShapeGradients g = shape_gradients(tet);
        Eigen::Matrix4d mass = Eigen::Matrix4d::Zero();
        for (const auto& q : quadrature::tri_degree2()) {
            const auto lam = barycentric(tet, g, quadrature::map_point<3>(tri.x, q.bary));
            const Eigen::Vector4d l(lam[0], lam[1], lam[2], lam[3]);
            mass += q.weight * tri.area * (l * l.transpose());
        }
        const auto rb = rows_of(d.mesh.tets[tri.tet], d.dofs.bulk, 0);
        const auto rs = rows_of(d.mesh.tets[tri.tet], d.dofs.surf, d.dofs.num_bulk);
        add_local(trip, rb, rb, c.b_B * c.b_B * mass);
        add_local(trip, rb, rs, -c.b_B * c.b_S * mass);
        add_local(trip, rs, rb, -c.b_B * c.b_S * mass);
        add_local(trip, rs, rs, c.b_S * c.b_S * mass);
    }
    return to_matrix(n, trip);
}

namespace {

void add_face_penalty(Triplets& trip, const BackgroundMesh& mesh, const StabilizedFace& f,
                      const std::vector<Index>& map, Index offset, double weight) {
    // Patch vertices: those of the owner, plus the neighbor's opposite vertex.
    std::array<Index, 5> verts{};
    std::array<double, 5> jump{};
    int count = 0;
    const auto slot = [&](Index v) {
        for (int k = 0; k < count; ++k)
            if (verts[k] == v) return k;
        verts[count] = v;
        jump[count] = 0.0;
        return count++;
    };
    const ShapeGradients go = shape_gradients(mesh.tet_vertices(f.owner));
    const ShapeGradients gn = shape_gradients(mesh.tet_vertices(f.neighbor));
    for (int i = 0; i < 4; ++i) jump[slot(mesh.tets[f.owner][i])] -= go.row(i).dot(f.normal);
    for (int i = 0; i < 4; ++i) jump[slot(mesh.tets[f.neighbor][i])] += gn.row(i).dot(f.normal);
    if (count != 5) throw TopologyError("ghost penalty: face neighbors do not share exactly one face");

    std::array<Index, 5> rows{};
    for (int k = 0; k < 5; ++k) {
        const Index r = map[verts[k]];
        if (r < 0) throw TopologyError("ghost penalty: face has a neighbor outside the active set");
        rows[k] = offset + r;
    }
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) trip.emplace_back(rows[i], rows[j], weight * f.area * (jump[i] * jump[j]));
}

}  // namespace

SparseMatrix ghost_penalty(const Discretization& d, const ModelCoefficients& c) {
    const Index n = d.dofs.size();
    const double h = d.mesh.h;
    Triplets trip;
    if (c.tau_B > 0.0)
        for (const StabilizedFace& f : d.faces.bulk) add_face_penalty(trip, d.mesh, f, d.dofs.bulk, 0, c.tau_B * h * h * h);
    if (c.tau_S > 0.0)
        for (const StabilizedFace& f : d.faces.surface)
            add_face_penalty(trip, d.mesh, f, d.dofs.surf, d.dofs.num_bulk, c.tau_S);
    return to_matrix(n, trip);
}

Eigen::VectorXd load_vector(const Discretization& d, const ModelCoefficients& c, const ScalarField& f_bulk,
                            const ScalarField& f_surface) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d.dofs.size());
    for (const SubTet& sub : d.geometry.inside) {
        const TetPoints tet = d.mesh.tet_vertices(sub.tet);
        const ShapeGradients g = shape_gradients(tet);
        const auto rows = rows_of(d.mesh.tets[sub.tet], d.dofs.bulk, 0);
        for (const auto& q : quadrature::tet_degree5()) {
            const Vec3 x = quadrature::map_point<4>(sub.x, q.bary);
            const double fw = c.b_B * q.weight * sub.volume * f_bulk(x);
            const auto lam = barycentric(tet, g, x);
            for (int i = 0; i < 4; ++i) rhs[rows[i]] += fw * lam[i];
        }
    }
    for (const SurfaceTriangle& tri : d.geometry.surface) {
        const TetPoints tet = d.mesh.tet_vertices(tri.tet);
        const ShapeGradients g = shape_gradients(tet);
        const auto rows = rows_of(d.mesh.tets[tri.tet], d.dofs.surf, d.dofs.num_bulk);
        for (const auto& q : quadrature::tri_degree4()) {
            const Vec3 x = quadrature::map_point<3>(tri.x, q.bary);
            const double fw = c.b_S * q.weight * tri.area * f_surface(x);
            const auto lam = barycentric(tet, g, x);
            for (int i = 0; i < 4; ++i) rhs[rows[i]] += fw * lam[i];
        }
    }
    if (!rhs.allFinite()) throw std::runtime_error("load_vector: non-finite entries");
    return rhs;
}

AssembledSystem assemble_system(const Discretization& d, const ModelCoefficients& c, const ScalarField& f_bulk,
                                const ScalarField& f_surface) {
    c.validate();
    AssembledSystem sys;
    sys.num_bulk = d.dofs.num_bulk;
    sys.num_surf = d.dofs.num_surf;
    sys.h = d.mesh.h;
    sys.coeffs = c;
    sys.A = bulk_stiffness(d, c) + surface_stiffness(d, c) + coupling_matrix(d, c) + ghost_penalty(d, c);
    sys.A.makeCompressed();
    sys.rhs = load_vector(d, c, f_bulk, f_surface);
    sys.mean = mean_weights(d.mesh, d.geometry, d.dofs);
    return sys;
}

Eigen::VectorXd kernel_vector(const AssembledSystem& system) {
    Eigen::VectorXd z(system.size());
    z.head(system.num_bulk).setConstant(system.coeffs.b_S);
    z.tail(system.num_surf).setConstant(system.coeffs.b_B);
    return z;
}

ScaledSystem apply_scaling(const AssembledSystem& system) {
    ScaledSystem s;
    s.scaling = Eigen::VectorXd::Ones(system.size());
    s.scaling.tail(system.num_surf).setConstant(std::sqrt(system.h));
    const auto D = s.scaling.asDiagonal();
    s.A = D * system.A * D;
    s.A.makeCompressed();
    s.rhs = s.scaling.cwiseProduct(system.rhs);
    return s;
}

void write_matrix_market(std::ostream& out, const SparseMatrix& A) {
    std::size_t nnz = 0;
    for (int k = 0; k < A.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(A, k); it; ++it)
            if (it.row() >= it.col()) ++nnz;
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << A.rows() << ' ' << A.cols() << ' ' << nnz << '\n';
    out.precision(17);
    for (int k = 0; k < A.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(A, k); it; ++it)
            if (it.row() >= it.col()) out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

}  // namespace cutfem
