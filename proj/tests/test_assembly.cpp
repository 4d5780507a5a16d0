#include "support.hpp"

#include "cutfem/assembly.hpp"
#include "cutfem/manufactured.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <sstream>

using namespace cutfem;

namespace {

double form(const SparseMatrix& A, const Eigen::VectorXd& v) { return v.dot(A * v); }

double constant(const Vec3&) { return 1.0; }
double zero(const Vec3&) { return 0.0; }

/// Single reference tet, cut or whole depending on `geometry`.
struct OneTet {
    BackgroundMesh mesh = test::make_mesh({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)}, {{0, 1, 2, 3}});
    DofMap dofs = build_dofmaps(mesh, {ElementClass::Cut});
    StabilizedFaceSets faces;
};

}  // namespace

TEST_CASE("bulk stiffness element properties") {
    OneTet t;
    CutGeometry whole;
    whole.classes = {ElementClass::Inside};
    whole.inside_volume = {1.0 / 6.0};
    const SparseMatrix full = bulk_stiffness({t.mesh, whole, t.faces, t.dofs}, {});
    const Eigen::MatrixXd F = Eigen::MatrixXd(full).topLeftCorner(4, 4);
    CHECK(F.rowwise().sum().cwiseAbs().maxCoeff() < 1e-15);
    CHECK(F(1, 1) == doctest::Approx(1.0 / 6.0));

    const auto cut = build_cut_geometry(t.mesh, NodalLevelSet{{-0.5, 0.5, 0.5, 0.5}});
    const double alpha = cut.inside_volume[0] * 6.0;
    CHECK(alpha == doctest::Approx(1.0 / 8.0));
    const Eigen::MatrixXd C = Eigen::MatrixXd(bulk_stiffness({t.mesh, cut, t.faces, t.dofs}, {})).topLeftCorner(4, 4);
    CHECK((C - alpha * F).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("bulk stiffness of an affine function measures the domain") {
    test::SphereCase s(0.375);
    ModelCoefficients c;
    c.k_B = 2.5;
    c.b_B = 1.5;
    const SparseMatrix A = bulk_stiffness(s.disc(), c);
    const auto v = s.interpolate([](const Vec3& x) { return x.x(); }, zero);
    CHECK(form(A, v) == doctest::Approx(c.b_B * c.k_B * measure(s.geometry).volume).epsilon(1e-12));
}

TEST_CASE("surface stiffness on a planar interface") {
    const auto mesh = build_box_mesh(Vec3::Zero(), Vec3::Ones(), 0.5);
    const auto g = build_cut_geometry(mesh, sample_nodal(ImplicitSurface::plane(Vec3(0, 0, 0.3), Vec3::UnitZ()), mesh));
    const auto faces = build_face_sets(mesh, g.classes);
    const auto dofs = build_dofmaps(mesh, g.classes);
    const Discretization d{mesh, g, faces, dofs};
    ModelCoefficients c;
    c.k_S = 2.0;
    c.b_S = 3.0;
    const SparseMatrix A = surface_stiffness(d, c);
    CHECK(measure(g).area == doctest::Approx(1.0).epsilon(1e-13));

    Eigen::VectorXd vx = Eigen::VectorXd::Zero(dofs.size());
    Eigen::VectorXd vz = vx;
    for (std::size_t i = 0; i < mesh.num_vertices(); ++i)
        if (dofs.surf[i] >= 0) {
            vx[dofs.surf_row(static_cast<Index>(i))] = mesh.vertices[i].x();
            vz[dofs.surf_row(static_cast<Index>(i))] = mesh.vertices[i].z();
        }
    CHECK(form(A, vx) == doctest::Approx(c.b_S * c.k_S).epsilon(1e-13));
    CHECK(std::abs(form(A, vz)) < 1e-13);
}

TEST_CASE("surface stiffness of a linear function on the sphere") {
    // integral over the unit sphere of |P e_x|^2 = 1 - n_x^2 is 8 pi / 3.
    const double exact = 8.0 * std::numbers::pi / 3.0;
    std::vector<double> err;
    for (double h : {0.375, 0.1875, 0.09375}) {
        test::SphereCase s(h);
        const auto v = s.interpolate(zero, [](const Vec3& x) { return x.x(); });
        err.push_back(std::abs(form(surface_stiffness(s.disc(), {}), v) - exact));
    }
    CHECK(err[2] < 0.02 * exact);
    CHECK(std::log2(err[0] / err[1]) > 1.5);
    CHECK(std::log2(err[1] / err[2]) > 1.5);
}

TEST_CASE("coupling matrix") {
    test::SphereCase s(0.375);
    SUBCASE("kernel constants give zero") {
        ModelCoefficients c;
        c.b_B = 2.0;
        c.b_S = 3.0;
        const auto z = s.interpolate([](const Vec3&) { return 3.0; }, [](const Vec3&) { return 2.0; });
        CHECK(std::abs(form(coupling_matrix(s.disc(), c), z)) < 1e-12);
    }
    SUBCASE("bulk one measures the surface") {
        const auto v = s.interpolate(constant, zero);
        CHECK(form(coupling_matrix(s.disc(), {}), v) == doctest::Approx(measure(s.geometry).area).epsilon(1e-13));
    }
}

TEST_CASE("coupling form of the manufactured pair converges to the exact integral") {
    const ManufacturedProblem p(Sphere{}, ModelCoefficients{});
    const double exact = test::sphere_integral(Vec3::Zero(), 1.0, [&](const Vec3& x) {
        const double d = p.u_bulk(x) - p.u_surface(x);
        return d * d;
    });
    std::vector<double> err;
    for (double h : {0.375, 0.1875, 0.09375}) {
        test::SphereCase s(h);
        const auto v = s.interpolate([&](const Vec3& x) { return p.u_bulk(x); },
                                     [&](const Vec3& x) { return p.u_surface(x); });
        err.push_back(std::abs(form(coupling_matrix(s.disc(), {}), v) - exact));
    }
    CHECK(err[2] < 0.02 * exact);
    CHECK(std::log2(err[0] / err[2]) / 2.0 > 1.5);
}

TEST_CASE("ghost penalty on two tets") {
    const auto mesh = test::two_tet_mesh();
    const std::vector<ElementClass> classes{ElementClass::Cut, ElementClass::Cut};
    const auto faces = build_face_sets(mesh, classes);
    const auto dofs = build_dofmaps(mesh, classes);
    const CutGeometry g;
    ModelCoefficients c;
    c.tau_B = 0.5;
    c.tau_S = 0.25;
    const Eigen::MatrixXd J = ghost_penalty({mesh, g, faces, dofs}, c);
    // Off-face vertices 0 and 4: normal derivative of their hats jumps by sqrt(3)
    // across the face of area sqrt(3)/2.
    const double area = std::sqrt(3.0) / 2.0;
    CHECK(J(0, 0) == doctest::Approx(c.tau_B * area * 3.0));
    CHECK(J(4, 4) == doctest::Approx(c.tau_B * area * 3.0));
    CHECK(J(0, 4) == doctest::Approx(c.tau_B * area * 3.0));
    CHECK(J(5, 5) == doctest::Approx(c.tau_S * area * 3.0));
    CHECK(J(0, 5) == 0.0);
    CHECK((J - J.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ghost penalty is consistent and positive semidefinite") {
    test::SphereCase s(0.375);
    const SparseMatrix J = ghost_penalty(s.disc(), {});
    const auto affine = [](const Vec3& x) { return 0.3 + 1.1 * x.x() - 0.7 * x.y() + 2.0 * x.z(); };
    const auto v = s.interpolate(affine, affine);
    CHECK(std::abs(form(J, v)) < 1e-12 * v.squaredNorm());

    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    for (int k = 0; k < 20; ++k) {
        Eigen::VectorXd r(s.dofs.size());
        for (auto& x : r) x = n(rng);
        CHECK(form(J, r) >= -1e-14 * r.squaredNorm());
    }
}

TEST_CASE("load vector") {
    test::SphereCase s(0.375);
    const auto m = measure(s.geometry);
    SUBCASE("unit data integrates to the measures") {
        const auto b = load_vector(s.disc(), {}, constant, constant);
        CHECK(b.head(s.dofs.num_bulk).sum() == doctest::Approx(m.volume).epsilon(1e-13));
        CHECK(b.tail(s.dofs.num_surf).sum() == doctest::Approx(m.area).epsilon(1e-13));
    }
    SUBCASE("manufactured bulk source against Monte Carlo") {
        const ManufacturedProblem p(Sphere{}, ModelCoefficients{});
        const auto fb = [&](const Vec3& x) { return p.f_bulk(x); };
        const double quad = load_vector(s.disc(), {}, fb, zero).head(s.dofs.num_bulk).sum();

        // Stratified sampling: uniform points in every active tet, kept
        // where the P1 level set is negative.
        std::mt19937_64 rng(17);
        std::exponential_distribution<double> e(1.0);
        const int per_tet = 400;
        double mc = 0.0;
        for (std::size_t t = 0; t < s.mesh.num_tets(); ++t) {
            if (s.geometry.classes[t] == ElementClass::Outside) continue;
            const auto x = s.mesh.tet_vertices(static_cast<Index>(t));
            double acc = 0.0;
            for (int k = 0; k < per_tet; ++k) {
                std::array<double, 4> w{e(rng), e(rng), e(rng), e(rng)};
                const double sw = w[0] + w[1] + w[2] + w[3];
                Vec3 pt = Vec3::Zero();
                double phi = 0.0;
                for (int i = 0; i < 4; ++i) {
                    pt += w[i] / sw * x[i];
                    phi += w[i] / sw * s.geometry.phi[s.mesh.tets[t][i]];
                }
                if (phi < 0.0) acc += fb(pt);
            }
            mc += s.mesh.tet_volume(static_cast<Index>(t)) * acc / per_tet;
        }
        CHECK(std::abs(quad - mc) < 5e-3 * std::abs(quad));
    }
}

TEST_CASE("assembled system invariants") {
    ModelCoefficients c;
    c.k_B = 1.5;
    c.k_S = 0.5;
    c.b_B = 2.0;
    c.b_S = 3.0;
    for (double h : {0.75, 0.375}) {
        test::SphereCase s(h);
        const auto sys = assemble_system(s.disc(), c, constant, constant);
        const SparseMatrix At = sys.A.transpose();
        CHECK(Eigen::MatrixXd(sys.A - At).cwiseAbs().maxCoeff() == 0.0);

        const Eigen::VectorXd z = kernel_vector(sys);
        CHECK(z.head(sys.num_bulk).cwiseEqual(c.b_S).all());
        CHECK(z.tail(sys.num_surf).cwiseEqual(c.b_B).all());
        const double normA = Eigen::MatrixXd(sys.A).norm();
        CHECK((sys.A * z).norm() <= 1e-10 * normA * z.norm());

        if (h == 0.75) {
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(sys.A), Eigen::EigenvaluesOnly);
            const auto& ev = es.eigenvalues();
            CHECK(std::abs(ev[0]) < 1e-12 * ev[ev.size() - 1]);
            CHECK(ev[1] > 1e-8 * ev[ev.size() - 1]);
        }
    }
}

TEST_CASE("diagonal scaling") {
    test::SphereCase s(0.375);
    auto sys = assemble_system(s.disc(), {}, constant, constant);
    const auto sc = apply_scaling(sys);
    CHECK(Eigen::MatrixXd(sc.A - SparseMatrix(sc.A.transpose())).cwiseAbs().maxCoeff() == 0.0);
    CHECK(sc.scaling.head(sys.num_bulk).cwiseEqual(1.0).all());
    CHECK((sc.scaling.tail(sys.num_surf).array() - std::sqrt(0.375)).abs().maxCoeff() < 1e-15);

    std::mt19937_64 rng(8);
    std::normal_distribution<double> n;
    for (int k = 0; k < 10; ++k) {
        Eigen::VectorXd v(sys.size());
        for (auto& x : v) x = n(rng);
        Eigen::VectorXd u = v;
        u.tail(sys.num_surf) *= std::sqrt(0.375);
        const double lhs = form(sc.A, v);
        CHECK(std::abs(lhs - form(sys.A, u)) <= 1e-13 * std::abs(lhs));
    }
    Eigen::VectorXd zt = kernel_vector(sys).cwiseQuotient(sc.scaling);
    CHECK((sc.A * zt).norm() <= 1e-10 * Eigen::MatrixXd(sc.A).norm() * zt.norm());

    sys.h = 1.0;
    const auto unit = apply_scaling(sys);
    CHECK(Eigen::MatrixXd(unit.A - sys.A).cwiseAbs().maxCoeff() == 0.0);
    CHECK((unit.rhs - sys.rhs).norm() == 0.0);
}

TEST_CASE("Matrix Market export") {
    SparseMatrix A(3, 3);
    std::vector<Eigen::Triplet<double>> t{{0, 0, 2.0}, {1, 0, -1.0}, {0, 1, -1.0}, {1, 1, 2.0}, {2, 2, 0.5}};
    A.setFromTriplets(t.begin(), t.end());
    std::ostringstream os;
    write_matrix_market(os, A);
    CHECK(os.str() == "%%MatrixMarket matrix coordinate real symmetric\n3 3 4\n1 1 2\n2 1 -1\n2 2 2\n3 3 0.5\n");
}
