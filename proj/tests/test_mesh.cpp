#include "support.hpp"

#include "cutfem/mesh.hpp"
#include "cutfem/quadrature.hpp"

#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

using namespace cutfem;

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double circumradius(const TetPoints& x) {
    // Center c solves 2 (x_i - x_0).c = |x_i|^2 - |x_0|^2.
    Eigen::Matrix3d M;
    Eigen::Vector3d b;
    for (int i = 1; i < 4; ++i) {
        M.row(i - 1) = 2.0 * (x[i] - x[0]).transpose();
        b[i - 1] = x[i].squaredNorm() - x[0].squaredNorm();
    }
    const Vec3 c = M.fullPivLu().solve(b);
    return (c - x[0]).norm();
}

double inradius(const TetPoints& x) {
    const double vol = std::abs(signed_volume(x[0], x[1], x[2], x[3]));
    const double area = triangle_area(x[1], x[2], x[3]) + triangle_area(x[0], x[2], x[3]) +
                        triangle_area(x[0], x[1], x[3]) + triangle_area(x[0], x[1], x[2]);
    return 3.0 * vol / area;
}

}  // namespace

TEST_CASE("tet quadrature integrates monomials up to degree 5 exactly") {
    // Reference tet: int x^a y^b z^c = a! b! c! / (a+b+c+3)!
    const TetPoints ref = test::reference_tet();
    for (int a = 0; a <= 5; ++a)
        for (int b = 0; a + b <= 5; ++b)
            for (int c = 0; a + b + c <= 5; ++c) {
                double q = 0.0;
                for (const auto& p : quadrature::tet_degree5()) {
                    const Vec3 x = quadrature::map_point<4>(ref, p.bary);
                    q += p.weight / 6.0 * std::pow(x.x(), a) * std::pow(x.y(), b) * std::pow(x.z(), c);
                }
                const double exact = factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
                CHECK(q == doctest::Approx(exact).epsilon(1e-13));
            }
}

TEST_CASE("triangle quadratures integrate monomials exactly up to their degree") {
    const Triangle ref = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
    const auto check_rule = [&](std::span<const quadrature::TriPoint> rule, int degree, double tol) {
        double wsum = 0.0;
        for (const auto& p : rule) wsum += p.weight;
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
        for (int a = 0; a <= degree; ++a)
            for (int b = 0; a + b <= degree; ++b) {
                double q = 0.0;
                for (const auto& p : rule) {
                    const Vec3 x = quadrature::map_point<3>(ref, p.bary);
                    q += p.weight * 0.5 * std::pow(x.x(), a) * std::pow(x.y(), b);
                }
                const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
                CHECK(q == doctest::Approx(exact).epsilon(tol));
            }
    };
    check_rule(quadrature::tri_degree2(), 2, 1e-14);
    check_rule(quadrature::tri_degree4(), 4, 1e-13);
}

TEST_CASE("build_box_mesh vertex and tet counts") {
    SUBCASE("unit cube") {
        const auto m = build_box_mesh(Vec3::Zero(), Vec3::Ones(), 1.0);
        CHECK(m.num_vertices() == 8);
        CHECK(m.num_tets() == 6);
        double vol = 0.0;
        for (std::size_t t = 0; t < m.num_tets(); ++t) vol += m.tet_volume(static_cast<Index>(t));
        CHECK(vol == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("two cubes") {
        const auto m = build_box_mesh(Vec3::Zero(), Vec3(2, 1, 1), 1.0);
        CHECK(m.num_vertices() == 12);
        CHECK(m.num_tets() == 12);
    }
    SUBCASE("sphere box at h = 0.375") {
        const auto m = build_box_mesh(Vec3::Constant(-1.5), Vec3::Constant(3.0), 0.375);
        CHECK(m.num_vertices() == 9 * 9 * 9);
        CHECK(m.num_tets() == 6 * 8 * 8 * 8);
    }
    SUBCASE("non-multiple extent keeps spacing below h") {
        const auto m = build_box_mesh(Vec3::Zero(), Vec3(1.0, 0.7, 0.3), 0.25);
        for (std::size_t t = 0; t < m.num_tets(); ++t)
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j) {
                    const Vec3 e = m.vertices[m.tets[t][i]] - m.vertices[m.tets[t][j]];
                    CHECK(e.cwiseAbs().maxCoeff() <= 0.25 + 1e-15);
                }
    }
}

TEST_CASE("build_box_mesh rejects invalid input") {
    CHECK_THROWS_AS(build_box_mesh(Vec3::Zero(), Vec3::Ones(), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_box_mesh(Vec3::Zero(), Vec3::Ones(), -1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_box_mesh(Vec3::Zero(), Vec3(1, 0, 1), 0.5), std::invalid_argument);
}

TEST_CASE("box mesh invariants") {
    const double h = 0.5;
    const auto m = build_box_mesh(Vec3(-1.0, -0.5, 0.0), Vec3(2.0, 1.5, 1.0), h);

    double vol = 0.0;
    double max_edge = 0.0;
    double min_edge = 1e300;
    std::set<long long> shape_ratios;
    for (std::size_t t = 0; t < m.num_tets(); ++t) {
        const double v = m.tet_volume(static_cast<Index>(t));
        REQUIRE(v > 0.0);
        vol += v;
        const auto x = m.tet_vertices(static_cast<Index>(t));
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                const double e = (x[i] - x[j]).norm();
                max_edge = std::max(max_edge, e);
                min_edge = std::min(min_edge, e);
            }
        shape_ratios.insert(std::llround(1e9 * circumradius(x) / inradius(x)));
    }
    CHECK(vol == doctest::Approx(2.0 * 1.5 * 1.0).epsilon(1e-12));
    CHECK(max_edge <= std::sqrt(3.0) * h + 1e-14);
    CHECK(max_edge / min_edge <= std::sqrt(3.0) + 1e-12);
    // Kuhn tets are all congruent.
    CHECK(shape_ratios.size() == 1);

    // Face adjacency round-trips.
    for (std::size_t t = 0; t < m.num_tets(); ++t)
        for (int i = 0; i < 4; ++i) {
            const Index f = m.tet_faces[t][i];
            REQUIRE(f >= 0);
            const Index other = m.across(f, static_cast<Index>(t));
            if (other != kBoundary) CHECK(m.across(f, other) == static_cast<Index>(t));
        }
    // Every interior face appears in exactly two tets.
    std::map<Index, int> uses;
    for (const auto& tf : m.tet_faces)
        for (Index f : tf) ++uses[f];
    for (std::size_t f = 0; f < m.faces.size(); ++f) CHECK(uses[static_cast<Index>(f)] == (m.faces[f].interior() ? 2 : 1));
}

TEST_CASE("face_table on small meshes") {
    SUBCASE("single tet") {
        const auto ft = face_table({{0, 1, 2, 3}});
        CHECK(ft.faces.size() == 4);
        for (const auto& f : ft.faces) CHECK_FALSE(f.interior());
    }
    SUBCASE("two tets sharing a face") {
        const auto ft = face_table({{0, 1, 2, 3}, {1, 2, 3, 4}});
        CHECK(ft.faces.size() == 7);
        int interior = 0;
        for (const auto& f : ft.faces) interior += f.interior() ? 1 : 0;
        CHECK(interior == 1);
    }
    SUBCASE("unit cube: interior count matches brute-force enumeration") {
        const auto m = build_box_mesh(Vec3::Zero(), Vec3::Ones(), 1.0);
        // Brute force: compare every pair of (tet, local face) slots.
        std::vector<std::array<Index, 3>> slots;
        for (const Tet& t : m.tets)
            for (int i = 0; i < 4; ++i) {
                std::array<Index, 3> k{};
                int n = 0;
                for (int j = 0; j < 4; ++j)
                    if (j != i) k[n++] = t[j];
                std::sort(k.begin(), k.end());
                slots.push_back(k);
            }
        int shared_pairs = 0;
        int boundary = 0;
        for (std::size_t a = 0; a < slots.size(); ++a) {
            int matches = 0;
            for (std::size_t b = 0; b < slots.size(); ++b)
                if (a != b && slots[a] == slots[b]) ++matches;
            if (matches == 0) ++boundary;
            shared_pairs += matches;
        }
        const int interior = (static_cast<int>(slots.size()) - boundary) / 2;
        CHECK(shared_pairs / 2 == interior);
        int table_interior = 0;
        for (const auto& f : m.faces) table_interior += f.interior() ? 1 : 0;
        CHECK(table_interior == interior);
        CHECK(boundary == 12);  // two triangles per cube face
    }
    SUBCASE("three tets on one face is a topology error") {
        CHECK_THROWS_AS(face_table({{0, 1, 2, 3}, {0, 1, 2, 4}, {0, 1, 2, 5}}), TopologyError);
    }
}

TEST_CASE("mesh VTK export") {
    const auto m = build_box_mesh(Vec3::Zero(), Vec3::Ones(), 1.0);
    std::ostringstream os;
    write_vtk(os, m);
    const std::string s = os.str();
    CHECK(s.rfind("# vtk DataFile Version 3.0\n", 0) == 0);
    CHECK(s.find("CELLS 6 30") != std::string::npos);
    CHECK(s.find("CELL_TYPES 6\n10\n") != std::string::npos);
}
