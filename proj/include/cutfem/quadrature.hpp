#pragma once

#include "cutfem/common.hpp"

#include <span>
#include <vector>

namespace cutfem::quadrature {

/// A quadrature point in barycentric coordinates of a simplex. Weights are
/// normalized so that they sum to one; multiply by the simplex measure.
template <int NumBary>
struct Point {
    std::array<double, NumBary> bary;
    double weight;
};

using TetPoint = Point<4>;
using TriPoint = Point<3>;

/// 14-point rule on the tetrahedron, exact for polynomials of degree 5,
/// all weights positive.
std::span<const TetPoint> tet_degree5();

/// Edge-midpoint rule on the triangle, exact for degree 2.
std::span<const TriPoint> tri_degree2();

/// 6-point rule on the triangle, exact for degree 4.
std::span<const TriPoint> tri_degree4();

template <int NumBary>
Vec3 map_point(const std::array<Vec3, NumBary>& vertices, const std::array<double, NumBary>& bary) {
    Vec3 x = Vec3::Zero();
    for (int i = 0; i < NumBary; ++i) x += bary[i] * vertices[i];
    return x;
}

}  // namespace cutfem::quadrature
