#pragma once

#include "cutfem/common.hpp"
#include "cutfem/cut_geometry.hpp"
#include "cutfem/mesh.hpp"

#include <Eigen/Core>

#include <vector>

namespace cutfem {

/// Gradients of the four barycentric coordinates of a tet (rows).
using ShapeGradients = Eigen::Matrix<double, 4, 3>;

/// Throws DegenerateError for a (numerically) flat tet.
ShapeGradients shape_gradients(const TetPoints& x);

/// Barycentric coordinates of x with respect to the tet.
std::array<double, 4> barycentric(const TetPoints& tet, const ShapeGradients& grads, const Vec3& x);

/// Vertex numbering of the bulk space on N_{B,h} and the surface space on
/// N_{S,h}; -1 marks vertices outside the respective patch.
struct DofMap {
    std::vector<Index> bulk;
    std::vector<Index> surf;
    Index num_bulk = 0;
    Index num_surf = 0;

    [[nodiscard]] Index size() const { return num_bulk + num_surf; }
    /// Global system row of a surface DOF.
    [[nodiscard]] Index surf_row(Index vertex) const { return num_bulk + surf[vertex]; }
};

DofMap build_dofmaps(const BackgroundMesh& mesh, const std::vector<ElementClass>& classes);

/// m_i = integral over Gamma_h of the surface basis function i.
struct MeanConstraint {
    Eigen::VectorXd weights;  // one per surface DOF
    double total = 0.0;       // |Gamma_h|
};

MeanConstraint mean_weights(const BackgroundMesh& mesh, const CutGeometry& geometry, const DofMap& dofs);

}  // namespace cutfem
