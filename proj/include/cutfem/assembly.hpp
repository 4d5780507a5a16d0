#pragma once

#include "cutfem/cut_geometry.hpp"
#include "cutfem/fe_space.hpp"
#include "cutfem/mesh.hpp"
#include "cutfem/model.hpp"

#include <Eigen/Sparse>

#include <functional>
#include <iosfwd>

namespace cutfem {

using SparseMatrix = Eigen::SparseMatrix<double>;
using ScalarField = std::function<double(const Vec3&)>;

/// Everything the linear algebra needs about one discretization. Unknowns
/// are ordered [bulk DOFs | surface DOFs].
struct AssembledSystem {
    SparseMatrix A;
    Eigen::VectorXd rhs;
    MeanConstraint mean;
    Index num_bulk = 0;
    Index num_surf = 0;
    double h = 0.0;
    ModelCoefficients coeffs;

    [[nodiscard]] Index size() const { return num_bulk + num_surf; }
};

/// D A D with D = diag(1 on bulk, h^{1/2} on surface); u = D v.
struct ScaledSystem {
    SparseMatrix A;
    Eigen::VectorXd rhs;
    Eigen::VectorXd scaling;
};

/// Inputs shared by the assembly routines.
struct Discretization {
    const BackgroundMesh& mesh;
    const CutGeometry& geometry;
    const StabilizedFaceSets& faces;
    const DofMap& dofs;
};

// Each block routine returns a full (N_B + N_S)^2 matrix holding only its
// own contribution.
SparseMatrix bulk_stiffness(const Discretization& d, const ModelCoefficients& c);
SparseMatrix surface_stiffness(const Discretization& d, const ModelCoefficients& c);
SparseMatrix coupling_matrix(const Discretization& d, const ModelCoefficients& c);
SparseMatrix ghost_penalty(const Discretization& d, const ModelCoefficients& c);

/// `f_surface` is evaluated at points of Gamma_h, so it must already be the
/// extension of the surface data.
Eigen::VectorXd load_vector(const Discretization& d, const ModelCoefficients& c, const ScalarField& f_bulk,
                            const ScalarField& f_surface);

AssembledSystem assemble_system(const Discretization& d, const ModelCoefficients& c, const ScalarField& f_bulk,
                                const ScalarField& f_surface);

/// z = (b_S on bulk, b_B on surface); spans the kernel of A.
Eigen::VectorXd kernel_vector(const AssembledSystem& system);

ScaledSystem apply_scaling(const AssembledSystem& system);

/// Matrix Market coordinate format, symmetric storage (lower triangle),
/// 1-based indices.
void write_matrix_market(std::ostream& out, const SparseMatrix& A);

}  // namespace cutfem
