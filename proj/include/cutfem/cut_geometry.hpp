#pragma once

#include "cutfem/common.hpp"
#include "cutfem/level_set.hpp"
#include "cutfem/mesh.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cutfem {

enum class ElementClass : std::uint8_t { Inside, Cut, Outside };

using Triangle = std::array<Vec3, 3>;
using TetPoints = std::array<Vec3, 4>;

/// Piece of the discrete surface inside one background tet.
struct SurfaceTriangle {
    Triangle x;
    Vec3 normal;  // n_h of the parent tet, pointing toward increasing level set
    double area;
    Index tet;
};

/// Piece of the discrete bulk domain inside one background tet.
struct SubTet {
    TetPoints x;
    double volume;
    Index tet;
};

struct MarchingResult {
    std::vector<Triangle> surface;
    std::vector<TetPoints> inside;
    std::vector<TetPoints> outside;
};

struct CutGeometry {
    std::vector<double> phi;  // snapped nodal values
    std::vector<ElementClass> classes;
    std::vector<SurfaceTriangle> surface;
    std::vector<SubTet> inside;  // INSIDE tets appear whole
    std::vector<double> inside_volume;  // per background tet
};

/// One face carrying a ghost-penalty term.
struct StabilizedFace {
    Index face;
    Index owner;
    Index neighbor;
    double area;
    Vec3 normal;  // unit, from owner toward neighbor
};

struct StabilizedFaceSets {
    std::vector<StabilizedFace> bulk;     // F_B
    std::vector<StabilizedFace> surface;  // F_S
};

struct DomainMeasure {
    double volume = 0.0;
    double area = 0.0;
};

/// Values with |phi| < 1e-12 h are moved to -1e-12 h so that no vertex lies
/// exactly on the zero set.
std::vector<double> snap_levelset(const std::vector<double>& values, double h);

ElementClass classify_values(const std::array<double, 4>& phi);

/// Tags every tet; throws GeometryError if no tet is cut.
std::vector<ElementClass> classify(const BackgroundMesh& mesh, const NodalLevelSet& levelset);

/// Splits a tet by the zero set of the linear interpolant of `phi`. Inputs
/// must have mixed strict signs (PreconditionError otherwise).
MarchingResult marching_tet(const TetPoints& x, const std::array<double, 4>& phi);

CutGeometry build_cut_geometry(const BackgroundMesh& mesh, const NodalLevelSet& levelset);

StabilizedFaceSets build_face_sets(const BackgroundMesh& mesh, const std::vector<ElementClass>& classes);

DomainMeasure measure(const CutGeometry& geometry);

/// Legacy VTK polydata-as-unstructured-grid of Gamma_h (cell type 5). When
/// given, `tri_vertex_values` holds three values per surface triangle.
void write_surface_vtk(std::ostream& out, const CutGeometry& geometry,
                       const std::vector<double>* tri_vertex_values = nullptr,
                       const std::string& scalar_name = "u_S");

}  // namespace cutfem
