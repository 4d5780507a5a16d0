#pragma once

#include "cutfem/common.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace cutfem {

using Tet = std::array<Index, 4>;

/// Triangular face of the background mesh. `neighbor` is kBoundary for faces
/// on the box boundary. `vertices` are sorted ascending.
struct Face {
    std::array<Index, 3> vertices;
    Index owner = kBoundary;
    Index neighbor = kBoundary;

    [[nodiscard]] bool interior() const { return neighbor != kBoundary; }
};

struct FaceTable {
    std::vector<Face> faces;
    /// tet_faces[t][i] is the face opposite local vertex i of tet t.
    std::vector<std::array<Index, 4>> tet_faces;
};

/// Structured tetrahedral mesh of an axis-aligned box. Immutable after
/// construction.
struct BackgroundMesh {
    std::vector<Vec3> vertices;
    std::vector<Tet> tets;  // positively oriented
    std::vector<Face> faces;
    std::vector<std::array<Index, 4>> tet_faces;
    double h = 0.0;

    [[nodiscard]] std::size_t num_vertices() const { return vertices.size(); }
    [[nodiscard]] std::size_t num_tets() const { return tets.size(); }

    [[nodiscard]] std::array<Vec3, 4> tet_vertices(Index t) const {
        const Tet& tet = tets[t];
        return {vertices[tet[0]], vertices[tet[1]], vertices[tet[2]], vertices[tet[3]]};
    }

    [[nodiscard]] double tet_volume(Index t) const;

    /// Tet on the other side of face f as seen from tet t, or kBoundary.
    [[nodiscard]] Index across(Index f, Index t) const;
};

/// Lattice of ceil(extent/h) cells per axis, each cube split into the six
/// Kuhn (Freudenthal) tetrahedra sharing the main diagonal. Spacing per axis
/// is extent/cells <= h. Throws std::invalid_argument for non-positive input.
BackgroundMesh build_box_mesh(const Vec3& origin, const Vec3& extents, double h);

/// Builds the face list of an arbitrary tet soup. Throws TopologyError if a
/// vertex triple is shared by more than two tets.
FaceTable face_table(const std::vector<Tet>& tets);

/// Legacy ASCII VTK unstructured grid, optionally with one point scalar.
void write_vtk(std::ostream& out, const BackgroundMesh& mesh,
               const std::vector<double>* point_scalar = nullptr,
               const std::string& scalar_name = "phi");

}  // namespace cutfem
