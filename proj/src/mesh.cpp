#include "cutfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace cutfem {

double BackgroundMesh::tet_volume(Index t) const {
    const auto x = tet_vertices(t);
    return signed_volume(x[0], x[1], x[2], x[3]);
}

Index BackgroundMesh::across(Index f, Index t) const {
    const Face& face = faces[f];
    if (face.owner == t) return face.neighbor;
    if (face.neighbor == t) return face.owner;
    throw TopologyError("tet " + std::to_string(t) + " is not adjacent to face " + std::to_string(f));
}

BackgroundMesh build_box_mesh(const Vec3& origin, const Vec3& extents, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("build_box_mesh: h must be positive");
    for (int d = 0; d < 3; ++d) {
        if (!(extents[d] > 0.0) || !std::isfinite(extents[d]))
            throw std::invalid_argument("build_box_mesh: extents must be positive");
    }

    std::array<int, 3> cells{};
    for (int d = 0; d < 3; ++d) {
        // Tolerate extents that are an exact multiple of h up to rounding.
        cells[d] = std::max(1, static_cast<int>(std::ceil(extents[d] / h - 1e-9)));
    }
    const int nx = cells[0] + 1;
    const int ny = cells[1] + 1;
    const int nz = cells[2] + 1;
    const auto vid = [&](int i, int j, int k) { return static_cast<Index>(i + nx * (j + ny * k)); };

    BackgroundMesh mesh;
    mesh.h = h;
    mesh.vertices.reserve(static_cast<std::size_t>(nx) * ny * nz);
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                mesh.vertices.emplace_back(origin.x() + extents.x() * i / cells[0],
                                           origin.y() + extents.y() * j / cells[1],
                                           origin.z() + extents.z() * k / cells[2]);

    // Each permutation of the axes is a monotone lattice path 000 -> 111.
    static constexpr std::array<std::array<int, 3>, 6> kPaths = {{
        {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
    }};

    mesh.tets.reserve(6 * static_cast<std::size_t>(cells[0]) * cells[1] * cells[2]);
    for (int k = 0; k < cells[2]; ++k)
        for (int j = 0; j < cells[1]; ++j)
            for (int i = 0; i < cells[0]; ++i)
                for (const auto& path : kPaths) {
                    std::array<int, 3> c = {i, j, k};
                    Tet tet{};
                    tet[0] = vid(c[0], c[1], c[2]);
                    for (int s = 0; s < 3; ++s) {
                        ++c[path[s]];
                        tet[s + 1] = vid(c[0], c[1], c[2]);
                    }
                    const auto& v = mesh.vertices;
                    if (signed_volume(v[tet[0]], v[tet[1]], v[tet[2]], v[tet[3]]) < 0.0)
                        std::swap(tet[2], tet[3]);
                    mesh.tets.push_back(tet);
                }

    FaceTable table = face_table(mesh.tets);
    mesh.faces = std::move(table.faces);
    mesh.tet_faces = std::move(table.tet_faces);
    return mesh;
}

FaceTable face_table(const std::vector<Tet>& tets) {
    struct Slot {
        std::array<Index, 3> key;
        Index tet;
        int local;
    };
    std::vector<Slot> slots;
    slots.reserve(4 * tets.size());
    for (std::size_t t = 0; t < tets.size(); ++t) {
        for (int i = 0; i < 4; ++i) {
            std::array<Index, 3> key{};
            int n = 0;
            for (int j = 0; j < 4; ++j)
                if (j != i) key[n++] = tets[t][j];
            std::sort(key.begin(), key.end());
            slots.push_back({key, static_cast<Index>(t), i});
        }
    }
    std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
        return a.key != b.key ? a.key < b.key : a.tet < b.tet;
    });

    FaceTable table;
    table.tet_faces.assign(tets.size(), {kBoundary, kBoundary, kBoundary, kBoundary});
    for (std::size_t s = 0; s < slots.size();) {
        std::size_t e = s + 1;
        while (e < slots.size() && slots[e].key == slots[s].key) ++e;
        if (e - s > 2) throw TopologyError("non-conforming mesh: face shared by more than two tets");
        const auto f = static_cast<Index>(table.faces.size());
        Face face{slots[s].key, slots[s].tet, kBoundary};
        table.tet_faces[slots[s].tet][slots[s].local] = f;
        if (e - s == 2) {
            face.neighbor = slots[s + 1].tet;
            table.tet_faces[slots[s + 1].tet][slots[s + 1].local] = f;
        }
        table.faces.push_back(face);
        s = e;
    }
    return table;
}

void write_vtk(std::ostream& out, const BackgroundMesh& mesh, const std::vector<double>* point_scalar,
               const std::string& scalar_name) {
    out << "# vtk DataFile Version 3.0\n"
        << "cutfem background mesh\n"
        << "ASCII\n"
        << "DATASET UNSTRUCTURED_GRID\n";
    out.precision(17);
    out << "POINTS " << mesh.vertices.size() << " double\n";
    for (const Vec3& x : mesh.vertices) out << x.x() << ' ' << x.y() << ' ' << x.z() << '\n';
    out << "CELLS " << mesh.tets.size() << ' ' << 5 * mesh.tets.size() << '\n';
    for (const Tet& t : mesh.tets) out << "4 " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
    out << "CELL_TYPES " << mesh.tets.size() << '\n';
    for (std::size_t t = 0; t < mesh.tets.size(); ++t) out << "10\n";
    if (point_scalar != nullptr) {
        out << "POINT_DATA " << mesh.vertices.size() << '\n'
            << "SCALARS " << scalar_name << " double 1\n"
            << "LOOKUP_TABLE default\n";
        for (double v : *point_scalar) out << v << '\n';
    }
}

}  // namespace cutfem
