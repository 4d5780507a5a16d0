#include "cutfem/cut_geometry.hpp"

#include "cutfem/fe_space.hpp"

#include <cmath>
#include <ostream>

namespace cutfem {

namespace {

void split_prism(const Triangle& bottom, const Triangle& top, std::vector<TetPoints>& out) {
    // bottom[i] and top[i] are joined by a lateral edge; all lateral quads are
    // planar so any consistent diagonal choice tiles the prism.
    out.push_back({bottom[0], bottom[1], bottom[2], top[0]});
    out.push_back({bottom[1], bottom[2], top[0], top[1]});
    out.push_back({bottom[2], top[0], top[1], top[2]});
}

}  // namespace

std::vector<double> snap_levelset(const std::vector<double>& values, double h) {
    const double eps = 1e-12 * h;
    std::vector<double> snapped(values);
    for (double& v : snapped)
        if (std::abs(v) < eps) v = -eps;
    return snapped;
}

ElementClass classify_values(const std::array<double, 4>& phi) {
    int neg = 0;
    for (double v : phi) neg += v < 0.0 ? 1 : 0;
    if (neg == 4) return ElementClass::Inside;
    if (neg == 0) return ElementClass::Outside;
    return ElementClass::Cut;
}

std::vector<ElementClass> classify(const BackgroundMesh& mesh, const NodalLevelSet& levelset) {
    const std::vector<double> phi = snap_levelset(levelset.values, mesh.h);
    std::vector<ElementClass> classes(mesh.num_tets());
    bool any_cut = false;
    for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
        const Tet& tet = mesh.tets[t];
        classes[t] = classify_values({phi[tet[0]], phi[tet[1]], phi[tet[2]], phi[tet[3]]});
        any_cut = any_cut || classes[t] == ElementClass::Cut;
    }
    if (!any_cut) throw GeometryError("no cut elements: discrete surface is empty");
    return classes;
}

MarchingResult marching_tet(const TetPoints& x, const std::array<double, 4>& phi) {
    std::array<int, 4> neg{};
    std::array<int, 4> pos{};
    int nn = 0;
    int np = 0;
    for (int i = 0; i < 4; ++i) {
        if (phi[i] < 0.0)
            neg[nn++] = i;
        else if (phi[i] > 0.0)
            pos[np++] = i;
        else
            throw PreconditionError("marching_tet: zero vertex value (snap first)");
    }
    if (nn == 0 || np == 0) throw PreconditionError("marching_tet: tet is not cut");

    const auto cross = [&](int a, int b) -> Vec3 {
        const double t = phi[a] / (phi[a] - phi[b]);
        return x[a] + t * (x[b] - x[a]);
    };

    MarchingResult r;
    if (nn == 1 || np == 1) {
        const bool lone_inside = nn == 1;
        const int s = lone_inside ? neg[0] : pos[0];
        const std::array<int, 3> o = lone_inside ? std::array<int, 3>{pos[0], pos[1], pos[2]}
                                                 : std::array<int, 3>{neg[0], neg[1], neg[2]};
        const Triangle cut = {cross(s, o[0]), cross(s, o[1]), cross(s, o[2])};
        r.surface.push_back(cut);
        std::vector<TetPoints>& corner_side = lone_inside ? r.inside : r.outside;
        std::vector<TetPoints>& prism_side = lone_inside ? r.outside : r.inside;
        corner_side.push_back({x[s], cut[0], cut[1], cut[2]});
        split_prism({x[o[0]], x[o[1]], x[o[2]]}, cut, prism_side);
        return r;
    }

    const int a = neg[0];
    const int b = neg[1];
    const int c = pos[0];
    const int d = pos[1];
    const Vec3 pac = cross(a, c);
    const Vec3 pad = cross(a, d);
    const Vec3 pbc = cross(b, c);
    const Vec3 pbd = cross(b, d);
    // Planar quad pac -> pad -> pbd -> pbc, split along its shorter diagonal.
    if ((pac - pbd).squaredNorm() <= (pad - pbc).squaredNorm()) {
        r.surface.push_back({pac, pad, pbd});
        r.surface.push_back({pac, pbd, pbc});
    } else {
        r.surface.push_back({pad, pbd, pbc});
        r.surface.push_back({pad, pbc, pac});
    }
    split_prism({x[a], pac, pad}, {x[b], pbc, pbd}, r.inside);
    split_prism({x[c], pac, pbc}, {x[d], pad, pbd}, r.outside);
    return r;
}

CutGeometry build_cut_geometry(const BackgroundMesh& mesh, const NodalLevelSet& levelset) {
    CutGeometry g;
    g.phi = snap_levelset(levelset.values, mesh.h);
    g.classes.resize(mesh.num_tets());
    g.inside_volume.assign(mesh.num_tets(), 0.0);
    bool any_cut = false;

    for (std::size_t ti = 0; ti < mesh.num_tets(); ++ti) {
        const auto t = static_cast<Index>(ti);
        const Tet& tet = mesh.tets[ti];
        const std::array<double, 4> phi = {g.phi[tet[0]], g.phi[tet[1]], g.phi[tet[2]], g.phi[tet[3]]};
        const ElementClass cls = classify_values(phi);
        g.classes[ti] = cls;
        if (cls == ElementClass::Outside) continue;

        const TetPoints x = mesh.tet_vertices(t);
        if (cls == ElementClass::Inside) {
            const double vol = std::abs(signed_volume(x[0], x[1], x[2], x[3]));
            g.inside.push_back({x, vol, t});
            g.inside_volume[ti] = vol;
            continue;
        }

        any_cut = true;
        const ShapeGradients grads = shape_gradients(x);
        Vec3 grad_phi = Vec3::Zero();
        for (int i = 0; i < 4; ++i) grad_phi += phi[i] * grads.row(i).transpose();
        const double gnorm = grad_phi.norm();
        if (!(gnorm > 0.0)) throw GeometryError("cut tet with vanishing level-set gradient");
        const Vec3 normal = grad_phi / gnorm;

        const MarchingResult m = marching_tet(x, phi);
        for (const Triangle& tri : m.surface) g.surface.push_back({tri, normal, triangle_area(tri[0], tri[1], tri[2]), t});
        for (const TetPoints& sub : m.inside) {
            const double vol = std::abs(signed_volume(sub[0], sub[1], sub[2], sub[3]));
            g.inside.push_back({sub, vol, t});
            g.inside_volume[ti] += vol;
        }
    }
    if (!any_cut) throw GeometryError("no cut elements: discrete surface is empty");
    return g;
}

StabilizedFaceSets build_face_sets(const BackgroundMesh& mesh, const std::vector<ElementClass>& classes) {
    StabilizedFaceSets sets;
    const auto centroid = [&](Index t) {
        const auto x = mesh.tet_vertices(t);
        return Vec3((x[0] + x[1] + x[2] + x[3]) / 4.0);
    };
    for (std::size_t fi = 0; fi < mesh.faces.size(); ++fi) {
        const Face& f = mesh.faces[fi];
        if (!f.interior()) continue;
        const ElementClass co = classes[f.owner];
        const ElementClass cn = classes[f.neighbor];
        const bool in_bulk = co != ElementClass::Outside && cn != ElementClass::Outside;
        const bool touches_cut = co == ElementClass::Cut || cn == ElementClass::Cut;
        const bool both_cut = co == ElementClass::Cut && cn == ElementClass::Cut;
        if (!(in_bulk && touches_cut)) continue;

        const Vec3& a = mesh.vertices[f.vertices[0]];
        const Vec3& b = mesh.vertices[f.vertices[1]];
        const Vec3& c = mesh.vertices[f.vertices[2]];
        Vec3 n = (b - a).cross(c - a);
        const double twice_area = n.norm();
        n /= twice_area;
        if (n.dot(centroid(f.neighbor) - centroid(f.owner)) < 0.0) n = -n;
        const StabilizedFace sf{static_cast<Index>(fi), f.owner, f.neighbor, 0.5 * twice_area, n};
        sets.bulk.push_back(sf);
        if (both_cut) sets.surface.push_back(sf);
    }
    return sets;
}

DomainMeasure measure(const CutGeometry& geometry) {
    DomainMeasure m;
    for (const SubTet& s : geometry.inside) m.volume += s.volume;
    for (const SurfaceTriangle& t : geometry.surface) m.area += t.area;
    return m;
}

void write_surface_vtk(std::ostream& out, const CutGeometry& geometry, const std::vector<double>* tri_vertex_values,
                       const std::string& scalar_name) {
    const std::size_t nt = geometry.surface.size();
    out << "# vtk DataFile Version 3.0\n"
        << "cutfem discrete surface\n"
        << "ASCII\n"
        << "DATASET UNSTRUCTURED_GRID\n";
    out.precision(17);
    out << "POINTS " << 3 * nt << " double\n";
    for (const SurfaceTriangle& t : geometry.surface)
        for (const Vec3& x : t.x) out << x.x() << ' ' << x.y() << ' ' << x.z() << '\n';
    out << "CELLS " << nt << ' ' << 4 * nt << '\n';
    for (std::size_t i = 0; i < nt; ++i) out << "3 " << 3 * i << ' ' << 3 * i + 1 << ' ' << 3 * i + 2 << '\n';
    out << "CELL_TYPES " << nt << '\n';
    for (std::size_t i = 0; i < nt; ++i) out << "5\n";
    if (tri_vertex_values != nullptr) {
        out << "POINT_DATA " << 3 * nt << '\n'
            << "SCALARS " << scalar_name << " double 1\n"
            << "LOOKUP_TABLE default\n";
        for (double v : *tri_vertex_values) out << v << '\n';
    }
}

}  // namespace cutfem
