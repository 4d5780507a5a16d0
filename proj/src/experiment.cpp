#include "cutfem/experiment.hpp"

#include "cutfem/assembly.hpp"
#include "cutfem/fe_space.hpp"
#include "cutfem/level_set.hpp"
#include "cutfem/manufactured.hpp"
#include "cutfem/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace cutfem {

CondMode parse_cond_mode(const std::string& s) {
    if (s == "off") return CondMode::Off;
    if (s == "dense") return CondMode::Dense;
    if (s == "iterative") return CondMode::Iterative;
    if (s == "auto") return CondMode::Auto;
    throw std::invalid_argument("unknown condition-number mode '" + s + "'");
}

std::string_view to_string(CondMode m) {
    switch (m) {
        case CondMode::Off: return "off";
        case CondMode::Dense: return "dense";
        case CondMode::Iterative: return "iterative";
        case CondMode::Auto: return "auto";
    }
    return "?";
}

std::vector<double> RunConfig::mesh_sizes() const {
    if (!h_list.empty()) return h_list;
    std::vector<double> hs;
    for (int k = 0; k < levels; ++k) hs.push_back(h0 / std::pow(2.0, k));
    return hs;
}

void RunConfig::validate() const {
    if (!(h0 > 0.0)) throw std::invalid_argument("h0 must be positive");
    if (levels < 1) throw std::invalid_argument("levels must be >= 1");
    for (double h : h_list)
        if (!(h > 0.0)) throw std::invalid_argument("every h in the list must be positive");
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
    if (!(jitter_amp >= 0.0) || !(jitter_amp < h0 / 2.0))
        throw std::invalid_argument("jitter amplitude must lie in [0, h0/2)");
    if (jitter_count < 1) throw std::invalid_argument("jitter count must be >= 1");
    for (int d = 0; d < 3; ++d)
        if (!(box_extents[d] > 0.0)) throw std::invalid_argument("box extents must be positive");
    coeffs.validate();
}

namespace {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

// Grows the box symmetrically so every axis holds an integer number of
// cells of size exactly h.
std::pair<Vec3, Vec3> fit_box(const RunConfig& config, double h) {
    Vec3 origin = config.box_origin;
    Vec3 extents = config.box_extents;
    for (int d = 0; d < 3; ++d) {
        const double cells = std::ceil(extents[d] / h - 1e-9);
        const double grown = cells * h;
        origin[d] -= 0.5 * (grown - extents[d]);
        extents[d] = grown;
    }
    return {origin, extents};
}

double max_over_min(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi / *lo;
}

}  // namespace

LevelResult run_level(const RunConfig& config, double h, const Vec3& center, const LevelOutputs& outputs) {
    LevelResult out;
    out.center = center;
    const Sphere sphere{center, config.radius};

    const BackgroundMesh mesh = stage("mesh", [&] {
        const auto [origin, extents] = fit_box(config, h);
        return build_box_mesh(origin, extents, h);
    });
    const ImplicitSurface surface(sphere);
    const NodalLevelSet levelset = stage("level_set", [&] { return sample_nodal(surface, mesh); });
    const CutGeometry geometry = stage("cut_geometry", [&] { return build_cut_geometry(mesh, levelset); });
    const StabilizedFaceSets faces = stage("cut_geometry", [&] { return build_face_sets(mesh, geometry.classes); });
    const DofMap dofs = stage("fe_space", [&] { return build_dofmaps(mesh, geometry.classes); });
    const Discretization disc{mesh, geometry, faces, dofs};

    const ManufacturedProblem problem(sphere, config.coeffs);
    const AssembledSystem system = stage("assembly", [&] {
        return assemble_system(
            disc, config.coeffs, [&](const Vec3& x) { return problem.f_bulk(x); },
            [&](const Vec3& x) { return problem.f_surface(x); });
    });

    if (!outputs.matrix_path.empty()) {
        stage("output", [&] {
            std::ofstream mtx(outputs.matrix_path);
            if (!mtx) throw std::runtime_error("cannot open " + outputs.matrix_path);
            write_matrix_market(mtx, system.A);
        });
    }

    const SolutionPair sol = stage("solve", [&] { return solve(system); });
    out.residual = sol.residual_norm;
    out.multiplier = sol.multiplier;
    out.constraint_violation = std::abs(system.mean.weights.dot(sol.u_S));

    stage("errors", [&] {
        // The discrete pair has mean-zero u_S; move the exact pair along the
        // kernel (b_S c_S = b_B c_B) into the same gauge.
        const double mean_S = surface_mean(geometry, [&](const Vec3& x) { return problem.u_surface(x); });
        const double shift_B = config.coeffs.b_S / config.coeffs.b_B * mean_S;
        const FieldErrors eb = bulk_errors(
            mesh, geometry, dofs, sol.u_B, [&](const Vec3& x) { return problem.u_bulk(x) - shift_B; },
            [&](const Vec3& x) { return problem.grad_u_bulk(x); });
        const FieldErrors es = surface_errors(
            mesh, geometry, dofs, sol.u_S, [&](const Vec3& x) { return problem.u_surface(x); },
            [&](const Vec3& x) { return problem.surface_grad_u_surface(x); });
        out.geometry = geometry_assumption_report(geometry, surface);
        out.measure = measure(geometry);
        auto& r = out.record;
        r.h = h;
        r.N_B = dofs.num_bulk;
        r.N_S = dofs.num_surf;
        r.errL2_B = eb.l2;
        r.errH1_B = eb.h1;
        r.errL2_S = es.l2;
        r.errH1_S = es.h1;
        for (double e : {eb.l2, eb.h1, es.l2, es.h1})
            if (!std::isfinite(e)) throw std::runtime_error("non-finite error norm");
    });

    if (config.cond != CondMode::Off) {
        stage("condition", [&] {
            const ScaledSystem scaled = apply_scaling(system);
            const Eigen::VectorXd z = kernel_vector(system).cwiseQuotient(scaled.scaling);
            SpectralMethod method = SpectralMethod::Iterative;
            if (config.cond == CondMode::Dense ||
                (config.cond == CondMode::Auto && system.size() <= config.dense_limit))
                method = SpectralMethod::Dense;
            out.spectrum = condition_number(scaled.A, z, method);
            out.record.kappa = out.spectrum->kappa;
        });
    }

    if (!outputs.vtk_stem.empty()) {
        const std::string& vtk_path_stem = outputs.vtk_stem;
        stage("output", [&] {
            std::vector<double> tri_values;
            tri_values.reserve(3 * geometry.surface.size());
            for (const SurfaceTriangle& tri : geometry.surface) {
                const TetPoints tet = mesh.tet_vertices(tri.tet);
                const ShapeGradients g = shape_gradients(tet);
                for (const Vec3& x : tri.x) {
                    const auto lam = barycentric(tet, g, x);
                    double u = 0.0;
                    for (int i = 0; i < 4; ++i) u += lam[i] * sol.u_S[dofs.surf[mesh.tets[tri.tet][i]]];
                    tri_values.push_back(u);
                }
            }
            std::ofstream surf_out(vtk_path_stem + "_surface.vtk");
            if (!surf_out) throw std::runtime_error("cannot open " + vtk_path_stem + "_surface.vtk");
            write_surface_vtk(surf_out, geometry, &tri_values, "u_S");

            std::vector<double> bulk_values(mesh.num_vertices(), 0.0);
            for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
                if (dofs.bulk[v] >= 0) bulk_values[v] = sol.u_B[dofs.bulk[v]];
            std::ofstream mesh_out(vtk_path_stem + "_bulk.vtk");
            if (!mesh_out) throw std::runtime_error("cannot open " + vtk_path_stem + "_bulk.vtk");
            write_vtk(mesh_out, mesh, &bulk_values, "u_B");
        });
    }
    return out;
}

void fill_eoc(std::vector<ConvergenceRecord>& records) {
    for (std::size_t k = 1; k < records.size(); ++k) {
        const auto& c = records[k - 1];
        auto& f = records[k];
        f.eocL2_B = eoc(c.errL2_B, f.errL2_B, c.h, f.h);
        f.eocL2_S = eoc(c.errL2_S, f.errL2_S, c.h, f.h);
        f.eocH1_B = eoc(c.errH1_B, f.errH1_B, c.h, f.h);
        f.eocH1_S = eoc(c.errH1_S, f.errH1_S, c.h, f.h);
    }
}

std::vector<LevelResult> run_convergence_study(const RunConfig& config, std::ostream* log) {
    config.validate();
    std::ofstream csv;
    if (!config.csv_path.empty()) {
        csv.open(config.csv_path);
        if (!csv) throw std::runtime_error("cannot open CSV file " + config.csv_path);
        write_csv_header(csv);
        csv.flush();
    }

    std::vector<LevelResult> results;
    std::vector<ConvergenceRecord> records;
    const std::vector<double> hs = config.mesh_sizes();
    for (std::size_t k = 0; k < hs.size(); ++k) {
        LevelOutputs outputs;
        const std::string tag = "_L" + std::to_string(k);
        if (!config.vtk_prefix.empty()) outputs.vtk_stem = config.vtk_prefix + tag;
        if (!config.matrix_prefix.empty()) outputs.matrix_path = config.matrix_prefix + tag + ".mtx";
        results.push_back(run_level(config, hs[k], config.center, outputs));
        records.push_back(results.back().record);
        fill_eoc(records);
        results.back().record = records.back();
        if (csv.is_open()) {
            write_csv_row(csv, records.back());
            csv.flush();
        }
        if (log != nullptr) {
            const auto& r = records.back();
            *log << "level " << k << "  h=" << r.h << "  N_B=" << r.N_B << "  N_S=" << r.N_S
                 << "  L2_B=" << r.errL2_B << "  L2_S=" << r.errL2_S << "  H1_B=" << r.errH1_B
                 << "  H1_S=" << r.errH1_S;
            if (r.kappa) *log << "  kappa=" << *r.kappa;
            if (r.eocL2_B)
                *log << "  eoc(L2_B,L2_S,H1_B,H1_S)=(" << *r.eocL2_B << ", " << *r.eocL2_S << ", " << *r.eocH1_B
                     << ", " << *r.eocH1_S << ")";
            *log << '\n';
        }
    }
    return results;
}

RobustnessResult run_robustness_sweep(const RunConfig& config, std::ostream* log) {
    config.validate();
    RobustnessResult res;
    std::mt19937_64 rng(config.jitter_seed.value_or(0));
    std::uniform_real_distribution<double> dist(-config.jitter_amp, config.jitter_amp);
    for (int i = 0; i < config.jitter_count; ++i) {
        Vec3 off = Vec3::Zero();
        if (config.jitter_amp > 0.0) off = Vec3(dist(rng), dist(rng), dist(rng));
        res.offsets.push_back(off);
    }

    std::vector<double> kappas;
    std::vector<double> l2b;
    std::vector<double> l2s;
    for (const Vec3& off : res.offsets) {
        res.levels.push_back(run_level(config, config.h0, config.center + off));
        const auto& r = res.levels.back().record;
        if (r.kappa) kappas.push_back(*r.kappa);
        l2b.push_back(r.errL2_B);
        l2s.push_back(r.errL2_S);
        if (log != nullptr) {
            *log << "offset (" << off.x() << ", " << off.y() << ", " << off.z() << ")  L2_B=" << r.errL2_B
                 << "  L2_S=" << r.errL2_S;
            if (r.kappa) *log << "  kappa=" << *r.kappa;
            *log << '\n';
        }
    }
    if (!kappas.empty()) res.kappa_ratio = max_over_min(kappas);
    res.l2_ratio_B = max_over_min(l2b);
    res.l2_ratio_S = max_over_min(l2s);

    if (!config.csv_path.empty()) {
        std::ofstream csv(config.csv_path);
        if (!csv) throw std::runtime_error("cannot open CSV file " + config.csv_path);
        write_robustness_csv(csv, res);
    }
    return res;
}

std::string format_double(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("format_double failed");
    return {buf, end};
}

namespace {

std::string opt(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

}  // namespace

void write_csv_header(std::ostream& out) {
    out << kCsvHeader << '\n';
}

void write_csv_row(std::ostream& out, const ConvergenceRecord& r) {
    out << format_double(r.h) << ',' << r.N_B << ',' << r.N_S << ',' << format_double(r.errL2_B) << ','
        << format_double(r.errL2_S) << ',' << format_double(r.errH1_B) << ',' << format_double(r.errH1_S) << ','
        << opt(r.kappa) << ',' << opt(r.eocL2_B) << ',' << opt(r.eocL2_S) << ',' << opt(r.eocH1_B) << ','
        << opt(r.eocH1_S) << '\n';
}

void write_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records) {
    write_csv_header(out);
    for (const auto& r : records) write_csv_row(out, r);
}

void write_csv(const std::string& path, const std::vector<ConvergenceRecord>& records) {
    if (records.empty()) throw std::invalid_argument("write_csv: no records");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open CSV file " + path);
    write_csv(out, records);
    if (!out) throw std::runtime_error("write failed for " + path);
}

namespace {

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw std::runtime_error("bad number in CSV: '" + s + "'");
    return v;
}

std::optional<double> parse_opt(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return parse_double(s);
}

}  // namespace

std::vector<ConvergenceRecord> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw std::runtime_error("read_csv: unexpected header");
    std::vector<ConvergenceRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (line.back() == ',') f.emplace_back();
        if (f.size() != 12) throw std::runtime_error("read_csv: expected 12 fields");
        ConvergenceRecord r;
        r.h = parse_double(f[0]);
        r.N_B = static_cast<Index>(parse_double(f[1]));
        r.N_S = static_cast<Index>(parse_double(f[2]));
        r.errL2_B = parse_double(f[3]);
        r.errL2_S = parse_double(f[4]);
        r.errH1_B = parse_double(f[5]);
        r.errH1_S = parse_double(f[6]);
        r.kappa = parse_opt(f[7]);
        r.eocL2_B = parse_opt(f[8]);
        r.eocL2_S = parse_opt(f[9]);
        r.eocH1_B = parse_opt(f[10]);
        r.eocH1_S = parse_opt(f[11]);
        records.push_back(r);
    }
    return records;
}

void write_robustness_csv(std::ostream& out, const RobustnessResult& result) {
    out << kRobustnessCsvHeader << '\n';
    for (std::size_t i = 0; i < result.levels.size(); ++i) {
        const Vec3& o = result.offsets[i];
        const auto& r = result.levels[i].record;
        out << format_double(o.x()) << ',' << format_double(o.y()) << ',' << format_double(o.z()) << ','
            << format_double(r.h) << ',' << r.N_B << ',' << r.N_S << ',' << format_double(r.errL2_B) << ','
            << format_double(r.errL2_S) << ',' << format_double(r.errH1_B) << ',' << format_double(r.errH1_S) << ','
            << opt(r.kappa) << '\n';
    }
}

}  // namespace cutfem
