#pragma once

#include "cutfem/cut_geometry.hpp"
#include "cutfem/error_analysis.hpp"
#include "cutfem/model.hpp"
#include "cutfem/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cutfem {

enum class CondMode { Off, Dense, Iterative, Auto };

CondMode parse_cond_mode(const std::string& s);
std::string_view to_string(CondMode m);

struct RunConfig {
    double h0 = 0.525;
    int levels = 3;
    /// Overrides h0/levels when non-empty.
    std::vector<double> h_list;
    ModelCoefficients coeffs;
    Vec3 center = Vec3::Zero();
    double radius = 1.0;
    Vec3 box_origin = Vec3::Constant(-1.5);
    Vec3 box_extents = Vec3::Constant(3.0);
    std::optional<std::uint64_t> jitter_seed;
    double jitter_amp = 0.0;
    int jitter_count = 10;
    std::string csv_path;
    std::string vtk_prefix;
    std::string matrix_prefix;
    CondMode cond = CondMode::Auto;
    /// Largest system solved densely under CondMode::Auto.
    int dense_limit = 3000;

    [[nodiscard]] std::vector<double> mesh_sizes() const;
    /// Throws std::invalid_argument on violated invariants.
    void validate() const;
};

struct ConvergenceRecord {
    double h = 0.0;
    Index N_B = 0;
    Index N_S = 0;
    double errL2_B = 0.0;
    double errL2_S = 0.0;
    double errH1_B = 0.0;
    double errH1_S = 0.0;
    std::optional<double> kappa;
    std::optional<double> eocL2_B;
    std::optional<double> eocL2_S;
    std::optional<double> eocH1_B;
    std::optional<double> eocH1_S;
};

/// Everything computed on one mesh.
struct LevelResult {
    ConvergenceRecord record;
    Vec3 center = Vec3::Zero();
    GeometryReport geometry;
    DomainMeasure measure;
    double residual = 0.0;
    double multiplier = 0.0;
    double constraint_violation = 0.0;
    std::optional<SpectralEstimate> spectrum;
};

/// Pipeline failure tagged with the stage it happened in.
class StageError : public std::runtime_error {
  public:
    StageError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
    [[nodiscard]] const std::string& stage() const { return stage_; }

  private:
    std::string stage_;
};

/// Optional per-level artifacts; empty paths are skipped.
struct LevelOutputs {
    std::string vtk_stem;     // writes <stem>_surface.vtk and <stem>_bulk.vtk
    std::string matrix_path;  // Matrix Market file of the unscaled operator
};

/// mesh -> level set -> cut geometry -> assembly -> scaling -> solve ->
/// errors -> optional condition number, for one h and sphere center.
LevelResult run_level(const RunConfig& config, double h, const Vec3& center, const LevelOutputs& outputs = {});

/// Fills the EOC fields of records[1..] from their predecessors.
void fill_eoc(std::vector<ConvergenceRecord>& records);

/// Sequential refinement sweep. If config.csv_path is set, rows are
/// written and flushed as each level completes.
std::vector<LevelResult> run_convergence_study(const RunConfig& config, std::ostream* log = nullptr);

struct RobustnessResult {
    std::vector<Vec3> offsets;
    std::vector<LevelResult> levels;
    double kappa_ratio = 0.0;  // max / min, 0 if kappa was not computed
    double l2_ratio_B = 0.0;
    double l2_ratio_S = 0.0;
};

/// Fixed h = config.h0, config.jitter_count seeded sphere-center offsets
/// uniform in [-amp, amp]^3.
RobustnessResult run_robustness_sweep(const RunConfig& config, std::ostream* log = nullptr);

inline constexpr const char* kCsvHeader =
    "h,N_B,N_S,errL2_B,errL2_S,errH1_B,errH1_S,kappa,eocL2_B,eocL2_S,eocH1_B,eocH1_S";
inline constexpr const char* kRobustnessCsvHeader =
    "offset_x,offset_y,offset_z,h,N_B,N_S,errL2_B,errL2_S,errH1_B,errH1_S,kappa";

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const ConvergenceRecord& r);
void write_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records);
/// Throws std::invalid_argument if records is empty and std::runtime_error if
/// the file cannot be written.
void write_csv(const std::string& path, const std::vector<ConvergenceRecord>& records);
std::vector<ConvergenceRecord> read_csv(std::istream& in);

void write_robustness_csv(std::ostream& out, const RobustnessResult& result);

/// Shortest round-trip decimal, independent of the global locale.
std::string format_double(double v);

}  // namespace cutfem
