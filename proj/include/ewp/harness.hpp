#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ewp/core.hpp"
#include "ewp/edges.hpp"
#include "ewp/grid_io.hpp"

namespace ewp {

// --- PGM export ------------------------------------------------------------

enum class PgmScaling {
  minmax,     // [min, max] -> [0, 255]; a constant grid maps to 0
  absolute01  // round(255 * v), values clamped to [0, 1]
};

const char* to_string(PgmScaling s);
PgmScaling parse_pgm_scaling(const std::string& name);

/// Binary PGM (P5, maxval 255).
std::vector<std::uint8_t> encode_pgm(const RealGrid& values, PgmScaling scaling);
void export_pgm(const RealGrid& values, const std::filesystem::path& path, PgmScaling scaling);

/// Real values shown for a grid file: magnitude for images and k-space, the
/// 0/1 cells of a mask, the weights of an edge map.
RealGrid display_values(const AnyGrid& grid);

// --- Results table ---------------------------------------------------------

constexpr const char* kCsvHeader =
    "method,detector,mask_kind,mask_param,seed,lambda_gamma,iters,rlne,psnr_std,psnr_paper,"
    "seconds";

struct ResultRow {
  std::string method;
  std::string detector;
  std::string mask_kind;
  double mask_param = 0.0;
  std::uint64_t seed = 0;
  double lambda_gamma = 0.0;
  std::size_t iters = 0;
  double rlne = 0.0;
  double psnr_std = 0.0;
  double psnr_paper = 0.0;
  std::optional<double> seconds;  // written as NA when absent
};

/// One CSV line without the trailing newline. Numbers use %.17g so that a
/// row read back gives the same doubles.
std::string format_csv_row(const ResultRow& row);

/// Appends rows, writing the header first when the file is new or empty.
void append_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows);

/// Writes header and rows, replacing any existing file.
void write_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows);

// --- Masks and methods -----------------------------------------------------

struct MaskSpec {
  MaskKind kind = MaskKind::cartesian1d;
  double param = 4.0;  // acceleration for cartesian, rate for random2d, unused for full
  std::uint64_t seed = 1;
  double center_fraction = 0.04;
};

/// "cartesian:8", "random2d:0.18" or "full".
MaskSpec parse_mask_spec(const std::string& text, std::uint64_t seed, double center_fraction);
SamplingMask make_mask(const MaskSpec& spec, std::size_t height, std::size_t width);

/// Parameter written to the mask_param column for a mask read from a file:
/// width / sampled columns for cartesian, the achieved rate otherwise.
double mask_param_of(const SamplingMask& mask);

enum class Method { uniform, tv_edge, sobel_edge, canny_edge, oracle_edge };

const char* to_string(Method m);
/// Accepts the full names above and the short forms uniform, tv, sobel, canny, oracle.
Method parse_method(const std::string& name);

/// Comma-separated lists.
std::vector<Method> parse_method_list(const std::string& text);
std::vector<double> parse_number_list(const std::string& text);

/// n points from lo to hi, evenly spaced in log10.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

// --- Reconstruction runs ---------------------------------------------------

struct RunSettings {
  std::size_t iterations = 100;
  double lambda_gamma = 1e-4;
  double gamma = 1.0;
  double epsilon = 0.1;
  std::size_t levels = 3;
  DetectorConfig detector;  // the detector field is overridden by the method
};

struct RunOutcome {
  ResultRow row;
  ComplexImage image;
  EdgeWeightMap edge_map_used;  // all zero for the uniform method
  double objective_initial = 0.0;
  double objective_final = 0.0;
};

/// Simulates y = mask .* fft2(reference) and reconstructs with the given
/// method. Timing is recorded in row.seconds only when `timing` is set.
RunOutcome run_reconstruction(const ComplexImage& reference, const SamplingMask& mask,
                              const std::string& mask_kind, double mask_param, Method method,
                              const RunSettings& settings,
                              const std::optional<EdgeWeightMap>& oracle, bool timing,
                              bool objectives);

struct ExperimentConfig {
  std::vector<MaskSpec> masks;
  std::vector<Method> methods;
  std::vector<double> lambdas;
  /// Multiplies the lambda grid of the edge-weighted methods. With the
  /// default epsilon = 0.1 and scale 0.1, a pixel of weight 0 gets the same
  /// threshold as the uniform method at the same grid point.
  double weighted_lambda_scale = 1.0;
  RunSettings settings;
  std::size_t threads = 1;
  bool timing = false;
  bool objectives = false;
};

/// Runs every (mask, method, lambda) combination, in that nesting order.
/// Runs may execute concurrently; the result order never depends on it.
std::vector<RunOutcome> run_experiment(const ComplexImage& reference,
                                       const std::optional<EdgeWeightMap>& oracle,
                                       const ExperimentConfig& cfg);

// --- Commands --------------------------------------------------------------

struct PhantomOptions {
  std::string kind = "shepp";  // shepp or piecewise
  std::size_t size = 256;
  std::size_t regions = 5;
  std::uint64_t seed = 0;
  double phase = 0.0;  // maximum phase of an optional linear ramp, radians
  std::filesystem::path out;
  std::optional<std::filesystem::path> edges;
};

struct MaskOptions {
  std::string kind = "cartesian";  // cartesian, random2d or full
  double af = 4.0;
  double rate = 0.25;
  std::size_t size = 256;
  std::optional<std::size_t> height;  // override size per axis
  std::optional<std::size_t> width;
  std::uint64_t seed = 1;
  double center = 0.04;
  std::filesystem::path out;
};

struct ReconOptions {
  std::filesystem::path image;
  std::filesystem::path mask;
  std::string edge = "none";  // none, detected or oracle
  std::string detector = "tv";
  std::optional<std::filesystem::path> oracle;
  RunSettings settings;
  std::uint64_t seed = 0;  // recorded in the CSV row
  std::filesystem::path out;
  std::optional<std::filesystem::path> error_map;
  std::optional<std::filesystem::path> pgm;
  std::optional<std::filesystem::path> csv;
  bool timing = false;
};

struct ExperimentOptions {
  std::filesystem::path image;
  std::optional<std::filesystem::path> oracle;
  std::string masks = "cartesian:6,cartesian:8";
  std::uint64_t mask_seed = 1;
  double center = 0.04;
  std::string methods = "uniform,tv,oracle";
  std::optional<std::string> lambdas;
  double lambda_min = 1e-4;
  double lambda_max = 1e-2;
  std::size_t lambda_points = 5;
  double weighted_lambda_scale = 0.1;
  RunSettings settings;
  std::size_t threads = 1;
  bool timing = false;
  std::filesystem::path csv;
};

struct EvalOptions {
  std::filesystem::path reference;
  std::filesystem::path test;
};

struct ExportOptions {
  std::filesystem::path in;
  std::filesystem::path out;
  std::string scaling = "minmax";
};

void cmd_phantom(const PhantomOptions& opt);
void cmd_mask(const MaskOptions& opt, std::ostream& log);
ResultRow cmd_recon(const ReconOptions& opt);
std::vector<ResultRow> cmd_experiment(const ExperimentOptions& opt);
/// Prints "name value" lines: rlne and both PSNRs for images, squared error
/// and Dice of the thresholded maps for edge maps, disagreement count for masks.
void cmd_eval(const EvalOptions& opt, std::ostream& out);
void cmd_export(const ExportOptions& opt);

}  // namespace ewp
