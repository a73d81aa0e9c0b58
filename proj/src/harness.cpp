#include "ewp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "ewp/fourier.hpp"
#include "ewp/masks.hpp"
#include "ewp/metrics.hpp"
#include "ewp/phantoms.hpp"
#include "ewp/solver.hpp"

namespace ewp {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

double parse_double(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument,
              std::string("invalid ") + what + " '" + text + "'");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

void write_text(const std::filesystem::path& path, const std::string& text,
                std::ios::openmode mode) {
  std::ofstream out(path, std::ios::binary | mode);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

ComplexImage as_image(const AnyGrid& grid) {
  if (const auto* img = std::get_if<ComplexImage>(&grid)) return *img;
  if (const auto* k = std::get_if<KSpaceGrid>(&grid)) {
    return ComplexImage(k->height(), k->width(), k->data());
  }
  throw Error(ErrorCode::KindMismatch, "expected an image or k-space grid");
}

std::optional<Detector> detector_of(Method m) {
  switch (m) {
    case Method::tv_edge: return Detector::tv;
    case Method::sobel_edge: return Detector::sobel;
    case Method::canny_edge: return Detector::canny;
    case Method::uniform:
    case Method::oracle_edge: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

// --- PGM -------------------------------------------------------------------

const char* to_string(PgmScaling s) {
  return s == PgmScaling::minmax ? "minmax" : "absolute01";
}

PgmScaling parse_pgm_scaling(const std::string& name) {
  if (name == "minmax") return PgmScaling::minmax;
  if (name == "absolute01") return PgmScaling::absolute01;
  throw Error(ErrorCode::InvalidArgument, "unknown PGM scaling '" + name + "'");
}

std::vector<std::uint8_t> encode_pgm(const RealGrid& values, PgmScaling scaling) {
  require_finite(values, "encode_pgm");
  const std::string header = "P5\n" + std::to_string(values.width()) + " " +
                             std::to_string(values.height()) + "\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  bytes.reserve(header.size() + values.size());

  double lo = 0.0, range = 0.0;
  if (scaling == PgmScaling::minmax) {
    const auto [mn, mx] = std::minmax_element(values.data().begin(), values.data().end());
    lo = *mn;
    range = *mx - *mn;
  }
  for (double v : values.data()) {
    double unit = 0.0;
    if (scaling == PgmScaling::minmax) {
      unit = range > 0.0 ? (v - lo) / range : 0.0;
    } else {
      unit = std::clamp(v, 0.0, 1.0);
    }
    bytes.push_back(static_cast<std::uint8_t>(std::lround(255.0 * unit)));
  }
  return bytes;
}

void export_pgm(const RealGrid& values, const std::filesystem::path& path, PgmScaling scaling) {
  write_bytes(path, encode_pgm(values, scaling));
}

RealGrid display_values(const AnyGrid& grid) {
  return std::visit(
      [](const auto& g) -> RealGrid {
        using G = std::decay_t<decltype(g)>;
        RealGrid out(g.height(), g.width());
        for (std::size_t i = 0; i < g.size(); ++i) {
          if constexpr (std::is_same_v<G, ComplexImage> || std::is_same_v<G, KSpaceGrid>) {
            out[i] = std::abs(g[i]);
          } else {
            out[i] = static_cast<double>(g[i]);
          }
        }
        return out;
      },
      grid);
}

// --- CSV -------------------------------------------------------------------

std::string format_csv_row(const ResultRow& row) {
  std::string line;
  line += row.method + ",";
  line += row.detector + ",";
  line += row.mask_kind + ",";
  line += format_number(row.mask_param) + ",";
  line += std::to_string(row.seed) + ",";
  line += format_number(row.lambda_gamma) + ",";
  line += std::to_string(row.iters) + ",";
  line += format_number(row.rlne) + ",";
  line += format_number(row.psnr_std) + ",";
  line += format_number(row.psnr_paper) + ",";
  line += row.seconds ? format_number(*row.seconds) : "NA";
  return line;
}

void append_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  std::string text;
  if (fresh) text += std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) text += format_csv_row(r) + "\n";
  write_text(path, text, std::ios::app);
}

void write_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
  std::string text = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) text += format_csv_row(r) + "\n";
  write_text(path, text, std::ios::trunc);
}

// --- Masks and methods -----------------------------------------------------

MaskSpec parse_mask_spec(const std::string& text, std::uint64_t seed, double center_fraction) {
  MaskSpec spec;
  spec.seed = seed;
  spec.center_fraction = center_fraction;
  const auto parts = split(text, ':');
  if (parts.size() == 1 && parts[0] == "full") {
    spec.kind = MaskKind::full;
    spec.param = 1.0;
    return spec;
  }
  if (parts.size() != 2) {
    throw Error(ErrorCode::InvalidArgument,
                "mask spec '" + text + "' is not kind:param (cartesian:AF, random2d:RATE, full)");
  }
  if (parts[0] == "cartesian") {
    spec.kind = MaskKind::cartesian1d;
  } else if (parts[0] == "random2d") {
    spec.kind = MaskKind::random2d;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown mask kind '" + parts[0] + "'");
  }
  spec.param = parse_double(parts[1], "mask parameter");
  return spec;
}

SamplingMask make_mask(const MaskSpec& spec, std::size_t height, std::size_t width) {
  switch (spec.kind) {
    case MaskKind::cartesian1d:
      return cartesian_mask(height, width, spec.param, spec.center_fraction, spec.seed);
    case MaskKind::random2d:
      return random2d_mask(height, width, spec.param, spec.center_fraction, spec.seed);
    case MaskKind::full: return SamplingMask::full(height, width);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown mask kind");
}

double mask_param_of(const SamplingMask& mask) {
  switch (mask.kind()) {
    case MaskKind::cartesian1d: {
      const std::size_t columns = mask.sampled_count() / mask.height();
      return columns == 0 ? 0.0 : static_cast<double>(mask.width()) / static_cast<double>(columns);
    }
    case MaskKind::random2d: return mask.achieved_rate();
    case MaskKind::full: return 1.0;
  }
  return 0.0;
}

const char* to_string(Method m) {
  switch (m) {
    case Method::uniform: return "uniform";
    case Method::tv_edge: return "tv-edge";
    case Method::sobel_edge: return "sobel-edge";
    case Method::canny_edge: return "canny-edge";
    case Method::oracle_edge: return "oracle-edge";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "uniform") return Method::uniform;
  if (name == "tv" || name == "tv-edge") return Method::tv_edge;
  if (name == "sobel" || name == "sobel-edge") return Method::sobel_edge;
  if (name == "canny" || name == "canny-edge") return Method::canny_edge;
  if (name == "oracle" || name == "oracle-edge") return Method::oracle_edge;
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + name + "'");
}

std::vector<Method> parse_method_list(const std::string& text) {
  std::vector<Method> out;
  for (const auto& p : split(text, ',')) out.push_back(parse_method(p));
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty method list");
  return out;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(parse_double(p, "number"));
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty number list");
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi) || n == 0) {
    throw Error(ErrorCode::InvalidArgument, "log grid needs 0 < lo <= hi and at least one point");
  }
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = std::pow(10.0, a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

// --- Runs ------------------------------------------------------------------

RunOutcome run_reconstruction(const ComplexImage& reference, const SamplingMask& mask,
                              const std::string& mask_kind, double mask_param, Method method,
                              const RunSettings& settings,
                              const std::optional<EdgeWeightMap>& oracle, bool timing,
                              bool objectives) {
  require_same_shape(reference.shape(), mask.shape(), "reconstruction (image vs mask)");
  SolverConfig cfg;
  cfg.iterations = settings.iterations;
  cfg.threshold.gamma = settings.gamma;
  cfg.threshold.epsilon = settings.epsilon;
  cfg.threshold.lambda = settings.gamma > 0.0 ? settings.lambda_gamma / settings.gamma : 0.0;
  cfg.dc.gamma = settings.gamma;
  cfg.levels = settings.levels;
  cfg.detector = settings.detector;
  cfg.track_objective = false;
  switch (method) {
    case Method::uniform: cfg.edge_mode = EdgeMode::none; break;
    case Method::oracle_edge:
      if (!oracle) throw Error(ErrorCode::InvalidArgument, "oracle-edge needs an oracle edge map");
      cfg.edge_mode = EdgeMode::oracle;
      break;
    default:
      cfg.edge_mode = EdgeMode::detected;
      cfg.detector.detector = *detector_of(method);
      break;
  }

  const KSpaceGrid y = apply_mask(fft2_centered(reference), mask);
  ReconResult result = pfista_reconstruct(y, mask, cfg, std::nullopt, oracle);

  RunOutcome out{ResultRow{}, std::move(result.image),
                 result.edge_map_used.value_or(EdgeWeightMap(mask.height(), mask.width())),
                 0.0, 0.0};
  if (objectives) {
    out.objective_initial = objective_value(zero_filled(y, mask), y, mask, result.edge_map_used,
                                            cfg.threshold, cfg.levels, cfg.shrink_approximation);
    out.objective_final = objective_value(out.image, y, mask, result.edge_map_used,
                                          cfg.threshold, cfg.levels, cfg.shrink_approximation);
  }

  ResultRow& row = out.row;
  row.method = to_string(method);
  if (const auto d = detector_of(method)) {
    row.detector = to_string(*d);
  } else {
    row.detector = method == Method::oracle_edge ? "oracle" : "none";
  }
  row.mask_kind = mask_kind;
  row.mask_param = mask_param;
  row.seed = mask.seed();
  row.lambda_gamma = settings.lambda_gamma;
  row.iters = settings.iterations;
  row.rlne = rlne(reference, out.image);
  row.psnr_std = psnr(reference, out.image, PsnrMode::standard);
  row.psnr_paper = psnr(reference, out.image, PsnrMode::paper_literal);
  if (timing) row.seconds = result.elapsed_seconds;
  return out;
}

std::vector<RunOutcome> run_experiment(const ComplexImage& reference,
                                       const std::optional<EdgeWeightMap>& oracle,
                                       const ExperimentConfig& cfg) {
  if (cfg.masks.empty() || cfg.methods.empty() || cfg.lambdas.empty()) {
    throw Error(ErrorCode::InvalidArgument, "experiment needs masks, methods and lambdas");
  }
  if (!(cfg.weighted_lambda_scale > 0.0) || !std::isfinite(cfg.weighted_lambda_scale)) {
    throw Error(ErrorCode::InvalidArgument, "weighted lambda scale must be positive");
  }
  for (Method m : cfg.methods) {
    if (m == Method::oracle_edge && !oracle) {
      throw Error(ErrorCode::InvalidArgument, "oracle-edge needs an oracle edge map");
    }
  }
  if (oracle) require_same_shape(reference.shape(), oracle->shape(), "experiment (oracle)");

  std::vector<SamplingMask> masks;
  for (const auto& spec : cfg.masks) {
    masks.push_back(make_mask(spec, reference.height(), reference.width()));
  }

  struct Job {
    std::size_t mask;
    Method method;
    double lambda_gamma;
  };
  std::vector<Job> jobs;
  for (std::size_t m = 0; m < masks.size(); ++m) {
    for (Method method : cfg.methods) {
      const double scale = method == Method::uniform ? 1.0 : cfg.weighted_lambda_scale;
      for (double lg : cfg.lambdas) jobs.push_back({m, method, lg * scale});
    }
  }

  std::vector<std::optional<RunOutcome>> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        const Job& job = jobs[j];
        RunSettings settings = cfg.settings;
        settings.lambda_gamma = job.lambda_gamma;
        const MaskSpec& spec = cfg.masks[job.mask];
        results[j] = run_reconstruction(reference, masks[job.mask], to_string(spec.kind),
                                        spec.kind == MaskKind::full ? 1.0 : spec.param,
                                        job.method, settings, oracle, cfg.timing,
                                        cfg.objectives);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(cfg.threads, 1, jobs.size());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<RunOutcome> out;
  out.reserve(results.size());
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

// --- Commands --------------------------------------------------------------

void cmd_phantom(const PhantomOptions& opt) {
  if (opt.kind == "shepp") {
    if (opt.edges) {
      throw Error(ErrorCode::InvalidArgument, "--edges is only available for piecewise phantoms");
    }
    ComplexImage img = shepp_logan(opt.size);
    if (opt.phase != 0.0) img = with_phase_ramp(img, opt.phase);
    write_grid(img, opt.out);
    return;
  }
  if (opt.kind == "piecewise") {
    if (opt.regions < 2) throw Error(ErrorCode::InvalidArgument, "--regions must be at least 2");
    PiecewisePhantom ph = piecewise_phantom(opt.size, opt.regions, opt.seed);
    if (opt.phase != 0.0) ph.image = with_phase_ramp(ph.image, opt.phase);
    write_grid(ph.image, opt.out);
    if (opt.edges) write_grid(ph.edges, *opt.edges);
    return;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown phantom kind '" + opt.kind + "'");
}

void cmd_mask(const MaskOptions& opt, std::ostream& log) {
  const std::size_t h = opt.height.value_or(opt.size);
  const std::size_t w = opt.width.value_or(opt.size);
  MaskSpec spec;
  spec.seed = opt.seed;
  spec.center_fraction = opt.center;
  if (opt.kind == "cartesian") {
    spec.kind = MaskKind::cartesian1d;
    spec.param = opt.af;
  } else if (opt.kind == "random2d") {
    spec.kind = MaskKind::random2d;
    spec.param = opt.rate;
  } else if (opt.kind == "full") {
    spec.kind = MaskKind::full;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown mask kind '" + opt.kind + "'");
  }
  const SamplingMask mask = make_mask(spec, h, w);
  write_grid(mask, opt.out);
  log << to_string(mask.kind()) << " " << h << "x" << w << " sampled " << mask.sampled_count()
      << " rate " << format_number(mask.achieved_rate()) << "\n";
}

ResultRow cmd_recon(const ReconOptions& opt) {
  const ComplexImage reference = read_image(opt.image);
  SamplingMask cells = read_mask(opt.mask);
  const SamplingMask mask(cells.height(), cells.width(), cells.cells(), cells.kind(), opt.seed,
                          cells.nominal_rate());
  require_same_shape(reference.shape(), mask.shape(), "recon (image vs mask)");

  Method method = Method::uniform;
  const EdgeMode mode = parse_edge_mode(opt.edge);
  std::optional<EdgeWeightMap> oracle;
  if (mode == EdgeMode::detected) {
    method = parse_method(to_string(parse_detector(opt.detector)));
  } else if (mode == EdgeMode::oracle) {
    if (!opt.oracle) throw Error(ErrorCode::InvalidArgument, "--edge oracle needs --oracle");
    oracle = read_edgemap(*opt.oracle);
    method = Method::oracle_edge;
  }

  const RunOutcome run = run_reconstruction(reference, mask, to_string(mask.kind()),
                                            mask_param_of(mask), method, opt.settings, oracle,
                                            opt.timing, false);
  write_grid(run.image, opt.out);
  if (opt.error_map) {
    // Edge-map grids hold values in [0,1]; larger errors are clipped.
    std::vector<double> v(reference.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = std::min(1.0, std::abs(reference[i] - run.image[i]));
    }
    write_grid(EdgeWeightMap(reference.height(), reference.width(), std::move(v)), *opt.error_map);
  }
  if (opt.pgm) export_pgm(display_values(run.image), *opt.pgm, PgmScaling::minmax);
  if (opt.csv) append_csv(*opt.csv, {run.row});
  return run.row;
}

std::vector<ResultRow> cmd_experiment(const ExperimentOptions& opt) {
  const ComplexImage reference = read_image(opt.image);
  std::optional<EdgeWeightMap> oracle;
  if (opt.oracle) oracle = read_edgemap(*opt.oracle);

  ExperimentConfig cfg;
  for (const auto& m : split(opt.masks, ',')) {
    cfg.masks.push_back(parse_mask_spec(m, opt.mask_seed, opt.center));
  }
  cfg.methods = parse_method_list(opt.methods);
  cfg.lambdas = opt.lambdas ? parse_number_list(*opt.lambdas)
                            : log_grid(opt.lambda_min, opt.lambda_max, opt.lambda_points);
  cfg.weighted_lambda_scale = opt.weighted_lambda_scale;
  cfg.settings = opt.settings;
  cfg.threads = opt.threads;
  cfg.timing = opt.timing;

  std::vector<ResultRow> rows;
  for (auto& run : run_experiment(reference, oracle, cfg)) rows.push_back(std::move(run.row));
  write_csv(opt.csv, rows);
  return rows;
}

void cmd_eval(const EvalOptions& opt, std::ostream& out) {
  const GridKind kind = peek_kind(opt.reference);
  const AnyGrid ref = read_grid(opt.reference, kind);
  const AnyGrid test = read_grid(opt.test, kind);

  if (kind == GridKind::image || kind == GridKind::kspace) {
    const ComplexImage a = as_image(ref);
    const ComplexImage b = as_image(test);
    require_same_shape(a.shape(), b.shape(), "eval");
    out << "rlne " << format_number(rlne(a, b)) << "\n";
    out << "psnr_std " << format_number(psnr(a, b, PsnrMode::standard)) << "\n";
    out << "psnr_paper " << format_number(psnr(a, b, PsnrMode::paper_literal)) << "\n";
    return;
  }
  if (kind == GridKind::edgemap) {
    const auto& a = std::get<EdgeWeightMap>(ref);
    const auto& b = std::get<EdgeWeightMap>(test);
    require_same_shape(a.shape(), b.shape(), "eval");
    LabelGrid la(a.height(), a.width()), lb(b.height(), b.width());
    for (std::size_t i = 0; i < a.size(); ++i) {
      la[i] = a[i] >= 0.5 ? 1 : 0;
      lb[i] = b[i] >= 0.5 ? 1 : 0;
    }
    out << "edge_loss " << format_number(edge_loss(a, b)) << "\n";
    out << "dice " << format_number(dice(la, lb, 1)) << "\n";
    return;
  }
  const auto& a = std::get<SamplingMask>(ref);
  const auto& b = std::get<SamplingMask>(test);
  require_same_shape(a.shape(), b.shape(), "eval");
  std::size_t differ = 0;
  for (std::size_t i = 0; i < a.size(); ++i) differ += a[i] != b[i] ? 1 : 0;
  out << "differing_cells " << differ << "\n";
}

void cmd_export(const ExportOptions& opt) {
  const PgmScaling scaling = parse_pgm_scaling(opt.scaling);
  const AnyGrid grid = read_grid(opt.in, peek_kind(opt.in));
  export_pgm(display_values(grid), opt.out, scaling);
}

}  // namespace ewp
