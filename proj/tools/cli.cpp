#include "cli.hpp"

#include <CLI11.hpp>

#include <functional>
#include <string>

#include "ewp/harness.hpp"

namespace ewp {

namespace {

void add_run_settings(CLI::App& cmd, RunSettings& s) {
  cmd.add_option("--iters", s.iterations, "Iterations")->capture_default_str();
  cmd.add_option("--gamma", s.gamma, "Step size gamma")->capture_default_str();
  cmd.add_option("--epsilon", s.epsilon, "Epsilon of the edge weighting")->capture_default_str();
  cmd.add_option("--levels", s.levels, "Frame decomposition levels")->capture_default_str();
  cmd.add_option("--canny-low", s.detector.canny_low, "Canny low threshold (fraction of max)")
      ->capture_default_str();
  cmd.add_option("--canny-high", s.detector.canny_high, "Canny high threshold (fraction of max)")
      ->capture_default_str();
  cmd.add_option("--sigma", s.detector.gaussian_sigma, "Canny Gaussian sigma")
      ->capture_default_str();
  cmd.add_flag("--dilate", s.detector.dilate, "Dilate detected edge maps by one pixel");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Edge-weighted pFISTA reconstruction toolkit"};
  app.require_subcommand(1);
  std::function<void()> action;

  // phantom
  PhantomOptions ph;
  auto* phantom = app.add_subcommand("phantom", "Write a synthetic phantom image");
  phantom->add_option("--kind", ph.kind, "shepp or piecewise")->capture_default_str();
  phantom->add_option("--size", ph.size, "Image side length")->capture_default_str();
  phantom->add_option("--regions", ph.regions, "Piecewise regions, background included")
      ->capture_default_str();
  phantom->add_option("--seed", ph.seed, "Piecewise layout seed")->capture_default_str();
  phantom->add_option("--phase", ph.phase, "Maximum phase of a linear phase ramp (radians)")
      ->capture_default_str();
  phantom->add_option("--out", ph.out, "Output image file")->required();
  phantom->add_option("--edges", ph.edges, "Output oracle edge map (piecewise only)");
  phantom->callback([&] { action = [&] { cmd_phantom(ph); }; });

  // mask
  MaskOptions mk;
  auto* mask = app.add_subcommand("mask", "Write a k-space sampling mask");
  mask->add_option("--kind", mk.kind, "cartesian, random2d or full")->capture_default_str();
  mask->add_option("--af", mk.af, "Acceleration factor (cartesian)")->capture_default_str();
  mask->add_option("--rate", mk.rate, "Sampling rate (random2d)")->capture_default_str();
  mask->add_option("--size", mk.size, "Square mask side")->capture_default_str();
  mask->add_option("--height", mk.height, "Mask height (overrides --size)");
  mask->add_option("--width", mk.width, "Mask width (overrides --size)");
  mask->add_option("--seed", mk.seed, "Generator seed")->capture_default_str();
  mask->add_option("--center", mk.center, "Fully sampled centre fraction")->capture_default_str();
  mask->add_option("--out", mk.out, "Output mask file")->required();
  mask->callback([&] { action = [&] { cmd_mask(mk, out); }; });

  // recon
  ReconOptions rc;
  double lambda = 1e-4;
  auto* recon = app.add_subcommand("recon", "Simulate undersampling of an image and reconstruct it");
  recon->add_option("--image", rc.image, "Reference image file")->required();
  recon->add_option("--mask", rc.mask, "Sampling mask file")->required();
  recon->add_option("--edge", rc.edge, "none, detected or oracle")->capture_default_str();
  recon->add_option("--detector", rc.detector, "tv, sobel or canny")->capture_default_str();
  recon->add_option("--oracle", rc.oracle, "Oracle edge map for --edge oracle");
  recon->add_option("--lambda", lambda, "Threshold lambda (the threshold is lambda*gamma)")
      ->capture_default_str();
  add_run_settings(*recon, rc.settings);
  recon->add_option("--seed", rc.seed, "Mask seed recorded in the CSV row")->capture_default_str();
  recon->add_option("--out", rc.out, "Output reconstruction file")->required();
  recon->add_option("--error-map", rc.error_map, "Output |x - x_hat| as an edge-map grid");
  recon->add_option("--pgm", rc.pgm, "Output reconstruction magnitude as PGM");
  recon->add_option("--csv", rc.csv, "Append a metrics row to this CSV");
  recon->add_flag("--timing", rc.timing, "Record wall-clock seconds in the CSV");
  recon->callback([&] {
    action = [&] {
      rc.settings.lambda_gamma = lambda * rc.settings.gamma;
      const ResultRow row = cmd_recon(rc);
      out << kCsvHeader << "\n" << format_csv_row(row) << "\n";
    };
  });

  // experiment
  ExperimentOptions ex;
  auto* experiment = app.add_subcommand("experiment", "Sweep methods, masks and thresholds");
  experiment->add_option("--image", ex.image, "Reference image file")->required();
  experiment->add_option("--oracle", ex.oracle, "Oracle edge map (needed by oracle-edge)");
  experiment->add_option("--masks", ex.masks, "Comma list of cartesian:AF, random2d:RATE, full")
      ->capture_default_str();
  experiment->add_option("--mask-seed", ex.mask_seed, "Seed of every generated mask")
      ->capture_default_str();
  experiment->add_option("--center", ex.center, "Fully sampled centre fraction")
      ->capture_default_str();
  experiment->add_option("--methods", ex.methods, "Comma list of uniform, tv, sobel, canny, oracle")
      ->capture_default_str();
  experiment->add_option("--lambdas", ex.lambdas, "Comma list of lambda*gamma values");
  experiment->add_option("--lambda-min", ex.lambda_min, "Smallest lambda*gamma of the log grid")
      ->capture_default_str();
  experiment->add_option("--lambda-max", ex.lambda_max, "Largest lambda*gamma of the log grid")
      ->capture_default_str();
  experiment->add_option("--lambda-points", ex.lambda_points, "Points of the log grid")
      ->capture_default_str();
  experiment->add_option("--weighted-lambda-scale", ex.weighted_lambda_scale,
                         "Factor applied to the grid for edge-weighted methods")
      ->capture_default_str();
  add_run_settings(*experiment, ex.settings);
  experiment->add_option("--threads", ex.threads, "Concurrent reconstructions")
      ->capture_default_str();
  experiment->add_flag("--timing", ex.timing, "Record wall-clock seconds (breaks byte equality)");
  experiment->add_option("--csv", ex.csv, "Output CSV")->required();
  experiment->callback([&] {
    action = [&] {
      const auto rows = cmd_experiment(ex);
      out << rows.size() << " rows written to " << ex.csv.string() << "\n";
    };
  });

  // eval
  EvalOptions ev;
  auto* eval = app.add_subcommand("eval", "Compare two grid files of the same kind");
  eval->add_option("--ref", ev.reference, "Reference grid")->required();
  eval->add_option("--test", ev.test, "Grid to evaluate")->required();
  eval->callback([&] { action = [&] { cmd_eval(ev, out); }; });

  // export
  ExportOptions xp;
  auto* exp = app.add_subcommand("export", "Write a grid file as an 8-bit PGM");
  exp->add_option("--in", xp.in, "Input grid")->required();
  exp->add_option("--out", xp.out, "Output PGM")->required();
  exp->add_option("--scaling", xp.scaling, "minmax or absolute01")->capture_default_str();
  exp->callback([&] { action = [&] { cmd_export(xp); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (action) action();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::InvalidArgument ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace ewp
