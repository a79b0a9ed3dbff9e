#include "illusory/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "illusory/energy.hpp"
#include "illusory/error.hpp"
#include "illusory/io.hpp"
#include "illusory/shape.hpp"
#include "illusory/solver.hpp"

namespace illusory::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* edge_kind_name(EdgeKind k) { return k == EdgeKind::kExpSquare ? "exp" : "rational"; }

EdgeKind parse_edge_kind(const std::string& s) {
  if (s == "exp") return EdgeKind::kExpSquare;
  if (s == "rational") return EdgeKind::kRational;
  throw Error(ErrorCode::kInvalidArgument, "unknown edge function '" + s + "'");
}

void write_energy_csv(const fs::path& path, const IterationReport& report) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  out.imbue(std::locale::classic());
  out << "iter,energy,rho,rms_update,cg_iters,cg_residual\n";
  out << std::setprecision(17);
  for (const auto& s : report.steps) {
    out << s.iter << ',' << s.energy << ',' << s.rho << ',' << s.rms_update << ',' << s.cg_iters
        << ',' << s.cg_residual << '\n';
  }
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
}

}  // namespace

json parameters_to_json(const RunOptions& o) {
  return json{
      {"alpha", o.alpha},
      {"beta", o.beta},
      {"lambda", o.lambda},
      {"epsilon_factor", o.epsilon_factor},
      {"sigma_factor", o.sigma_factor},
      {"gain", o.gain},
      {"g_kind", edge_kind_name(o.g_kind)},
      {"raw_gradient", o.raw_gradient},
      {"delta", o.delta},
      {"max_outer", o.max_outer},
      {"cg_tol", o.cg_tol},
      {"threshold", o.threshold},
      {"presmooth", o.presmooth},
      {"snapshot_every", o.snapshot_every},
      {"invert", o.invert},
      {"bin_threshold", o.bin_threshold},
  };
}

RunOptions options_from_summary(const json& summary) {
  RunOptions o;
  const json& p = summary.at("parameters");
  o.input = summary.at("input").get<std::string>();
  o.alpha = p.at("alpha").get<double>();
  o.beta = p.at("beta").get<double>();
  o.lambda = p.at("lambda").get<double>();
  o.epsilon_factor = p.at("epsilon_factor").get<double>();
  o.sigma_factor = p.at("sigma_factor").get<double>();
  o.gain = p.at("gain").get<double>();
  o.g_kind = parse_edge_kind(p.at("g_kind").get<std::string>());
  o.raw_gradient = p.at("raw_gradient").get<bool>();
  o.delta = p.at("delta").get<double>();
  o.max_outer = p.at("max_outer").get<long>();
  o.cg_tol = p.at("cg_tol").get<double>();
  o.threshold = p.at("threshold").get<double>();
  o.presmooth = p.at("presmooth").get<int>();
  o.snapshot_every = p.at("snapshot_every").get<long>();
  o.invert = p.at("invert").get<bool>();
  o.bin_threshold = p.at("bin_threshold").get<int>();
  return o;
}

int run_command(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  try {
    const ConfigurationMask mask = io::load_mask(opts.input, opts.invert, opts.bin_threshold);
    const double h = mask.geometry().h();

    CanyonParams<double> cp;
    cp.alpha = opts.alpha;
    cp.beta = opts.beta;
    cp.sigma = opts.sigma_factor * h;
    cp.g_kind = opts.g_kind;
    cp.gain = opts.gain;
    cp.normalize_gradient = !opts.raw_gradient;
    if (!(opts.sigma_factor >= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "sigma factor must be >= 1");
    }
    if (!(opts.threshold > 0.0 && opts.threshold < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "threshold must lie in (0, 1)");
    }
    if (opts.presmooth < 0 || opts.snapshot_every < 0) {
      throw Error(ErrorCode::kInvalidArgument, "step counts must be >= 0");
    }

    SolverConfig<double> cfg{
        ModelParams<double>(build_canyon(mask, cp), mask, opts.epsilon_factor * h, opts.lambda)};
    cfg.cg.rel_tol = opts.cg_tol;
    cfg.delta = opts.delta;
    cfg.max_outer = opts.max_outer;
    cfg.presmooth_steps = opts.presmooth;
    cfg.snapshot_every = opts.snapshot_every;
    if (!(cfg.cg.rel_tol > 0.0 && cfg.cg.rel_tol <= 1e-6)) {
      throw Error(ErrorCode::kInvalidArgument, "cg tolerance must lie in (0, 1e-6]");
    }
    if (!(cfg.delta > 0.0) || cfg.max_outer <= 0) {
      throw Error(ErrorCode::kInvalidArgument, "delta and max-outer must be positive");
    }

    fs::create_directories(opts.out_dir);
    io::save_field_image(cfg.model.canyon().field(), opts.out_dir / "canyon.pgm");

    const SnapshotSink<double> sink = [&](long n, const PhaseField<double>& z) {
      char name[32];
      std::snprintf(name, sizeof(name), "snap_%06ld.pgm", n);
      io::save_field_image(z, opts.out_dir / name);
    };
    const RunResult<double> result = run(cfg, sink);
    const IterationReport& report = result.report;

    const ShapeMask shape = extract_shape(result.field, opts.threshold);
    const ComponentSet components = connected_components(shape);

    write_energy_csv(opts.out_dir / "energy.csv", report);
    io::save_field_image(result.field, opts.out_dir / "final_phase.pgm");
    io::save_shape_image(shape, opts.out_dir / "shape.pgm");

    json centroids = json::array();
    for (const auto& [cx, cy] : components.centroids) centroids.push_back({cx, cy});
    const auto sqrt_rho = report.sqrt_rho_partial_sums();
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    json summary{
        {"input", opts.input.string()},
        {"width", mask.width()},
        {"height", mask.height()},
        {"h", h},
        {"parameters", parameters_to_json(opts)},
        {"resolved", {{"epsilon", cfg.model.epsilon()}, {"sigma", cp.sigma}}},
        {"status", to_string(report.status)},
        {"outer_iterations", report.steps.size()},
        {"initial_energy", report.initial_energy},
        {"final_energy", report.final_energy()},
        {"final_rms_update", report.final_rms_update()},
        {"euler_lagrange_residual", euler_lagrange_residual(result.field, cfg.model)},
        {"sqrt_rho_sum", sqrt_rho.empty() ? 0.0 : sqrt_rho.back()},
        {"shape_cells", shape.count()},
        {"components",
         {{"count", components.count}, {"areas", components.areas}, {"centroids", centroids}}},
        {"elapsed_seconds", elapsed},
    };
    write_json(opts.out_dir / "summary.json", summary);

    out << to_string(report.status) << " after " << report.steps.size()
        << " iterations, energy " << std::setprecision(10) << report.final_energy() << ", "
        << components.count << " component(s), " << shape.count() << " shape cells\n";
    return report.status == RunStatus::kConverged ? kExitConverged : kExitMaxOuter;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Illusory shapes from inducer images via phase transitions"};
  RunOptions opts;
  std::string input;
  std::string out_dir = opts.out_dir.string();
  std::string g_name = "exp";
  std::string from_summary;

  app.add_option("--input", input, "8-bit PGM inducer image (dark = inducer)");
  app.add_option("--out-dir", out_dir, "Directory for run outputs")->capture_default_str();
  app.add_option("--from-summary", from_summary,
                 "Re-run with the parameters (and input) recorded in a summary.json");
  app.add_option("--alpha", opts.alpha, "Canyon floor")->capture_default_str();
  app.add_option("--beta", opts.beta, "Canyon drop")->capture_default_str();
  app.add_option("--lambda", opts.lambda, "Inducer confinement weight")->capture_default_str();
  app.add_option("--epsilon-factor", opts.epsilon_factor, "Transition width in grid cells")
      ->capture_default_str();
  app.add_option("--sigma-factor", opts.sigma_factor, "Mollification scale in grid cells")
      ->capture_default_str();
  app.add_option("--gain", opts.gain, "Slope applied to the normalised edge strength")
      ->capture_default_str();
  app.add_option("--g", g_name, "Edge function")
      ->check(CLI::IsMember({"exp", "rational"}))
      ->capture_default_str();
  app.add_flag("--raw-gradient", opts.raw_gradient,
               "Feed gain * |grad| to the edge function without max-normalisation");
  app.add_option("--delta", opts.delta, "Outer RMS update tolerance")->capture_default_str();
  app.add_option("--max-outer", opts.max_outer, "Outer iteration cap")->capture_default_str();
  app.add_option("--cg-tol", opts.cg_tol, "Inner CG relative residual")->capture_default_str();
  app.add_option("--threshold", opts.threshold, "Shape threshold")->capture_default_str();
  app.add_option("--presmooth", opts.presmooth, "Heat steps applied to the initial field")
      ->capture_default_str();
  app.add_option("--snapshot-every", opts.snapshot_every, "Write snap_%06d.pgm every N steps")
      ->capture_default_str();
  app.add_flag("--invert", opts.invert, "Treat light pixels as inducers");
  app.add_option("--bin-threshold", opts.bin_threshold, "Luminance below this is an inducer")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (!from_summary.empty()) {
      std::ifstream in(from_summary);
      if (!in) throw Error(ErrorCode::kUnreadableFile, from_summary);
      opts = options_from_summary(json::parse(in));
      if (!input.empty()) opts.input = input;
    } else {
      if (input.empty()) throw Error(ErrorCode::kInvalidArgument, "--input is required");
      opts.input = input;
      opts.g_kind = parse_edge_kind(g_name);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  opts.out_dir = out_dir;
  return run_command(opts, out, err);
}

}  // namespace illusory::cli
