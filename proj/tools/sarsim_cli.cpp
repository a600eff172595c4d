// sarsim: simulate SAR ocean scenes with ship wakes, add speckle, despeckle, score.
#include <CLI11.hpp>
#include <iostream>
#include <numbers>

#include "sarsim/errors.hpp"
#include "sarsim/experiment.hpp"

namespace {

using namespace sarsim;
namespace fs = std::filesystem;

enum ExitCode { kOk = 0, kValidation = 1, kNumerical = 2 };

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string scale;
  std::vector<int> looks;
  std::string look_model = "moment-matched";
};

struct SolverFlags {
  std::string reg = "cauchy";
  std::optional<double> gamma;
  std::optional<double> gamma_scale;
  std::optional<double> omega;
  std::optional<double> lambda;
  std::optional<std::size_t> levels;
  std::optional<std::string> wavelet;
  std::optional<std::size_t> max_iter;
  std::optional<double> tol;
};

void add_solver_flags(CLI::App* app, SolverFlags& f) {
  app->add_option("--reg", f.reg, "Regulariser")->check(CLI::IsMember({"cauchy", "l1", "tv"}));
  app->add_option("--gamma", f.gamma, "Cauchy scale (default: per subband from a noise estimate)");
  app->add_option("--gamma-scale", f.gamma_scale, "Multiplier on the automatic Cauchy scale");
  app->add_option("--omega", f.omega, "Forward-backward step size");
  app->add_option("--lambda", f.lambda, "L1 / TV weight");
  app->add_option("--levels", f.levels, "Wavelet decomposition levels");
  app->add_option("--wavelet", f.wavelet, "Wavelet: haar, db2, db4");
  app->add_option("--max-iter", f.max_iter, "Forward-backward iteration cap");
  app->add_option("--tol", f.tol, "Relative change stopping tolerance");
}

LookModel parse_look_model(const std::string& s) {
  if (s == "trigamma") return LookModel::kTrigamma;
  if (s == "moment-matched") return LookModel::kMomentMatched;
  throw ConfigError("--look-model: expected moment-matched or trigamma");
}

ExperimentConfig resolve_config(const Common& c) {
  ExperimentConfig cfg;
  if (!c.config.empty()) {
    cfg = load_config(c.config);
    if (!c.scale.empty() && scale_by_name(c.scale) != cfg.scale) {
      const ExperimentConfig scaled = default_config(scale_by_name(c.scale));
      cfg.scale = scaled.scale;
      cfg.scene.extent = scaled.scene.extent;
    }
  } else {
    cfg = default_config(c.scale.empty() ? Scale::kDesk : scale_by_name(c.scale));
  }
  if (c.seed) cfg.noise.seeds = {*c.seed};
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (!c.looks.empty()) cfg.noise.looks = c.looks;
  return cfg;
}

// Overrides from solver flags onto a method or the shared options.
void apply_solver_flags(const SolverFlags& f, RegulariserSpec& reg, DespeckleOptions& options) {
  if (f.gamma) reg.params.gamma = *f.gamma;
  if (f.gamma_scale) reg.params.gamma_scale = *f.gamma_scale;
  if (f.omega) reg.params.omega = *f.omega;
  if (f.lambda) reg.params.lambda = *f.lambda;
  if (f.max_iter) reg.params.max_iter = *f.max_iter;
  if (f.tol) reg.params.tol = *f.tol;
  if (f.levels) options.levels = *f.levels;
  if (f.wavelet) options.wavelet = *f.wavelet;
}

bool solver_strength_given(const SolverFlags& f) {
  return f.gamma || f.gamma_scale || f.lambda;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SAR ocean/ship-wake simulation and wavelet-domain despeckling"};
  app.require_subcommand(1);
  app.fallthrough();
  bool verbose = false, quiet = false;
  app.add_flag("-v,--verbose", verbose, "Progress messages");
  app.add_flag("-q,--quiet", quiet, "Suppress warnings");

  Common common;
  SolverFlags solver;
  std::optional<double> heading_deg;

  auto* simulate = app.add_subcommand("simulate", "Render speckle-free scenes");
  simulate->add_option("--config", common.config, "Experiment config (JSON)");
  simulate->add_option("--seed", common.seed, "Sea-surface seed (overrides config seeds)");
  simulate->add_option("--out", common.out, "Output directory");
  simulate->add_option("--scale", common.scale, "Scene scale")->check(CLI::IsMember({"desk", "paper"}));
  simulate->add_option("--heading", heading_deg, "Ship heading [deg]");

  std::string input;
  std::vector<std::string> estimates;
  std::string reference;
  std::string format = "both";
  std::uint64_t speckle_seed = 1;

  auto* speckle = app.add_subcommand("speckle", "Add L-look log-normal speckle");
  speckle->add_option("input", input, "Speckle-free raster")->required();
  speckle->add_option("--looks", common.looks, "Look counts, e.g. 3,5,7")->delimiter(',');
  speckle->add_option("--seed", speckle_seed, "Speckle seed");
  speckle->add_option("--out", common.out, "Output directory");
  speckle->add_option("--look-model", common.look_model, "moment-matched or trigamma");

  auto* desp = app.add_subcommand("despeckle", "Restore a noisy raster");
  desp->add_option("input", input, "Noisy raster")->required();
  add_solver_flags(desp, solver);
  std::optional<int> desp_looks;
  desp->add_option("--looks", desp_looks, "Look count (default: from input metadata)");
  desp->add_option("--look-model", common.look_model, "moment-matched or trigamma");
  desp->add_option("--out", common.out, "Output directory");

  auto* evaluate = app.add_subcommand("evaluate", "Score estimates against a reference");
  evaluate->add_option("--reference", reference, "Clean reference raster")->required();
  evaluate->add_option("estimates", estimates, "Estimate rasters")->required();
  evaluate->add_option("--out", common.out, "Directory for results.txt / results.csv");
  evaluate->add_option("--format", format, "text, csv or both")
      ->check(CLI::IsMember({"text", "csv", "both"}));

  auto* pipeline = app.add_subcommand("pipeline", "simulate, speckle, despeckle and evaluate");
  pipeline->add_option("--config", common.config, "Experiment config (JSON)");
  pipeline->add_option("--seed", common.seed, "Run a single seed");
  pipeline->add_option("--out", common.out, "Output directory");
  pipeline->add_option("--scale", common.scale, "Scene scale")->check(CLI::IsMember({"desk", "paper"}));
  pipeline->add_option("--looks", common.looks, "Look counts, e.g. 3,5,7")->delimiter(',');
  pipeline->add_option("--heading", heading_deg, "Ship heading [deg]");
  add_solver_flags(pipeline, solver);
  auto* reg_opt = pipeline->get_option("--reg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }
  set_log_level(quiet ? LogLevel::kQuiet : verbose ? LogLevel::kInfo : LogLevel::kWarning);

  try {
    if (simulate->parsed()) {
      ExperimentConfig cfg = resolve_config(common);
      if (heading_deg) cfg.scene.ship.heading = *heading_deg * std::numbers::pi / 180.0;
      for (const auto& p : cmd_simulate(cfg, common.seed)) std::cout << p.string() << '\n';
    } else if (speckle->parsed()) {
      const std::vector<int> looks = common.looks.empty() ? std::vector<int>{3, 5, 7} : common.looks;
      const fs::path out = common.out.empty() ? fs::path(input).parent_path() : fs::path(common.out);
      for (const auto& p : cmd_speckle(input, looks, speckle_seed, parse_look_model(common.look_model),
                                       out.empty() ? fs::path(".") : out)) {
        std::cout << p.string() << '\n';
      }
    } else if (desp->parsed()) {
      RegulariserSpec reg;
      reg.kind = regulariser_by_name(solver.reg);
      for (const MethodConfig& m : default_methods()) {
        if (m.spec.kind == reg.kind) reg = m.spec;
      }
      DespeckleOptions options;
      apply_solver_flags(solver, reg, options);
      const fs::path out = common.out.empty() ? fs::path(input).parent_path() : fs::path(common.out);
      const auto r = cmd_despeckle(input, reg, options, desp_looks,
                                   parse_look_model(common.look_model),
                                   out.empty() ? fs::path(".") : out);
      std::cout << r.output.string() << '\n' << r.report.string() << '\n';
    } else if (evaluate->parsed()) {
      std::vector<fs::path> paths(estimates.begin(), estimates.end());
      ReportFormat fmt = format == "text" ? ReportFormat::kText
                         : format == "csv" ? ReportFormat::kCsv
                                           : ReportFormat::kBoth;
      const ResultsTable table = cmd_evaluate(reference, paths, common.out, fmt);
      std::cout << format_table_text(table);
    } else if (pipeline->parsed()) {
      ExperimentConfig cfg = resolve_config(common);
      if (heading_deg) cfg.scene.ship.heading = *heading_deg * std::numbers::pi / 180.0;
      if (reg_opt->count() > 0) {
        // --reg narrows the run to one method; explicit strengths switch tuning off.
        const Regulariser kind = regulariser_by_name(solver.reg);
        std::vector<MethodConfig> kept;
        for (const MethodConfig& m : cfg.despeckle.methods) {
          if (m.spec.kind == kind) kept.push_back(m);
        }
        if (kept.empty()) {
          MethodConfig m;
          m.spec.kind = kind;
          kept.push_back(m);
        }
        cfg.despeckle.methods = kept;
      }
      for (MethodConfig& m : cfg.despeckle.methods) {
        apply_solver_flags(solver, m.spec, cfg.despeckle.options);
        if (solver_strength_given(solver)) m.tune.clear();
      }
      const PipelineResult r = cmd_pipeline(cfg);
      std::cout << format_table_text(r.table);
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
