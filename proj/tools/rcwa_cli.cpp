#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rcwa/config.hpp"
#include "rcwa/field.hpp"
#include "rcwa/io.hpp"
#include "rcwa/optimize.hpp"
#include "rcwa/parallel.hpp"
#include "rcwa/scattering.hpp"

namespace {

using namespace rcwa;

struct CommonOpts {
  std::string config_path;
  std::string out_override;
  int jobs = default_jobs();
  std::optional<int> fto_override;
  std::optional<std::uint64_t> seed_override;
  bool dump_fourier = false;
};

RunConfig load(const CommonOpts& opts) {
  RunConfig config = parse_config(opts.config_path);
  if (!opts.out_override.empty()) config.out_dir = opts.out_override;
  if (opts.fto_override) config.sim.order_x = *opts.fto_override;
  if (opts.seed_override) {
    if (config.optimize) config.optimize->seeds = {*opts.seed_override};
    if (config.fit) config.fit->seeds = {*opts.seed_override};
  }
  return config;
}

const Geometry& require_geometry(const RunConfig& config) {
  if (!config.geometry)
    throw ParseError("this command needs a 'geometry' block in the config");
  return *config.geometry;
}

void dump_fourier_grids(const RunConfig& config) {
  const auto grids = layer_coefficients(require_geometry(config), config.sim, config.mode);
  for (size_t g = 0; g < grids.size(); ++g)
    write_text_file(config.out_dir + "/fourier_layer" + std::to_string(g) + ".csv",
                    coeff_csv(grids[g]));
}

int cmd_solve(const CommonOpts& opts, const std::optional<std::array<int, 3>>& field_flag) {
  RunConfig config = load(opts);
  const ScatterResult result = solve(require_geometry(config), config.sim, config.mode);
  write_text_file(config.out_dir + "/de.csv", de_csv(result));
  write_text_file(config.out_dir + "/summary.json", summary_json(result));

  const auto field_res = field_flag ? field_flag : config.field_res;
  if (field_res) {
    const FieldCell cell =
        calculate_field(result, (*field_res)[0], (*field_res)[1], (*field_res)[2]);
    write_text_file(config.out_dir + "/field.csv", field_csv(cell));
    write_text_file(config.out_dir + "/field_header.json", field_header_json(cell));
  }
  if (opts.dump_fourier) dump_fourier_grids(config);

  std::cout << "total_r=" << fmt15(result.total_r())
            << " total_t=" << fmt15(result.total_t()) << "\n";
  return 0;
}

int cmd_sweep(const CommonOpts& opts) {
  RunConfig config = load(opts);
  if (!config.sweep) throw ParseError("config has no 'sweep' block");
  const Geometry& geometry = require_geometry(config);
  const SweepBlock& block = *config.sweep;

  struct Task {
    FourierMode mode;
    int fto;
  };
  std::vector<Task> tasks;
  for (auto mode : block.modes)
    for (int fto : block.fto) tasks.push_back({mode, fto});

  std::vector<SweepRow> rows(tasks.size());
  parallel_for(static_cast<long>(tasks.size()), opts.jobs, [&](long i) {
    SimConfig sim = config.sim;
    sim.order_x = tasks[i].fto;
    const auto t0 = std::chrono::steady_clock::now();
    const ScatterResult result = solve(geometry, sim, tasks[i].mode);
    const auto t1 = std::chrono::steady_clock::now();
    rows[i].mode = fourier_mode_name(tasks[i].mode);
    rows[i].fto = tasks[i].fto;
    rows[i].de_target = result.de_t_at(0, -block.deflection_order);
    rows[i].total = result.total_r() + result.total_t();
    rows[i].wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  });
  write_text_file(config.out_dir + "/sweep.csv", sweep_csv(rows));
  std::cout << "wrote " << rows.size() << " sweep rows\n";
  return 0;
}

DeflectorSetup setup_from(const RunConfig& config) {
  const OptimizeBlock& block = *config.optimize;
  DeflectorSetup setup;
  setup.wavelength = config.sim.wavelength;
  setup.deflection_deg = block.deflection_deg;
  setup.thickness = block.thickness;
  setup.n_inc = config.sim.n_inc;
  setup.n_sub = config.sim.n_sub;
  setup.n_ridge = block.n_ridge;
  setup.n_groove = block.n_groove;
  setup.cells = block.cells;
  setup.fto = config.sim.order_x;
  setup.mode = config.mode;
  return setup;
}

int cmd_optimize(const CommonOpts& opts) {
  RunConfig config = load(opts);
  if (!config.optimize) throw ParseError("config has no 'optimize' block");
  const OptimizeBlock& block = *config.optimize;
  const DeflectorSetup setup = setup_from(config);

  nlohmann::json summary;
  summary["seeds"] = nlohmann::json::array();
  double best_eff = -1.0;
  std::uint64_t best_seed = 0;

  for (std::uint64_t seed : block.seeds) {
    const DeflectorRun run =
        optimize_deflector(setup, block.epochs, block.optimizer, block.lr, seed, opts.jobs);

    std::string csv = "epoch,gray_efficiency,binary_efficiency";
    for (int i = 0; i < setup.cells; ++i) csv += ",eps_" + std::to_string(i);
    csv += "\n";
    for (int e = 0; e < run.eps_history.rows(); ++e) {
      csv += std::to_string(e) + "," + fmt15(run.gray_eff[e]) + "," + fmt15(run.bin_eff[e]);
      for (int i = 0; i < setup.cells; ++i) csv += "," + fmt15(run.eps_history(e, i));
      csv += "\n";
    }
    write_text_file(config.out_dir + "/trajectory_seed" + std::to_string(seed) + ".csv", csv);

    std::string pattern = "cell,final_index,final_binary,best_binary\n";
    for (int i = 0; i < setup.cells; ++i)
      pattern += std::to_string(i) + "," + fmt15(run.index_pattern[i]) + "," +
                 fmt15(run.binary_pattern[i]) + "," + fmt15(run.best_binary_pattern[i]) + "\n";
    write_text_file(config.out_dir + "/pattern_seed" + std::to_string(seed) + ".csv", pattern);

    summary["seeds"].push_back({{"seed", seed},
                                {"best_binary_efficiency", run.best_binary_eff},
                                {"best_epoch", run.best_epoch},
                                {"final_gray_efficiency", run.gray_eff[run.gray_eff.size() - 1]},
                                {"final_binary_efficiency", run.bin_eff[run.bin_eff.size() - 1]}});
    if (run.best_binary_eff > best_eff) {
      best_eff = run.best_binary_eff;
      best_seed = seed;
    }
    std::cout << "seed " << seed << ": best binarized efficiency "
              << fmt15(run.best_binary_eff) << "\n";
  }

  summary["best"] = {{"seed", best_seed}, {"binary_efficiency", best_eff}};
  summary["optimizer"] = opt_algo_name(block.optimizer);
  summary["lr"] = block.lr;
  summary["epochs"] = block.epochs;
  summary["cells"] = block.cells;
  summary["fto"] = config.sim.order_x;
  summary["config_hash"] = fnv1a(config.source_text);
  write_text_file(config.out_dir + "/optimize_summary.json", summary.dump(2) + "\n");
  return 0;
}

int cmd_fit(const CommonOpts& opts) {
  RunConfig config = load(opts);
  if (!config.fit) throw ParseError("config has no 'fit' block");
  const FitBlock& block = *config.fit;

  FitSetup setup = ocd_demo_setup();
  setup.params = block.params;
  setup.wavelengths =
      VecR::LinSpaced(block.wavelength_count, block.wavelength_min, block.wavelength_max);
  setup.period = block.period;
  setup.order_x = block.order_x;
  setup.order_y = block.order_y;

  VecR truth(static_cast<Eigen::Index>(setup.params.size()));
  for (size_t i = 0; i < setup.params.size(); ++i) truth[i] = setup.params[i].truth;
  const VecR target = fit_spectrum(setup, truth, opts.jobs);

  std::string estimates = "optimizer,seed,initial_loss,final_loss";
  for (const auto& p : setup.params) estimates += "," + p.name;
  estimates += "\n";

  for (const auto& fo : block.optimizers) {
    for (std::uint64_t seed : block.seeds) {
      const FitRun run =
          spectrum_fit(setup, target, fo.algo, fo.lr, block.iterations, seed, opts.jobs);
      std::string csv = "iteration,loss\n";
      for (int it = 0; it < run.loss.size(); ++it)
        csv += std::to_string(it) + "," + fmt15(run.loss[it]) + "\n";
      write_text_file(config.out_dir + "/loss_" + opt_algo_name(fo.algo) + "_seed" +
                          std::to_string(seed) + ".csv",
                      csv);
      estimates += opt_algo_name(fo.algo) + "," + std::to_string(seed) + "," +
                   fmt15(run.loss[0]) + "," + fmt15(run.loss[run.loss.size() - 1]);
      for (int i = 0; i < run.p_final.size(); ++i) estimates += "," + fmt15(run.p_final[i]);
      estimates += "\n";
      std::cout << opt_algo_name(fo.algo) << " seed " << seed << ": loss "
                << fmt15(run.loss[0]) << " -> " << fmt15(run.loss[run.loss.size() - 1])
                << "\n";
    }
  }
  write_text_file(config.out_dir + "/fit_estimates.csv", estimates);

  nlohmann::json manifest;
  manifest["iterations"] = block.iterations;
  manifest["seeds"] = block.seeds;
  nlohmann::json opts_json = nlohmann::json::array();
  for (const auto& fo : block.optimizers)
    opts_json.push_back({{"name", opt_algo_name(fo.algo)}, {"lr", fo.lr}});
  manifest["optimizers"] = opts_json;
  manifest["wavelengths"] = {{"min", block.wavelength_min},
                             {"max", block.wavelength_max},
                             {"count", block.wavelength_count}};
  manifest["config_hash"] = fnv1a(config.source_text);
  write_text_file(config.out_dir + "/fit_manifest.json", manifest.dump(2) + "\n");
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  setenv("OPENBLAS_NUM_THREADS", "1", 0); // worker pool handles the parallelism

  CLI::App app{"coupled-wave solver for multilayer diffraction gratings"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::optional<std::array<int, 3>> field_flag;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", opts.config_path, "JSON config file")->required();
    cmd->add_option("--out", opts.out_override, "output directory override");
    cmd->add_option("--jobs", opts.jobs, "worker count for independent solves");
    cmd->add_option("--fto", opts.fto_override, "override the X truncation order");
    cmd->add_option("--seed", opts.seed_override, "override the seed list");
    cmd->add_flag("--dump-fourier", opts.dump_fourier, "dump coefficient grids as CSV");
  };

  auto* solve_cmd = app.add_subcommand("solve", "forward solve: efficiencies and fields");
  add_common(solve_cmd);
  std::vector<int> field_vals;
  solve_cmd->add_option("--field", field_vals, "field resolutions res_x res_y res_z")
      ->expected(3);

  auto* sweep_cmd = app.add_subcommand("sweep", "truncation-order convergence study");
  add_common(sweep_cmd);
  auto* optimize_cmd = app.add_subcommand("optimize", "gradient-driven deflector design");
  add_common(optimize_cmd);
  auto* fit_cmd = app.add_subcommand("fit", "spectral fitting of stack dimensions");
  add_common(fit_cmd);

  CLI11_PARSE(app, argc, argv);

  if (field_vals.size() == 3) field_flag = {field_vals[0], field_vals[1], field_vals[2]};

  try {
    if (solve_cmd->parsed()) return cmd_solve(opts, field_flag);
    if (sweep_cmd->parsed()) return cmd_sweep(opts);
    if (optimize_cmd->parsed()) return cmd_optimize(opts);
    if (fit_cmd->parsed()) return cmd_fit(opts);
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
