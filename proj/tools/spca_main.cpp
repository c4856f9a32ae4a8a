// Experiment runner: run / compare / gen / verify subcommands around the
// solver library.  All outputs are deterministic functions of the config and
// seed, except the wall_time fields which are informational only.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spca/attack.hpp"
#include "spca/config.hpp"
#include "spca/datagen.hpp"
#include "spca/dssal1.hpp"
#include "spca/io.hpp"
#include "spca/manpg.hpp"
#include "spca/rng.hpp"
#include "spca/verify_suite.hpp"

namespace fs = std::filesystem;
using namespace spca;

namespace {

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool quiet = false;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

StiefelPoint make_initial_point(const SpcaProblem& prob, const RunConfig& cfg) {
  auto Z = random_stiefel(prob.n(), prob.p, Rng::derive(cfg.gen.seed, 2));
  return riemannian_subgradient_warmstart(prob, Z, cfg.warmstart_iters);
}

struct SolverOutput {
  StiefelPoint Z;
  std::vector<IterationRecord> records;
  bool converged = false;
  long rounds = 0;
};

SolverOutput run_algo(Algo algo, const SpcaProblem& prob, const RunConfig& cfg,
                      const StiefelPoint& Z0, const ShareObserver& observer) {
  Network net(prob.d());
  SolverOutput out;
  if (algo == Algo::dssal1) {
    auto res = dssal1_run(prob, net, cfg.driver, Z0, observer);
    out.Z = std::move(res.Z);
    out.records = std::move(res.records);
    out.converged = res.converged;
  } else {
    ManpgConfig mc = cfg.manpg;
    mc.adapt = (algo == Algo::manpg_ada);
    auto res = manpg_run(prob, net, mc, Z0, observer);
    out.Z = std::move(res.Z);
    out.records = std::move(res.records);
    out.converged = res.converged;
  }
  out.rounds = net.rounds();
  return out;
}

// Records the public history of the attack target (agent 0 by default).
struct ShareRecorder {
  std::vector<Matrix> Z_history;
  std::vector<Matrix> S_history;
  int target = 0;

  ShareObserver observer() {
    return [this](long, const StiefelPoint& Z, const std::vector<Matrix>& shares) {
      Z_history.push_back(Z.data);
      S_history.push_back(shares[static_cast<std::size_t>(target)]);
    };
  }
};

int cmd_run(const std::string& config_path, const CommonFlags& flags) {
  RunConfig cfg = parse_config_file(config_path);
  if (flags.seed) cfg.gen.seed = *flags.seed;
  if (flags.out_dir) cfg.out_dir = *flags.out_dir;
  fs::create_directories(cfg.out_dir);

  const auto t0 = std::chrono::steady_clock::now();
  SpcaProblem prob = generate(cfg.gen);
  StiefelPoint Z0 = make_initial_point(prob, cfg);

  ShareRecorder primary_rec;
  SolverOutput primary = run_algo(cfg.algo, prob, cfg, Z0,
                                  cfg.attack ? primary_rec.observer() : ShareObserver{});

  write_iteration_csv(cfg.out_dir + "/iterations.csv", primary.records);
  save_matrix(cfg.out_dir + "/solution.txt", primary.Z.data);

  RunSummary summary;
  summary.final_objective = objective(prob, primary.Z);
  summary.sparsity = sparsity(primary.Z, 1e-5);
  summary.rounds = primary.rounds;
  summary.wall_time = seconds_since(t0);
  summary.converged = primary.converged;
  write_summary_json(cfg.out_dir + "/summary.json", summary);

  if (cfg.attack) {
    // Comparative reconstruction experiment: the same eavesdropper pipeline
    // against both solvers' public shares, same data and starting point.
    ShareRecorder counterpart_rec;
    const Algo other = (cfg.algo == Algo::dssal1) ? Algo::manpg_ada : Algo::dssal1;
    run_algo(other, prob, cfg, Z0, counterpart_rec.observer());

    Matrix target = prob.shards[0].samples * prob.shards[0].samples.transpose();
    const auto& manpg_rec =
        (cfg.algo == Algo::dssal1) ? counterpart_rec : primary_rec;
    const auto& dssal1_rec =
        (cfg.algo == Algo::dssal1) ? primary_rec : counterpart_rec;
    auto manpg_curve =
        attack_curve(manpg_rec.Z_history, manpg_rec.S_history, target);
    auto dssal1_curve =
        attack_curve(dssal1_rec.Z_history, dssal1_rec.S_history, target);

    std::vector<AttackRow> rows;
    const std::size_t count = std::max(manpg_curve.size(), dssal1_curve.size());
    for (std::size_t i = 0; i < count; ++i) {
      AttackRow row;
      row.round = i < manpg_curve.size() ? manpg_curve[i].round
                                         : dssal1_curve[i].round;
      row.manpg_error =
          i < manpg_curve.size() ? manpg_curve[i].error : manpg_curve.back().error;
      row.dssal1_error = i < dssal1_curve.size() ? dssal1_curve[i].error
                                                 : dssal1_curve.back().error;
      rows.push_back(row);
    }
    write_attack_csv(cfg.out_dir + "/attack.csv", rows);
  }

  if (!flags.quiet) {
    std::cout << (primary.converged ? "converged" : "max-iter") << " after "
              << summary.rounds << " rounds, objective "
              << format_double(summary.final_objective) << ", sparsity "
              << format_double(summary.sparsity) << "\n";
  }
  return primary.converged ? 0 : 2;
}

int cmd_compare(const std::string& config_path, const CommonFlags& flags) {
  RunConfig cfg = parse_config_file(config_path);
  if (flags.seed) cfg.gen.seed = *flags.seed;
  if (flags.out_dir) cfg.out_dir = *flags.out_dir;
  if (cfg.sweep.param.empty() || cfg.sweep.values.empty())
    throw config_error("compare needs a [sweep] section with param and values");
  fs::create_directories(cfg.out_dir);

  std::vector<CompareRow> rows;
  for (double value : cfg.sweep.values) {
    GenSpec g = cfg.gen;
    if (cfg.sweep.param == "n")
      g.n = static_cast<Index>(value);
    else if (cfg.sweep.param == "p")
      g.p = static_cast<Index>(value);
    else if (cfg.sweep.param == "mu")
      g.mu = value;
    else
      g.d = static_cast<int>(value);

    SpcaProblem prob = generate(g);
    RunConfig point_cfg = cfg;
    point_cfg.gen = g;
    StiefelPoint Z0 = make_initial_point(prob, point_cfg);

    for (Algo algo : {Algo::dssal1, Algo::manpg_ada}) {
      const auto t0 = std::chrono::steady_clock::now();
      SolverOutput res = run_algo(algo, prob, point_cfg, Z0, {});
      CompareRow row;
      row.param_value = value;
      row.algo = algo_name(algo);
      row.rounds = res.rounds;
      row.wall_time = seconds_since(t0);
      row.final_objective = objective(prob, res.Z);
      row.sparsity = sparsity(res.Z, 1e-5);
      rows.push_back(row);
      if (!flags.quiet)
        std::cout << cfg.sweep.param << "=" << format_double(value) << " "
                  << row.algo << ": rounds=" << row.rounds << "\n";
    }
  }
  write_compare_csv(cfg.out_dir + "/compare.csv", rows);
  return 0;
}

int cmd_gen(const std::string& config_path, const CommonFlags& flags) {
  RunConfig cfg = parse_config_file(config_path);
  if (flags.seed) cfg.gen.seed = *flags.seed;
  if (flags.out_dir) cfg.out_dir = *flags.out_dir;
  fs::create_directories(cfg.out_dir);
  SpcaProblem prob = generate(cfg.gen);
  for (const auto& shard : prob.shards) {
    char name[64];
    std::snprintf(name, sizeof(name), "shard_%03d.txt", shard.agent_id);
    save_matrix(cfg.out_dir + "/" + name, shard.samples);
  }
  if (!flags.quiet)
    std::cout << "wrote " << prob.d() << " shards to " << cfg.out_dir << "\n";
  return 0;
}

int cmd_verify(const std::string& filter, const std::string& inject, bool quiet) {
  if (!inject.empty()) {
    if (inject == "mask-sign")
      testhooks::flip_masked_product_sign = true;
    else
      throw argument_error("unknown fault '" + inject + "'");
  }
  auto results = verify::run_checks(filter);
  if (results.empty()) throw argument_error("no check matches '" + filter + "'");
  int failures = 0;
  for (const auto& r : results) {
    if (!r.pass) ++failures;
    if (!quiet || !r.pass) {
      std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
      if (!r.pass) std::cout << ": " << r.detail;
      std::cout << "\n";
    }
  }
  std::cout << (failures == 0 ? "OK" : "FAILED") << " (" << results.size() - failures
            << "/" << results.size() << " checks)\n";
  return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse PCA over a simulated agent network"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string config_path;
  std::string verify_filter;
  std::string verify_inject;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "config file")->required();
    cmd->add_option("--seed", flags.seed, "override gen.seed");
    cmd->add_option("--out-dir", flags.out_dir, "override [outputs] dir");
    cmd->add_flag("--quiet", flags.quiet, "suppress progress output");
  };

  CLI::App* run = app.add_subcommand("run", "run one experiment");
  add_common(run);
  CLI::App* compare = app.add_subcommand("compare", "sweep one parameter");
  add_common(compare);
  CLI::App* gen = app.add_subcommand("gen", "dump the generated shards");
  add_common(gen);
  CLI::App* verify = app.add_subcommand("verify", "run the oracle checks");
  verify->add_option("--only", verify_filter, "run checks whose name contains this");
  verify->add_flag("--quiet", flags.quiet, "print failures only");
  verify
      ->add_option("--inject-fault", verify_inject,
                   "test-only fault hook (mask-sign)")
      ->group("");  // hidden

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, flags);
    if (compare->parsed()) return cmd_compare(config_path, flags);
    if (gen->parsed()) return cmd_gen(config_path, flags);
    if (verify->parsed()) return cmd_verify(verify_filter, verify_inject, flags.quiet);
  } catch (const spca::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
