#include "dencomb/cli.hpp"

#include <iostream>

#include <CLI11.hpp>

#include "dencomb/config.hpp"
#include "dencomb/error.hpp"
#include "dencomb/pipeline.hpp"

namespace dencomb {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal convex combination of image denoisers"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir;
  long long seed = -1;
  std::vector<std::string> overrides;
  int bench_k = 0, bench_trials = 0;
  app.add_option("--config", config_path, "key=value run configuration file");
  app.add_option("--seed", seed, "base random seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--set", overrides, "override a config entry, key=value (repeatable)");

  struct Verb {
    const char* name;
    const char* help;
    void (*run)(const RunConfig&, std::ostream&);
  };
  const Verb verbs[] = {
      {"combine", "denoise, estimate MSE, solve for optimal weights, write the combined image", cmd_combine},
      {"sweep", "combine across a list of noise levels with fixed denoiser strengths", cmd_sweep},
      {"bench-solver", "Frank-Wolfe vs projected gradient on random covariance matrices", cmd_bench_solver},
      {"sure-study", "Monte-Carlo SURE against oracle MSE over repeated noise draws", cmd_sure_study},
      {"boost", "combine, then apply a classical booster", cmd_boost},
      {"denoise", "run each configured denoiser and write its output", cmd_denoise},
  };
  std::vector<CLI::App*> subs;
  for (const auto& v : verbs) {
    auto* sub = app.add_subcommand(v.name, v.help);
    if (std::string(v.name) == "bench-solver") {
      sub->add_option("--k", bench_k, "matrix dimension");
      sub->add_option("--trials", bench_trials, "number of random instances");
    }
    subs.push_back(sub);
  }

  std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ParseError("--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (bench_k) cfg.bench_k = bench_k;
    if (bench_trials) cfg.bench_trials = bench_trials;

    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) verbs[i].run(cfg, out);
    }
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace dencomb
