#include "dencomb/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "dencomb/denoise.hpp"
#include "dencomb/error.hpp"
#include "dencomb/format.hpp"
#include "dencomb/instances.hpp"
#include "dencomb/mse.hpp"
#include "dencomb/perturbation.hpp"
#include "dencomb/rng.hpp"

namespace dencomb {

namespace fs = std::filesystem;

namespace {

// Seed streams; see derive_seed.
constexpr std::uint64_t kNoiseStream = 0;
constexpr std::uint64_t kProbeStream = 1;
constexpr std::uint64_t kSweepNoise = 100;
constexpr std::uint64_t kSweepProbe = 200;
constexpr std::uint64_t kStudyNoise = 300;
constexpr std::uint64_t kStudyProbe = 400;
constexpr std::uint64_t kBench = 500;

/// Files written by one command; removed again unless commit() is reached.
class OutputFiles {
 public:
  explicit OutputFiles(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }
  OutputFiles(const OutputFiles&) = delete;
  OutputFiles& operator=(const OutputFiles&) = delete;
  ~OutputFiles() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_)
      if (fs::is_regular_file(p, ec)) fs::remove(p, ec);
  }

  fs::path add(const std::string& name) {
    written_.push_back(dir_ / name);
    return written_.back();
  }

  void text(const std::string& name, const std::string& body) {
    const fs::path p = add(name);
    std::ofstream out(p, std::ios::binary);
    out << body;
    if (!out) throw ParseError("cannot write " + p.string());
  }

  void image(const std::string& name, const Image& img) { write_pgm(add(name), img); }

  void commit() { committed_ = true; }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
  bool committed_ = false;
};

struct Inputs {
  std::optional<Image> clean;
  Image noisy;
  bool generated_noisy = false;
};

Inputs load_inputs(const RunConfig& cfg, std::uint64_t noise_seed) {
  Inputs in;
  if (!cfg.clean.empty()) in.clean = load_image_source(cfg.clean);
  if (!cfg.noisy.empty()) {
    in.noisy = read_pgm(cfg.noisy);
    if (in.clean) check_same_shape(in.noisy, *in.clean, "noisy vs clean");
  } else {
    in.noisy = add_noise(*in.clean, cfg.noise_model(noise_seed));
    in.generated_noisy = true;
  }
  return in;
}

std::string blank_or(const std::optional<double>& v) { return v ? fmt15(*v) : std::string(); }

std::string weights_text(const Eigen::VectorXd& w) {
  std::string s;
  for (Eigen::Index i = 0; i < w.size(); ++i) s += fmt15(w[i]) + "\n";
  return s;
}

std::string trajectory_csv(const std::vector<double>& traj) {
  std::string s = "iter,objective\n";
  for (std::size_t i = 0; i < traj.size(); ++i) s += std::to_string(i) + "," + fmt15(traj[i]) + "\n";
  return s;
}

struct Stats {
  double mean = 0, std = 0, min = 0, max = 0;
};

Stats stats(const std::vector<double>& v) {
  Stats s;
  if (v.empty()) return s;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

}  // namespace

CombineOutcome run_combination(const RunConfig& cfg, const Image* clean, const Image& noisy, double sigma255,
                               std::uint64_t probe_seed, std::ostream& log) {
  return run_combination(cfg, cfg.denoiser_specs(), cfg.denoiser_labels(), clean, noisy, sigma255, probe_seed, log);
}

CombineOutcome run_combination(const RunConfig& cfg, const std::vector<DenoiserSpec>& specs,
                               const std::vector<std::string>& labels, const Image* clean, const Image& noisy,
                               double sigma255, std::uint64_t probe_seed, std::ostream& log) {
  std::vector<Image> estimates;
  estimates.reserve(specs.size());
  for (const auto& spec : specs) estimates.push_back(denoise(spec, noisy));

  CombineOutcome out;
  out.set = EstimateSet(std::move(estimates), labels, noisy);
  const int k = out.set.size();
  if (clean) out.mse_oracle = oracle_mse(out.set, *clean).per_denoiser;

  Provenance prov = Provenance::estimated;
  switch (cfg.mse_mode) {
    case MseMode::oracle:
      if (!clean) throw InvalidParameter("oracle MSE mode needs the clean image");
      out.mse_used = *out.mse_oracle;
      prov = Provenance::oracle;
      break;
    case MseMode::sure: {
      if (cfg.clipped) log << "warning: SURE assumes unclipped noise\n";
      out.mse_used.resize(k);
      for (int i = 0; i < k; ++i) {
        out.mse_used[i] = mc_sure(as_function(specs[static_cast<std::size_t>(i)]), noisy, sigma255 / 255.0,
                                  cfg.sure_epsilon, derive_seed(probe_seed, static_cast<std::uint64_t>(i)),
                                  cfg.sure_probes);
      }
      break;
    }
    case MseMode::external:
      out.mse_used = load_external_mse(cfg.mse_file, k).per_denoiser;
      break;
  }

  const Eigen::MatrixXd dist = pairwise_sq_dist(out.set);
  out.sigma_raw = build_covariance(out.mse_used, dist, prov);
  out.min_eig_before = min_eigenvalue<double>(out.sigma_raw.entries);
  out.sigma = out.sigma_raw;
  if (out.min_eig_before < 0.0) {
    out.sigma = psd_project(out.sigma_raw);
    log << "sigma repaired: min eigenvalue before repair " << fmt15(out.min_eig_before) << "\n";
  }

  if (clean && prov != Provenance::oracle) {
    const CovMatrix oracle = build_covariance(*out.mse_oracle, dist, Provenance::oracle);
    const double a = min_eigenvalue<double>(oracle.entries), b = min_eigenvalue<double>(out.sigma.entries);
    if (a > 1e-10 && b > 1e-10) {
      out.delta_vs_oracle = perturbation_delta(oracle.entries, out.sigma.entries);
      log << "delta vs oracle sigma: " << fmt15(*out.delta_vs_oracle) << "\n";
    }
  }

  SolveOptions<double> opt;
  opt.max_iter = cfg.max_iter;
  opt.step = cfg.pg_step;
  if (k == 1) {
    out.solve = solve_fw(out.sigma, opt);
  } else {
    out.solve = solve(cfg.solver, out.sigma, opt);
  }
  out.combined = combine_estimates(out.set, out.solve.weights);
  return out;
}

void cmd_combine(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  OutputFiles files(cfg.out_dir);
  const Inputs in = load_inputs(cfg, derive_seed(cfg.seed, kNoiseStream));
  const Image* clean = in.clean ? &*in.clean : nullptr;
  const CombineOutcome r = run_combination(cfg, clean, in.noisy, cfg.sigma255, derive_seed(cfg.seed, kProbeStream), log);

  std::string csv = "label,mse_est,mse_oracle,weight\n";
  for (int i = 0; i < r.set.size(); ++i) {
    const auto oracle = r.mse_oracle ? std::optional<double>((*r.mse_oracle)[i]) : std::nullopt;
    csv += r.set.labels[static_cast<std::size_t>(i)] + "," + fmt15(r.mse_used[i]) + "," + blank_or(oracle) + "," +
           fmt15(r.solve.weights[i]) + "\n";
  }
  std::optional<double> combined_oracle, combined_8bit;
  if (clean) {
    combined_oracle = mse_between(r.combined, *clean);
    combined_8bit = mse_between(quantize8(r.combined), *clean);
  }
  csv += "combined," + fmt15(r.solve.objective) + "," + blank_or(combined_oracle) + "," + fmt15(r.solve.weights.sum()) + "\n";
  csv += "combined_8bit,," + blank_or(combined_8bit) + ",\n";
  csv += "lower_bound," + fmt15(r.solve.lower_bound) + ",,\n";

  if (in.generated_noisy) files.image("noisy.pgm", in.noisy);
  files.image("combined.pgm", r.combined);
  files.text("report.csv", csv);
  files.text("weights.txt", weights_text(r.solve.weights));
  files.text("trajectory.csv", trajectory_csv(r.solve.trajectory));
  const fs::path cov = files.add("covariance.txt");
  write_matrix(cov, r.sigma.entries);
  log << "combined " << r.set.size() << " estimates with " << to_string(r.solve.solver_id) << ", objective "
      << fmt15(r.solve.objective) << ", lower bound " << fmt15(r.solve.lower_bound) << "\n";
  files.commit();
}

void cmd_sweep(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  if (cfg.clean.empty()) throw ParseError("sweep needs a clean image");
  OutputFiles files(cfg.out_dir);
  const Image clean = load_image_source(cfg.clean);
  const auto specs = cfg.denoiser_specs();
  const auto labels = cfg.denoiser_labels();
  std::string csv = "sigma,label,mse,psnr,weight\n";
  for (std::size_t i = 0; i < cfg.sigmas.size(); ++i) {
    const double sigma = cfg.sigmas[i];
    RunConfig point = cfg;
    point.sigma255 = sigma;
    const Image noisy = add_noise(clean, point.noise_model(derive_seed(cfg.seed, kSweepNoise + i)));
    // Denoiser strengths stay at the configured level; only the actual noise moves.
    const CombineOutcome r =
        run_combination(point, specs, labels, &clean, noisy, sigma, derive_seed(cfg.seed, kSweepProbe + i), log);
    for (int k = 0; k < r.set.size(); ++k) {
      const double m = (*r.mse_oracle)[k];
      csv += fmt15(sigma) + "," + r.set.labels[static_cast<std::size_t>(k)] + "," + fmt15(m) + "," + fmt15(psnr(m)) +
             "," + fmt15(r.solve.weights[k]) + "\n";
    }
    const double m = mse_between(r.combined, clean);
    csv += fmt15(sigma) + ",combined," + fmt15(m) + "," + fmt15(psnr(m)) + "," + fmt15(r.solve.weights.sum()) + "\n";
    log << "sigma " << sigma << ": combined psnr " << fmt15(psnr(m)) << "\n";
  }
  files.text("sweep.csv", csv);
  files.commit();
}

void cmd_bench_solver(const RunConfig& cfg, std::ostream& log) {
  if (cfg.bench_k < 2) throw ParseError("bench-solver: k must be >= 2");
  if (cfg.bench_trials < 1) throw ParseError("bench-solver: trials must be >= 1");
  if (cfg.max_iter < 1) throw ParseError("bench-solver: max_iter must be >= 1");
  OutputFiles files(cfg.out_dir);
  Rng rng(derive_seed(cfg.seed, kBench));
  const auto n = static_cast<std::size_t>(cfg.max_iter) + 1;
  std::vector<double> fw_err(n, 0.0), pg_err(n, 0.0);
  std::string summary = "trial,k,best,frank_wolfe,projected_gradient,fw_rel_err,pg_rel_err\n";
  double fw_seconds = 0, pg_seconds = 0;

  SolveOptions<double> fw_opt;
  fw_opt.max_iter = cfg.max_iter;
  SolveOptions<double> pg_opt;
  pg_opt.max_iter = std::max(cfg.max_iter, 100000);
  pg_opt.step = cfg.pg_step;

  using clock = std::chrono::steady_clock;
  for (int t = 0; t < cfg.bench_trials; ++t) {
    const CovMatrix sigma = random_spd(cfg.bench_k, rng);
    auto t0 = clock::now();
    const SolveReport fw = solve_fw(sigma, fw_opt);
    auto t1 = clock::now();
    const SolveReport pg = solve_pg(sigma, pg_opt);
    auto t2 = clock::now();
    fw_seconds += std::chrono::duration<double>(t1 - t0).count();
    pg_seconds += std::chrono::duration<double>(t2 - t1).count();

    double best = std::min(fw.objective, pg.objective);
    const SolveReport relaxed = closed_form_relaxed(sigma);
    if (relaxed.weights.minCoeff() >= 0.0) best = std::min(best, relaxed.objective);

    auto rel = [&](double f) { return std::max(0.0, (f - best) / best); };
    for (std::size_t i = 0; i < n; ++i) {
      fw_err[i] += rel(fw.trajectory[std::min(i, fw.trajectory.size() - 1)]);
      pg_err[i] += rel(pg.trajectory[std::min(i, pg.trajectory.size() - 1)]);
    }
    summary += std::to_string(t) + "," + std::to_string(cfg.bench_k) + "," + fmt15(best) + "," + fmt15(fw.objective) +
               "," + fmt15(pg.objective) + "," + fmt15(rel(fw.objective)) + "," + fmt15(rel(pg.objective)) + "\n";
  }
  std::string csv = "iter,frank_wolfe,projected_gradient\n";
  for (std::size_t i = 0; i < n; ++i) {
    csv += std::to_string(i) + "," + fmt15(fw_err[i] / cfg.bench_trials) + "," + fmt15(pg_err[i] / cfg.bench_trials) + "\n";
  }
  files.text("bench.csv", csv);
  files.text("bench_summary.csv", summary);
  log << "mean wall time per solve: frank_wolfe " << fw_seconds / cfg.bench_trials * 1e3 << " ms, projected_gradient "
      << pg_seconds / cfg.bench_trials * 1e3 << " ms\n";
  files.commit();
}

void cmd_sure_study(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  if (cfg.clean.empty()) throw ParseError("sure-study needs a clean image");
  const DenoiserSpec spec = cfg.denoiser_specs().front();
  if (spec.kind == DenoiserKind::external_file) throw ParseError("sure-study needs a built-in denoiser");
  OutputFiles files(cfg.out_dir);
  const Image clean = load_image_source(cfg.clean);
  const DenoiserFn d = as_function(spec);

  std::string csv = "sigma,method,mean,std,min,max\n";
  for (std::size_t i = 0; i < cfg.sigmas.size(); ++i) {
    const double sigma = cfg.sigmas[i];
    const std::uint64_t noise_base = derive_seed(cfg.seed, kStudyNoise + i);
    const std::uint64_t probe_base = derive_seed(cfg.seed, kStudyProbe + i);
    std::vector<double> sure(static_cast<std::size_t>(cfg.trials)), oracle(static_cast<std::size_t>(cfg.trials));
    for (int t = 0; t < cfg.trials; ++t) {
      const Image noisy = add_noise(clean, {sigma, cfg.clipped, derive_seed(noise_base, static_cast<std::uint64_t>(t))});
      sure[static_cast<std::size_t>(t)] = mc_sure(d, noisy, sigma / 255.0, cfg.sure_epsilon,
                                                  derive_seed(probe_base, static_cast<std::uint64_t>(t)), cfg.sure_probes);
      oracle[static_cast<std::size_t>(t)] = mse_between(d(noisy), clean);
    }
    for (const auto& [name, values] : {std::pair{"sure", &sure}, std::pair{"oracle", &oracle}}) {
      const Stats s = stats(*values);
      csv += fmt15(sigma) + "," + name + "," + fmt15(s.mean) + "," + fmt15(s.std) + "," + fmt15(s.min) + "," +
             fmt15(s.max) + "\n";
    }
    log << "sigma " << sigma << ": sure mean " << fmt15(stats(sure).mean) << ", oracle mean " << fmt15(stats(oracle).mean)
        << "\n";
  }
  files.text("sure_study.csv", csv);
  files.commit();
}

void cmd_boost(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  OutputFiles files(cfg.out_dir);
  const Inputs in = load_inputs(cfg, derive_seed(cfg.seed, kNoiseStream));
  const Image* clean = in.clean ? &*in.clean : nullptr;
  const CombineOutcome r = run_combination(cfg, clean, in.noisy, cfg.sigma255, derive_seed(cfg.seed, kProbeStream), log);
  const BoosterSpec spec = cfg.booster_spec();
  const std::vector<Image> iterates = boost_iterates(spec, in.noisy, r.combined);

  std::string csv = "iter,mse\n";
  csv += "0," + (clean ? fmt15(mse_between(r.combined, *clean)) : std::string()) + "\n";
  for (std::size_t t = 0; t < iterates.size(); ++t) {
    csv += std::to_string(t + 1) + "," + (clean ? fmt15(mse_between(iterates[t], *clean)) : std::string()) + "\n";
  }
  files.image("combined.pgm", r.combined);
  files.image("boosted.pgm", iterates.back());
  files.text("boost.csv", csv);
  files.text("weights.txt", weights_text(r.solve.weights));
  log << "boosted with " << to_string(spec.rule) << " x" << spec.iterations << "\n";
  files.commit();
}

void cmd_denoise(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  OutputFiles files(cfg.out_dir);
  const Inputs in = load_inputs(cfg, derive_seed(cfg.seed, kNoiseStream));
  const auto specs = cfg.denoiser_specs();
  const auto labels = cfg.denoiser_labels();
  std::string csv = "label,mse,psnr\n";
  if (in.generated_noisy) files.image("noisy.pgm", in.noisy);
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const Image out = denoise(specs[k], in.noisy);
    files.image("denoised_" + labels[k] + ".pgm", out);
    if (in.clean) {
      const double m = mse_between(out, *in.clean);
      csv += labels[k] + "," + fmt15(m) + "," + fmt15(psnr(m)) + "\n";
    } else {
      csv += labels[k] + ",,\n";
    }
  }
  files.text("denoise.csv", csv);
  log << "denoised with " << specs.size() << " denoisers\n";
  files.commit();
}

}  // namespace dencomb
