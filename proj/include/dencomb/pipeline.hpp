#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "dencomb/config.hpp"
#include "dencomb/covariance.hpp"
#include "dencomb/image.hpp"
#include "dencomb/simplex.hpp"

namespace dencomb {

/// Everything produced by one denoise -> estimate MSE -> build Sigma -> solve pass.
struct CombineOutcome {
  EstimateSet set;
  Eigen::VectorXd mse_used;
  std::optional<Eigen::VectorXd> mse_oracle;
  CovMatrix sigma_raw;  // as built from the MSE estimates
  CovMatrix sigma;      // after repair, handed to the solver
  double min_eig_before = 0;
  std::optional<double> delta_vs_oracle;
  SolveReport solve;
  Image combined;  // unclamped
};

/// Runs the configured denoisers on `noisy` and combines them. `clean` may be
/// null unless the MSE mode needs it. `sigma255` is the noise level assumed by
/// SURE; `probe_seed` seeds the SURE probes.
CombineOutcome run_combination(const RunConfig& cfg, const Image* clean, const Image& noisy, double sigma255,
                               std::uint64_t probe_seed, std::ostream& log);

/// Same, with denoisers given explicitly instead of taken from `cfg`.
CombineOutcome run_combination(const RunConfig& cfg, const std::vector<DenoiserSpec>& specs,
                               const std::vector<std::string>& labels, const Image* clean, const Image& noisy,
                               double sigma255, std::uint64_t probe_seed, std::ostream& log);

// CLI verbs. Each writes its files under cfg.out_dir and throws on failure;
// files written by a failed command are removed.
void cmd_combine(const RunConfig& cfg, std::ostream& log);
void cmd_sweep(const RunConfig& cfg, std::ostream& log);
void cmd_bench_solver(const RunConfig& cfg, std::ostream& log);
void cmd_sure_study(const RunConfig& cfg, std::ostream& log);
void cmd_boost(const RunConfig& cfg, std::ostream& log);
void cmd_denoise(const RunConfig& cfg, std::ostream& log);

}  // namespace dencomb
