#include "dencomb/perturbation.hpp"

#include "dencomb/simplex.hpp"

namespace dencomb {

PerturbationReport perturbation_check(const CovMatrix& sigma_true, const CovMatrix& sigma_est,
                                      std::span<const EstimateSet> realizations, const Image& clean) {
  if (realizations.empty()) throw InvalidParameter("perturbation_check: no realizations");
  require_symmetric(sigma_true.entries, "perturbation_check");
  require_symmetric(sigma_est.entries, "perturbation_check");
  if (sigma_true.k() != sigma_est.k() || sigma_true.k() != realizations.front().size()) {
    throw ShapeError("perturbation_check: matrix size differs from estimate count");
  }
  for (const auto* m : {&sigma_true.entries, &sigma_est.entries}) {
    const double lmin = min_eigenvalue<double>(*m);
    if (!(lmin > 1e-10)) {
      throw NumericalError("perturbation_check: matrix is not strictly positive definite (min eigenvalue " +
                           std::to_string(lmin) + ")\n" + dump_matrix(*m));
    }
  }

  PerturbationReport rep;
  rep.weights_true = solve_fw(sigma_true).weights;
  rep.weights_est = solve_fw(sigma_est).weights;
  rep.delta = perturbation_delta(sigma_true.entries, sigma_est.entries);
  rep.delta_transposed = perturbation_delta_transposed(sigma_true.entries, sigma_est.entries);

  double lhs = 0, oracle = 0;
  for (const auto& set : realizations) {
    check_same_shape(set.source_noisy, clean, "perturbation_check");
    const Image zhat = combine_estimates(set, rep.weights_true);
    const Image ztilde = combine_estimates(set, rep.weights_est);
    lhs += mse_between(ztilde, zhat);
    oracle += mse_between(zhat, clean);
  }
  const double n = static_cast<double>(realizations.size());
  rep.lhs = lhs / n;
  rep.rhs = oracle / n * (2.0 * rep.delta + rep.delta * rep.delta);
  rep.bound_holds = rep.lhs <= rep.rhs + 1e-9;
  return rep;
}

PerturbationReport perturbation_check(const CovMatrix& sigma_true, const CovMatrix& sigma_est,
                                      const EstimateSet& set, const Image& clean) {
  return perturbation_check(sigma_true, sigma_est, std::span<const EstimateSet>(&set, 1), clean);
}

}  // namespace dencomb
