#pragma once

// Minimization of f(w) = w^T Sigma w over the unit simplex
// Omega = { w : w >= 0, 1^T w = 1 } and over its affine hull.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/QR>

#include "dencomb/covariance.hpp"
#include "dencomb/error.hpp"
#include "dencomb/jacobi.hpp"

namespace dencomb {

enum class SolverId { frank_wolfe, projected_gradient, closed_form_relaxed, closed_form_2way };

const char* to_string(SolverId id);
SolverId solver_from_string(const std::string& name);

template <typename Scalar>
struct SolveReportX {
  VectorX<Scalar> weights;
  Scalar objective = 0;
  std::vector<Scalar> trajectory;  // objective at w^0, w^1, ...
  int iterations = 0;
  SolverId solver_id = SolverId::frank_wolfe;
  Scalar lower_bound = 0;
  VectorX<Scalar> per_denoiser_mse;
  bool refined = false;  // frank_wolfe only: active-set finish was accepted
};

using SolveReport = SolveReportX<double>;

template <typename Scalar>
struct SolveOptions {
  int max_iter = 500;
  /// Early exit once the Frank-Wolfe gap 2 w^T S w - 2 min_i (S w)_i falls below this.
  Scalar gap_tol = Scalar(1e-10);
  /// Finish Frank-Wolfe with an exact active-set solve on the simplex.
  bool refine = true;
  /// Projected gradient step; 0 selects 1 / (2 lambda_max).
  Scalar step = 0;
  /// Projected gradient stops when max |w^{t+1} - w^t| <= this.
  Scalar step_tol = Scalar(1e-15);
};

template <typename Derived>
bool on_simplex(const Eigen::MatrixBase<Derived>& w, double sum_tol = 1e-9, double neg_tol = 1e-12) {
  if (w.size() == 0 || !w.allFinite()) return false;
  return std::abs(static_cast<double>(w.sum()) - 1.0) <= sum_tol && static_cast<double>(w.minCoeff()) >= -neg_tol;
}

/// Vertex e_{i*} minimizing g^T u over the simplex; ties go to the lowest index.
template <typename Derived>
VectorX<typename Derived::Scalar> fw_vertex(const Eigen::MatrixBase<Derived>& gradient) {
  using Scalar = typename Derived::Scalar;
  if (gradient.size() == 0) throw InvalidParameter("fw_vertex: empty gradient");
  if (!gradient.allFinite()) throw NumericalError("fw_vertex: non-finite gradient");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < gradient.size(); ++i)
    if (gradient[i] < gradient[best]) best = i;
  return VectorX<Scalar>::Unit(gradient.size(), best);
}

/// Euclidean projection onto the unit simplex (sort and threshold).
template <typename Derived>
VectorX<typename Derived::Scalar> project_simplex(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = v.size();
  if (n == 0) throw InvalidParameter("project_simplex: empty vector");
  const VectorX<Scalar> vv = v;
  std::vector<Scalar> u(vv.data(), vv.data() + n);
  std::sort(u.begin(), u.end(), std::greater<Scalar>());
  Scalar cumsum = 0, theta = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += u[static_cast<std::size_t>(j)];
    const Scalar t = (cumsum - Scalar(1)) / Scalar(j + 1);
    if (u[static_cast<std::size_t>(j)] - t > Scalar(0)) theta = t;
  }
  return (vv.array() - theta).cwiseMax(Scalar(0)).matrix();
}

namespace detail {

template <typename Scalar>
void validate_sigma(const MatrixX<Scalar>& sigma, const char* what) {
  require_symmetric(sigma, what);
  if (sigma.rows() == 0) throw InvalidParameter(std::string(what) + ": empty matrix");
}

template <typename Scalar>
Scalar quad(const MatrixX<Scalar>& sigma, const VectorX<Scalar>& w) {
  return w.dot(sigma * w);
}

/// min w^T S w over the simplex by a primal active-set method started from a
/// feasible point. Each pass solves the equality-constrained problem on the
/// working set, steps to the first blocking bound, and adds the most
/// violating coordinate once the working-set solution is nonnegative.
template <typename Scalar>
VectorX<Scalar> active_set_refine(const MatrixX<Scalar>& sigma, VectorX<Scalar> w) {
  const Eigen::Index k = sigma.rows();
  const Scalar scale = std::max(sigma.diagonal().cwiseAbs().maxCoeff(), std::numeric_limits<Scalar>::min());
  const Scalar kkt_tol = Scalar(1e-14) * scale;
  std::vector<bool> active(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) active[static_cast<std::size_t>(i)] = w[i] > Scalar(0);

  for (int pass = 0; pass < 8 * static_cast<int>(k) + 16; ++pass) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < k; ++i)
      if (active[static_cast<std::size_t>(i)]) idx.push_back(i);
    const auto m = static_cast<Eigen::Index>(idx.size());
    if (m == 0) break;

    // KKT system [S_AA 1; 1^T 0] [x; -mu] = [0; 1], minimum-norm solution.
    MatrixX<Scalar> kkt = MatrixX<Scalar>::Zero(m + 1, m + 1);
    for (Eigen::Index r = 0; r < m; ++r) {
      for (Eigen::Index c = 0; c < m; ++c) kkt(r, c) = sigma(idx[r], idx[c]);
      kkt(r, m) = kkt(m, r) = Scalar(1);
    }
    VectorX<Scalar> rhs = VectorX<Scalar>::Zero(m + 1);
    rhs[m] = Scalar(1);
    const VectorX<Scalar> sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    if (!sol.allFinite() || std::abs(sol.head(m).sum() - Scalar(1)) > Scalar(1e-9)) break;

    VectorX<Scalar> target = VectorX<Scalar>::Zero(k);
    for (Eigen::Index r = 0; r < m; ++r) target[idx[r]] = sol[r];

    if (target.minCoeff() >= Scalar(0)) {
      // Only accept when the working-set solution does not increase f.
      if (quad(sigma, target) <= quad(sigma, w)) w = target;
      const VectorX<Scalar> g = sigma * w;
      const Scalar mu = w.dot(g);
      Eigen::Index enter = -1;
      Scalar worst = -kkt_tol;
      for (Eigen::Index i = 0; i < k; ++i) {
        if (active[static_cast<std::size_t>(i)]) continue;
        if (g[i] - mu < worst) {
          worst = g[i] - mu;
          enter = i;
        }
      }
      if (enter < 0) break;
      active[static_cast<std::size_t>(enter)] = true;
      continue;
    }

    // Step from w toward target until the first coordinate hits zero.
    Scalar alpha = 1;
    Eigen::Index leave = -1;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (target[i] < Scalar(0) && w[i] > target[i]) {
        const Scalar a = w[i] / (w[i] - target[i]);
        if (a < alpha) {
          alpha = a;
          leave = i;
        }
      }
    }
    w = w + alpha * (target - w);
    for (Eigen::Index i = 0; i < k; ++i) {
      if (w[i] <= Scalar(0) || i == leave) {
        w[i] = 0;
        active[static_cast<std::size_t>(i)] = false;
      }
    }
    w /= w.sum();
  }
  w = w.cwiseMax(Scalar(0));
  return w / w.sum();
}

/// 1 / (1^T S^+ 1) when 1 lies in range(S); otherwise the relaxed infimum is 0.
template <typename Scalar>
Scalar relaxed_bound(const MatrixX<Scalar>& sigma, const MatrixX<Scalar>& pinv) {
  const VectorX<Scalar> ones = VectorX<Scalar>::Ones(sigma.rows());
  const Scalar denom = ones.dot(pinv * ones);
  if (!(denom > Scalar(0))) return Scalar(0);
  const VectorX<Scalar> proj = sigma * (pinv * ones);
  if ((proj - ones).norm() > Scalar(1e-8) * ones.norm()) return Scalar(0);
  return Scalar(1) / denom;
}

template <typename Scalar>
void fill_common(SolveReportX<Scalar>& r, const MatrixX<Scalar>& sigma) {
  r.per_denoiser_mse = sigma.diagonal();
  r.lower_bound = relaxed_bound<Scalar>(sigma, pseudo_inverse_psd(sigma));
}

}  // namespace detail

/// Frank-Wolfe on the simplex: w^0 = e_1,
/// w^{t+1} = w^t + 2/(t+2) (e_{i*} - w^t), i* = argmin_i (Sigma w^t)_i.
template <typename Scalar>
SolveReportX<Scalar> solve_fw(const CovMatrixX<Scalar>& sigma, const SolveOptions<Scalar>& opt = {}) {
  const MatrixX<Scalar>& s = sigma.entries;
  detail::validate_sigma(s, "solve_fw");
  if (opt.max_iter < 1) throw InvalidParameter("solve_fw: max_iter must be >= 1");
  const Eigen::Index k = s.rows();

  SolveReportX<Scalar> r;
  r.solver_id = SolverId::frank_wolfe;
  VectorX<Scalar> w = VectorX<Scalar>::Unit(k, 0);
  int t = 0;
  for (; t < opt.max_iter; ++t) {
    const VectorX<Scalar> g = s * w;
    r.trajectory.push_back(w.dot(g));
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < k; ++i)
      if (g[i] < g[best]) best = i;
    const Scalar gap = Scalar(2) * (w.dot(g) - g[best]);
    if (gap <= opt.gap_tol) break;
    const Scalar alpha = Scalar(2) / Scalar(t + 2);
    w *= (Scalar(1) - alpha);
    w[best] += alpha;
  }
  if (t == opt.max_iter) r.trajectory.push_back(detail::quad(s, w));
  r.iterations = t;

  if (opt.refine) {
    const VectorX<Scalar> polished = detail::active_set_refine<Scalar>(s, w);
    if (detail::quad(s, polished) <= detail::quad(s, w)) {
      w = polished;
      r.refined = true;
    }
  }
  r.weights = w;
  r.objective = detail::quad(s, w);
  detail::fill_common(r, s);
  return r;
}

/// Projected gradient with exact Euclidean projection onto the simplex.
template <typename Scalar>
SolveReportX<Scalar> solve_pg(const CovMatrixX<Scalar>& sigma, const SolveOptions<Scalar>& opt = {}) {
  const MatrixX<Scalar>& s = sigma.entries;
  detail::validate_sigma(s, "solve_pg");
  if (opt.max_iter < 1) throw InvalidParameter("solve_pg: max_iter must be >= 1");
  const Eigen::Index k = s.rows();

  Scalar step = opt.step;
  if (step <= Scalar(0)) {
    const Scalar lmax = jacobi_eigen(s).values[k - 1];
    step = lmax > Scalar(0) ? Scalar(1) / (Scalar(2) * lmax) : Scalar(1);
  }

  SolveReportX<Scalar> r;
  r.solver_id = SolverId::projected_gradient;
  VectorX<Scalar> w = VectorX<Scalar>::Constant(k, Scalar(1) / Scalar(k));
  r.trajectory.push_back(detail::quad(s, w));
  int t = 0;
  while (t < opt.max_iter) {
    const VectorX<Scalar> next = project_simplex(w - step * Scalar(2) * (s * w));
    ++t;
    const Scalar change = (next - w).cwiseAbs().maxCoeff();
    w = next;
    r.trajectory.push_back(detail::quad(s, w));
    if (change <= opt.step_tol) break;
  }
  r.iterations = t;
  r.weights = w;
  r.objective = detail::quad(s, w);
  detail::fill_common(r, s);
  return r;
}

/// Minimizer over the affine hull { 1^T w = 1 }: w* = S^+ 1 / (1^T S^+ 1).
/// Weights may be negative.
template <typename Scalar>
SolveReportX<Scalar> closed_form_relaxed(const CovMatrixX<Scalar>& sigma) {
  const MatrixX<Scalar>& s = sigma.entries;
  detail::validate_sigma(s, "closed_form_relaxed");
  const MatrixX<Scalar> pinv = pseudo_inverse_psd(s);
  const VectorX<Scalar> ones = VectorX<Scalar>::Ones(s.rows());
  const VectorX<Scalar> num = pinv * ones;
  const Scalar denom = ones.dot(num);
  if (!(std::abs(denom) > Scalar(1e-300)) || !std::isfinite(static_cast<double>(denom))) {
    throw NumericalError("closed_form_relaxed: 1^T S^+ 1 vanishes\n" + dump_matrix(s));
  }
  SolveReportX<Scalar> r;
  r.solver_id = SolverId::closed_form_relaxed;
  r.weights = num / denom;
  r.objective = detail::quad(s, r.weights);
  r.trajectory = {r.objective};
  r.per_denoiser_mse = s.diagonal();
  r.lower_bound = detail::relaxed_bound<Scalar>(s, pinv);
  return r;
}

/// Two-estimator relaxed optimum w1 = (S22 - S12) / (S11 + S22 - 2 S12).
/// May leave [0, 1] when S12 > min(S11, S22).
template <typename Scalar>
SolveReportX<Scalar> closed_form_2way(const CovMatrixX<Scalar>& sigma) {
  const MatrixX<Scalar>& s = sigma.entries;
  if (s.rows() != 2 || s.cols() != 2) throw ShapeError("closed_form_2way: matrix must be 2 x 2");
  detail::validate_sigma(s, "closed_form_2way");
  const Scalar denom = s(0, 0) + s(1, 1) - Scalar(2) * s(0, 1);
  if (!(denom > Scalar(0))) {
    throw NumericalError("closed_form_2way: S11 + S22 - 2 S12 must be positive (identical estimators?)");
  }
  SolveReportX<Scalar> r;
  r.solver_id = SolverId::closed_form_2way;
  const Scalar w1 = (s(1, 1) - s(0, 1)) / denom;
  r.weights = VectorX<Scalar>(2);
  r.weights << w1, Scalar(1) - w1;
  r.objective = detail::quad(s, r.weights);
  r.trajectory = {r.objective};
  detail::fill_common(r, s);
  return r;
}

template <typename Scalar>
SolveReportX<Scalar> solve(SolverId id, const CovMatrixX<Scalar>& sigma, const SolveOptions<Scalar>& opt = {}) {
  switch (id) {
    case SolverId::frank_wolfe: return solve_fw(sigma, opt);
    case SolverId::projected_gradient: return solve_pg(sigma, opt);
    case SolverId::closed_form_relaxed: return closed_form_relaxed(sigma);
    case SolverId::closed_form_2way: return closed_form_2way(sigma);
  }
  throw InvalidParameter("unknown solver");
}

template <typename Scalar>
struct BoundChainX {
  VectorX<Scalar> per_denoiser;  // diag(Sigma)
  Scalar combined;               // w^T Sigma w
  Scalar bound;                  // 1 / (1^T Sigma^+ 1)

  /// min_k Sigma_kk >= combined >= bound, each with slack `tol`.
  bool holds(Scalar tol = Scalar(1e-9)) const {
    return per_denoiser.minCoeff() >= combined - tol && combined >= bound - tol;
  }
};

using BoundChain = BoundChainX<double>;

template <typename Scalar, typename Derived>
BoundChainX<Scalar> lower_bound_chain(const CovMatrixX<Scalar>& sigma, const Eigen::MatrixBase<Derived>& w_hat) {
  const MatrixX<Scalar>& s = sigma.entries;
  detail::validate_sigma(s, "lower_bound_chain");
  if (w_hat.size() != s.rows()) throw ShapeError("lower_bound_chain: weight length differs from K");
  const VectorX<Scalar> w = w_hat;
  return {s.diagonal(), w.dot(s * w), detail::relaxed_bound<Scalar>(s, pseudo_inverse_psd(s))};
}

}  // namespace dencomb
