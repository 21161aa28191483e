#pragma once

// Symmetric eigendecomposition by cyclic Jacobi rotations.
//
// Intended for the small dense K x K matrices handled here (K up to a few
// dozen). Sweeps run until the off-diagonal Frobenius norm drops to
// 1e-12 * scale, where scale = max(|trace|, ||A||_F).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Core>

#include "dencomb/error.hpp"

namespace dencomb {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct SymmetricEigen {
  VectorX<Scalar> values;   // ascending
  MatrixX<Scalar> vectors;  // column i pairs with values[i]
};

template <typename Derived>
std::string dump_matrix(const Eigen::MatrixBase<Derived>& m) {
  std::ostringstream os;
  os.precision(17);
  os << m;
  return os.str();
}

template <typename Derived>
SymmetricEigen<typename Derived::Scalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& input,
                                                      int max_sweeps = 100) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  using std::sqrt;
  if (input.rows() != input.cols()) throw ShapeError("jacobi_eigen: matrix is not square");
  const Eigen::Index n = input.rows();
  MatrixX<Scalar> a = input;
  MatrixX<Scalar> v = MatrixX<Scalar>::Identity(n, n);
  if (!a.allFinite()) throw NumericalError("jacobi_eigen: non-finite entries\n" + dump_matrix(a));

  const Scalar scale = std::max(abs(a.trace()), a.norm());
  const Scalar tol = Scalar(1e-12) * scale;
  auto off_norm = [&] {
    Scalar s = 0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = 0; q < n; ++q)
        if (p != q) s += a(p, q) * a(p, q);
    return sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > tol) {
    if (sweep++ >= max_sweeps) {
      throw NumericalError("jacobi_eigen: no convergence after " + std::to_string(max_sweeps) +
                           " sweeps\n" + dump_matrix(input));
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        // Rotation angle zeroing a(p,q), small-angle root for stability.
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) / (abs(theta) + sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = Scalar(0);
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) < a(j, j); });
  SymmetricEigen<Scalar> out{VectorX<Scalar>(n), MatrixX<Scalar>(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[i] = a(order[i], order[i]);
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

/// Spectral norm of a general square or rectangular matrix, sqrt(lambda_max(M^T M)).
template <typename Derived>
typename Derived::Scalar spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const MatrixX<Scalar> gram = m.transpose() * m;
  const auto eig = jacobi_eigen(gram);
  using std::sqrt;
  return sqrt(std::max(Scalar(0), eig.values[eig.values.size() - 1]));
}

}  // namespace dencomb
