#include <doctest.h>

#include "dencomb/error.hpp"
#include "dencomb/instances.hpp"
#include "dencomb/rng.hpp"
#include "dencomb/simplex.hpp"
#include "oracles.hpp"

using namespace dencomb;

namespace {

CovMatrix mat2(double a, double b, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, b, d;
  return {m, Provenance::oracle};
}

}  // namespace

TEST_CASE("fw_vertex") {
  CHECK(fw_vertex(Eigen::Vector3d(3, 1, 2)) == Eigen::Vector3d(0, 1, 0));
  CHECK(fw_vertex(Eigen::Vector2d(1, 1)) == Eigen::Vector2d(1, 0));
  Rng rng(1);
  for (int rep = 0; rep < 200; ++rep) {
    Eigen::VectorXd g(7);
    for (int i = 0; i < 7; ++i) g[i] = rng.gaussian();
    const Eigen::VectorXd v = fw_vertex(g);
    Eigen::Index idx;
    g.minCoeff(&idx);
    CHECK(v == Eigen::VectorXd::Unit(7, idx));
    // The vertex minimizes the linear function over the simplex: compare with random points.
    for (int j = 0; j < 10; ++j) {
      Eigen::VectorXd w(7);
      for (int i = 0; i < 7; ++i) w[i] = rng.uniform();
      w /= w.sum();
      CHECK(g.dot(v) <= g.dot(w) + 1e-15);
    }
  }
}

TEST_CASE("project_simplex") {
  CHECK((project_simplex(Eigen::Vector2d(1.2, -0.2)) - Eigen::Vector2d(1, 0)).norm() <= 1e-15);
  CHECK((project_simplex(Eigen::Vector2d(0.6, 0.6)) - Eigen::Vector2d(0.5, 0.5)).norm() <= 1e-15);
  Rng rng(2);
  for (int rep = 0; rep < 200; ++rep) {
    Eigen::VectorXd v(5);
    for (int i = 0; i < 5; ++i) v[i] = 2 * rng.gaussian();
    const Eigen::VectorXd p = project_simplex(v);
    CHECK(on_simplex(p));
    for (int j = 0; j < 20; ++j) {
      Eigen::VectorXd w(5);
      for (int i = 0; i < 5; ++i) w[i] = rng.uniform();
      w /= w.sum();
      CHECK((v - p).norm() <= (v - w).norm() + 1e-12);
    }
  }
}

TEST_CASE("solve_fw examples") {
  SUBCASE("identity") {
    const auto r = solve_fw(CovMatrix{Eigen::MatrixXd::Identity(3, 3), Provenance::oracle});
    CHECK((r.weights.array() - 1.0 / 3).abs().maxCoeff() <= 1e-3);
    CHECK(std::abs(r.objective - 1.0 / 3) <= 1e-3);
  }
  SUBCASE("diagonal") {
    const auto r = solve_fw(mat2(4, 0, 1));
    CHECK((r.weights - Eigen::Vector2d(0.2, 0.8)).norm() <= 1e-9);
    CHECK(std::abs(r.objective - 0.8) <= 1e-12);
    CHECK(std::abs(r.objective - oracle::grid_search(mat2(4, 0, 1).entries, 1e-4, 1e-6).f) <= 1e-9);
  }
  SUBCASE("interior optimum matches the two-way formula") {
    const auto r = solve_fw(mat2(1, 0.9, 4));
    CHECK(std::abs(r.weights[0] - 3.1 / 3.2) <= 1e-9);
    CHECK(std::abs(r.weights[0] - closed_form_2way(mat2(1, 0.9, 4)).weights[0]) <= 1e-9);
  }
  SUBCASE("vertex optimum") {
    const auto r = solve_fw(mat2(1, 1.5, 4));
    CHECK((r.weights - Eigen::Vector2d(1, 0)).norm() <= 1e-12);
    CHECK(r.objective == doctest::Approx(1.0));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(solve_fw(CovMatrix{Eigen::MatrixXd(0, 0), Provenance::oracle}), InvalidParameter);
    Eigen::MatrixXd asym(2, 2);
    asym << 1, 0, 0.5, 1;
    CHECK_THROWS_AS(solve_fw(CovMatrix{asym, Provenance::oracle}), InvalidParameter);
    Eigen::MatrixXd nan = Eigen::MatrixXd::Identity(2, 2);
    nan(0, 0) = std::nan("");
    CHECK_THROWS_AS(solve_fw(CovMatrix{nan, Provenance::oracle}), NumericalError);
  }
}

TEST_CASE("solve_fw iterates and trajectory") {
  Rng rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    const int k = 2 + rep % 2;
    const CovMatrix s = random_spd(k, rng);
    SolveOptions<double> raw;
    raw.refine = false;
    raw.gap_tol = 0;
    const auto r = solve_fw(s, raw);
    CHECK(on_simplex(r.weights));
    CHECK(r.trajectory.size() == static_cast<std::size_t>(r.iterations) + 1);
    // Raw iterates reach 1e-3 relative error of the grid optimum by iteration 500.
    const double best = oracle::grid_search(s.entries).f;
    CHECK(r.trajectory.back() <= best * (1 + 1e-3));
  }
}

TEST_CASE("solvers agree with the grid oracle on K <= 3") {
  Rng rng(4);
  for (int rep = 0; rep < 60; ++rep) {
    const CovMatrix s = random_spd(2 + rep % 2, rng);
    const double best = oracle::grid_search(s.entries).f;
    CHECK(std::abs(solve_fw(s).objective - best) <= 1e-4 * best);
    SolveOptions<double> pg;
    pg.max_iter = 100000;
    CHECK(std::abs(solve_pg(s, pg).objective - best) <= 1e-4 * best);
  }
}

TEST_CASE("solve_pg") {
  const auto r = solve_pg(CovMatrix{Eigen::MatrixXd::Identity(2, 2), Provenance::oracle});
  CHECK((r.weights - Eigen::Vector2d(0.5, 0.5)).norm() <= 1e-12);
  Rng rng(5);
  SolveOptions<double> opt;
  opt.max_iter = 2000;
  const auto s = random_spd(6, rng);
  const auto t = solve_pg(s, opt).trajectory;
  for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] <= t[i - 1] + 1e-15);
}

TEST_CASE("scale invariance of the argmin") {
  Rng rng(6);
  for (int rep = 0; rep < 50; ++rep) {
    const CovMatrix s = random_spd(4, rng);
    const CovMatrix scaled{s.entries * 7.5, Provenance::oracle};
    const auto a = solve_fw(s), b = solve_fw(scaled);
    CHECK((a.weights - b.weights).norm() <= 1e-9);
    CHECK(std::abs(b.objective - 7.5 * a.objective) <= 1e-9 * b.objective);
  }
}

TEST_CASE("rank-one degeneracy") {
  const CovMatrix s{Eigen::MatrixXd::Constant(3, 3, 0.2), Provenance::oracle};
  const auto a = solve_fw(s);
  const auto b = solve_pg(s);
  for (double t : {0.0, 0.25, 0.5, 0.9, 1.0}) {
    const Eigen::VectorXd w = t * a.weights + (1 - t) * b.weights;
    CHECK(std::abs(w.dot(s.entries * w) - 0.2) <= 1e-10);
  }
}

TEST_CASE("closed_form_relaxed") {
  SUBCASE("isotropic") {
    const auto r = closed_form_relaxed(CovMatrix{Eigen::MatrixXd::Identity(4, 4), Provenance::oracle});
    CHECK((r.weights.array() - 0.25).abs().maxCoeff() <= 1e-12);
    CHECK(std::abs(r.lower_bound - 0.25) <= 1e-12);
  }
  SUBCASE("rank one") {
    const CovMatrix s{Eigen::MatrixXd::Ones(2, 2), Provenance::oracle};
    const auto r = closed_form_relaxed(s);
    CHECK((r.weights - Eigen::Vector2d(0.5, 0.5)).norm() <= 1e-12);
    CHECK(std::abs(r.lower_bound - 1.0) <= 1e-12);
    Rng rng(1);
    for (int i = 0; i < 20; ++i) {
      const double t = rng.uniform();
      const Eigen::Vector2d w(t, 1 - t);
      CHECK(std::abs(w.dot(s.entries * w) - 1.0) <= 1e-12);
    }
  }
  SUBCASE("diagonal") {
    const auto r = closed_form_relaxed(mat2(4, 0, 1));
    CHECK((r.weights - Eigen::Vector2d(0.2, 0.8)).norm() <= 1e-12);
    CHECK(std::abs(r.lower_bound - 0.8) <= 1e-12);
    CHECK(std::abs(r.objective - solve_fw(mat2(4, 0, 1)).objective) <= 1e-12);
  }
  SUBCASE("vanishing denominator") {
    CHECK_THROWS_AS(closed_form_relaxed(CovMatrix{Eigen::MatrixXd::Zero(2, 2), Provenance::oracle}), NumericalError);
  }
}

TEST_CASE("closed_form_2way") {
  CHECK(closed_form_2way(mat2(2, 1, 2)).weights[0] == doctest::Approx(0.5));
  CHECK(std::abs(closed_form_2way(mat2(1, 0.9, 4)).weights[0] - 0.96875) <= 1e-15);
  CHECK(std::abs(closed_form_2way(mat2(1, 1.5, 4)).weights[0] - 1.25) <= 1e-15);
  CHECK_THROWS_AS(closed_form_2way(CovMatrix{Eigen::MatrixXd::Ones(2, 2), Provenance::oracle}), NumericalError);
  CHECK_THROWS_AS(closed_form_2way(CovMatrix{Eigen::MatrixXd::Identity(3, 3), Provenance::oracle}), ShapeError);
}

TEST_CASE("lower_bound_chain") {
  const auto c = lower_bound_chain(CovMatrix{Eigen::MatrixXd::Identity(3, 3), Provenance::oracle},
                                   Eigen::Vector3d::Constant(1.0 / 3));
  CHECK(c.per_denoiser == Eigen::Vector3d::Ones());
  CHECK(c.combined == doctest::Approx(1.0 / 3));
  CHECK(c.bound == doctest::Approx(1.0 / 3));
  const auto d = lower_bound_chain(mat2(4, 0, 1), Eigen::Vector2d(0.2, 0.8));
  CHECK(d.combined == doctest::Approx(0.8));
  CHECK(d.bound == doctest::Approx(0.8));
  Rng rng(7);
  for (int rep = 0; rep < 200; ++rep) {
    const CovMatrix s = random_spd(2 + rep % 9, rng);
    CHECK(lower_bound_chain(s, solve_fw(s).weights).holds(1e-9));
  }
  // Singular matrix with the ones vector outside its range: the bound is 0.
  CHECK(lower_bound_chain(mat2(1, 0, 0), Eigen::Vector2d(0, 1)).bound == 0.0);
}

TEST_CASE("solver names") {
  for (auto id : {SolverId::frank_wolfe, SolverId::projected_gradient, SolverId::closed_form_relaxed,
                  SolverId::closed_form_2way}) {
    CHECK(solver_from_string(to_string(id)) == id);
  }
  CHECK_THROWS_AS(solver_from_string("admm"), InvalidParameter);
}
