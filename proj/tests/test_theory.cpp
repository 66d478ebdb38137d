#include "g2pia/theory.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace g2pia;

TEST_CASE("grid oracle reproduces the closed-form Gaussian KL") {
  Vector var(2);
  var << 0.5, 0.8;
  const auto sigma = CovarianceModel::diagonal(var);
  const EmbeddingVector x{0.3, -0.2};
  const EmbeddingVector x_adv{0.1, 0.1};
  const double closed = kl_gaussian_closed(x, x_adv, sigma);
  const double spacing = 0.1 * std::sqrt(0.5);
  const double half_extent = 8.0 * std::sqrt(0.8);
  const double grid = kl_grid_oracle(x, x_adv, sigma, spacing, half_extent);
  CHECK(std::abs(grid - closed) / closed < 0.05);
  CHECK(grid > 0.0);
  // Identical means: both divergences vanish.
  CHECK(kl_grid_oracle(x, x, sigma, spacing, half_extent) ==
        doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("full property suite passes on a reduced budget") {
  TheoryOptions opts;
  opts.kl_grid_instances = 3;
  opts.solver_instances = 50;
  opts.taylor_pairs = 50;
  opts.cos_bound_trials = 50;
  opts.dense_sweep_points = 20000;
  opts.direction_oracle_points = 5000;
  opts.oracle_instances = 3;
  opts.unimodality_points = 2000;
  const auto report = run_theory_suite(opts);
  CHECK(report.checks.size() == 11);
  std::set<std::string> names;
  for (const auto& c : report.checks) {
    names.insert(c.name);
    INFO(c.name, " residual=", c.residual, " tol=", c.tolerance, " ", c.detail);
    CHECK(c.pass);
    // For margin-style checks (tolerance 0) the residual is a distance from
    // the failure boundary, not an error bound.
    if (c.tolerance > 0.0) CHECK(c.residual <= c.tolerance);
  }
  CHECK(names.size() == report.checks.size());
  CHECK(report.all_pass());
  const auto j = to_json(report);
  CHECK(j.contains("checks"));
  CHECK(j["checks"].size() == 11);
}

TEST_CASE("suite is deterministic for a fixed seed") {
  TheoryOptions opts;
  opts.kl_grid_instances = 2;
  opts.solver_instances = 20;
  opts.taylor_pairs = 20;
  opts.cos_bound_trials = 20;
  opts.dense_sweep_points = 5000;
  opts.direction_oracle_points = 2000;
  opts.oracle_instances = 2;
  opts.unimodality_points = 1000;
  const auto a = run_theory_suite(opts);
  const auto b = run_theory_suite(opts);
  REQUIRE(a.checks.size() == b.checks.size());
  for (size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].residual == b.checks[i].residual);
  }
}
