#include "g2pia/theory.hpp"

#include "g2pia/rng.hpp"

#include <algorithm>
#include <cmath>

namespace g2pia {

namespace {

double gaussian(std::mt19937_64& rng) {
  // Box-Muller; keeps the suite reproducible across standard libraries.
  const double u1 = std::max(uniform_real(rng), 1e-300);
  const double u2 = uniform_real(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Vector random_vector(std::mt19937_64& rng, int dim) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = gaussian(rng);
  return v;
}

CovarianceModel random_spd(std::mt19937_64& rng, int dim) {
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = gaussian(rng);
  Matrix sigma = a * a.transpose() / dim + 0.1 * Matrix::Identity(dim, dim);
  sigma = 0.5 * (sigma + sigma.transpose());
  return CovarianceModel::dense(sigma);
}

// x scaled so x^T Sigma^{-1} x lands in [1.5, 10] (strictly outside).
EmbeddingVector random_external_point(std::mt19937_64& rng,
                                      const CovarianceModel& sigma) {
  Vector x = random_vector(rng, sigma.dim());
  if (x.norm() < 1e-6) x[0] = 1.0;
  const double q = sigma.inv_quadratic(x);
  const double target = uniform_real(rng, 1.5, 10.0);
  return EmbeddingVector(x * std::sqrt(target / q));
}

}  // namespace

bool TheoryReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const TheoryCheck& c) { return c.pass; });
}

double kl_grid_oracle(const EmbeddingVector& x, const EmbeddingVector& x_adv,
                      const CovarianceModel& sigma, double spacing,
                      double half_extent) {
  if (x.dim() != 2) {
    throw std::invalid_argument("kl_grid_oracle is a 2-D oracle");
  }
  const Vector center = 0.5 * (x.values() + x_adv.values());
  const int half_n = static_cast<int>(std::ceil(half_extent / spacing));
  const int side = 2 * half_n + 1;

  // Two streaming log-sum-exp passes, then the KL sum; the grid never needs
  // to be materialized.
  double max_p = -1e300, max_q = -1e300;
  std::vector<double> lp(static_cast<size_t>(side) * side);
  std::vector<double> lq(lp.size());
  size_t idx = 0;
  Vector y(2);
  for (int i = -half_n; i <= half_n; ++i) {
    for (int j = -half_n; j <= half_n; ++j, ++idx) {
      y[0] = center[0] + i * spacing;
      y[1] = center[1] + j * spacing;
      const double a = -0.5 * sigma.inv_quadratic(y - x.values());
      const double b = -0.5 * sigma.inv_quadratic(y - x_adv.values());
      lp[idx] = a;
      lq[idx] = b;
      max_p = std::max(max_p, a);
      max_q = std::max(max_q, b);
    }
  }
  double zp = 0.0, zq = 0.0;
  for (size_t k = 0; k < lp.size(); ++k) {
    zp += std::exp(lp[k] - max_p);
    zq += std::exp(lq[k] - max_q);
  }
  const double log_zp = max_p + std::log(zp);
  const double log_zq = max_q + std::log(zq);
  double kl = 0.0;
  for (size_t k = 0; k < lp.size(); ++k) {
    const double p = std::exp(lp[k] - log_zp);
    if (p > 0.0) kl += p * ((lp[k] - log_zp) - (lq[k] - log_zq));
  }
  return kl;
}

TheoryReport run_theory_suite(const TheoryOptions& opts) {
  TheoryReport report;
  std::mt19937_64 rng(opts.seed);

  // KL <-> Mahalanobis equivalence on a dense 2-D grid.
  {
    double worst = 0.0;
    for (int t = 0; t < opts.kl_grid_instances; ++t) {
      const CovarianceModel sigma = random_spd(rng, 2);
      const Eigen::SelfAdjointEigenSolver<Matrix> es(sigma.matrix());
      const double smin = std::sqrt(es.eigenvalues().minCoeff());
      const double smax = std::sqrt(es.eigenvalues().maxCoeff());
      const Vector x = random_vector(rng, 2);
      Vector d = random_vector(rng, 2);
      d *= uniform_real(rng, 0.2, 2.0) * smin / d.norm();
      const EmbeddingVector ex(x), ea(x + d);
      const double closed = kl_gaussian_closed(ex, ea, sigma);
      const double grid =
          kl_grid_oracle(ex, ea, sigma, 0.1 * smin, 8.0 * smax);
      worst = std::max(worst, std::abs(grid - closed) / closed);
    }
    report.checks.push_back({"kl_grid_equivalence", worst <= 0.05, worst, 0.05,
                             std::to_string(opts.kl_grid_instances) +
                                 " random (x, x', Sigma) instances"});
  }

  // KKT stationarity + active constraint over random dims 2-10.
  {
    double worst_kkt = 0.0, worst_active = 0.0;
    for (int t = 0; t < opts.solver_instances; ++t) {
      const int dim = uniform_int(rng, 2, 10);
      const CovarianceModel sigma = random_spd(rng, dim);
      const EmbeddingVector x = random_external_point(rng, sigma);
      const OptimalAttack sol = solve_optimal_attack(x, sigma);
      worst_kkt = std::max(worst_kkt, sol.kkt_residual);
      worst_active = std::max(worst_active, std::abs(sol.constraint_value - 1.0));
    }
    report.checks.push_back({"kkt_stationarity", worst_kkt < 1e-8, worst_kkt,
                             1e-8, "||2x' + 2 lambda Sigma^{-1}(x'-x)||"});
    report.checks.push_back({"active_constraint", worst_active < 1e-8,
                             worst_active, 1e-8,
                             "|(x'-x)^T Sigma^{-1}(x'-x) - 1|"});
  }

  // General solver vs 2-D diagonal closed form.
  {
    double worst = 0.0;
    for (int t = 0; t < opts.solver_instances; ++t) {
      const double s1 = uniform_real(rng, 0.2, 4.0);
      const double s2 = uniform_real(rng, 0.2, 4.0);
      Vector var(2);
      var << s1, s2;
      const CovarianceModel sigma = CovarianceModel::diagonal(var);
      const EmbeddingVector x = random_external_point(rng, sigma);
      const OptimalAttack a = solve_optimal_attack(x, sigma);
      const OptimalAttack b = solve_2d_diagonal(x, s1, s2);
      worst = std::max(
          worst, (a.x_star.values() - b.x_star.values()).cwiseAbs().maxCoeff());
    }
    report.checks.push_back({"closed_form_2d_agreement", worst < 1e-8, worst,
                             1e-8, "componentwise |general - closed form|"});
  }

  // Spherical analytic case.
  {
    const CovarianceModel sigma = CovarianceModel::dense(Matrix::Identity(2, 2));
    const OptimalAttack sol = solve_optimal_attack(EmbeddingVector{2.0, 0.0}, sigma);
    Vector expect(2);
    expect << 1.0, 0.0;
    const double err = std::max((sol.x_star.values() - expect).cwiseAbs().maxCoeff(),
                                std::abs(sol.lambda - 1.0));
    report.checks.push_back({"spherical_analytic_case", err < 1e-10, err, 1e-10,
                             "Sigma = I, x = (2,0) => x' = (1,0), lambda = 1"});
  }

  // Brute-force boundary oracle never beats the solver.
  {
    double worst_2d = 0.0;
    for (int t = 0; t < opts.oracle_instances; ++t) {
      const double s1 = uniform_real(rng, 0.2, 4.0);
      const double s2 = uniform_real(rng, 0.2, 4.0);
      Vector var(2);
      var << s1, s2;
      const CovarianceModel sigma = CovarianceModel::diagonal(var);
      const EmbeddingVector x = random_external_point(rng, sigma);
      const OptimalAttack sol = solve_optimal_attack(x, sigma);
      const double r1 = std::sqrt(s1), r2 = std::sqrt(s2);
      double best = 1e300;
      for (int j = 0; j < opts.dense_sweep_points; ++j) {
        const double th = 2.0 * M_PI * j / opts.dense_sweep_points;
        const double p0 = x.values()[0] + r1 * std::cos(th);
        const double p1 = x.values()[1] + r2 * std::sin(th);
        best = std::min(best, std::sqrt(p0 * p0 + p1 * p1));
      }
      worst_2d = std::max(worst_2d, sol.x_star.norm() - best);
    }
    report.checks.push_back({"boundary_oracle_2d", worst_2d <= 1e-4, worst_2d,
                             1e-4, "solver norm minus dense-sweep minimum"});

    double worst_nd = 0.0;
    for (int t = 0; t < opts.oracle_instances; ++t) {
      const int dim = uniform_int(rng, 3, 10);
      const CovarianceModel sigma = random_spd(rng, dim);
      const EmbeddingVector x = random_external_point(rng, sigma);
      const OptimalAttack sol = solve_optimal_attack(x, sigma);
      double best = 1e300;
      for (int j = 0; j < opts.direction_oracle_points; ++j) {
        Vector d = random_vector(rng, dim);
        d /= std::sqrt(sigma.inv_quadratic(d));
        best = std::min(best, (x.values() + d).norm());
      }
      worst_nd = std::max(worst_nd, sol.x_star.norm() - best);
    }
    report.checks.push_back({"boundary_oracle_nd", worst_nd <= 1e-3, worst_nd,
                             1e-3, "dims 3-10, random directions projected "
                                   "onto the constraint surface"});
  }

  // Reference-geometry sweep: one cosine maximum, one norm minimum on the
  // relevant arc, and solver agreement at the norm minimum.
  {
    Vector var(2);
    var << 4.0, 1.0;
    const CovarianceModel sigma = CovarianceModel::diagonal(var);
    const EmbeddingVector x{3.0, 2.0};
    const auto sweep = ellipse_sweep(x, sigma, opts.unimodality_points);
    std::vector<double> cosv, normv;
    for (const auto& s : sweep) {
      cosv.push_back(s.cos_to_x);
      normv.push_back(s.norm);
    }
    const auto min_it = std::min_element(normv.begin(), normv.end());
    const int argmin = static_cast<int>(min_it - normv.begin());
    const OptimalAttack sol = solve_optimal_attack(x, sigma);
    const double grid_res =
        2.0 * M_PI * 2.0 / opts.unimodality_points;  // max boundary step
    const double dist =
        (sweep[argmin].point.values() - sol.x_star.values()).norm();
    // The "first increases, then decreases" claim concerns the boundary arc
    // bounded by the two cosine local minima and containing the optimum. On
    // the full closed curve the cosine necessarily peaks a second time where
    // the boundary crosses the ray from the origin through x, so the count
    // is restricted to that arc.
    const int n = static_cast<int>(cosv.size());
    std::vector<int> cos_min_idx;
    for (int i = 0; i < n; ++i) {
      if (cosv[i] < cosv[(i + n - 1) % n] && cosv[i] < cosv[(i + 1) % n])
        cos_min_idx.push_back(i);
    }
    int arc_cos_max = -1, arc_norm_min = -1;
    if (cos_min_idx.size() == 2) {
      int a = cos_min_idx[0], b = cos_min_idx[1];
      const auto forward_contains = [n](int from, int to, int i) {
        return ((i - from + n) % n) < ((to - from + n) % n) && i != from;
      };
      if (!forward_contains(a, b, argmin)) std::swap(a, b);
      arc_cos_max = arc_norm_min = 0;
      for (int k = (a + 1) % n; k != b; k = (k + 1) % n) {
        if (cosv[k] > cosv[(k + n - 1) % n] && cosv[k] > cosv[(k + 1) % n])
          ++arc_cos_max;
        if (normv[k] < normv[(k + n - 1) % n] && normv[k] < normv[(k + 1) % n])
          ++arc_norm_min;
      }
    }
    const bool pass =
        arc_cos_max == 1 && arc_norm_min == 1 && dist <= 2.0 * grid_res;
    report.checks.push_back(
        {"boundary_unimodality", pass, dist, 2.0 * grid_res,
         "arc cos maxima=" + std::to_string(arc_cos_max) +
             ", arc norm minima=" + std::to_string(arc_norm_min)});

    // Ratio-objective link: argmin of ||x'|| equals argmax of the
    // Mahalanobis-to-norm ratio evaluated directly on the sweep.
    double best_ratio = -1e300;
    size_t arg_ratio = 0;
    for (size_t i = 0; i < sweep.size(); ++i) {
      const double num =
          sigma.inv_quadratic(sweep[i].point.values() - x.values());
      const double ratio = num / (sweep[i].norm * sweep[i].norm);
      if (ratio > best_ratio) {
        best_ratio = ratio;
        arg_ratio = i;
      }
    }
    const bool link = arg_ratio == argmin;
    report.checks.push_back({"ratio_objective_link", link,
                             static_cast<double>(arg_ratio == argmin ? 0 : 1),
                             0.0, "argmax ratio sample = argmin norm sample"});
  }

  // Taylor surrogate identity on unit-stacked pairs.
  {
    double worst = 0.0;
    for (int t = 0; t < opts.taylor_pairs; ++t) {
      const int dim = uniform_int(rng, 1, 6);
      Vector stacked = random_vector(rng, 2 * dim);
      stacked /= stacked.norm();
      const EmbeddingVector x(stacked.head(dim));
      const EmbeddingVector xa(stacked.tail(dim));
      const auto [lhs, rhs] = taylor_surrogate_identity(x, xa);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    report.checks.push_back({"taylor_identity", worst < 1e-9, worst, 1e-9,
                             "| |x'-x|^2 - (1 - 2|x'||x|cos) |"});
  }

  // Strict 0 < cos(x'*, x) < 1 for anisotropic covariances.
  {
    double margin = 1.0;
    bool ok = true;
    for (int t = 0; t < opts.cos_bound_trials; ++t) {
      const int dim = uniform_int(rng, 2, 6);
      CovarianceModel sigma = random_spd(rng, dim);
      const Eigen::SelfAdjointEigenSolver<Matrix> es(sigma.matrix());
      if (es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff() < 1.05) {
        // effectively isotropic draw; skip (the bound is not strict there)
        continue;
      }
      const EmbeddingVector x = random_external_point(rng, sigma);
      const double c = cos_of_optimal(x, sigma);
      ok = ok && c > 0.0 && c < 1.0;
      margin = std::min({margin, c, 1.0 - c});
    }
    report.checks.push_back({"cos_strict_bound", ok, margin, 0.0,
                             "min distance of cos(x'*, x) to {0, 1}"});
  }

  return report;
}

nlohmann::json to_json(const TheoryReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"residual", c.residual},
                      {"tolerance", c.tolerance},
                      {"detail", c.detail}});
  }
  return {{"all_pass", report.all_pass()}, {"checks", checks}};
}

}  // namespace g2pia
