#include "g2pia/optimizer.hpp"

#include <cmath>
#include <functional>

namespace g2pia {

namespace {

constexpr int kMaxBracketDoublings = 200;
constexpr int kMaxBisectionIters = 500;
constexpr double kBracketWidth = 1e-12;

// x'(lambda) = lambda (Sigma + lambda I)^{-1} x.
Vector attack_point(double lambda, const Vector& x, const Matrix& sigma) {
  const int n = static_cast<int>(x.size());
  Matrix shifted = sigma + lambda * Matrix::Identity(n, n);
  return shifted.ldlt().solve(lambda * x);
}

double kkt_residual(const Vector& z, double lambda, const Vector& x,
                    const CovarianceModel& sigma) {
  return (2.0 * z + 2.0 * lambda * sigma.solve(z - x)).norm();
}

// Bisection on a monotonically decreasing gap function with g(0) > 0.
double bisect_multiplier(const std::function<double(double)>& gap) {
  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (gap(hi) > 0.0) {
    hi *= 2.0;
    if (++doublings > kMaxBracketDoublings) {
      throw std::runtime_error(
          "solve_optimal_attack: no sign change after 200 bracket doublings");
    }
  }
  for (int it = 0; it < kMaxBisectionIters && hi - lo > kBracketWidth; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void require_diagonal_2d(const CovarianceModel& sigma) {
  if (!sigma.is_diagonal() || sigma.dim() != 2) {
    throw std::invalid_argument("operation requires a diagonal 2x2 covariance");
  }
}

}  // namespace

OptimalAttack solve_optimal_attack(const EmbeddingVector& x,
                                   const CovarianceModel& sigma) {
  if (x.dim() != sigma.dim()) {
    throw std::invalid_argument("x dimension does not match covariance");
  }
  if (x.norm() == 0.0) {
    throw std::domain_error("solve_optimal_attack requires nonzero x");
  }
  const Vector& xv = x.values();
  const double origin_gap = sigma.inv_quadratic(xv);
  if (origin_gap <= 1.0) {
    // The origin already satisfies the constraint.
    OptimalAttack out{EmbeddingVector(Vector::Zero(x.dim())), 0.0, 0.0,
                      origin_gap, true};
    return out;
  }

  const auto gap = [&](double lambda) {
    const Vector z = attack_point(lambda, xv, sigma.matrix());
    return sigma.inv_quadratic(z - xv) - 1.0;
  };
  const double lambda = bisect_multiplier(gap);
  Vector z = attack_point(lambda, xv, sigma.matrix());
  OptimalAttack out{EmbeddingVector(z), lambda, kkt_residual(z, lambda, xv, sigma),
                    sigma.inv_quadratic(z - xv), false};
  return out;
}

OptimalAttack solve_2d_diagonal(const EmbeddingVector& x, double sigma1_sq,
                                double sigma2_sq) {
  if (x.dim() != 2) {
    throw std::invalid_argument("solve_2d_diagonal requires a 2-vector");
  }
  if (sigma1_sq <= 0.0 || sigma2_sq <= 0.0) {
    throw std::invalid_argument("variances must be positive");
  }
  if (x.norm() == 0.0) {
    throw std::domain_error("solve_2d_diagonal requires nonzero x");
  }
  const double x1 = x.values()[0];
  const double x2 = x.values()[1];
  const double origin_gap = x1 * x1 / sigma1_sq + x2 * x2 / sigma2_sq;
  Vector var(2);
  var << sigma1_sq, sigma2_sq;
  CovarianceModel sigma = CovarianceModel::diagonal(var);
  if (origin_gap <= 1.0) {
    return OptimalAttack{EmbeddingVector(Vector::Zero(2)), 0.0, 0.0, origin_gap,
                         true};
  }

  // Boundary equation with z_i = lambda / (lambda + sigma_i^2) x_i substituted:
  // sum_i sigma_i^2 x_i^2 / (lambda + sigma_i^2)^2 = 1.
  const auto gap = [&](double lambda) {
    const double a = lambda + sigma1_sq;
    const double b = lambda + sigma2_sq;
    return sigma1_sq * x1 * x1 / (a * a) + sigma2_sq * x2 * x2 / (b * b) - 1.0;
  };
  const double lambda = bisect_multiplier(gap);
  Vector z(2);
  z << lambda / (lambda + sigma1_sq) * x1, lambda / (lambda + sigma2_sq) * x2;
  return OptimalAttack{EmbeddingVector(z), lambda,
                       kkt_residual(z, lambda, x.values(), sigma),
                       sigma.inv_quadratic(z - x.values()), false};
}

double cos_of_optimal(const EmbeddingVector& x, const CovarianceModel& sigma) {
  const OptimalAttack sol = solve_optimal_attack(x, sigma);
  if (sol.degenerate) {
    throw std::domain_error("cos_of_optimal undefined for a degenerate solve");
  }
  const int n = x.dim();
  Matrix shifted = sigma.matrix() + sol.lambda * Matrix::Identity(n, n);
  const double numer = sol.lambda * x.values().dot(shifted.ldlt().solve(x.values()));
  return numer / (sol.x_star.norm() * x.norm());
}

std::vector<SweepSample> ellipse_sweep(const EmbeddingVector& x,
                                       const CovarianceModel& sigma,
                                       int n_points) {
  require_diagonal_2d(sigma);
  if (x.dim() != 2) {
    throw std::invalid_argument("ellipse_sweep requires a 2-vector");
  }
  if (n_points < 8) {
    throw std::invalid_argument("ellipse_sweep requires n_points >= 8");
  }
  if (sigma.inv_quadratic(x.values()) <= 1.0) {
    throw std::domain_error("ellipse_sweep requires x outside the ellipse");
  }
  const double s1 = std::sqrt(sigma.variances()[0]);
  const double s2 = std::sqrt(sigma.variances()[1]);
  std::vector<SweepSample> samples;
  samples.reserve(n_points);
  for (int j = 0; j < n_points; ++j) {
    const double theta = 2.0 * M_PI * j / n_points;
    Vector p(2);
    p << x.values()[0] + s1 * std::cos(theta), x.values()[1] + s2 * std::sin(theta);
    EmbeddingVector point(p);
    samples.push_back(SweepSample{theta, point, cosine(point, x), point.norm()});
  }
  return samples;
}

std::vector<SweepSample> surrogate_targets(const EmbeddingVector& x,
                                           const CovarianceModel& sigma,
                                           double gamma, double delta,
                                           int n_points) {
  std::vector<SweepSample> out;
  for (const auto& s : ellipse_sweep(x, sigma, n_points)) {
    if (std::abs(s.cos_to_x - gamma) < delta) {
      out.push_back(s);
    }
  }
  return out;
}

std::pair<double, double> taylor_surrogate_identity(const EmbeddingVector& x,
                                                    const EmbeddingVector& x_adv) {
  const double nx = x.norm();
  const double na = x_adv.norm();
  if (std::abs(nx * nx + na * na - 1.0) > 1e-9) {
    throw std::invalid_argument(
        "taylor_surrogate_identity requires |x|^2 + |x'|^2 = 1");
  }
  const double lhs = (x_adv.values() - x.values()).squaredNorm();
  // |x'||x| cos(x', x) is just the dot product; evaluating it that way also
  // covers the zero-vector halves where the cosine itself is undefined.
  const double rhs = 1.0 - 2.0 * x_adv.values().dot(x.values());
  return {lhs, rhs};
}

}  // namespace g2pia
