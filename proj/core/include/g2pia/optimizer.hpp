#pragma once

#include "g2pia/geometry.hpp"

#include <utility>
#include <vector>

namespace g2pia {

/// Solution of the constrained min-norm problem
///   min |x'|  s.t.  (x' - x)^T Sigma^{-1} (x' - x) <= 1.
/// Degenerate means the origin is already feasible (x'* = 0, lambda = 0).
struct OptimalAttack {
  EmbeddingVector x_star;
  double lambda = 0.0;
  double kkt_residual = 0.0;
  double constraint_value = 0.0;
  bool degenerate = false;
};

/// One boundary sample of the 2-D constraint ellipse centered at x.
struct SweepSample {
  double arc_parameter = 0.0;  // theta in [0, 2pi)
  EmbeddingVector point;
  double cos_to_x = 0.0;
  double norm = 0.0;
};

/// Active-set solve via safeguarded bisection on the monotone constraint-gap
/// g(lambda) = (x'(lambda) - x)^T Sigma^{-1} (x'(lambda) - x) - 1 with
/// x'(lambda) = lambda (Sigma + lambda I)^{-1} x.
/// Throws std::domain_error on zero x, std::runtime_error if no bracket is
/// found after 200 doublings.
OptimalAttack solve_optimal_attack(const EmbeddingVector& x,
                                   const CovarianceModel& sigma);

/// 2-D diagonal closed form z_i = lambda / (lambda + sigma_i^2) * x_i with the
/// boundary multiplier found by scalar root-finding.
OptimalAttack solve_2d_diagonal(const EmbeddingVector& x, double sigma1_sq,
                                double sigma2_sq);

/// cos(x'*, x) evaluated through the multiplier form
/// lambda x^T (Sigma + lambda I)^{-1} x / (|x'*||x|).
/// Throws std::domain_error when the solve is degenerate.
double cos_of_optimal(const EmbeddingVector& x, const CovarianceModel& sigma);

/// Uniform-angle sweep of the boundary x + (sigma1 cos t, sigma2 sin t).
/// Requires a diagonal 2x2 covariance, x outside the ellipse, n_points >= 8.
std::vector<SweepSample> ellipse_sweep(const EmbeddingVector& x,
                                       const CovarianceModel& sigma,
                                       int n_points);

/// Boundary samples whose cosine to x lands in the band |cos - gamma| < delta.
/// An empty result is a valid outcome.
std::vector<SweepSample> surrogate_targets(const EmbeddingVector& x,
                                           const CovarianceModel& sigma,
                                           double gamma, double delta,
                                           int n_points = 4096);

/// For a stacked unit pair (|x|^2 + |x'|^2 = 1) returns
///   lhs = |x' - x|^2,  rhs = 1 - 2 |x'||x| cos(x', x),
/// which agree identically. Throws std::invalid_argument when the joint-norm
/// precondition is violated beyond 1e-9.
std::pair<double, double> taylor_surrogate_identity(const EmbeddingVector& x,
                                                    const EmbeddingVector& x_adv);

}  // namespace g2pia
