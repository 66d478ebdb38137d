#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace g2pia {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Finite real vector living in the text-embedding space.
/// Construction rejects NaN/infinite entries and dimension 0.
class EmbeddingVector {
 public:
  explicit EmbeddingVector(Vector values);
  EmbeddingVector(std::initializer_list<double> values);

  const Vector& values() const { return values_; }
  int dim() const { return static_cast<int>(values_.size()); }
  double norm() const { return values_.norm(); }

  /// Unit-length copy. Throws std::domain_error on the zero vector.
  EmbeddingVector normalized() const;

 private:
  Vector values_;
};

/// Symmetric positive-definite covariance. The diagonal variant keeps the
/// per-axis variances around for closed-form paths.
class CovarianceModel {
 public:
  static CovarianceModel dense(Matrix sigma);
  static CovarianceModel diagonal(Vector variances);

  int dim() const { return static_cast<int>(sigma_.rows()); }
  const Matrix& matrix() const { return sigma_; }
  bool is_diagonal() const { return diagonal_; }
  /// Per-axis variances; only valid for the diagonal variant.
  const Vector& variances() const;

  /// Sigma^{-1} * rhs via the cached Cholesky factorization.
  Vector solve(const Vector& rhs) const;
  /// d^T Sigma^{-1} d, always >= 0.
  double inv_quadratic(const Vector& d) const;

 private:
  CovarianceModel(Matrix sigma, bool diagonal, Vector variances);

  Matrix sigma_;
  Eigen::LLT<Matrix> llt_;
  bool diagonal_ = false;
  Vector variances_;
};

/// Finite ordered candidate set (the victim's enumerable answer space).
class DiscreteCandidateSet {
 public:
  explicit DiscreteCandidateSet(std::vector<EmbeddingVector> candidates);

  const std::vector<EmbeddingVector>& candidates() const { return candidates_; }
  int size() const { return static_cast<int>(candidates_.size()); }
  int dim() const { return candidates_.front().dim(); }

 private:
  std::vector<EmbeddingVector> candidates_;
};

/// u.v / (|u||v|), clamped to [-1, 1]. Throws std::domain_error on a zero
/// vector, std::invalid_argument on dimension mismatch.
double cosine(const EmbeddingVector& u, const EmbeddingVector& v);

/// (u - v)^T Sigma^{-1} (u - v).
double mahalanobis_sq(const EmbeddingVector& u, const EmbeddingVector& v,
                      const CovarianceModel& sigma);

/// Gaussian posterior over the candidate set: p_i proportional to
/// exp(-0.5 * mahalanobis_sq(y_i, x)). Log-sum-exp stabilized; sums to 1.
std::vector<double> discrete_posterior(const EmbeddingVector& x,
                                       const DiscreteCandidateSet& y,
                                       const CovarianceModel& sigma);

/// Index of the maximum-posterior candidate; ties go to the lowest index.
int argmax_answer(const EmbeddingVector& x, const DiscreteCandidateSet& y,
                  const CovarianceModel& sigma);

/// KL(N(x, Sigma) || N(x', Sigma)) = 0.5 * (x' - x)^T Sigma^{-1} (x' - x).
double kl_gaussian_closed(const EmbeddingVector& x, const EmbeddingVector& x_adv,
                          const CovarianceModel& sigma);

/// Discrete KL(p || q) with 0 log 0 = 0. Throws std::domain_error when
/// q_i = 0 on the support of p.
double kl_discrete(const std::vector<double>& p, const std::vector<double>& q);

}  // namespace g2pia
