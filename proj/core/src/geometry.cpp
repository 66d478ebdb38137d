#include "g2pia/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace g2pia {

namespace {

void check_finite(const Vector& v) {
  if (v.size() < 1) {
    throw std::invalid_argument("embedding vector must have dimension >= 1");
  }
  if (!v.allFinite()) {
    throw std::invalid_argument("embedding vector has NaN or infinite entries");
  }
}

void check_same_dim(const EmbeddingVector& u, const EmbeddingVector& v) {
  if (u.dim() != v.dim()) {
    throw std::invalid_argument("embedding vectors have mismatched dimensions");
  }
}

}  // namespace

EmbeddingVector::EmbeddingVector(Vector values) : values_(std::move(values)) {
  check_finite(values_);
}

EmbeddingVector::EmbeddingVector(std::initializer_list<double> values)
    : values_(Eigen::Map<const Vector>(values.begin(),
                                       static_cast<Eigen::Index>(values.size()))) {
  check_finite(values_);
}

EmbeddingVector EmbeddingVector::normalized() const {
  const double n = values_.norm();
  if (n == 0.0) {
    throw std::domain_error("cannot normalize the zero vector");
  }
  return EmbeddingVector(values_ / n);
}

CovarianceModel::CovarianceModel(Matrix sigma, bool diagonal, Vector variances)
    : sigma_(std::move(sigma)), diagonal_(diagonal), variances_(std::move(variances)) {
  if (sigma_.rows() != sigma_.cols() || sigma_.rows() < 1) {
    throw std::invalid_argument("covariance must be square with dimension >= 1");
  }
  const double scale = std::max(1.0, sigma_.cwiseAbs().maxCoeff());
  if (((sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff()) > 1e-12 * scale) {
    throw std::invalid_argument("covariance is not symmetric");
  }
  llt_.compute(sigma_);
  if (llt_.info() != Eigen::Success) {
    throw std::invalid_argument("covariance is not positive definite");
  }
}

CovarianceModel CovarianceModel::dense(Matrix sigma) {
  return CovarianceModel(std::move(sigma), false, Vector());
}

CovarianceModel CovarianceModel::diagonal(Vector variances) {
  if (variances.size() < 1 || (variances.array() <= 0.0).any()) {
    throw std::invalid_argument("diagonal variances must all be positive");
  }
  Matrix sigma = variances.asDiagonal();
  return CovarianceModel(std::move(sigma), true, std::move(variances));
}

const Vector& CovarianceModel::variances() const {
  if (!diagonal_) {
    throw std::logic_error("variances() requires the diagonal variant");
  }
  return variances_;
}

Vector CovarianceModel::solve(const Vector& rhs) const {
  if (rhs.size() != sigma_.rows()) {
    throw std::invalid_argument("rhs dimension does not match covariance");
  }
  if (diagonal_) {
    return rhs.cwiseQuotient(variances_);
  }
  return llt_.solve(rhs);
}

double CovarianceModel::inv_quadratic(const Vector& d) const {
  const double q = d.dot(solve(d));
  return std::max(q, 0.0);
}

DiscreteCandidateSet::DiscreteCandidateSet(std::vector<EmbeddingVector> candidates)
    : candidates_(std::move(candidates)) {
  if (candidates_.empty()) {
    throw std::invalid_argument("candidate set must be nonempty");
  }
  const int d = candidates_.front().dim();
  for (const auto& c : candidates_) {
    if (c.dim() != d) {
      throw std::invalid_argument("candidate set has mixed dimensions");
    }
  }
  for (size_t i = 0; i < candidates_.size(); ++i) {
    for (size_t j = i + 1; j < candidates_.size(); ++j) {
      if ((candidates_[i].values() - candidates_[j].values()).cwiseAbs().maxCoeff() <=
          1e-12) {
        throw std::invalid_argument("candidate set contains duplicate vectors");
      }
    }
  }
}

double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
  check_same_dim(u, v);
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) {
    throw std::domain_error("cosine undefined for the zero vector");
  }
  const double c = u.values().dot(v.values()) / (nu * nv);
  return std::clamp(c, -1.0, 1.0);
}

double mahalanobis_sq(const EmbeddingVector& u, const EmbeddingVector& v,
                      const CovarianceModel& sigma) {
  check_same_dim(u, v);
  if (u.dim() != sigma.dim()) {
    throw std::invalid_argument("vector dimension does not match covariance");
  }
  return sigma.inv_quadratic(u.values() - v.values());
}

std::vector<double> discrete_posterior(const EmbeddingVector& x,
                                       const DiscreteCandidateSet& y,
                                       const CovarianceModel& sigma) {
  std::vector<double> log_w(y.size());
  for (int i = 0; i < y.size(); ++i) {
    log_w[i] = -0.5 * mahalanobis_sq(y.candidates()[i], x, sigma);
  }
  const double m = *std::max_element(log_w.begin(), log_w.end());
  double total = 0.0;
  std::vector<double> p(y.size());
  for (int i = 0; i < y.size(); ++i) {
    p[i] = std::exp(log_w[i] - m);
    total += p[i];
  }
  for (auto& pi : p) pi /= total;
  return p;
}

int argmax_answer(const EmbeddingVector& x, const DiscreteCandidateSet& y,
                  const CovarianceModel& sigma) {
  int best = 0;
  double best_d = mahalanobis_sq(y.candidates()[0], x, sigma);
  for (int i = 1; i < y.size(); ++i) {
    const double d = mahalanobis_sq(y.candidates()[i], x, sigma);
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

double kl_gaussian_closed(const EmbeddingVector& x, const EmbeddingVector& x_adv,
                          const CovarianceModel& sigma) {
  return 0.5 * mahalanobis_sq(x_adv, x, sigma);
}

double kl_discrete(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("probability vectors have mismatched lengths");
  }
  double kl = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] <= 0.0) {
      throw std::domain_error("kl_discrete: q vanishes on the support of p");
    }
    kl += p[i] * std::log(p[i] / q[i]);
  }
  return kl;
}

}  // namespace g2pia
