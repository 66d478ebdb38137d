#pragma once

#include "g2pia/optimizer.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace g2pia {

struct TheoryCheck {
  std::string name;
  bool pass = false;
  double residual = 0.0;   // worst observed value
  double tolerance = 0.0;  // pass threshold on the residual
  std::string detail;
};

struct TheoryReport {
  std::vector<TheoryCheck> checks;
  bool all_pass() const;
};

struct TheoryOptions {
  uint64_t seed = 20240901;
  int kl_grid_instances = 50;
  int solver_instances = 1000;
  int taylor_pairs = 1000;
  int cos_bound_trials = 1000;
  int dense_sweep_points = 1000000;
  int direction_oracle_points = 100000;
  int oracle_instances = 20;  // per-dimension instances for the boundary oracle
  int unimodality_points = 10000;
};

/// KL(p_x || p_x') on a centered square grid (spacing h, half-extent E), the
/// discrete oracle for the continuous closed form.
double kl_grid_oracle(const EmbeddingVector& x, const EmbeddingVector& x_adv,
                      const CovarianceModel& sigma, double spacing,
                      double half_extent);

/// Runs every property check of the divergence/optimizer theory and collects
/// residuals. Deterministic for a fixed seed.
TheoryReport run_theory_suite(const TheoryOptions& opts = {});

nlohmann::json to_json(const TheoryReport& report);

}  // namespace g2pia
