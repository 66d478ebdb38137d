// End-to-end acceptance suite. Each criterion prints exactly one PASS/FAIL
// line; the process exits nonzero when any criterion fails.

#include "g2pia/dataset.hpp"
#include "g2pia/optimizer.hpp"
#include "g2pia/report.hpp"
#include "g2pia/rng.hpp"
#include "g2pia/theory.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace g2pia;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail) {
  std::cout << "criterion " << criterion << " (" << name << "): "
            << (pass ? "PASS" : "FAIL") << " — " << detail << "\n";
  if (!pass) ++g_failures;
}

double elapsed_s(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// shared random-instance helpers

CovarianceModel random_spd(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = g(rng);
  Matrix s = a * a.transpose() / dim + 0.1 * Matrix::Identity(dim, dim);
  return CovarianceModel::dense((s + s.transpose()) / 2.0);
}

EmbeddingVector random_external_point(const CovarianceModel& sigma,
                                      std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(1.5, 10.0);
  Vector x(sigma.dim());
  for (int i = 0; i < sigma.dim(); ++i) x[i] = g(rng);
  if (x.norm() < 1e-6) x[0] = 1.0;
  x *= std::sqrt(u(rng) / sigma.inv_quadratic(x));
  return EmbeddingVector(x);
}

Matrix sqrt_spd(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  return es.eigenvectors() *
         es.eigenvalues().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

// ---------------------------------------------------------------------------
// criterion 1: discrete-grid KL agrees with the closed Gaussian form

void criterion_kl_grid() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240901);
  std::uniform_real_distribution<double> uvar(0.2, 2.0);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    Vector var(2);
    var << uvar(rng), uvar(rng);
    const auto sigma = CovarianceModel::diagonal(var);
    const double min_sd = std::sqrt(std::min(var[0], var[1]));
    const double max_sd = std::sqrt(std::max(var[0], var[1]));
    Vector xv(2), dv(2);
    xv << g(rng), g(rng);
    dv << g(rng), g(rng);
    dv *= (0.2 + 1.6 * std::abs(g(rng)) / 3.0) * min_sd / dv.norm();
    if (dv.norm() > 2.0 * min_sd) dv *= 2.0 * min_sd / dv.norm();
    const EmbeddingVector x(xv);
    const EmbeddingVector x_adv(xv + dv);
    const double closed = kl_gaussian_closed(x, x_adv, sigma);
    const double grid =
        kl_grid_oracle(x, x_adv, sigma, 0.1 * min_sd, 8.0 * max_sd);
    worst = std::max(worst, std::abs(grid - closed) / closed);
  }
  const double secs = elapsed_s(t0);
  report(1, "kl-grid-equivalence", worst <= 0.05 && secs < 30.0,
         "worst relative error " + fmt(worst) + " over 50 instances in " +
             fmt(secs) + "s (limits 0.05, 30s)");
}

// ---------------------------------------------------------------------------
// criterion 2: solver KKT / closed form / brute-force boundary oracles

void criterion_solver() {
  std::mt19937_64 rng(7041);
  double worst_kkt = 0.0, worst_active = 0.0, worst_2d = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int dim = 2 + static_cast<int>(uniform_u64(rng, 9));
    const auto sigma = random_spd(dim, rng);
    const auto x = random_external_point(sigma, rng);
    const auto sol = solve_optimal_attack(x, sigma);
    worst_kkt = std::max(worst_kkt, sol.kkt_residual);
    worst_active = std::max(worst_active, std::abs(sol.constraint_value - 1.0));
  }
  std::uniform_real_distribution<double> uvar(0.2, 5.0);
  for (int t = 0; t < 200; ++t) {
    Vector var(2);
    var << uvar(rng), uvar(rng);
    const auto sigma = CovarianceModel::diagonal(var);
    const auto x = random_external_point(sigma, rng);
    const auto a = solve_optimal_attack(x, sigma);
    const auto b = solve_2d_diagonal(x, var[0], var[1]);
    worst_2d =
        std::max(worst_2d, (a.x_star.values() - b.x_star.values()).norm());
  }
  // 2-D dense boundary sweep: the solver may never lose by more than 1e-4.
  double worst_dense = 0.0;
  for (int t = 0; t < 20; ++t) {
    Vector var(2);
    var << uvar(rng), uvar(rng);
    const auto sigma = CovarianceModel::diagonal(var);
    const auto x = random_external_point(sigma, rng);
    const double solver_norm = solve_optimal_attack(x, sigma).x_star.norm();
    const double s1 = std::sqrt(var[0]), s2 = std::sqrt(var[1]);
    double best = solver_norm;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
      const double th = 2.0 * std::numbers::pi * i / n;
      const double px = x.values()[0] + s1 * std::cos(th);
      const double py = x.values()[1] + s2 * std::sin(th);
      best = std::min(best, std::hypot(px, py));
    }
    worst_dense = std::max(worst_dense, solver_norm - best);
  }
  // Random-direction boundary oracle in dims 3..10.
  double worst_dir = 0.0;
  std::normal_distribution<double> g;
  for (int t = 0; t < 20; ++t) {
    const int dim = 3 + static_cast<int>(uniform_u64(rng, 8));
    const auto sigma = random_spd(dim, rng);
    const auto x = random_external_point(sigma, rng);
    const double solver_norm = solve_optimal_attack(x, sigma).x_star.norm();
    const Matrix root = sqrt_spd(sigma.matrix());
    double best = solver_norm;
    for (int i = 0; i < 100000; ++i) {
      Vector u(dim);
      for (int j = 0; j < dim; ++j) u[j] = g(rng);
      u /= u.norm();
      best = std::min(best, (x.values() + root * u).norm());
    }
    worst_dir = std::max(worst_dir, solver_norm - best);
  }
  const bool pass = worst_kkt < 1e-8 && worst_active < 1e-8 &&
                    worst_2d < 1e-8 && worst_dense <= 1e-4 && worst_dir <= 1e-3;
  report(2, "solver-kkt-and-oracles", pass,
         "kkt " + fmt(worst_kkt) + ", active " + fmt(worst_active) +
             ", 2d-closed-form " + fmt(worst_2d) + ", dense-sweep-loss " +
             fmt(worst_dense) + ", direction-oracle-loss " + fmt(worst_dir));
}

// ---------------------------------------------------------------------------
// criterion 3: spherical analytic case

void criterion_spherical() {
  const auto sigma = CovarianceModel::dense(Matrix::Identity(2, 2));
  const auto sol = solve_optimal_attack(EmbeddingVector{2.0, 0.0}, sigma);
  const double err = std::max((sol.x_star.values() - Vector{{1.0, 0.0}}).norm(),
                              std::abs(sol.lambda - 1.0));
  report(3, "spherical-analytic-case", err <= 1e-10,
         "max deviation from x'=(1,0), lambda=1 is " + fmt(err));
}

// ---------------------------------------------------------------------------
// criterion 4: reference-geometry unimodality along the constraint boundary

void criterion_unimodality() {
  Vector var(2);
  var << 4.0, 1.0;
  const auto sigma = CovarianceModel::diagonal(var);
  const EmbeddingVector x{3.0, 2.0};
  const auto sol = solve_optimal_attack(x, sigma);
  const int n = 10000;
  const auto sweep = ellipse_sweep(x, sigma, n);
  // The unimodality claim holds on the boundary arc bounded by the two
  // cosine local minima and containing the optimum; the full closed curve
  // necessarily carries a second cosine peak where the boundary crosses the
  // ray from the origin through x.
  std::vector<int> cos_min_idx;
  int argmin = 0;
  for (int i = 0; i < n; ++i) {
    const auto& prev = sweep[(i + n - 1) % n];
    const auto& cur = sweep[i];
    const auto& next = sweep[(i + 1) % n];
    if (cur.cos_to_x < prev.cos_to_x && cur.cos_to_x < next.cos_to_x)
      cos_min_idx.push_back(i);
    if (cur.norm < sweep[argmin].norm) argmin = i;
  }
  int cos_maxima = -1, norm_minima = -1;
  if (cos_min_idx.size() == 2) {
    int a = cos_min_idx[0], b = cos_min_idx[1];
    const auto forward_contains = [n](int from, int to, int i) {
      return ((i - from + n) % n) < ((to - from + n) % n) && i != from;
    };
    if (!forward_contains(a, b, argmin)) std::swap(a, b);
    cos_maxima = norm_minima = 0;
    for (int k = (a + 1) % n; k != b; k = (k + 1) % n) {
      const auto& prev = sweep[(k + n - 1) % n];
      const auto& cur = sweep[k];
      const auto& next = sweep[(k + 1) % n];
      if (cur.cos_to_x > prev.cos_to_x && cur.cos_to_x > next.cos_to_x)
        ++cos_maxima;
      if (cur.norm < prev.norm && cur.norm < next.norm) ++norm_minima;
    }
  }
  const double gap = (sweep[argmin].point.values() - sol.x_star.values()).norm();
  const double resolution = 2.0 * std::numbers::pi * 2.0 / n;  // arc step bound
  const bool pass =
      cos_maxima == 1 && norm_minima == 1 && gap <= 2.0 * resolution;
  report(4, "reference-geometry-unimodality", pass,
         "cos maxima " + std::to_string(cos_maxima) + ", norm minima " +
             std::to_string(norm_minima) + ", argmin-to-solver gap " +
             fmt(gap));
}

// ---------------------------------------------------------------------------
// criterion 5: stacked-pair distance identity

void criterion_taylor() {
  std::mt19937_64 rng(31337);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.02, 0.98);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int dim = 2 + static_cast<int>(uniform_u64(rng, 7));
    Vector a(dim), b(dim);
    for (int i = 0; i < dim; ++i) {
      a[i] = g(rng);
      b[i] = g(rng);
    }
    const double share = u(rng);
    a *= std::sqrt(share) / a.norm();
    b *= std::sqrt(1.0 - share) / b.norm();
    const auto [lhs, rhs] =
        taylor_surrogate_identity(EmbeddingVector(a), EmbeddingVector(b));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  report(5, "stacked-pair-identity", worst <= 1e-9,
         "worst |lhs - rhs| " + fmt(worst) + " over 1000 pairs");
}

// ---------------------------------------------------------------------------
// criterion 6: published accuracy tables vs the ASR identity

struct TableRow {
  const char* name;
  double a_clean, a_attack, printed_asr;
};

void criterion_tables() {
  const std::vector<TableRow> rows{
      // main results, GSM8K
      {"t1 gsm8k text-davinci-003", 71.68, 36.94, 48.47},
      {"t1 gsm8k gpt-3.5-turbo-0125", 72.12, 37.80, 47.60},
      {"t1 gsm8k gpt-4-0613", 76.43, 41.67, 45.48},
      {"t1 gsm8k gpt-4-0125-preview", 77.10, 43.32, 43.81},
      {"t1 gsm8k llama-2-7b-chat", 44.87, 27.51, 38.69},
      {"t1 gsm8k llama-2-13b-chat", 49.54, 35.51, 28.33},
      {"t1 gsm8k llama-2-70b-chat", 56.48, 39.90, 29.36},
      // main results, web QA
      {"t1 web text-davinci-003", 41.87, 17.97, 57.19},
      {"t1 web gpt-3.5-turbo-0125", 41.98, 24.17, 42.42},
      {"t1 web gpt-4-0613", 53.63, 33.72, 37.12},
      {"t1 web gpt-4-0125-preview", 54.61, 34.70, 32.80},
      {"t1 web llama-2-7b-chat", 47.67, 24.26, 49.10},
      {"t1 web llama-2-13b-chat", 58.67, 36.14, 38.40},
      {"t1 web llama-2-70b-chat", 70.20, 48.18, 31.47},
      // main results, SQuAD2.0
      {"t1 squad text-davinci-003", 68.30, 14.00, 79.50},
      {"t1 squad gpt-3.5-turbo-0125", 68.33, 12.67, 81.46},
      {"t1 squad gpt-4-0613", 71.87, 19.71, 72.58},
      {"t1 squad gpt-4-0125-preview", 71.94, 24.03, 69.34},
      {"t1 squad llama-2-7b-chat", 78.67, 37.66, 52.13},
      {"t1 squad llama-2-13b-chat", 94.67, 52.70, 44.33},
      {"t1 squad llama-2-70b-chat", 93.33, 40.78, 56.31},
      // main results, math
      {"t1 math text-davinci-003", 21.33, 11.76, 44.87},
      {"t1 math gpt-3.5-turbo-0125", 21.33, 15.99, 29.72},
      {"t1 math gpt-4-0613", 41.66, 28.33, 32.00},
      {"t1 math gpt-4-0125-preview", 44.64, 32.83, 26.49},
      {"t1 math llama-2-7b-chat", 79.33, 52.44, 33.90},
      {"t1 math llama-2-13b-chat", 89.67, 56.72, 36.75},
      {"t1 math llama-2-70b-chat", 94.67, 71.82, 24.14},
      // method comparison, SQuAD2.0
      {"t2 squad BertAttack", 71.16, 24.67, 65.33},
      {"t2 squad DeepWordBug", 70.41, 65.68, 6.72},
      {"t2 squad TextFooler", 72.87, 15.60, 78.59},
      {"t2 squad TextBugger", 71.66, 60.14, 16.08},
      {"t2 squad StressTest", 71.94, 70.66, 1.78},
      {"t2 squad CheckList", 71.41, 68.81, 3.64},
      {"t2 squad ours", 68.30, 14.00, 79.50},
      // method comparison, math
      {"t2 math BertAttack", 22.27, 14.82, 33.46},
      {"t2 math DeepWordBug", 22.07, 18.36, 16.83},
      {"t2 math TextFooler", 21.71, 16.80, 26.02},
      {"t2 math TextBugger", 21.73, 17.75, 18.31},
      {"t2 math StressTest", 21.33, 19.59, 8.15},
      {"t2 math CheckList", 22.07, 16.90, 23.41},
      {"t2 math ours", 21.33, 11.76, 44.87},
  };
  // Rows whose printed triple is internally inconsistent beyond rounding; the
  // identity cannot reproduce the printed ASR there, so they are expected to
  // exceed the tolerance. Everything else must land within 0.05.
  const std::set<std::string> known_inconsistent{
      "t1 web text-davinci-003",    "t1 web gpt-4-0125-preview",
      "t1 web llama-2-70b-chat",    "t1 squad gpt-4-0125-preview",
      "t1 math gpt-3.5-turbo-0125", "t2 math TextFooler",
  };
  std::set<std::string> mismatched;
  int consistent = 0;
  for (const auto& r : rows) {
    const double recomputed = 100.0 * (1.0 - r.a_attack / r.a_clean);
    if (std::abs(recomputed - r.printed_asr) <= 0.05) {
      ++consistent;
    } else {
      mismatched.insert(r.name);
    }
  }
  const double cited1 = 100.0 * (1.0 - 37.80 / 72.12);  // vs printed 47.60
  const double cited2 = 100.0 * (1.0 - 12.67 / 68.33);  // vs printed 81.46
  const bool pass = mismatched == known_inconsistent && consistent >= 22 &&
                    std::abs(cited1 - 47.60) <= 0.05 &&
                    std::abs(cited2 - 81.46) <= 0.05;
  std::string detail = std::to_string(consistent) + "/" +
                       std::to_string(rows.size()) +
                       " rows within 0.05; inconsistent rows:";
  for (const auto& n : mismatched) detail += " [" + n + "]";
  report(6, "published-table-identity", pass, detail);
}

// ---------------------------------------------------------------------------
// criteria 7-9: synthetic end-to-end sweeps with the mock Gaussian victim

constexpr double kEllipseA = 4.0;
constexpr double kEllipseB = 3.0;
const EmbeddingVector kCleanPoint{3.0, 2.0};

EmbeddingVector ellipse_point(double theta) {
  return EmbeddingVector{3.0 + kEllipseA * std::cos(theta),
                         2.0 + kEllipseB * std::sin(theta)};
}

std::string marked_sentence(const std::string& text) {
  const auto sentences = split_sentences(text);
  for (auto it = sentences.rbegin(); it != sentences.rend(); ++it) {
    if (it->rfind("Note ", 0) == 0) return *it;
  }
  return "";
}

EmbeddingVector point_for_sentence(const std::string& sentence) {
  const double frac =
      double(stable_hash(sentence) % (1ULL << 32)) / double(1ULL << 32);
  return ellipse_point(2.0 * std::numbers::pi * frac);
}

/// Attacker-side embedder realizing the reference ellipse geometry: the clean
/// question sits at the fixed external point; a marked injected sentence lands
/// on the constraint boundary at a hash-derived angle.
class EllipseEmbedder : public TextEmbedder {
 public:
  EmbeddingVector embed(const std::string& text) override {
    const std::string s = marked_sentence(text);
    return s.empty() ? kCleanPoint : point_for_sentence(s);
  }
};

/// Distance of the injected core words from the source core words, recomputed
/// from the injected sentence alone (template token positions are fixed).
double injected_distance(const std::string& sentence,
                         const WordVectorTable& vecs) {
  const auto toks = tokenize(sentence);
  if (toks.size() != 7) return 1.0;
  const auto dist = [&](const std::string& w, const std::string& src) {
    if (w == src) return 0.0;
    const auto a = vecs.vector_for(w);
    const auto b = vecs.vector_for(src);
    if (!a || !b) return 1.0;
    return 1.0 - cosine(*a, *b);
  };
  return std::max(dist(toks[4], "sells"), dist(toks[6], "apples"));
}

/// Victim-side embedder for the gamma sweep: semantically close injections
/// drag the victim to the injected boundary point; distant ones are ignored.
class GammaVictimEmbedder : public TextEmbedder {
 public:
  explicit GammaVictimEmbedder(const WordVectorTable* vecs) : vecs_(vecs) {}
  EmbeddingVector embed(const std::string& text) override {
    const std::string s = marked_sentence(text);
    if (s.empty() || injected_distance(s, *vecs_) >= 0.5) return kCleanPoint;
    return point_for_sentence(s);
  }

 private:
  const WordVectorTable* vecs_;
};

/// Victim-side embedder for the epsilon sweep: the flip depends only on the
/// injected semantic distance, which makes the flip set provably shrink as
/// epsilon grows (larger accepted distances are ignored as noise).
class EpsilonVictimEmbedder : public TextEmbedder {
 public:
  EpsilonVictimEmbedder(const WordVectorTable* vecs, EmbeddingVector wrong)
      : vecs_(vecs), wrong_(std::move(wrong)) {}
  EmbeddingVector embed(const std::string& text) override {
    const std::string s = marked_sentence(text);
    if (s.empty() || injected_distance(s, *vecs_) >= 0.25) return kCleanPoint;
    return wrong_;
  }

 private:
  const WordVectorTable* vecs_;
  EmbeddingVector wrong_;
};

struct SyntheticWorld {
  WordVectorTable vecs;
  SynonymLexicon lexicon;
  HeuristicTagger tagger;
  EchoAssistant assistant;
  EllipseEmbedder attacker_embedder;
  std::vector<QAExample> dataset;
  EmbeddingVector wrong_point{0.0, 0.0};

  SyntheticWorld(int n_examples) : vecs(build_vectors()), lexicon(build_lexicon()) {
    for (int i = 0; i < n_examples; ++i) {
      dataset.push_back({"s" + std::to_string(i),
                         "The farmer sells apples. How many boxes are there?",
                         "36", AnswerMode::NumericFinal});
    }
    // Wrong-answer anchor: placed outside the boundary along the direction of
    // the cos = 0.5 boundary point, far enough that the nearest-candidate
    // decision region only captures a narrow boundary arc around that
    // direction. Injections whose cosine to the clean point is near 0.5 land
    // on that arc and flip the victim; cosines near 0.1 or 0.9 never do.
    double best_gap = 1e9;
    double theta0 = 0.0;
    for (int i = 0; i < 200000; ++i) {
      const double th = 2.0 * std::numbers::pi * i / 200000;
      const double gap = std::abs(cosine(ellipse_point(th), kCleanPoint) - 0.5);
      if (gap < best_gap) {
        best_gap = gap;
        theta0 = th;
      }
    }
    // Offset and shrink factor center the captured arc's cosine band on 0.5
    // (the arc-to-cosine map is not symmetric around theta0).
    const double theta_c = theta0 + 0.15;
    Vector u = ellipse_point(theta_c).values() - kCleanPoint.values();
    u /= u.norm();
    double max_proj = -1e300;
    for (int i = 0; i < 200000; ++i) {
      const double th = 2.0 * std::numbers::pi * i / 200000;
      const Vector d = ellipse_point(th).values() - kCleanPoint.values();
      max_proj = std::max(max_proj, d.dot(u));
    }
    wrong_point =
        EmbeddingVector(kCleanPoint.values() + 2.0 * 0.98 * max_proj * u);
  }

  static WordVectorTable build_vectors() {
    std::map<std::string, Vector> m;
    m["farmer"] = Vector{{1.0, 0.0, 0.0, 0.0}};
    m["sells"] = Vector{{0.0, 1.0, 0.0, 0.0}};
    m["apples"] = Vector{{0.0, 0.0, 1.0, 0.0}};
    // Nine synonym tiers per slot at exact distances 0.05, 0.15, ..., 0.85.
    for (int k = 1; k <= 9; ++k) {
      const double c = 1.0 - (0.05 + 0.1 * (k - 1));
      const double s = std::sqrt(1.0 - c * c);
      m["p" + std::to_string(k)] = Vector{{0.0, c, 0.0, s}};
      m["o" + std::to_string(k)] = Vector{{0.0, 0.0, c, s}};
    }
    return WordVectorTable(std::move(m), 4, OovPolicy::SkipWord);
  }

  static SynonymLexicon build_lexicon() {
    std::vector<std::string> ps, os;
    for (int k = 1; k <= 9; ++k) {
      ps.push_back("p" + std::to_string(k));
      os.push_back("o" + std::to_string(k));
    }
    return SynonymLexicon({{"sells", ps}, {"apples", os}});
  }

  AttackDeps deps() {
    return AttackDeps{&tagger, &lexicon, &vecs, &assistant, &attacker_embedder};
  }

  GenerationConfig base_gen() {
    GenerationConfig cfg;
    cfg.prompt_template = "Note {number}: the {subject} {predicate} the {object}.";
    cfg.max_coreword_tries = 100;
    return cfg;
  }
};

void criterion_synthetic_sweeps() {
  const auto t0 = std::chrono::steady_clock::now();
  SyntheticWorld world(600);
  const std::vector<double> grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

  // gamma sweep at the default epsilon
  GammaVictimEmbedder gamma_embedder(&world.vecs);
  MockGaussianVictim gamma_victim(
      DiscreteCandidateSet({kCleanPoint, world.wrong_point}), {"36", "99"},
      CovarianceModel::diagonal(Vector{{1.0, 1.0}}), &gamma_embedder);
  GenerationConfig gen = world.base_gen();
  gen.delta = 0.05;
  gen.epsilon = 0.2;
  gen.max_iterations = 40;
  CampaignConfig ccfg{gen, 4, 20240901};
  const auto gamma_cells = parameter_sweep(world.dataset, world.deps(),
                                           gamma_victim, {0.2}, grid, ccfg);
  std::string gamma_detail = "gamma asr:";
  for (const auto& c : gamma_cells) gamma_detail += " " + fmt(c.metrics.asr);
  const bool gamma_peak = gamma_cells[4].metrics.asr > gamma_cells[0].metrics.asr &&
                          gamma_cells[4].metrics.asr > gamma_cells[8].metrics.asr;

  // epsilon sweep at the default gamma; a single generation round with a
  // trivially wide cosine band keeps the accepted-candidate order identical
  // across cells, which makes the per-example flip monotone in epsilon.
  EpsilonVictimEmbedder eps_embedder(&world.vecs, world.wrong_point);
  MockGaussianVictim eps_victim(
      DiscreteCandidateSet({kCleanPoint, world.wrong_point}), {"36", "99"},
      CovarianceModel::diagonal(Vector{{1.0, 1.0}}), &eps_embedder);
  GenerationConfig eps_gen = world.base_gen();
  eps_gen.gamma = 0.5;
  eps_gen.delta = 2.0;
  eps_gen.max_iterations = 1;
  CampaignConfig eps_ccfg{eps_gen, 4, 20240901};
  const auto eps_cells = parameter_sweep(world.dataset, world.deps(), eps_victim,
                                         grid, {0.5}, eps_ccfg);
  bool eps_monotone = true;
  std::string eps_detail = "epsilon asr:";
  for (size_t i = 0; i < eps_cells.size(); ++i) {
    eps_detail += " " + fmt(eps_cells[i].metrics.asr);
    if (i > 0 && eps_cells[i].metrics.asr > eps_cells[i - 1].metrics.asr + 1e-12)
      eps_monotone = false;
  }
  const double secs = elapsed_s(t0);
  report(7, "synthetic-sweep-trends",
         gamma_peak && eps_monotone && secs < 120.0,
         gamma_detail + "; " + eps_detail + "; " + fmt(secs) + "s");
}

void criterion_constraint_soundness() {
  SyntheticWorld world(150);
  GammaVictimEmbedder victim_embedder(&world.vecs);
  MockGaussianVictim victim(
      DiscreteCandidateSet({kCleanPoint, world.wrong_point}), {"36", "99"},
      CovarianceModel::diagonal(Vector{{1.0, 1.0}}), &victim_embedder);
  GenerationConfig gen = world.base_gen();
  gen.gamma = 0.5;
  gen.delta = 0.05;
  gen.epsilon = 0.2;
  gen.max_iterations = 8;  // forces a healthy mix of satisfied/unsatisfied
  CampaignConfig ccfg{gen, 4, 99};
  const auto records = run_campaign(world.dataset, world.deps(), victim, ccfg);
  long satisfied = 0, unsatisfied = 0, violations = 0;
  for (const auto& r : records) {
    if (r.skipped) continue;
    EllipseEmbedder emb;
    const double cos_rec = cosine(emb.embed(r.prompt.injected_sentence),
                                  emb.embed(r.prompt.clean_text));
    const double d_rec = injected_distance(r.prompt.injected_sentence, world.vecs);
    const bool holds = std::abs(cos_rec - gen.gamma) < gen.delta &&
                       d_rec < gen.epsilon;
    if (r.prompt.constraint_satisfied) {
      ++satisfied;
      if (!holds) ++violations;
    } else {
      ++unsatisfied;
      if (holds) ++violations;
    }
  }
  report(8, "constraint-soundness",
         violations == 0 && satisfied > 0 && unsatisfied > 0,
         std::to_string(satisfied) + " satisfied and " +
             std::to_string(unsatisfied) +
             " unsatisfied records revalidated, " +
             std::to_string(violations) + " violations");
}

void criterion_determinism() {
  SyntheticWorld world(120);
  const auto run_once = [&](const std::string& records_path,
                            const std::string& metrics_path) {
    GammaVictimEmbedder victim_embedder(&world.vecs);
    MockGaussianVictim victim(
        DiscreteCandidateSet({kCleanPoint, world.wrong_point}), {"36", "99"},
        CovarianceModel::diagonal(Vector{{1.0, 1.0}}), &victim_embedder);
    GenerationConfig gen = world.base_gen();
    gen.gamma = 0.5;
    gen.delta = 0.05;
    gen.epsilon = 0.2;
    gen.max_iterations = 20;
    CampaignConfig ccfg{gen, 4, 4242};
    const auto records = run_campaign(world.dataset, world.deps(), victim, ccfg);
    write_records_jsonl(records, records_path);
    write_metrics_json(compute_metrics(records), {{"seed", ccfg.seed}},
                       metrics_path);
  };
  const auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  run_once("acc_records_a.jsonl", "acc_metrics_a.json");
  run_once("acc_records_b.jsonl", "acc_metrics_b.json");
  const bool same_records =
      slurp("acc_records_a.jsonl") == slurp("acc_records_b.jsonl");
  const bool same_metrics =
      slurp("acc_metrics_a.json") == slurp("acc_metrics_b.json");
  for (const char* f : {"acc_records_a.jsonl", "acc_records_b.jsonl",
                        "acc_metrics_a.json", "acc_metrics_b.json"}) {
    std::remove(f);
  }
  report(9, "byte-identical-determinism", same_records && same_metrics,
         std::string("records ") + (same_records ? "identical" : "differ") +
             ", metrics " + (same_metrics ? "identical" : "differ"));
}

}  // namespace

int main() {
  criterion_kl_grid();
  criterion_solver();
  criterion_spherical();
  criterion_unimodality();
  criterion_taylor();
  criterion_tables();
  criterion_synthetic_sweeps();
  criterion_constraint_soundness();
  criterion_determinism();
  std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED"
                                : std::to_string(g_failures) + " CRITERIA FAILED")
            << "\n";
  return g_failures == 0 ? 0 : 1;
}
