#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sparsecert/errors.hpp"
#include "sparsecert/linalg.hpp"

namespace sparsecert {

/// 1, 1.5, ..., 10.
std::vector<double> default_alpha_grid();

/// Gaussian-ensemble sweep parameters.
struct EnsembleConfig {
  std::vector<Index> p_list;
  std::vector<double> alpha_grid = default_alpha_grid();
  std::vector<double> rho_multipliers = {2, 3, 4, 6, 8, 12};
  double gamma = 0.5;  // noise standard deviation
  int trials = 100;
  std::uint64_t master_seed = 0;
  std::string k_rule = "ceil-sqrt-p";
  double amplitude = 1.0;  // |beta*_i| on the support

  /// Throws InvalidConfig on empty grids, p < 4, trials < 1, nonpositive
  /// alpha/rho multipliers, negative gamma or an unknown k rule.
  void validate() const;
};

/// Smallest integer r with r * r >= p.
Index ceil_sqrt(Index p);

/// Sizes of one sweep cell: k = ceil(sqrt p), n = ceil(alpha k ln(p - k)),
/// rho = rho_multiplier * sqrt(n).
struct CellShape {
  Index p = 0;
  Index k = 0;
  Index n = 0;
  double alpha = 0.0;
  double rho_multiplier = 0.0;
  double rho = 0.0;
};

CellShape cell_shape(Index p, double alpha, double rho_multiplier);

struct TrialKey {
  Index p = 0;
  std::size_t alpha_index = 0;
  std::size_t rho_index = 0;
  int trial_index = 0;
};

struct GeneratedInstance {
  ProblemInstance instance;
  Eigen::VectorXd beta_star;
  SupportSet support;
  CellShape shape;
  std::uint64_t seed = 0;
};

/// Draws one trial from the stream seeded by seed_derive(master_seed, p,
/// alpha_index, rho_index, trial_index). Draw order: X row-major (n * p
/// normals), the support by partial Fisher-Yates over [0, p) (k below()
/// draws, then sorted), one sign per support index in increasing index order
/// (top bit of next(): 1 means -1), then n noise normals scaled by gamma.
GeneratedInstance generate_instance(const EnsembleConfig& cfg, const TrialKey& key);

struct TrialOutcome {
  bool pwg_exact = false;
  bool dcl_exact = false;
};

/// Thrown when a PWG certificate exists but the DCL search fails.
class DominanceViolation : public InternalConsistencyError {
 public:
  using InternalConsistencyError::InternalConsistencyError;
};

/// Certificate search on the true support. Throws DominanceViolation if
/// pwg_exact && !dcl_exact.
TrialOutcome evaluate_trial(const ProblemInstance& inst, const SupportSet& support);

struct TrialRecord {
  Index p = 0;
  Index k = 0;
  Index n = 0;
  double alpha = 0.0;
  double rho_multiplier = 0.0;
  double rho = 0.0;
  int trial_index = 0;
  std::uint64_t trial_seed = 0;
  bool pwg_exact = false;
  bool dcl_exact = false;
};

TrialRecord run_trial(const EnsembleConfig& cfg, const TrialKey& key);

/// Every (p, alpha, rho, trial) cell in output order: p_list order, then
/// alpha index, rho index, trial index.
std::vector<TrialKey> sweep_keys(const EnsembleConfig& cfg);

/// Runs every trial on `workers` threads (0 means hardware concurrency).
/// Records come back in sweep_keys order regardless of the worker count.
/// A DominanceViolation is rethrown as SweepAborted carrying the key.
std::vector<TrialRecord> run_sweep(const EnsembleConfig& cfg, unsigned workers = 0);

class SweepAborted : public InternalConsistencyError {
 public:
  SweepAborted(const std::string& what, TrialKey key)
      : InternalConsistencyError(what), key_(key) {}
  const TrialKey& key() const noexcept { return key_; }

 private:
  TrialKey key_;
};

struct RecoveryPoint {
  double alpha = 0.0;
  double pwg_rate = 0.0;
  double dcl_rate = 0.0;
  int trials = 0;
};

struct RecoveryCurve {
  Index p = 0;
  double rho_multiplier = 0.0;
  std::vector<RecoveryPoint> points;  // increasing alpha-grid order
};

/// Groups records by (p, rho multiplier) in first-seen order and averages
/// the recovery indicators per alpha.
std::vector<RecoveryCurve> aggregate(const std::vector<TrialRecord>& records);

}  // namespace sparsecert
