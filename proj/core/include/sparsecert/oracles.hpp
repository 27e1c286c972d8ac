#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "sparsecert/linalg.hpp"

namespace sparsecert {

inline constexpr std::uint64_t kDefaultMaxCombinations = 1'000'000;

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

struct BruteForceResult {
  double value = 0.0;                       // nu_l0
  std::vector<SupportSet> argmin_supports;  // lexicographic order
  std::uint64_t supports_evaluated = 0;
};

/// Global minimum of the cardinality-constrained ridge problem by enumerating
/// every size-k support. Smaller supports are skipped: adding a column never
/// increases the restricted ridge value. Throws BudgetExceeded when
/// C(p, k) > max_combinations.
BruteForceResult brute_force_l0(const ProblemInstance& inst,
                                std::uint64_t max_combinations = kDefaultMaxCombinations);

struct PwgValueOptions {
  double tol = 1e-12;
  int max_iter = 50000;
  bool record_trace = false;
};

struct PwgValueResult {
  double value = 0.0;
  Eigen::VectorXd z;
  int iterations = 0;
  double grad_norm_kkt = 0.0;  // Frank-Wolfe gap at z, bounds value - nu_PWG
  std::vector<double> trace;   // objective per accepted iterate when requested
};

/// g(z) = 1/2 y^T (rho^-1 X D(z) X^T + I)^-1 y.
double pwg_objective(const ProblemInstance& inst, const Eigen::VectorXd& z);

/// dg/dz_j = -(X_j^T K(z) y)^2 / (2 rho).
Eigen::VectorXd pwg_gradient(const ProblemInstance& inst, const Eigen::VectorXd& z);

/// Minimises g over the capped simplex {z in [0,1]^p : sum z <= k} by projected
/// gradient descent with Armijo backtracking, starting from z = (k/p) e.
/// The returned value is an upper bound on nu_PWG within grad_norm_kkt of it.
PwgValueResult pwg_value(const ProblemInstance& inst, PwgValueOptions options = {});

/// Euclidean projection onto {z in [0,1]^p : sum z <= k}.
Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& v, Index k);

}  // namespace sparsecert
