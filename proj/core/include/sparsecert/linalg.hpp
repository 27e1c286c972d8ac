#pragma once

#include <compare>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sparsecert {

using Index = Eigen::Index;

/// Candidate set of columns allowed to be nonzero. Indices are kept strictly
/// increasing; the complement is implicit and only materialised on request.
class SupportSet {
 public:
  SupportSet() = default;

  /// Accepts indices in any order; throws InvalidInput on duplicates or negatives.
  explicit SupportSet(std::vector<Index> indices);
  SupportSet(std::initializer_list<Index> indices);

  std::span<const Index> indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  Index operator[](std::size_t i) const { return indices_[i]; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  bool contains(Index j) const;

  /// Largest index, or -1 when empty.
  Index max_index() const noexcept { return indices_.empty() ? -1 : indices_.back(); }

  /// Indicator vector of length p.
  std::vector<bool> mask(Index p) const;

  /// Indices in [0, p) not in the set, increasing.
  std::vector<Index> complement(Index p) const;

  friend bool operator==(const SupportSet&, const SupportSet&) = default;
  friend auto operator<=>(const SupportSet& a, const SupportSet& b) {
    return a.indices_ <=> b.indices_;
  }

 private:
  std::vector<Index> indices_;
};

/// Cardinality-constrained ridge regression data: design X (n x p), response y,
/// ridge weight rho > 0 and budget 1 <= k <= p. Immutable once constructed.
class ProblemInstance {
 public:
  ProblemInstance(Eigen::MatrixXd X, Eigen::VectorXd y, double rho, Index k);

  const Eigen::MatrixXd& X() const noexcept { return X_; }
  const Eigen::VectorXd& y() const noexcept { return y_; }
  double rho() const noexcept { return rho_; }
  Index k() const noexcept { return k_; }
  Index n() const noexcept { return X_.rows(); }
  Index p() const noexcept { return X_.cols(); }

  /// Same design, rho and k with a different response.
  ProblemInstance with_response(Eigen::VectorXd y) const;

 private:
  Eigen::MatrixXd X_;
  Eigen::VectorXd y_;
  double rho_;
  Index k_;
};

struct RestrictedRidgeSolution {
  Eigen::VectorXd beta;  // zero off the support
  double value = 0.0;    // 1/2 ||X beta - y||^2 + 1/2 rho ||beta||^2
};

/// Throws InvalidInput unless every index of S is a column of inst.
void require_support_fits(const ProblemInstance& inst, const SupportSet& S);

/// Columns of X selected by S, in increasing index order.
Eigen::MatrixXd select_columns(const Eigen::MatrixXd& X, const SupportSet& S);

/// Minimises the ridge objective with beta restricted to S through the
/// |S| x |S| Cholesky solve of (rho I + X_S^T X_S) b = X_S^T y.
RestrictedRidgeSolution ridge_restricted_solve(const ProblemInstance& inst,
                                               const SupportSet& S);

/// 1/2 y^T (I + rho^-1 X_S X_S^T)^-1 y, evaluated by an n x n Cholesky solve.
/// S may be empty, giving 1/2 ||y||^2.
double ridge_value_via_identity(const ProblemInstance& inst, const SupportSet& S);

enum class MOperatorRoute {
  Automatic,  // Woodbury when |S| < n, direct otherwise
  Woodbury,
  Direct,
};

/// Solves (I + rho^-1 X_S X_S^T) w = v. M itself is never formed on the
/// Woodbury route: w = v - X_S (rho I + X_S^T X_S)^-1 X_S^T v.
Eigen::VectorXd apply_m_operator(const ProblemInstance& inst, const SupportSet& S,
                                 const Eigen::VectorXd& v,
                                 MOperatorRoute route = MOperatorRoute::Automatic);

/// c_j = X_j^T M y for every column j.
Eigen::VectorXd correlation_scores(const ProblemInstance& inst, const SupportSet& S);

struct Eigenpair {
  double value = 0.0;
  Eigen::VectorXd vector;  // unit norm
};

/// Largest eigenvalue of a symmetric matrix and a unit eigenvector.
/// Throws InvalidInput if A is not square or not symmetric.
Eigenpair max_eig_sym(const Eigen::MatrixXd& A);

/// Smallest eigenvalue of a symmetric matrix (same checks as max_eig_sym).
double min_eig_sym(const Eigen::MatrixXd& A);

/// rho^-1 X^T X, exactly symmetric.
Eigen::MatrixXd scaled_gram(const ProblemInstance& inst);

struct SmwResiduals {
  double r1 = 0.0;  // max_i |X_i^T (X b* - y) + X_i^T M y|
  double r2 = 0.0;  // ||b*_S - rho^-1 X_S^T M y||_inf
};

/// Residuals of the two Woodbury identities linking the restricted ridge
/// solution to the M operator. Zero in exact arithmetic.
SmwResiduals smw_residuals(const ProblemInstance& inst, const SupportSet& S);

}  // namespace sparsecert
