#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sparsecert/linalg.hpp"

namespace sparsecert {

enum class CertStatus { Exact, NotCertified };

enum class NotCertifiedReason {
  SeparationFailed,
  ZeroScoreInSupport,
  BisectionExhausted,
  IntervalEmpty,
};

/// "separation-failed", "zero-score-in-support", "bisection-exhausted", "interval-empty".
std::string_view to_string(NotCertifiedReason reason);
std::string_view to_string(CertStatus status);

/// Threshold certificate for the boolean (PWG) relaxation. Any lambda in
/// [max_out, min_in) separates in-support from off-support scores.
struct PwgCertificate {
  SupportSet support;
  double min_in = 0.0;   // min_{j in S} |c_j|
  double max_out = 0.0;  // max_{j not in S} |c_j|, 0 when S is every column
};

/// Dual certificate (lambda~, d~) for the DCL relaxation.
struct DclCertificate {
  SupportSet support;
  double lambda_tilde = 0.0;
  Eigen::VectorXd d_tilde;
  double f_value = 0.0;  // lambda_max(D(d~) - rho^-1 X^T X - I)
};

template <class Certificate>
struct CertOutcome {
  CertStatus status = CertStatus::NotCertified;
  std::optional<Certificate> certificate;
  std::optional<NotCertifiedReason> reason;
  int iterations = 0;

  bool exact() const noexcept { return status == CertStatus::Exact; }

  static CertOutcome certified(Certificate cert, int iterations = 0) {
    return {CertStatus::Exact, std::move(cert), std::nullopt, iterations};
  }
  static CertOutcome rejected(NotCertifiedReason why, int iterations = 0) {
    return {CertStatus::NotCertified, std::nullopt, why, iterations};
  }
};

using PwgOutcome = CertOutcome<PwgCertificate>;
using DclOutcome = CertOutcome<DclCertificate>;

/// Everything the eigenvalue function needs that does not depend on lambda~:
/// correlation scores, the support indicator and rho^-1 X^T X + I. Building it
/// once lets the bisection evaluate f repeatedly at O(p^3) per call.
class CertificateContext {
 public:
  CertificateContext(const ProblemInstance& inst, const SupportSet& S);

  const SupportSet& support() const noexcept { return support_; }
  const Eigen::VectorXd& scores() const noexcept { return scores_; }
  const Eigen::MatrixXd& shifted_gram() const noexcept { return shifted_gram_; }
  bool in_support(Index j) const { return in_support_[static_cast<std::size_t>(j)]; }
  Index p() const noexcept { return scores_.size(); }

  /// True when c_j is numerically zero for every column.
  bool all_scores_zero() const noexcept { return all_zero_; }
  /// True when some c_i, i in S, is numerically zero.
  bool zero_score_in_support() const noexcept { return zero_in_support_; }

 private:
  SupportSet support_;
  std::vector<bool> in_support_;
  Eigen::VectorXd scores_;
  Eigen::MatrixXd shifted_gram_;
  bool all_zero_ = false;
  bool zero_in_support_ = false;
};

/// Strict separation test max_{j not in S}|c_j| < min_{j in S}|c_j|.
/// Requires 1 <= |S| <= k; ties are not certified.
PwgOutcome check_pwg(const ProblemInstance& inst, const SupportSet& S);

struct EigenfunctionValue {
  double f = 0.0;
  Eigen::VectorXd u;  // unit top eigenvector
};

/// f(lambda~) = lambda_max(diag(lambda~/c_i^2 on S, c_i^2/lambda~ off S) - rho^-1 X^T X - I).
/// Throws InvalidInput for lambda~ <= 0 or a zero score inside S.
EigenfunctionValue f_eval(const CertificateContext& ctx, double lambda_tilde);
EigenfunctionValue f_eval(const ProblemInstance& inst, const SupportSet& S, double lambda_tilde);

/// Subgradient of f at lambda~ from a top eigenvector u:
/// sum_{S} u_i^2 / c_i^2 - lambda~^-2 sum_{not S} c_i^2 u_i^2.
double subgradient_h(const CertificateContext& ctx, double lambda_tilde, const Eigen::VectorXd& u);
double subgradient_h(const ProblemInstance& inst, const SupportSet& S, double lambda_tilde,
                     const Eigen::VectorXd& u);

struct LambdaInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool empty() const noexcept { return !(lower < upper); }
};

/// Bracket outside of which some diagonal entry of the eigenvalue argument is
/// nonnegative, so no lambda~ with f < 0 can lie outside it.
LambdaInterval initial_interval(const CertificateContext& ctx);
LambdaInterval initial_interval(const ProblemInstance& inst, const SupportSet& S);

/// d~_i = lambda~/c_i^2 on S and c_i^2/lambda~ off S.
Eigen::VectorXd dual_from_lambda(const CertificateContext& ctx, double lambda_tilde);
Eigen::VectorXd dual_from_lambda(const ProblemInstance& inst, const SupportSet& S,
                                 double lambda_tilde);

struct DclOptions {
  double tol = 1e-10;  // relative bracket width
  int max_iter = 200;
};

/// Searches lambda~ > 0 with f(lambda~) <= 0 by bisection with subgradient cuts.
/// An Exact outcome always carries a certificate that passed
/// verify_dcl_conditions. Requires 1 <= |S| <= k.
DclOutcome check_dcl(const ProblemInstance& inst, const SupportSet& S, DclOptions options = {});

/// Builds the DCL witness implied by a PWG certificate (lambda~ = min_{S} c_j^2,
/// d~ = lambda~/c_i^2 on S, 1 off S) and verifies all three conditions.
/// Throws InternalConsistencyError if verification fails.
DclCertificate pwg_witness_to_dcl(const ProblemInstance& inst, const SupportSet& S,
                                  const PwgCertificate& pwg);

/// Independent re-check of the three certificate conditions. Scores are
/// recomputed from the restricted ridge fit (c_i = -X_i^T (X b* - y)), not
/// through the M operator used by the search.
struct DclConditionReport {
  double min_eig = 0.0;           // lambda_min(rho^-1 X^T X + I - D(d~))
  double support_mismatch = 0.0;  // max_{S} |lambda~ - d~_i c_i^2| / max(1, lambda~)
  double outside_violation = 0.0; // max_{not S} max(0, c_i^2 - lambda~ d~_i)
  double min_d = 0.0;             // min_i d~_i

  bool holds(double slack) const noexcept {
    return min_eig >= -slack && support_mismatch <= slack && outside_violation <= slack &&
           min_d >= 0.0;
  }
};

DclConditionReport verify_dcl_conditions(const ProblemInstance& inst, const SupportSet& S,
                                         double lambda_tilde, const Eigen::VectorXd& d_tilde);

/// Residuals of the first-order system of the DCL primal/dual pair at
/// (b*, b* b*^T, z*), in the unscaled dual variables (d, lambda).
struct KktReport {
  Eigen::VectorXd t;
  double tau = 0.0;
  double psd_residual_big = 0.0;
  double psd_residual_small = 0.0;
  double comp_residual = 0.0;

  double max_residual() const noexcept;
};

KktReport verify_kkt(const ProblemInstance& inst, const SupportSet& S, const Eigen::VectorXd& d,
                     double lambda);

/// Unscaled dual variables for verify_kkt: d = rho d~, lambda = lambda~ / rho.
struct KktDualVariables {
  Eigen::VectorXd d;
  double lambda = 0.0;
};

KktDualVariables to_kkt_variables(const DclCertificate& cert, double rho);

}  // namespace sparsecert
