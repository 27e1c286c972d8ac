#include "sparsecert/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sparsecert/errors.hpp"
#include "sparsecert/tolerances.hpp"

namespace sparsecert {

namespace {

void require_candidate_support(const ProblemInstance& inst, const SupportSet& S,
                               const char* who) {
  if (S.empty()) {
    throw InvalidInput(std::string(who) + ": support must be nonempty");
  }
  if (static_cast<Index>(S.size()) > inst.k()) {
    throw InvalidInput(std::string(who) + ": support has " + std::to_string(S.size()) +
                       " indices but the budget is k = " + std::to_string(inst.k()));
  }
  require_support_fits(inst, S);
}

void require_positive_lambda(double lambda_tilde) {
  if (!(lambda_tilde > 0.0) || !std::isfinite(lambda_tilde)) {
    throw InvalidInput("lambda~ must be positive and finite");
  }
}

// -lambda_min of [[a, b], [b, c]], clipped at 0.
double psd2_violation(double a, double b, double c) {
  const double mid = 0.5 * (a + c);
  const double rad = std::hypot(0.5 * (a - c), b);
  return std::max(0.0, -(mid - rad));
}

// D(diag) - (rho^-1 X^T X + I)
Eigen::MatrixXd eigenfunction_argument(const Eigen::MatrixXd& shifted_gram,
                                       const Eigen::VectorXd& diag) {
  Eigen::MatrixXd A = -shifted_gram;
  A.diagonal() += diag;
  return A;
}

}  // namespace

std::string_view to_string(NotCertifiedReason reason) {
  switch (reason) {
    case NotCertifiedReason::SeparationFailed: return "separation-failed";
    case NotCertifiedReason::ZeroScoreInSupport: return "zero-score-in-support";
    case NotCertifiedReason::BisectionExhausted: return "bisection-exhausted";
    case NotCertifiedReason::IntervalEmpty: return "interval-empty";
  }
  return "unknown";
}

std::string_view to_string(CertStatus status) {
  return status == CertStatus::Exact ? "Exact" : "NotCertified";
}

CertificateContext::CertificateContext(const ProblemInstance& inst, const SupportSet& S)
    : support_(S), in_support_(S.mask(inst.p())), scores_(correlation_scores(inst, S)) {
  require_support_fits(inst, S);
  shifted_gram_ = scaled_gram(inst);
  shifted_gram_.diagonal().array() += 1.0;

  const double scale = inst.y().norm() * inst.X().colwise().norm().maxCoeff();
  const double zero_cut = tolerance::kZeroScore * scale;
  all_zero_ = true;
  for (Index j = 0; j < p(); ++j) {
    const bool zero = std::abs(scores_(j)) <= zero_cut;
    all_zero_ = all_zero_ && zero;
    if (zero && in_support(j)) zero_in_support_ = true;
  }
}

PwgOutcome check_pwg(const ProblemInstance& inst, const SupportSet& S) {
  require_candidate_support(inst, S, "check_pwg");
  const Eigen::VectorXd c = correlation_scores(inst, S);

  PwgCertificate cert;
  cert.support = S;
  cert.min_in = std::numeric_limits<double>::infinity();
  const auto in_support = S.mask(inst.p());
  for (Index j = 0; j < inst.p(); ++j) {
    const double a = std::abs(c(j));
    if (in_support[static_cast<std::size_t>(j)]) {
      cert.min_in = std::min(cert.min_in, a);
    } else {
      cert.max_out = std::max(cert.max_out, a);
    }
  }
  if (cert.max_out < cert.min_in) return PwgOutcome::certified(std::move(cert));
  return PwgOutcome::rejected(NotCertifiedReason::SeparationFailed);
}

Eigen::VectorXd dual_from_lambda(const CertificateContext& ctx, double lambda_tilde) {
  require_positive_lambda(lambda_tilde);
  if (ctx.zero_score_in_support()) {
    throw InvalidInput("dual_from_lambda: zero correlation score inside the support");
  }
  const Eigen::VectorXd& c = ctx.scores();
  Eigen::VectorXd d(ctx.p());
  for (Index i = 0; i < ctx.p(); ++i) {
    const double c2 = c(i) * c(i);
    d(i) = ctx.in_support(i) ? lambda_tilde / c2 : c2 / lambda_tilde;
  }
  return d;
}

Eigen::VectorXd dual_from_lambda(const ProblemInstance& inst, const SupportSet& S,
                                 double lambda_tilde) {
  return dual_from_lambda(CertificateContext(inst, S), lambda_tilde);
}

EigenfunctionValue f_eval(const CertificateContext& ctx, double lambda_tilde) {
  require_positive_lambda(lambda_tilde);
  if (ctx.zero_score_in_support()) {
    throw InvalidInput("f_eval: zero-score-in-support");
  }
  const Eigenpair top =
      max_eig_sym(eigenfunction_argument(ctx.shifted_gram(), dual_from_lambda(ctx, lambda_tilde)));
  return {top.value, top.vector};
}

EigenfunctionValue f_eval(const ProblemInstance& inst, const SupportSet& S, double lambda_tilde) {
  return f_eval(CertificateContext(inst, S), lambda_tilde);
}

double subgradient_h(const CertificateContext& ctx, double lambda_tilde, const Eigen::VectorXd& u) {
  require_positive_lambda(lambda_tilde);
  if (u.size() != ctx.p()) {
    throw InvalidInput("subgradient_h: eigenvector length does not match p");
  }
  const Eigen::VectorXd& c = ctx.scores();
  double in_sum = 0.0;
  double out_sum = 0.0;
  for (Index i = 0; i < ctx.p(); ++i) {
    const double c2 = c(i) * c(i);
    const double u2 = u(i) * u(i);
    if (ctx.in_support(i)) {
      if (u2 != 0.0) in_sum += u2 / c2;
    } else {
      out_sum += c2 * u2;
    }
  }
  return in_sum - out_sum / (lambda_tilde * lambda_tilde);
}

double subgradient_h(const ProblemInstance& inst, const SupportSet& S, double lambda_tilde,
                     const Eigen::VectorXd& u) {
  return subgradient_h(CertificateContext(inst, S), lambda_tilde, u);
}

LambdaInterval initial_interval(const CertificateContext& ctx) {
  const Eigen::VectorXd& c = ctx.scores();
  LambdaInterval iv;
  iv.upper = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < ctx.p(); ++i) {
    const double c2 = c(i) * c(i);
    const double diag = ctx.shifted_gram()(i, i);
    if (ctx.in_support(i)) {
      iv.upper = std::min(iv.upper, c2 * diag);
    } else {
      iv.lower = std::max(iv.lower, c2 / diag);
    }
  }
  return iv;
}

LambdaInterval initial_interval(const ProblemInstance& inst, const SupportSet& S) {
  return initial_interval(CertificateContext(inst, S));
}

DclOutcome check_dcl(const ProblemInstance& inst, const SupportSet& S, DclOptions options) {
  require_candidate_support(inst, S, "check_dcl");
  if (!(options.tol > 0.0) || options.max_iter < 1) {
    throw InvalidInput("check_dcl: tol must be positive and max_iter at least 1");
  }
  const CertificateContext ctx(inst, S);

  if (ctx.all_scores_zero()) {
    // Trivial branch: d~ = 0 and lambda~ = 0 satisfy every condition.
    DclCertificate cert;
    cert.support = S;
    cert.lambda_tilde = 0.0;
    cert.d_tilde = Eigen::VectorXd::Zero(inst.p());
    cert.f_value = max_eig_sym(eigenfunction_argument(ctx.shifted_gram(), cert.d_tilde)).value;
    return DclOutcome::certified(std::move(cert));
  }
  if (ctx.zero_score_in_support()) {
    return DclOutcome::rejected(NotCertifiedReason::ZeroScoreInSupport);
  }

  const LambdaInterval start = initial_interval(ctx);
  if (start.empty()) return DclOutcome::rejected(NotCertifiedReason::IntervalEmpty);

  double lo = start.lower;
  double hi = start.upper;
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    const double lam = 0.5 * (lo + hi);
    const EigenfunctionValue ev = f_eval(ctx, lam);
    if (ev.f <= 0.0) {
      DclCertificate cert;
      cert.support = S;
      cert.lambda_tilde = lam;
      cert.d_tilde = dual_from_lambda(ctx, lam);
      cert.f_value = ev.f;
      const DclConditionReport report = verify_dcl_conditions(inst, S, lam, cert.d_tilde);
      if (!report.holds(tolerance::kCondition)) {
        throw InternalConsistencyError(
            "check_dcl: certificate with f <= 0 failed independent verification (min_eig = " +
            std::to_string(report.min_eig) + ")");
      }
      return DclOutcome::certified(std::move(cert), iter);
    }

    const double h = subgradient_h(ctx, lam, ev.u);
    if (h == 0.0) return DclOutcome::rejected(NotCertifiedReason::BisectionExhausted, iter);

    // Every lambda cut away satisfies f(lambda) >= f(lam) + h (lambda - lam) > 0.
    const double cut = lam - ev.f / h;
    const bool usable = std::isfinite(cut) && lo < cut && cut < hi;
    if (h > 0.0) {
      hi = usable ? cut : lam;
    } else {
      lo = usable ? cut : lam;
    }
    if (hi - lo <= options.tol * std::max(1.0, hi)) {
      return DclOutcome::rejected(NotCertifiedReason::BisectionExhausted, iter);
    }
  }
  return DclOutcome::rejected(NotCertifiedReason::BisectionExhausted, options.max_iter);
}

DclConditionReport verify_dcl_conditions(const ProblemInstance& inst, const SupportSet& S,
                                         double lambda_tilde, const Eigen::VectorXd& d_tilde) {
  require_support_fits(inst, S);
  if (d_tilde.size() != inst.p()) {
    throw InvalidInput("verify_dcl_conditions: d~ has wrong length");
  }
  const RestrictedRidgeSolution fit = ridge_restricted_solve(inst, S);
  const Eigen::VectorXd c = -(inst.X().transpose() * (inst.X() * fit.beta - inst.y()));

  Eigen::MatrixXd A = scaled_gram(inst);
  A.diagonal().array() += 1.0;
  A.diagonal() -= d_tilde;

  DclConditionReport r;
  r.min_eig = min_eig_sym(A);
  r.min_d = d_tilde.minCoeff();
  const auto in_support = S.mask(inst.p());
  for (Index i = 0; i < inst.p(); ++i) {
    const double c2 = c(i) * c(i);
    if (in_support[static_cast<std::size_t>(i)]) {
      r.support_mismatch = std::max(
          r.support_mismatch, std::abs(lambda_tilde - d_tilde(i) * c2) / std::max(1.0, lambda_tilde));
    } else {
      r.outside_violation = std::max(
          r.outside_violation, std::max(0.0, c2 - lambda_tilde * d_tilde(i)) / std::max(1.0, c2));
    }
  }
  return r;
}

DclCertificate pwg_witness_to_dcl(const ProblemInstance& inst, const SupportSet& S,
                                  const PwgCertificate& pwg) {
  require_candidate_support(inst, S, "pwg_witness_to_dcl");
  if (pwg.support != S || !(pwg.max_out < pwg.min_in)) {
    throw InvalidInput("pwg_witness_to_dcl: certificate does not separate the given support");
  }
  const CertificateContext ctx(inst, S);
  const Eigen::VectorXd& c = ctx.scores();

  DclCertificate cert;
  cert.support = S;
  cert.lambda_tilde = std::numeric_limits<double>::infinity();
  for (Index j : S) cert.lambda_tilde = std::min(cert.lambda_tilde, c(j) * c(j));
  cert.d_tilde = Eigen::VectorXd::Ones(inst.p());
  for (Index j : S) cert.d_tilde(j) = cert.lambda_tilde / (c(j) * c(j));
  cert.f_value = max_eig_sym(eigenfunction_argument(ctx.shifted_gram(), cert.d_tilde)).value;

  const DclConditionReport report =
      verify_dcl_conditions(inst, S, cert.lambda_tilde, cert.d_tilde);
  if (!report.holds(tolerance::kCondition)) {
    throw InternalConsistencyError("pwg_witness_to_dcl: transferred witness violates the DCL "
                                   "conditions (min_eig = " + std::to_string(report.min_eig) +
                                   ", outside = " + std::to_string(report.outside_violation) + ")");
  }
  return cert;
}

double KktReport::max_residual() const noexcept {
  return std::max({psd_residual_big, psd_residual_small, comp_residual});
}

KktReport verify_kkt(const ProblemInstance& inst, const SupportSet& S, const Eigen::VectorXd& d,
                     double lambda) {
  require_support_fits(inst, S);
  if (d.size() != inst.p()) throw InvalidInput("verify_kkt: d has wrong length");

  const Index p = inst.p();
  const Eigen::VectorXd b = ridge_restricted_solve(inst, S).beta;
  const Eigen::VectorXd Xty = inst.X().transpose() * inst.y();

  Eigen::MatrixXd G = scaled_gram(inst) * inst.rho();
  G.diagonal().array() += inst.rho();
  G.diagonal() -= d;

  KktReport r;
  r.t = G * b - Xty;
  r.tau = b.dot(G * b);

  Eigen::MatrixXd big(p + 1, p + 1);
  big(0, 0) = r.tau;
  big.block(1, 0, p, 1) = -Xty - r.t;
  big.block(0, 1, 1, p) = (-Xty - r.t).transpose();
  big.block(1, 1, p, p) = G;
  r.psd_residual_big = std::max(0.0, -min_eig_sym(big));

  for (Index i = 0; i < p; ++i) {
    r.psd_residual_small = std::max(r.psd_residual_small, psd2_violation(lambda, r.t(i), d(i)));
  }

  Eigen::VectorXd lifted(p + 1);
  lifted << 1.0, b;
  r.comp_residual = std::abs(lifted.dot(big * lifted));
  for (Index i : S) {
    const double inner = lambda + 2.0 * r.t(i) * b(i) + d(i) * b(i) * b(i);
    r.comp_residual = std::max(r.comp_residual, std::abs(inner));
  }
  return r;
}

KktDualVariables to_kkt_variables(const DclCertificate& cert, double rho) {
  return {cert.d_tilde * rho, cert.lambda_tilde / rho};
}

}  // namespace sparsecert
