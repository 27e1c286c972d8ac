#include "sparsecert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sparsecert/errors.hpp"
#include "sparsecert/tolerances.hpp"

namespace sparsecert {

namespace {

void check_symmetric(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) {
    throw InvalidInput("max_eig_sym: matrix is " + std::to_string(A.rows()) + "x" +
                       std::to_string(A.cols()) + ", expected square");
  }
  if (A.size() == 0) {
    throw InvalidInput("max_eig_sym: empty matrix");
  }
  const double scale = 1.0 + A.cwiseAbs().maxCoeff();
  const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= tolerance::kSymmetry * scale)) {
    throw InvalidInput("max_eig_sym: matrix is not symmetric (max asymmetry " +
                       std::to_string(asym) + ")");
  }
}

// (rho I + X_S^T X_S), SPD for rho > 0.
Eigen::MatrixXd restricted_normal_matrix(const Eigen::MatrixXd& XS, double rho) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(XS.cols(), XS.cols()) * rho;
  A.selfadjointView<Eigen::Lower>().rankUpdate(XS.transpose());
  return A.selfadjointView<Eigen::Lower>();
}

}  // namespace

SupportSet::SupportSet(std::vector<Index> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (!indices_.empty() && indices_.front() < 0) {
    throw InvalidInput("support index " + std::to_string(indices_.front()) + " is negative");
  }
  const auto dup = std::adjacent_find(indices_.begin(), indices_.end());
  if (dup != indices_.end()) {
    throw InvalidInput("support index " + std::to_string(*dup) + " appears more than once");
  }
}

SupportSet::SupportSet(std::initializer_list<Index> indices)
    : SupportSet(std::vector<Index>(indices)) {}

bool SupportSet::contains(Index j) const {
  return std::binary_search(indices_.begin(), indices_.end(), j);
}

std::vector<bool> SupportSet::mask(Index p) const {
  std::vector<bool> m(static_cast<std::size_t>(p), false);
  for (Index j : indices_) {
    if (j < p) m[static_cast<std::size_t>(j)] = true;
  }
  return m;
}

std::vector<Index> SupportSet::complement(Index p) const {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(std::max<Index>(0, p - static_cast<Index>(size()))));
  auto it = indices_.begin();
  for (Index j = 0; j < p; ++j) {
    if (it != indices_.end() && *it == j) {
      ++it;
    } else {
      out.push_back(j);
    }
  }
  return out;
}

ProblemInstance::ProblemInstance(Eigen::MatrixXd X, Eigen::VectorXd y, double rho, Index k)
    : X_(std::move(X)), y_(std::move(y)), rho_(rho), k_(k) {
  if (X_.rows() < 1 || X_.cols() < 1) {
    throw InvalidInput("instance: X must have at least one row and one column");
  }
  if (y_.size() != X_.rows()) {
    throw InvalidInput("instance: y has length " + std::to_string(y_.size()) + " but X has " +
                       std::to_string(X_.rows()) + " rows");
  }
  if (!std::isfinite(rho_) || rho_ <= 0.0) {
    throw InvalidInput("instance: rho must be positive and finite");
  }
  if (k_ < 1 || k_ > X_.cols()) {
    throw InvalidInput("instance: k must lie in [1, p]");
  }
  if (!X_.allFinite()) throw InvalidInput("instance: X has non-finite entries");
  if (!y_.allFinite()) throw InvalidInput("instance: y has non-finite entries");
}

ProblemInstance ProblemInstance::with_response(Eigen::VectorXd y) const {
  return ProblemInstance(X_, std::move(y), rho_, k_);
}

void require_support_fits(const ProblemInstance& inst, const SupportSet& S) {
  if (S.max_index() >= inst.p()) {
    throw InvalidInput("support index " + std::to_string(S.max_index()) +
                       " out of range for p = " + std::to_string(inst.p()));
  }
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& X, const SupportSet& S) {
  Eigen::MatrixXd out(X.rows(), static_cast<Index>(S.size()));
  for (std::size_t i = 0; i < S.size(); ++i) out.col(static_cast<Index>(i)) = X.col(S[i]);
  return out;
}

RestrictedRidgeSolution ridge_restricted_solve(const ProblemInstance& inst,
                                               const SupportSet& S) {
  require_support_fits(inst, S);
  RestrictedRidgeSolution sol;
  sol.beta = Eigen::VectorXd::Zero(inst.p());
  if (!S.empty()) {
    const Eigen::MatrixXd XS = select_columns(inst.X(), S);
    const Eigen::LLT<Eigen::MatrixXd> llt(restricted_normal_matrix(XS, inst.rho()));
    const Eigen::VectorXd bS = llt.solve(XS.transpose() * inst.y());
    for (std::size_t i = 0; i < S.size(); ++i) sol.beta(S[i]) = bS(static_cast<Index>(i));
  }
  const Eigen::VectorXd residual = inst.X() * sol.beta - inst.y();
  sol.value = 0.5 * residual.squaredNorm() + 0.5 * inst.rho() * sol.beta.squaredNorm();
  return sol;
}

double ridge_value_via_identity(const ProblemInstance& inst, const SupportSet& S) {
  const Eigen::VectorXd My = apply_m_operator(inst, S, inst.y(), MOperatorRoute::Direct);
  return std::max(0.0, 0.5 * inst.y().dot(My));
}

Eigen::VectorXd apply_m_operator(const ProblemInstance& inst, const SupportSet& S,
                                 const Eigen::VectorXd& v, MOperatorRoute route) {
  require_support_fits(inst, S);
  if (v.size() != inst.n()) {
    throw InvalidInput("apply_m_operator: vector has length " + std::to_string(v.size()) +
                       ", expected n = " + std::to_string(inst.n()));
  }
  if (S.empty()) return v;

  const Eigen::MatrixXd XS = select_columns(inst.X(), S);
  if (route == MOperatorRoute::Automatic) {
    route = static_cast<Index>(S.size()) < inst.n() ? MOperatorRoute::Woodbury
                                                     : MOperatorRoute::Direct;
  }
  if (route == MOperatorRoute::Woodbury) {
    const Eigen::LLT<Eigen::MatrixXd> llt(restricted_normal_matrix(XS, inst.rho()));
    return v - XS * llt.solve(XS.transpose() * v);
  }
  Eigen::MatrixXd K = Eigen::MatrixXd::Identity(inst.n(), inst.n());
  K.selfadjointView<Eigen::Lower>().rankUpdate(XS, 1.0 / inst.rho());
  return K.selfadjointView<Eigen::Lower>().llt().solve(v);
}

Eigen::VectorXd correlation_scores(const ProblemInstance& inst, const SupportSet& S) {
  return inst.X().transpose() * apply_m_operator(inst, S, inst.y());
}

Eigenpair max_eig_sym(const Eigen::MatrixXd& A) {
  check_symmetric(A);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) {
    throw InternalConsistencyError("max_eig_sym: eigen-decomposition did not converge");
  }
  // Eigenvalues come sorted ascending.
  const Index top = A.rows() - 1;
  Eigenpair out;
  out.value = es.eigenvalues()(top);
  out.vector = es.eigenvectors().col(top).normalized();
  return out;
}

double min_eig_sym(const Eigen::MatrixXd& A) {
  check_symmetric(A);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw InternalConsistencyError("min_eig_sym: eigen-decomposition did not converge");
  }
  return es.eigenvalues()(0);
}

Eigen::MatrixXd scaled_gram(const ProblemInstance& inst) {
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(inst.p(), inst.p());
  G.selfadjointView<Eigen::Lower>().rankUpdate(inst.X().transpose(), 1.0 / inst.rho());
  return G.selfadjointView<Eigen::Lower>();
}

SmwResiduals smw_residuals(const ProblemInstance& inst, const SupportSet& S) {
  const RestrictedRidgeSolution sol = ridge_restricted_solve(inst, S);
  const Eigen::VectorXd My = apply_m_operator(inst, S, inst.y());
  const Eigen::VectorXd c = inst.X().transpose() * My;
  const Eigen::VectorXd fit_corr = inst.X().transpose() * (inst.X() * sol.beta - inst.y());

  SmwResiduals r;
  r.r1 = (fit_corr + c).cwiseAbs().maxCoeff();
  for (Index j : S) {
    r.r2 = std::max(r.r2, std::abs(sol.beta(j) - c(j) / inst.rho()));
  }
  return r;
}

}  // namespace sparsecert
