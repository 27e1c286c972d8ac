#include "sparsecert/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sparsecert/errors.hpp"
#include "sparsecert/tolerances.hpp"

namespace sparsecert {

namespace {

// (rho^-1 X D(z) X^T + I)^-1 y
Eigen::VectorXd kernel_response(const ProblemInstance& inst, const Eigen::VectorXd& z) {
  const Eigen::MatrixXd XD = inst.X() * z.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  Eigen::MatrixXd K = Eigen::MatrixXd::Identity(inst.n(), inst.n());
  K.selfadjointView<Eigen::Lower>().rankUpdate(XD, 1.0 / inst.rho());
  return K.selfadjointView<Eigen::Lower>().llt().solve(inst.y());
}

// max_{w feasible} grad^T (z - w); the minimiser puts 1 on the k most negative entries.
double frank_wolfe_gap(const Eigen::VectorXd& grad, const Eigen::VectorXd& z, Index k) {
  std::vector<double> g(grad.data(), grad.data() + grad.size());
  const auto kk = static_cast<std::size_t>(std::min<Index>(k, grad.size()));
  std::partial_sort(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(kk), g.end());
  double best = 0.0;
  for (std::size_t i = 0; i < kk && g[i] < 0.0; ++i) best += g[i];
  return std::max(0.0, grad.dot(z) - best);
}

}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step.
    const std::uint64_t factor = n - k + i;
    const std::uint64_t g = std::gcd(result, i);
    const std::uint64_t r = result / g;
    const std::uint64_t f = factor / (i / g);
    if (r != 0 && f > std::numeric_limits<std::uint64_t>::max() / r) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result = r * f;
  }
  return result;
}

BruteForceResult brute_force_l0(const ProblemInstance& inst, std::uint64_t max_combinations) {
  const auto p = static_cast<std::uint64_t>(inst.p());
  const auto k = static_cast<std::uint64_t>(inst.k());
  const std::uint64_t total = binomial(p, k);
  if (total > max_combinations) {
    throw BudgetExceeded("brute_force_l0: C(" + std::to_string(p) + ", " + std::to_string(k) +
                             ") = " + std::to_string(total) + " exceeds the budget of " +
                             std::to_string(max_combinations),
                         total);
  }

  std::vector<std::pair<double, SupportSet>> evaluated;
  evaluated.reserve(static_cast<std::size_t>(total));

  std::vector<Index> comb(static_cast<std::size_t>(k));
  std::iota(comb.begin(), comb.end(), Index{0});
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    SupportSet S(comb);
    const double v = ridge_value_via_identity(inst, S);
    best = std::min(best, v);
    evaluated.emplace_back(v, std::move(S));

    // Next combination in lexicographic order.
    auto i = static_cast<std::ptrdiff_t>(k) - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] ==
                         static_cast<Index>(p - k) + static_cast<Index>(i)) {
      --i;
    }
    if (i < 0) break;
    ++comb[static_cast<std::size_t>(i)];
    for (auto j = static_cast<std::size_t>(i) + 1; j < comb.size(); ++j) comb[j] = comb[j - 1] + 1;
  }

  BruteForceResult out;
  out.value = best;
  out.supports_evaluated = evaluated.size();
  for (auto& [v, S] : evaluated) {
    if (v - best <= tolerance::kRelative * best) out.argmin_supports.push_back(std::move(S));
  }
  return out;
}

double pwg_objective(const ProblemInstance& inst, const Eigen::VectorXd& z) {
  if (z.size() != inst.p()) throw InvalidInput("pwg_objective: z has wrong length");
  return std::max(0.0, 0.5 * inst.y().dot(kernel_response(inst, z)));
}

Eigen::VectorXd pwg_gradient(const ProblemInstance& inst, const Eigen::VectorXd& z) {
  if (z.size() != inst.p()) throw InvalidInput("pwg_gradient: z has wrong length");
  const Eigen::VectorXd corr = inst.X().transpose() * kernel_response(inst, z);
  return -corr.cwiseAbs2() / (2.0 * inst.rho());
}

Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& v, Index k) {
  if (k < 1) throw InvalidInput("project_capped_simplex: k must be at least 1");
  const auto clipped = [&v](double theta) {
    return (v.array() - theta).cwiseMax(0.0).cwiseMin(1.0).matrix().eval();
  };
  Eigen::VectorXd z = clipped(0.0);
  if (z.sum() <= static_cast<double>(k)) return z;

  // sum(clip(v - theta)) is continuous and nonincreasing in theta.
  double lo = 0.0;
  double hi = v.maxCoeff();
  const double eps = 1e-12 * std::max(1.0, std::abs(hi));
  for (int it = 0; it < 200 && hi - lo > eps; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (clipped(mid).sum() > static_cast<double>(k)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return clipped(hi);
}

PwgValueResult pwg_value(const ProblemInstance& inst, PwgValueOptions options) {
  constexpr double kArmijo = 1e-4;
  const Index p = inst.p();

  PwgValueResult out;
  out.z = project_capped_simplex(
      Eigen::VectorXd::Constant(p, static_cast<double>(inst.k()) / static_cast<double>(p)),
      inst.k());
  double g = pwg_objective(inst, out.z);
  Eigen::VectorXd grad = pwg_gradient(inst, out.z);
  if (options.record_trace) out.trace.push_back(g);

  // Initial step: move the steepest coordinate by one unit.
  const double gmax = grad.cwiseAbs().maxCoeff();
  double step = gmax > 0.0 ? 1.0 / gmax : 1.0;

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    out.iterations = iter;
    Eigen::VectorXd z_new;
    double g_new = g;
    double moved = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      z_new = project_capped_simplex(out.z - step * grad, inst.k());
      const Eigen::VectorXd dz = z_new - out.z;
      moved = dz.cwiseAbs().maxCoeff();
      if (moved == 0.0) break;
      g_new = pwg_objective(inst, z_new);
      if (g_new <= g + kArmijo * grad.dot(dz)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    out.z = std::move(z_new);
    g = g_new;
    grad = pwg_gradient(inst, out.z);
    if (options.record_trace) out.trace.push_back(g);
    step *= 2.0;
    if (moved <= options.tol) break;
    if (frank_wolfe_gap(grad, out.z, inst.k()) <= options.tol * std::max(1.0, g)) break;
  }

  out.value = g;
  out.grad_norm_kkt = frank_wolfe_gap(grad, out.z, inst.k());
  return out;
}

}  // namespace sparsecert
