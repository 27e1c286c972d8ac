#include "sparsecert/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "sparsecert/certificates.hpp"
#include "sparsecert/rng.hpp"

namespace sparsecert {

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 18; ++i) grid.push_back(1.0 + 0.5 * i);
  return grid;
}

void EnsembleConfig::validate() const {
  if (p_list.empty()) throw InvalidConfig("config: p_list is empty");
  if (alpha_grid.empty()) throw InvalidConfig("config: alpha_grid is empty");
  if (rho_multipliers.empty()) throw InvalidConfig("config: rho_multipliers is empty");
  for (Index p : p_list) {
    if (p < 4) throw InvalidConfig("config: every p must be at least 4 (got " + std::to_string(p) + ")");
  }
  for (double a : alpha_grid) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidConfig("config: alpha values must be positive");
  }
  for (double m : rho_multipliers) {
    if (!(m > 0.0) || !std::isfinite(m)) throw InvalidConfig("config: rho multipliers must be positive");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidConfig("config: gamma must be nonnegative");
  if (trials < 1) throw InvalidConfig("config: trials must be at least 1");
  if (k_rule != "ceil-sqrt-p") throw InvalidConfig("config: unknown k_rule '" + k_rule + "'");
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) throw InvalidConfig("config: amplitude must be positive");
}

Index ceil_sqrt(Index p) {
  if (p <= 0) return 0;
  auto r = static_cast<Index>(std::sqrt(static_cast<double>(p)));
  while (r * r < p) ++r;
  while (r > 1 && (r - 1) * (r - 1) >= p) --r;
  return r;
}

CellShape cell_shape(Index p, double alpha, double rho_multiplier) {
  CellShape s;
  s.p = p;
  s.k = ceil_sqrt(p);
  if (p - s.k <= 1) {
    throw InvalidConfig("cell: p = " + std::to_string(p) + " leaves p - k <= 1");
  }
  s.alpha = alpha;
  s.rho_multiplier = rho_multiplier;
  const double n_real = alpha * static_cast<double>(s.k) * std::log(static_cast<double>(p - s.k));
  s.n = std::max<Index>(1, static_cast<Index>(std::ceil(n_real)));
  s.rho = rho_multiplier * std::sqrt(static_cast<double>(s.n));
  return s;
}

GeneratedInstance generate_instance(const EnsembleConfig& cfg, const TrialKey& key) {
  if (key.alpha_index >= cfg.alpha_grid.size() || key.rho_index >= cfg.rho_multipliers.size()) {
    throw InvalidConfig("generate_instance: grid index out of range");
  }
  if (key.trial_index < 0) throw InvalidConfig("generate_instance: negative trial index");
  const CellShape shape =
      cell_shape(key.p, cfg.alpha_grid[key.alpha_index], cfg.rho_multipliers[key.rho_index]);
  const std::uint64_t seed =
      seed_derive(cfg.master_seed, static_cast<std::uint64_t>(key.p), key.alpha_index,
                  key.rho_index, static_cast<std::uint64_t>(key.trial_index));
  SplitMix64 rng(seed);

  Eigen::MatrixXd X(shape.n, shape.p);
  for (Index i = 0; i < shape.n; ++i) {
    for (Index j = 0; j < shape.p; ++j) X(i, j) = rng.normal();
  }

  std::vector<Index> pool(static_cast<std::size_t>(shape.p));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < shape.k; ++i) {
    const auto remaining = static_cast<std::uint64_t>(shape.p - i);
    const auto pick = static_cast<std::size_t>(i) + static_cast<std::size_t>(rng.below(remaining));
    std::swap(pool[static_cast<std::size_t>(i)], pool[pick]);
  }
  SupportSet support(std::vector<Index>(pool.begin(), pool.begin() + shape.k));

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(shape.p);
  for (Index j : support) beta(j) = (rng.next() >> 63) ? -cfg.amplitude : cfg.amplitude;

  Eigen::VectorXd noise(shape.n);
  for (Index i = 0; i < shape.n; ++i) noise(i) = rng.normal();
  Eigen::VectorXd y = X * beta + cfg.gamma * noise;

  return GeneratedInstance{ProblemInstance(std::move(X), std::move(y), shape.rho, shape.k),
                           std::move(beta), std::move(support), shape, seed};
}

TrialOutcome evaluate_trial(const ProblemInstance& inst, const SupportSet& support) {
  if (static_cast<Index>(support.size()) != inst.k()) {
    throw InvalidInput("evaluate_trial: |S_true| must equal k");
  }
  TrialOutcome out;
  out.pwg_exact = check_pwg(inst, support).exact();
  out.dcl_exact = check_dcl(inst, support).exact();
  if (out.pwg_exact && !out.dcl_exact) {
    throw DominanceViolation("PWG certificate exists but the DCL search failed");
  }
  return out;
}

TrialRecord run_trial(const EnsembleConfig& cfg, const TrialKey& key) {
  const GeneratedInstance g = generate_instance(cfg, key);
  const TrialOutcome o = evaluate_trial(g.instance, g.support);
  TrialRecord r;
  r.p = g.shape.p;
  r.k = g.shape.k;
  r.n = g.shape.n;
  r.alpha = g.shape.alpha;
  r.rho_multiplier = g.shape.rho_multiplier;
  r.rho = g.shape.rho;
  r.trial_index = key.trial_index;
  r.trial_seed = g.seed;
  r.pwg_exact = o.pwg_exact;
  r.dcl_exact = o.dcl_exact;
  return r;
}

std::vector<TrialKey> sweep_keys(const EnsembleConfig& cfg) {
  std::vector<TrialKey> keys;
  keys.reserve(cfg.p_list.size() * cfg.alpha_grid.size() * cfg.rho_multipliers.size() *
               static_cast<std::size_t>(std::max(cfg.trials, 0)));
  for (Index p : cfg.p_list) {
    for (std::size_t a = 0; a < cfg.alpha_grid.size(); ++a) {
      for (std::size_t r = 0; r < cfg.rho_multipliers.size(); ++r) {
        for (int t = 0; t < cfg.trials; ++t) keys.push_back({p, a, r, t});
      }
    }
  }
  return keys;
}

std::vector<TrialRecord> run_sweep(const EnsembleConfig& cfg, unsigned workers) {
  cfg.validate();
  const std::vector<TrialKey> keys = sweep_keys(cfg);
  std::vector<TrialRecord> records(keys.size());

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, keys.size())));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= keys.size()) return;
      try {
        records[i] = run_trial(cfg, keys[i]);
      } catch (const DominanceViolation& e) {
        const TrialKey& key = keys[i];
        std::ostringstream msg;
        msg << e.what() << " (p=" << key.p << ", alpha_index=" << key.alpha_index
            << ", rho_index=" << key.rho_index << ", trial=" << key.trial_index << ")";
        std::lock_guard lock(error_mutex);
        if (!error) error = std::make_exception_ptr(SweepAborted(msg.str(), key));
        failed = true;
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return records;
}

std::vector<RecoveryCurve> aggregate(const std::vector<TrialRecord>& records) {
  struct Tally {
    int trials = 0;
    int pwg = 0;
    int dcl = 0;
  };
  struct Group {
    Index p;
    double rho_multiplier;
    std::vector<double> alphas;
    std::vector<Tally> tallies;
  };
  std::vector<Group> groups;

  for (const TrialRecord& r : records) {
    auto g = std::find_if(groups.begin(), groups.end(), [&](const Group& x) {
      return x.p == r.p && x.rho_multiplier == r.rho_multiplier;
    });
    if (g == groups.end()) {
      groups.push_back({r.p, r.rho_multiplier, {}, {}});
      g = std::prev(groups.end());
    }
    auto a = std::find(g->alphas.begin(), g->alphas.end(), r.alpha);
    std::size_t idx = static_cast<std::size_t>(a - g->alphas.begin());
    if (a == g->alphas.end()) {
      g->alphas.push_back(r.alpha);
      g->tallies.emplace_back();
    }
    Tally& t = g->tallies[idx];
    ++t.trials;
    t.pwg += r.pwg_exact ? 1 : 0;
    t.dcl += r.dcl_exact ? 1 : 0;
  }

  std::vector<RecoveryCurve> curves;
  curves.reserve(groups.size());
  for (const Group& g : groups) {
    RecoveryCurve c{g.p, g.rho_multiplier, {}};
    for (std::size_t i = 0; i < g.alphas.size(); ++i) {
      const Tally& t = g.tallies[i];
      c.points.push_back({g.alphas[i], static_cast<double>(t.pwg) / t.trials,
                          static_cast<double>(t.dcl) / t.trials, t.trials});
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

}  // namespace sparsecert
