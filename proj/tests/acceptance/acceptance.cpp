// Acceptance gate: runs each criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exit status is the number of hard failures.
//
//   sparsecert_acceptance [artifact-dir]

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "sparsecert/certificates.hpp"
#include "sparsecert/ensemble.hpp"
#include "sparsecert/io.hpp"
#include "sparsecert/oracles.hpp"
#include "sparsecert/plot.hpp"
#include "test_support.hpp"

namespace sc = sparsecert;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Failures {
  int count = 0;
  std::string first;

  void note(const std::string& what) {
    if (count++ == 0) first = what;
  }
  std::string summary() const {
    return count == 0 ? std::string("0 violations") : std::to_string(count) + " violations, first: " + first;
  }
};

std::vector<sc::ProblemInstance> instances_c1(std::vector<sc::SupportSet>* planted) {
  std::mt19937_64 rng(0xACCE9701);
  std::vector<sc::ProblemInstance> out;
  for (int i = 0; i < 500; ++i) {
    auto pi = sc::testing::desk_instance(rng, 12);
    out.push_back(std::move(pi.instance));
    planted->push_back(std::move(pi.planted));
  }
  return out;
}

// 1 and 2 share the instance set and the brute-force results.
struct SharedSet {
  std::vector<sc::ProblemInstance> inst;
  std::vector<sc::SupportSet> planted;
  std::vector<sc::BruteForceResult> bf;
};

SharedSet& shared() {
  static SharedSet s = [] {
    SharedSet r;
    r.inst = instances_c1(&r.planted);
    for (const auto& inst : r.inst) r.bf.push_back(sc::brute_force_l0(inst));
    return r;
  }();
  return s;
}

Verdict criterion1() {
  const SharedSet& s = shared();
  Failures bad;
  int pwg_exact = 0, dcl_exact = 0;
  for (std::size_t i = 0; i < s.inst.size(); ++i) {
    const auto& inst = s.inst[i];
    for (const auto& S : s.bf[i].argmin_supports) {
      try {
        const bool pwg = sc::check_pwg(inst, S).exact();
        const bool dcl = sc::check_dcl(inst, S).exact();
        pwg_exact += pwg;
        dcl_exact += dcl;
        if (!pwg && !dcl) continue;
        const double v = sc::ridge_value_via_identity(inst, S);
        const double ref = s.bf[i].value;
        if (std::abs(v - ref) > 1e-8 * std::max(1.0, std::abs(ref))) {
          bad.note("instance " + std::to_string(i) + " value mismatch");
        }
      } catch (const std::exception& e) {
        bad.note("instance " + std::to_string(i) + ": " + e.what());
      }
    }
    // Stronger form: any support carrying a certificate must be a global minimiser.
    try {
      const auto& S = s.planted[i];
      if (sc::check_pwg(inst, S).exact() || sc::check_dcl(inst, S).exact()) {
        const double v = sc::ridge_value_via_identity(inst, S);
        if (std::abs(v - s.bf[i].value) > 1e-8 * std::max(1.0, s.bf[i].value)) {
          bad.note("instance " + std::to_string(i) + " planted support certified but not optimal");
        }
      }
    } catch (const std::exception& e) {
      bad.note("instance " + std::to_string(i) + ": " + e.what());
    }
  }
  std::ostringstream d;
  d << s.inst.size() << " instances, argmin supports certified: pwg " << pwg_exact << ", dcl " << dcl_exact
    << "; " << bad.summary();
  return {bad.count == 0, d.str()};
}

Verdict criterion2() {
  const SharedSet& s = shared();
  Failures bad;
  int pwg_exact = 0;
  double worst_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.inst.size(); ++i) {
    const auto& inst = s.inst[i];
    std::vector<sc::SupportSet> supports = s.bf[i].argmin_supports;
    supports.push_back(s.planted[i]);
    for (const auto& S : supports) {
      try {
        if (!sc::check_pwg(inst, S).exact()) continue;
        ++pwg_exact;
        if (!sc::check_dcl(inst, S).exact()) bad.note("instance " + std::to_string(i) + ": PWG exact, DCL not");
      } catch (const std::exception& e) {
        bad.note("instance " + std::to_string(i) + ": " + e.what());
      }
    }
    const double pv = sc::pwg_value(inst).value;
    worst_gap = std::max(worst_gap, pv - s.bf[i].value);
    if (pv > s.bf[i].value + 1e-7) bad.note("instance " + std::to_string(i) + ": pwg_value > nu_l0 + 1e-7");
  }
  std::ostringstream d;
  d << pwg_exact << " PWG-exact supports checked, max(pwg_value - nu_l0) = " << worst_gap << "; "
    << bad.summary();
  return {bad.count == 0, d.str()};
}

Verdict criterion3() {
  std::mt19937_64 rng(0xACCE9703);
  Failures bad;
  int yes = 0, no = 0, borderline = 0, skipped = 0;
  constexpr int kGrid = 10000;
  for (int t = 0; t < 200; ++t) {
    const auto [inst, planted] = sc::testing::desk_instance(rng, 10);
    const sc::CertificateContext ctx(inst, planted);
    const sc::DclOutcome out = sc::check_dcl(inst, planted);
    if (ctx.zero_score_in_support() || ctx.all_scores_zero()) {
      ++skipped;  // f undefined or identically trivial
      continue;
    }
    const sc::LambdaInterval iv = sc::initial_interval(ctx);
    double grid_min = std::numeric_limits<double>::infinity();
    if (iv.lower <= iv.upper) {
      for (int g = 0; g < kGrid; ++g) {
        const double lam = iv.lower + (iv.upper - iv.lower) * g / (kGrid - 1.0);
        if (lam <= 0.0) continue;
        grid_min = std::min(grid_min, sc::f_eval(ctx, lam).f);
      }
    }
    const bool grid_yes = grid_min <= 0.0;
    out.exact() ? ++yes : ++no;
    if (out.exact() == grid_yes) continue;
    if (grid_min > -1e-6 && grid_min < 1e-6) {
      ++borderline;
      continue;
    }
    bad.note("instance " + std::to_string(t) + ": bisection " + (out.exact() ? "yes" : "no") +
             ", grid min f = " + sc::format_real(grid_min));
  }
  std::ostringstream d;
  d << "200 instances (" << yes << " certified, " << no << " not, " << skipped
    << " skipped for a zero score), borderline disagreements " << borderline << "; " << bad.summary();
  return {bad.count == 0, d.str()};
}

Verdict criterion4() {
  std::mt19937_64 rng(0xACCE9704);
  Failures bad;
  int identity_checks = 0, smw = 0, kkt = 0, grad = 0;
  double worst_kkt = 0.0;
  while ((identity_checks < 200 || kkt < 200) && identity_checks < 20000) {
    const auto [inst, planted] = sc::testing::desk_instance(rng);
    const std::string tag = "instance " + std::to_string(identity_checks);

    const double primal = sc::ridge_restricted_solve(inst, planted).value;
    const double dual = sc::ridge_value_via_identity(inst, planted);
    if (std::abs(primal - dual) > 1e-9 * (1.0 + std::abs(primal))) bad.note(tag + ": identity");
    ++identity_checks;

    const sc::SmwResiduals r = sc::smw_residuals(inst, planted);
    if (r.r1 > 1e-8 || r.r2 > 1e-8) bad.note(tag + ": Woodbury residual");
    ++smw;

    const sc::DclOutcome dcl = sc::check_dcl(inst, planted);
    if (dcl.exact()) {
      const auto v = sc::to_kkt_variables(*dcl.certificate, inst.rho());
      const double res = sc::verify_kkt(inst, planted, v.d, v.lambda).max_residual();
      worst_kkt = std::max(worst_kkt, res);
      if (res > 1e-6) bad.note(tag + ": KKT residual " + sc::format_real(res));
      ++kkt;
    }
    const sc::PwgOutcome pwg = sc::check_pwg(inst, planted);
    if (pwg.exact()) {
      const sc::DclCertificate w = sc::pwg_witness_to_dcl(inst, planted, *pwg.certificate);
      const auto v = sc::to_kkt_variables(w, inst.rho());
      const double res = sc::verify_kkt(inst, planted, v.d, v.lambda).max_residual();
      worst_kkt = std::max(worst_kkt, res);
      if (res > 1e-6) bad.note(tag + ": KKT residual (PWG witness) " + sc::format_real(res));
    }

    if (grad < 200) {
      std::uniform_real_distribution<double> unit(0.05, 0.95);
      Eigen::VectorXd z(inst.p());
      for (sc::Index j = 0; j < inst.p(); ++j) z(j) = unit(rng);
      const Eigen::VectorXd g = sc::pwg_gradient(inst, z);
      for (sc::Index j = 0; j < inst.p(); ++j) {
        Eigen::VectorXd up = z, down = z;
        up(j) += 1e-6;
        down(j) -= 1e-6;
        const double fd = (sc::pwg_objective(inst, up) - sc::pwg_objective(inst, down)) / 2e-6;
        if (std::abs(fd - g(j)) > 1e-5 * std::max(1.0, std::abs(g(j)))) bad.note(tag + ": gradient");
      }
      ++grad;
    }
  }
  std::ostringstream d;
  d << "identity " << identity_checks << ", Woodbury " << smw << ", KKT " << kkt << " certificates (worst "
    << sc::format_real(worst_kkt) << "), gradient " << grad << " instances; " << bad.summary();
  return {bad.count == 0 && kkt >= 200, d.str()};
}

Verdict criterion5() {
  std::mt19937_64 rng(0xACCE9705);
  Failures bad;
  int instances = 0;
  while (instances < 100) {
    const auto [inst, planted] = sc::testing::desk_instance(rng);
    const sc::CertificateContext ctx(inst, planted);
    if (ctx.zero_score_in_support() || ctx.all_scores_zero()) continue;
    ++instances;
    const sc::LambdaInterval iv = sc::initial_interval(ctx);
    const double top = 2.0 * std::max(iv.lower, iv.upper);
    const double bottom = std::max(1e-3 * top, 0.5 * std::min(iv.lower, iv.upper));
    std::uniform_real_distribution<double> pick(bottom, top);
    for (int s = 0; s < 50; ++s) {
      const double a = pick(rng);
      const double b = pick(rng);
      const sc::EigenfunctionValue fa = sc::f_eval(ctx, a);
      const double fb = sc::f_eval(ctx, b).f;
      const double fm = sc::f_eval(ctx, 0.5 * (a + b)).f;
      if (fm > 0.5 * (fa.f + fb) + 1e-9) bad.note("midpoint convexity, instance " + std::to_string(instances));
      const double h = sc::subgradient_h(ctx, a, fa.u);
      if (fb < fa.f + h * (b - a) - 1e-9) bad.note("subgradient, instance " + std::to_string(instances));
    }
  }
  return {bad.count == 0, "100 instances x 50 points; " + bad.summary()};
}

double first_alpha_reaching(const sc::RecoveryCurve& c, bool dcl) {
  for (const auto& pt : c.points) {
    if ((dcl ? pt.dcl_rate : pt.pwg_rate) >= 0.9) return pt.alpha;
  }
  return std::numeric_limits<double>::infinity();
}

Verdict criterion6(const fs::path& dir) {
  sc::EnsembleConfig cfg;
  cfg.p_list = {64};
  cfg.alpha_grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  cfg.rho_multipliers = {2, 8};
  cfg.gamma = 0.5;
  cfg.trials = 200;
  cfg.master_seed = 0;

  const std::vector<sc::TrialRecord> records = sc::run_sweep(cfg, 0);
  const std::vector<sc::RecoveryCurve> curves = sc::aggregate(records);
  {
    std::ofstream csv(dir / "recovery_p64.csv");
    sc::write_sweep_csv(csv, records);
    std::ofstream agg(dir / "recovery_p64.agg.csv");
    sc::write_aggregate_csv(agg, curves);
    std::ofstream svg(dir / "recovery_p64.svg");
    svg << sc::render_recovery_svg(curves);
  }

  std::ostringstream d;
  bool dominated = true;
  bool earlier_somewhere = false;
  for (const auto& c : curves) {
    for (const auto& pt : c.points) dominated = dominated && pt.dcl_rate >= pt.pwg_rate;
    const double a_dcl = first_alpha_reaching(c, true);
    const double a_pwg = first_alpha_reaching(c, false);
    earlier_somewhere = earlier_somewhere || a_dcl < a_pwg;
    d << "rho=" << c.rho_multiplier << "sqrt(n): alpha90 dcl " << a_dcl << " pwg " << a_pwg << "; ";
  }

  double dcl_spread = 0.0, pwg_spread = 0.0;
  if (curves.size() == 2) {
    for (std::size_t i = 0; i < curves[0].points.size(); ++i) {
      dcl_spread = std::max(dcl_spread, std::abs(curves[0].points[i].dcl_rate - curves[1].points[i].dcl_rate));
      pwg_spread = std::max(pwg_spread, std::abs(curves[0].points[i].pwg_rate - curves[1].points[i].pwg_rate));
    }
  }
  d << "rho sensitivity dcl " << dcl_spread << " vs pwg " << pwg_spread;
  if (dcl_spread > pwg_spread) {
    std::ofstream warn(dir / "acceptance_warning_rho_sensitivity.txt");
    warn << "DCL recovery rate varies more across rho than PWG: max |diff| " << dcl_spread << " vs " << pwg_spread
         << '\n';
    d << " (soft check failed, warning written)";
  }
  d << "; rates dominated " << (dominated ? "yes" : "NO") << ", DCL reaches 0.9 earlier "
    << (earlier_somewhere ? "yes" : "NO");
  return {dominated && earlier_somewhere, d.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict criterion7(const fs::path& dir) {
  const fs::path config = dir / "determinism_config.json";
  {
    std::ofstream f(config);
    f << R"({"p_list": [16, 64], "alpha_grid": [1, 2.5, 4], "rho_multipliers": [2, 8], "trials": 10, "master_seed": 7})";
  }
  std::ostringstream sink;
  const fs::path a = dir / "determinism_w1_a.csv";
  const fs::path b = dir / "determinism_w1_b.csv";
  const fs::path c = dir / "determinism_w4.csv";
  const int ra = sparsecert::cli::cmd_sweep(config, a, 1, nullptr, sink, sink);
  const int rb = sparsecert::cli::cmd_sweep(config, b, 1, nullptr, sink, sink);
  const int rc = sparsecert::cli::cmd_sweep(config, c, 4, nullptr, sink, sink);
  if (ra != 0 || rb != 0 || rc != 0) return {false, "sweep failed: " + sink.str()};
  const std::string base = slurp(a);
  const bool runs = base == slurp(b) && slurp(a.string() + ".agg.csv") == slurp(b.string() + ".agg.csv");
  const bool workers = base == slurp(c) && slurp(a.string() + ".agg.csv") == slurp(c.string() + ".agg.csv");
  std::ostringstream d;
  d << base.size() << " bytes; repeat run identical " << (runs ? "yes" : "NO") << ", workers 1 vs 4 identical "
    << (workers ? "yes" : "NO");
  return {runs && workers, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path dir = argc > 1 ? fs::path(argv[1]) : fs::current_path() / "acceptance_artifacts";
  fs::create_directories(dir);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 soundness vs brute force", criterion1},
      {"2 PWG dominated by DCL", criterion2},
      {"3 bisection vs grid", criterion3},
      {"4 analytic kernels", criterion4},
      {"5 convexity and subgradients", criterion5},
      {"6 recovery sweep p=64", [&] { return criterion6(dir); }},
      {"7 determinism", [&] { return criterion7(dir); }},
  };

  std::ofstream summary(dir / "acceptance_summary.txt");
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line << (v.pass ? "[PASS] " : "[FAIL] ") << "criterion " << name << ": " << v.detail << " (" << std::fixed
         << std::setprecision(1) << secs << " s)";
    std::cout << line.str() << std::endl;
    summary << line.str() << '\n';
    failed += v.pass ? 0 : 1;
  }
  const std::string verdict = failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed";
  std::cout << verdict << std::endl;
  summary << verdict << '\n';
  return failed;
}
