#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "sparsecert/ensemble.hpp"
#include "sparsecert/errors.hpp"
#include "sparsecert/io.hpp"
#include "sparsecert/plot.hpp"
#include "sparsecert/rng.hpp"

namespace sparsecert::cli {

namespace {

std::string describe(const SupportSet& S) {
  std::ostringstream ss;
  ss << '{';
  for (std::size_t i = 0; i < S.size(); ++i) ss << (i ? "," : "") << S[i];
  ss << '}';
  return ss.str();
}

// Writes `contents` to `path` in one go; false on any stream failure.
bool write_whole_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) return false;
  f << contents;
  f.flush();
  return static_cast<bool>(f);
}

}  // namespace

int cmd_check(const std::filesystem::path& instance_path, const CheckFlags& flags,
              std::ostream& out, std::ostream& err) {
  try {
    const InstanceFile file = load_instance_file(instance_path);
    const ProblemInstance& inst = file.instance;
    SupportSet S;
    if (flags.support) {
      S = SupportSet(*flags.support);
    } else if (file.support) {
      S = *file.support;
    } else {
      err << "check: no support given (use --support or the file's \"support\" key)\n";
      return kExitInputError;
    }

    const PwgOutcome pwg = check_pwg(inst, S);
    const DclOutcome dcl = check_dcl(inst, S, flags.dcl);
    const Eigen::VectorXd c = correlation_scores(inst, S);

    out << "instance: n=" << inst.n() << " p=" << inst.p() << " k=" << inst.k()
        << " rho=" << format_real(inst.rho()) << '\n';
    out << "support: " << describe(S) << '\n';
    out << "correlation scores X_j^T M y:\n";
    for (Index j = 0; j < inst.p(); ++j) {
      out << "  j=" << j << " c=" << format_real(c(j)) << (S.contains(j) ? " (in S)" : "") << '\n';
    }

    out << "PWG: " << to_string(pwg.status);
    if (pwg.certificate) {
      out << " min_in=" << format_real(pwg.certificate->min_in)
          << " max_out=" << format_real(pwg.certificate->max_out);
    } else {
      out << " reason=" << to_string(*pwg.reason);
    }
    out << '\n';

    out << "DCL: " << to_string(dcl.status);
    if (dcl.certificate) {
      out << " lambda~=" << format_real(dcl.certificate->lambda_tilde)
          << " f=" << format_real(dcl.certificate->f_value);
    } else {
      out << " reason=" << to_string(*dcl.reason);
    }
    out << " iterations=" << dcl.iterations << '\n';

    if (dcl.certificate) {
      const KktDualVariables v = to_kkt_variables(*dcl.certificate, inst.rho());
      const KktReport kkt = verify_kkt(inst, S, v.d, v.lambda);
      out << "KKT residuals: psd_big=" << format_real(kkt.psd_residual_big)
          << " psd_small=" << format_real(kkt.psd_residual_small)
          << " complementarity=" << format_real(kkt.comp_residual) << '\n';
      return kExitOk;
    }
    return kExitNotCertified;
  } catch (const InvalidInput& e) {
    err << "check: " << e.what() << '\n';
    return kExitInputError;
  }
}

int cmd_oracle(const std::filesystem::path& instance_path, std::uint64_t max_combinations,
               std::ostream& out, std::ostream& err) {
  try {
    const InstanceFile file = load_instance_file(instance_path);
    const ProblemInstance& inst = file.instance;
    const BruteForceResult bf = brute_force_l0(inst, max_combinations);
    const PwgValueResult pv = pwg_value(inst);

    out << "nu_l0=" << format_real(bf.value) << " supports_evaluated=" << bf.supports_evaluated
        << '\n';
    out << "argmin supports:";
    for (const SupportSet& S : bf.argmin_supports) out << ' ' << describe(S);
    out << '\n';
    out << "pwg_value=" << format_real(pv.value) << " gap<=" << format_real(pv.grad_norm_kkt)
        << " iterations=" << pv.iterations << '\n';

    if (pv.value > bf.value + 1e-7) {
      err << "oracle: ordering violated, pwg_value exceeds nu_l0\n";
      return kExitBugTrap;
    }
    out << "ordering pwg_value <= nu_l0: ok\n";
    return kExitOk;
  } catch (const BudgetExceeded& e) {
    err << "oracle: " << e.what() << '\n';
    return kExitInputError;
  } catch (const InvalidInput& e) {
    err << "oracle: " << e.what() << '\n';
    return kExitInputError;
  }
}

int cmd_sweep(const std::filesystem::path& config_path, const std::filesystem::path& output_csv,
              unsigned workers, const char* seed_override, std::ostream& out, std::ostream& err) {
  EnsembleConfig cfg;
  try {
    cfg = load_config_file(config_path);
    apply_seed_override(cfg, seed_override);
  } catch (const InvalidInput& e) {
    err << "sweep: " << e.what() << '\n';
    return kExitInputError;
  }

  std::vector<TrialRecord> records;
  try {
    records = run_sweep(cfg, workers);
  } catch (const SweepAborted& e) {
    err << "sweep: " << e.what() << '\n';
    const GeneratedInstance g = generate_instance(cfg, e.key());
    std::filesystem::path dump = output_csv;
    dump += ".violation.json";
    if (write_whole_file(dump, instance_to_json(g.instance, g.support))) {
      err << "sweep: instance written to " << dump.string() << '\n';
    }
    return kExitBugTrap;
  }

  std::ostringstream trials_csv;
  write_sweep_csv(trials_csv, records);
  std::ostringstream agg_csv;
  write_aggregate_csv(agg_csv, aggregate(records));

  std::filesystem::path agg_path = output_csv;
  agg_path += ".agg.csv";
  if (!write_whole_file(output_csv, trials_csv.str())) {
    err << "sweep: cannot write " << output_csv.string() << '\n';
    return kExitInputError;
  }
  if (!write_whole_file(agg_path, agg_csv.str())) {
    err << "sweep: cannot write " << agg_path.string() << '\n';
    return kExitInputError;
  }
  out << "sweep: " << records.size() << " trials written to " << output_csv.string() << " and "
      << agg_path.string() << '\n';
  return kExitOk;
}

int cmd_plot(const std::filesystem::path& aggregate_csv, const std::filesystem::path& output_svg,
             std::ostream& out, std::ostream& err) {
  try {
    std::ifstream in(aggregate_csv, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + aggregate_csv.string());
    const std::vector<RecoveryCurve> curves = read_aggregate_csv(in);
    if (!write_whole_file(output_svg, render_recovery_svg(curves))) {
      err << "plot: cannot write " << output_svg.string() << '\n';
      return kExitInputError;
    }
    out << "plot: " << curves.size() << " curves written to " << output_svg.string() << '\n';
    return kExitOk;
  } catch (const InvalidInput& e) {
    err << "plot: " << e.what() << '\n';
    return kExitInputError;
  }
}

int cmd_selftest(std::ostream& out, std::ostream& err) {
  int failures = 0;
  const auto expect = [&](bool ok, const char* what) {
    out << (ok ? "ok    " : "FAIL  ") << what << '\n';
    if (!ok) ++failures;
  };
  const auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b)); };

  const std::uint64_t reference = seed_derive(0, 0, 0, 0, 0);
  out << "seed_derive(0,0,0,0,0) = " << reference << '\n';
  expect(reference == kSeedDeriveReference, "seed_derive reference value");

  const ProblemInstance identity(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(1.0, 0.0), 1.0, 1);
  const SupportSet first{0};
  expect(near(ridge_restricted_solve(identity, first).value, 0.25), "restricted ridge value 0.25");
  expect(near(ridge_value_via_identity(identity, first), 0.25), "ridge identity value 0.25");

  const PwgOutcome pwg = check_pwg(identity, first);
  expect(pwg.exact() && near(pwg.certificate->min_in, 0.5) && pwg.certificate->max_out == 0.0,
         "PWG exact with (min_in, max_out) = (0.5, 0)");

  const DclOutcome dcl = check_dcl(identity, first);
  expect(dcl.exact() && near(dcl.certificate->lambda_tilde, 0.25) &&
             near(dcl.certificate->f_value, -1.0),
         "DCL exact at lambda~ = 0.25 with f = -1");

  const BruteForceResult bf = brute_force_l0(identity);
  expect(near(bf.value, 0.25) && bf.argmin_supports.size() == 1, "brute force nu_l0 = 0.25");

  const ProblemInstance scalar(Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Constant(1, 2.0), 1.0, 1);
  expect(std::abs(pwg_value(scalar).value - 1.0) <= 1e-9, "scalar PWG value 1");

  if (failures != 0) {
    err << "selftest: " << failures << " check(s) failed\n";
    return kExitBugTrap;
  }
  return kExitOk;
}

}  // namespace sparsecert::cli
