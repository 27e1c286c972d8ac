#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparsecert/ensemble.hpp"
#include "sparsecert/linalg.hpp"

namespace sparsecert {

/// Instance document: {"n", "p", "rho", "k", "X" (row-major n*p), "y", optional "support"}.
/// Unknown keys are rejected; every error message names the offending key.
struct InstanceFile {
  ProblemInstance instance;
  std::optional<SupportSet> support;
};

InstanceFile parse_instance_json(std::string_view text);
InstanceFile load_instance_file(const std::filesystem::path& path);
std::string instance_to_json(const ProblemInstance& inst,
                             const std::optional<SupportSet>& support = std::nullopt);

/// JSON mirror of EnsembleConfig. Only "p_list" is required.
EnsembleConfig parse_config_json(std::string_view text);
EnsembleConfig load_config_file(const std::filesystem::path& path);

/// Replaces master_seed with the decimal value of `env_value` when non-null.
void apply_seed_override(EnsembleConfig& cfg, const char* env_value);

/// Shortest round-trip decimal form (never more than 17 significant digits).
std::string format_real(double value);

inline constexpr std::string_view kSweepCsvHeader =
    "p,k,n,alpha,rho_multiplier,rho,trial,seed,pwg_exact,dcl_exact";
inline constexpr std::string_view kAggregateCsvHeader =
    "p,alpha,rho_multiplier,pwg_rate,dcl_rate,trials";

void write_sweep_csv(std::ostream& out, const std::vector<TrialRecord>& records);

/// One row per curve point, curve-major.
void write_aggregate_csv(std::ostream& out, const std::vector<RecoveryCurve>& curves);

/// Parses an aggregate CSV back into curves. Throws InvalidInput on a bad
/// header, malformed rows or an empty body.
std::vector<RecoveryCurve> read_aggregate_csv(std::istream& in);

}  // namespace sparsecert
