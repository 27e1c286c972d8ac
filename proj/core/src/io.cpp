#include "sparsecert/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sparsecert/errors.hpp"

namespace sparsecert {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_object(std::string_view text, const char* what) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string(what) + ": malformed JSON: " + e.what());
  }
  if (!doc.is_object()) throw InvalidInput(std::string(what) + ": top level must be an object");
  return doc;
}

void reject_unknown_keys(const json& doc, const std::set<std::string>& allowed, const char* what) {
  for (const auto& [key, _] : doc.items()) {
    if (!allowed.contains(key)) {
      throw InvalidInput(std::string(what) + ": unknown key '" + key + "'");
    }
  }
}

const json& require_key(const json& doc, const std::string& key, const char* what) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw InvalidInput(std::string(what) + ": missing key '" + key + "'");
  return *it;
}

double as_real(const json& v, const std::string& key, const char* what) {
  if (!v.is_number()) throw InvalidInput(std::string(what) + ": key '" + key + "' must be a number");
  return v.get<double>();
}

long long as_integer(const json& v, const std::string& key, const char* what) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d)) return static_cast<long long>(d);
  }
  throw InvalidInput(std::string(what) + ": key '" + key + "' must be an integer");
}

std::vector<double> as_real_array(const json& v, const std::string& key, const char* what) {
  if (!v.is_array()) throw InvalidInput(std::string(what) + ": key '" + key + "' must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& e : v) out.push_back(as_real(e, key, what));
  return out;
}

template <class Int>
std::vector<Int> as_integer_array(const json& v, const std::string& key, const char* what) {
  if (!v.is_array()) throw InvalidInput(std::string(what) + ": key '" + key + "' must be an array");
  std::vector<Int> out;
  out.reserve(v.size());
  for (const json& e : v) out.push_back(static_cast<Int>(as_integer(e, key, what)));
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <class T>
T parse_field(const std::string& s, const char* column, std::size_t line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidInput("aggregate csv line " + std::to_string(line_no) + ": bad " + column +
                       " value '" + s + "'");
  }
  return value;
}

}  // namespace

InstanceFile parse_instance_json(std::string_view text) {
  constexpr const char* what = "instance";
  const json doc = parse_object(text, what);
  reject_unknown_keys(doc, {"n", "p", "rho", "k", "X", "y", "support"}, what);

  const long long n = as_integer(require_key(doc, "n", what), "n", what);
  const long long p = as_integer(require_key(doc, "p", what), "p", what);
  const double rho = as_real(require_key(doc, "rho", what), "rho", what);
  const long long k = as_integer(require_key(doc, "k", what), "k", what);
  if (n < 1) throw InvalidInput("instance: key 'n' must be at least 1");
  if (p < 1) throw InvalidInput("instance: key 'p' must be at least 1");
  if (!(rho > 0.0)) throw InvalidInput("instance: key 'rho' must be positive");
  if (k < 1 || k > p) throw InvalidInput("instance: key 'k' must lie in [1, p]");

  const std::vector<double> flat = as_real_array(require_key(doc, "X", what), "X", what);
  if (static_cast<long long>(flat.size()) != n * p) {
    throw InvalidInput("instance: key 'X' has " + std::to_string(flat.size()) +
                       " entries, expected n*p = " + std::to_string(n * p));
  }
  const std::vector<double> yv = as_real_array(require_key(doc, "y", what), "y", what);
  if (static_cast<long long>(yv.size()) != n) {
    throw InvalidInput("instance: key 'y' has " + std::to_string(yv.size()) +
                       " entries, expected n = " + std::to_string(n));
  }

  Eigen::MatrixXd X(n, p);
  for (long long i = 0; i < n; ++i) {
    for (long long j = 0; j < p; ++j) X(i, j) = flat[static_cast<std::size_t>(i * p + j)];
  }
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(yv.data(), n);

  std::optional<SupportSet> support;
  if (const auto it = doc.find("support"); it != doc.end()) {
    auto idx = as_integer_array<Index>(*it, "support", what);
    for (Index j : idx) {
      if (j < 0 || j >= p) {
        throw InvalidInput("instance: key 'support' has index " + std::to_string(j) +
                           " outside [0, p)");
      }
    }
    try {
      support = SupportSet(std::move(idx));
    } catch (const InvalidInput& e) {
      throw InvalidInput(std::string("instance: key 'support': ") + e.what());
    }
  }

  try {
    return InstanceFile{ProblemInstance(std::move(X), std::move(y), rho, k), std::move(support)};
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string("instance: key 'X'/'y': ") + e.what());
  }
}

InstanceFile load_instance_file(const std::filesystem::path& path) {
  return parse_instance_json(read_file(path));
}

std::string instance_to_json(const ProblemInstance& inst, const std::optional<SupportSet>& support) {
  json doc;
  doc["n"] = inst.n();
  doc["p"] = inst.p();
  doc["rho"] = inst.rho();
  doc["k"] = inst.k();
  json X = json::array();
  for (Index i = 0; i < inst.n(); ++i) {
    for (Index j = 0; j < inst.p(); ++j) X.push_back(inst.X()(i, j));
  }
  doc["X"] = std::move(X);
  doc["y"] = std::vector<double>(inst.y().data(), inst.y().data() + inst.y().size());
  if (support) doc["support"] = std::vector<Index>(support->begin(), support->end());
  return doc.dump() + "\n";
}

EnsembleConfig parse_config_json(std::string_view text) {
  constexpr const char* what = "config";
  const json doc = parse_object(text, what);
  reject_unknown_keys(doc, {"p_list", "alpha_grid", "rho_multipliers", "gamma", "trials",
                            "master_seed", "k_rule", "amplitude"},
                      what);
  EnsembleConfig cfg;
  cfg.p_list = as_integer_array<Index>(require_key(doc, "p_list", what), "p_list", what);
  if (const auto it = doc.find("alpha_grid"); it != doc.end()) {
    cfg.alpha_grid = as_real_array(*it, "alpha_grid", what);
  }
  if (const auto it = doc.find("rho_multipliers"); it != doc.end()) {
    cfg.rho_multipliers = as_real_array(*it, "rho_multipliers", what);
  }
  if (const auto it = doc.find("gamma"); it != doc.end()) cfg.gamma = as_real(*it, "gamma", what);
  if (const auto it = doc.find("trials"); it != doc.end()) {
    cfg.trials = static_cast<int>(as_integer(*it, "trials", what));
  }
  if (const auto it = doc.find("master_seed"); it != doc.end()) {
    if (!it->is_number_unsigned()) {
      throw InvalidInput("config: key 'master_seed' must be a nonnegative integer");
    }
    cfg.master_seed = it->get<std::uint64_t>();
  }
  if (const auto it = doc.find("k_rule"); it != doc.end()) {
    if (!it->is_string()) throw InvalidInput("config: key 'k_rule' must be a string");
    cfg.k_rule = it->get<std::string>();
  }
  if (const auto it = doc.find("amplitude"); it != doc.end()) {
    cfg.amplitude = as_real(*it, "amplitude", what);
  }
  try {
    cfg.validate();
  } catch (const InvalidConfig& e) {
    throw InvalidInput(e.what());
  }
  return cfg;
}

EnsembleConfig load_config_file(const std::filesystem::path& path) {
  return parse_config_json(read_file(path));
}

void apply_seed_override(EnsembleConfig& cfg, const char* env_value) {
  if (env_value == nullptr) return;
  const std::string_view s(env_value);
  std::uint64_t seed = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidInput("SPARSECERT_SEED must be a nonnegative decimal integer");
  }
  cfg.master_seed = seed;
}

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_sweep_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << kSweepCsvHeader << '\n';
  for (const TrialRecord& r : records) {
    out << r.p << ',' << r.k << ',' << r.n << ',' << format_real(r.alpha) << ','
        << format_real(r.rho_multiplier) << ',' << format_real(r.rho) << ',' << r.trial_index
        << ',' << r.trial_seed << ',' << (r.pwg_exact ? 1 : 0) << ',' << (r.dcl_exact ? 1 : 0)
        << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const std::vector<RecoveryCurve>& curves) {
  out << kAggregateCsvHeader << '\n';
  for (const RecoveryCurve& c : curves) {
    for (const RecoveryPoint& pt : c.points) {
      out << c.p << ',' << format_real(pt.alpha) << ',' << format_real(c.rho_multiplier) << ','
          << format_real(pt.pwg_rate) << ',' << format_real(pt.dcl_rate) << ',' << pt.trials
          << '\n';
    }
  }
}

std::vector<RecoveryCurve> read_aggregate_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("aggregate csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kAggregateCsvHeader) {
    throw InvalidInput("aggregate csv: unexpected header '" + line + "'");
  }

  std::vector<RecoveryCurve> curves;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 6) {
      throw InvalidInput("aggregate csv line " + std::to_string(line_no) + ": expected 6 fields");
    }
    const auto p = parse_field<Index>(f[0], "p", line_no);
    RecoveryPoint pt;
    pt.alpha = parse_field<double>(f[1], "alpha", line_no);
    const auto rho_mult = parse_field<double>(f[2], "rho_multiplier", line_no);
    pt.pwg_rate = parse_field<double>(f[3], "pwg_rate", line_no);
    pt.dcl_rate = parse_field<double>(f[4], "dcl_rate", line_no);
    pt.trials = parse_field<int>(f[5], "trials", line_no);
    if (pt.pwg_rate < 0.0 || pt.pwg_rate > 1.0 || pt.dcl_rate < 0.0 || pt.dcl_rate > 1.0) {
      throw InvalidInput("aggregate csv line " + std::to_string(line_no) + ": rate outside [0, 1]");
    }

    auto it = std::find_if(curves.begin(), curves.end(), [&](const RecoveryCurve& c) {
      return c.p == p && c.rho_multiplier == rho_mult;
    });
    if (it == curves.end()) {
      curves.push_back({p, rho_mult, {}});
      it = std::prev(curves.end());
    }
    it->points.push_back(pt);
  }
  if (curves.empty()) throw InvalidInput("aggregate csv: no data rows");
  return curves;
}

}  // namespace sparsecert
