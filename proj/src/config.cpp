#include "isoshock/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

#include "isoshock/errors.hpp"
#include "isoshock/riemann.hpp"

namespace isoshock {

namespace {

using Member = std::variant<double ExperimentConfig::*, int ExperimentConfig::*,
                            std::string ExperimentConfig::*, std::vector<double> ExperimentConfig::*>;

struct Field {
  const char* key;
  Member member;
};

const std::vector<Field>& fields() {
  using C = ExperimentConfig;
  static const std::vector<Field> table{
      {"background.rho_l", &C::rho_l},
      {"background.u_l", &C::u_l},
      {"background.rho_r", &C::rho_r},
      {"background.u_r", &C::u_r},
      {"perturbation.epsilon", &C::epsilon},
      {"perturbation.a", &C::a},
      {"perturbation.b", &C::b},
      {"perturbation.pi_amplitude", &C::pi_amplitude},
      {"grid.nx", &C::nx},
      {"grid.ny", &C::ny},
      {"grid.lx", &C::lx},
      {"grid.ly", &C::ly},
      {"run.cfl", &C::cfl},
      {"run.t_max", &C::t_max},
      {"run.stride", &C::stride},
      {"run.t0", &C::t0},
      {"run.far_field_radius", &C::far_field_radius},
      {"run.rho_min", &C::rho_min},
      {"run.rho_max", &C::rho_max},
      {"ladder.levels", &C::levels},
      {"ladder.violation_factor", &C::violation_factor},
      {"sweep.epsilons", &C::sweep_epsilons},
      {"sweep.threshold_kind", &C::threshold_kind},
      {"sweep.threshold", &C::threshold},
      {"sweep.driver", &C::driver},
      {"sweep.riccati_C", &C::riccati_C},
      {"sweep.riccati_k", &C::riccati_k},
      {"sweep.riccati_dimension", &C::riccati_dimension},
      {"sweep.horizon", &C::sweep_horizon},
      {"testfn.r_max", &C::testfn_r_max},
      {"testfn.h", &C::testfn_h},
      {"output.dir", &C::output_dir},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const Field* find_field(const std::string& key) {
  for (const auto& f : fields())
    if (key == f.key) return &f;
  if (key.find('.') != std::string::npos) return nullptr;
  const Field* hit = nullptr;
  for (const auto& f : fields()) {
    const std::string k = f.key;
    if (k.substr(k.find('.') + 1) == key) {
      if (hit) return nullptr;
      hit = &f;
    }
  }
  return hit;
}

double parse_double(const std::string& text, const std::string& key, int line) {
  const std::string s = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    throw ConfigError("cannot parse '" + s + "' as a number for key " + key, key, line);
  return v;
}

int parse_int(const std::string& text, const std::string& key, int line) {
  const double v = parse_double(text, key, line);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw ConfigError("key " + key + " expects an integer, got '" + trim(text) + "'", key, line);
  return static_cast<int>(v);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    return s.substr(1, s.size() - 2);
  return s;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const { validate_with_lines({}); }

void ExperimentConfig::validate_with_lines(const std::map<std::string, int>& lines) const {
  auto fail = [&](const std::string& key, const std::string& what) {
    const auto it = lines.find(key);
    const std::string name = key.substr(key.find('.') + 1);
    throw ConfigError(name + ": " + what, key, it == lines.end() ? 0 : it->second);
  };
  auto positive = [&](double v, const char* key) {
    if (!(v > 0.0)) fail(key, "must be positive");
  };
  positive(rho_l, "background.rho_l");
  positive(rho_r, "background.rho_r");
  if (!(epsilon >= 0.0)) fail("perturbation.epsilon", "must be non-negative");
  if (!(a >= 0.0)) fail("perturbation.a", "must be non-negative");
  positive(b, "perturbation.b");
  if (nx < 1) fail("grid.nx", "must be at least 1");
  if (ny < 1) fail("grid.ny", "must be at least 1");
  positive(lx, "grid.lx");
  positive(ly, "grid.ly");
  if (2.0 * lx / nx > 0.1 + 1e-12) fail("grid.nx", "grid must put at least 20 cells across the unit disk");
  if (2.0 * ly / ny > 0.1 + 1e-12) fail("grid.ny", "grid must put at least 20 cells across the unit disk");
  if (!(cfl > 0.0 && cfl < 1.0)) fail("run.cfl", "must lie in (0, 1)");
  if (!(t_max > 0.0 && t_max <= 300.0)) fail("run.t_max", "must lie in (0, 300]");
  if (stride < 0) fail("run.stride", "must be non-negative");
  if (!(t0 >= 0.0)) fail("run.t0", "must be non-negative");
  positive(far_field_radius, "run.far_field_radius");
  if (!(rho_min >= 0.0)) fail("run.rho_min", "must be non-negative");
  if (!(rho_max >= 0.0)) fail("run.rho_max", "must be non-negative");
  if (rho_min > 0.0 && rho_max > 0.0 && !(rho_min < rho_max)) fail("run.rho_max", "must exceed rho_min");
  if (levels < 1 || levels > 6) fail("ladder.levels", "must lie in [1, 6]");
  positive(violation_factor, "ladder.violation_factor");
  if (sweep_epsilons.empty()) fail("sweep.epsilons", "must not be empty");
  for (double e : sweep_epsilons)
    if (!(e > 0.0)) fail("sweep.epsilons", "entries must be positive");
  if (threshold_kind != "relative" && threshold_kind != "absolute")
    fail("sweep.threshold_kind", "must be 'relative' or 'absolute'");
  positive(threshold, "sweep.threshold");
  if (driver != "simulation" && driver != "riccati") fail("sweep.driver", "must be 'simulation' or 'riccati'");
  positive(riccati_C, "sweep.riccati_C");
  positive(riccati_k, "sweep.riccati_k");
  if (riccati_dimension != 2 && riccati_dimension != 3) fail("sweep.riccati_dimension", "must be 2 or 3");
  if (!(sweep_horizon >= 0.0)) fail("sweep.horizon", "must be non-negative");
  if (driver == "simulation" && sweep_horizon > 0.0) {
    if (sweep_horizon > 300.0) fail("sweep.horizon", "must not exceed 300 for simulation sweeps");
  }
  if (!(testfn_r_max > 0.0 && testfn_r_max <= 700.0)) fail("testfn.r_max", "must lie in (0, 700]");
  if (!(testfn_h > 0.0 && 2.0 * testfn_h < testfn_r_max)) fail("testfn.h", "must lie in (0, r_max / 2)");
  if (output_dir.empty()) fail("output.dir", "must not be empty");

  // The disturbance travels at unit speed in y and is carried between the
  // shocks in x; the grid must hold it up to t_max.
  const RiemannFan fan = solve_middle_state(GasState{rho_l, u_l, 0.0}, GasState{rho_r, u_r, 0.0});
  const double t_run = driver == "simulation" ? std::max(t_max, sweep_horizon) : t_max;
  const double reach_x = std::max(std::abs(fan.sigma_minus), std::abs(fan.sigma_plus)) * t_run + 1.0;
  if (ly < t_run + 1.0) fail("grid.ly", "domain does not contain the disturbance up to the run horizon (need ly >= t + 1)");
  if (lx < reach_x) fail("grid.lx", "domain does not contain the shocks up to the run horizon");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::map<std::string, int> lines;
  std::istringstream in(text);
  std::string raw, section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header '" + line + "'", "", line_no);
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + line + "'", "", line_no);
    std::string key = trim(line.substr(0, eq));
    const std::string value = unquote(trim(line.substr(eq + 1)));
    if (!section.empty()) key = section + "." + key;
    const Field* f = find_field(key);
    if (!f) throw ConfigError("unknown key '" + key + "'", key, line_no);
    const std::string canon = f->key;
    lines[canon] = line_no;
    std::visit(
        [&](auto member) {
          using T = std::remove_reference_t<decltype(c.*member)>;
          if constexpr (std::is_same_v<T, double>) {
            c.*member = parse_double(value, canon, line_no);
          } else if constexpr (std::is_same_v<T, int>) {
            c.*member = parse_int(value, canon, line_no);
          } else if constexpr (std::is_same_v<T, std::string>) {
            c.*member = value;
          } else {
            std::vector<double> list;
            std::istringstream items(value);
            std::string item;
            while (std::getline(items, item, ',')) list.push_back(parse_double(item, canon, line_no));
            c.*member = list;
          }
        },
        f->member);
  }
  c.validate_with_lines(lines);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path, "", 0);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  std::string section;
  for (const auto& f : fields()) {
    const std::string key = f.key;
    const std::string sec = key.substr(0, key.find('.'));
    const std::string name = key.substr(key.find('.') + 1);
    if (sec != section) {
      os << (section.empty() ? "" : "\n") << "[" << sec << "]\n";
      section = sec;
    }
    os << name << " = ";
    std::visit(
        [&](auto member) {
          using T = std::remove_reference_t<decltype(c.*member)>;
          if constexpr (std::is_same_v<T, const double>) {
            os << format_double(c.*member);
          } else if constexpr (std::is_same_v<T, const int>) {
            os << c.*member;
          } else if constexpr (std::is_same_v<T, const std::string>) {
            os << '"' << c.*member << '"';
          } else if constexpr (std::is_same_v<T, const std::vector<double>>) {
            const auto& v = c.*member;
            for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << format_double(v[i]);
          }
        },
        f.member);
    os << "\n";
  }
  return os.str();
}

std::string config_hash(const ExperimentConfig& c) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : serialize_config(c)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace isoshock
