#include "core/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "core/csv.hpp"
#include "core/errors.hpp"

namespace vplate {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ConfigError(key + ": " + what);
}

double parse_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t.empty()) bad(key, "empty number");
  char* end = nullptr;
  const double x = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) bad(key, "malformed number '" + t + "'");
  if (!std::isfinite(x)) bad(key, "number must be finite");
  return x;
}

std::uint64_t parse_count(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t.empty() || t[0] == '-') bad(key, "expected a nonnegative integer");
  char* end = nullptr;
  const unsigned long long x = std::strtoull(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size()) bad(key, "malformed integer '" + t + "'");
  return x;
}

// Top-level items of "[a, b, [c, d]]"; nested brackets stay intact.
std::vector<std::string> split_list(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']')
    bad(key, "expected a bracketed list");
  const std::string body = trim(t.substr(1, t.size() - 2));
  std::vector<std::string> items;
  if (body.empty()) return items;
  int depth = 0;
  std::string cur;
  for (char c : body) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (depth < 0) bad(key, "unbalanced brackets");
    if (c == ',' && depth == 0) {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (depth != 0) bad(key, "unbalanced brackets");
  items.push_back(trim(cur));
  return items;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(key, v)) out.push_back(parse_double(key, item));
  return out;
}

std::vector<PronyTerm> parse_kernel(const std::string& key, const std::string& v) {
  std::vector<PronyTerm> terms;
  for (const auto& item : split_list(key, v)) {
    const std::vector<double> pair_ = parse_list(key, item);
    if (pair_.size() != 2)
      bad(key, "each entry must be [gamma, delta], got '" + item + "'");
    terms.push_back({pair_[0], pair_[1]});
  }
  try {
    make_kernel(terms);
  } catch (const std::invalid_argument& e) {
    bad(key, e.what());
  }
  return terms;
}

std::string format_list(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_g17(v[i]);
  }
  return out + "]";
}

std::string format_kernel(const std::vector<PronyTerm>& terms) {
  std::string out = "[";
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) out += ", ";
    out += "[" + format_g17(terms[i].gamma) + ", " + format_g17(terms[i].delta) + "]";
  }
  return out + "]";
}

}  // namespace

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "basis") {
    if (v != "beam" && v != "rectangle" && v != "synthetic")
      bad(key, "must be beam, rectangle or synthetic");
    cfg.basis = v;
  } else if (key == "modes") {
    const std::uint64_t n = parse_count(key, v);
    if (n < 1) bad(key, "must be at least 1");
    cfg.modes = static_cast<std::size_t>(n);
  } else if (key == "case") {
    if (v == "A")
      cfg.control_case = ControlCase::A;
    else if (v == "B")
      cfg.control_case = ControlCase::B;
    else
      bad(key, "must be A or B");
  } else if (key == "horizon") {
    const double t = parse_double(key, v);
    if (!(t > 0.0)) bad(key, "must be positive");
    cfg.horizon = t;
  } else if (key == "n_steps") {
    const std::uint64_t n = parse_count(key, v);
    if (n < 2) bad(key, "must be at least 2");
    cfg.n_steps = static_cast<std::size_t>(n);
  } else if (key == "kernel") {
    cfg.kernel = parse_kernel(key, v);
  } else if (key == "rect_a" || key == "rect_b") {
    const double d = parse_double(key, v);
    if (!(d > 0.0)) bad(key, "must be positive");
    (key == "rect_a" ? cfg.rect_a : cfg.rect_b) = d;
  } else if (key == "boundary_nodes") {
    const std::uint64_t n = parse_count(key, v);
    if (n < 2) bad(key, "must be at least 2");
    cfg.boundary_nodes = static_cast<std::size_t>(n);
  } else if (key == "seed") {
    cfg.seed = parse_count(key, v);
  } else if (key == "probes") {
    cfg.probes = static_cast<std::size_t>(parse_count(key, v));
  } else if (key == "target_position") {
    cfg.target_position = parse_list(key, v);
  } else if (key == "target_velocity") {
    cfg.target_velocity = parse_list(key, v);
  } else if (key == "initial_position") {
    cfg.initial_position = parse_list(key, v);
  } else if (key == "initial_velocity") {
    cfg.initial_velocity = parse_list(key, v);
  } else if (key == "lambda") {
    cfg.lambda = parse_list(key, v);
  } else if (key == "psi_norms") {
    cfg.psi_norms = parse_list(key, v);
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

std::string config_get(const ExperimentConfig& cfg, const std::string& key) {
  if (key == "basis") return cfg.basis;
  if (key == "modes") return std::to_string(cfg.modes);
  if (key == "case") return cfg.control_case == ControlCase::A ? "A" : "B";
  if (key == "horizon") return format_g17(cfg.horizon);
  if (key == "n_steps") return std::to_string(cfg.n_steps);
  if (key == "kernel") return format_kernel(cfg.kernel);
  if (key == "rect_a") return format_g17(cfg.rect_a);
  if (key == "rect_b") return format_g17(cfg.rect_b);
  if (key == "boundary_nodes") return std::to_string(cfg.boundary_nodes);
  if (key == "seed") return std::to_string(cfg.seed);
  if (key == "probes") return std::to_string(cfg.probes);
  if (key == "target_position") return format_list(cfg.target_position);
  if (key == "target_velocity") return format_list(cfg.target_velocity);
  if (key == "initial_position") return format_list(cfg.initial_position);
  if (key == "initial_velocity") return format_list(cfg.initial_velocity);
  if (key == "lambda") return format_list(cfg.lambda);
  if (key == "psi_norms") return format_list(cfg.psi_norms);
  throw ConfigError("unknown key '" + key + "'");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "basis",          "boundary_nodes", "case",
      "horizon",        "initial_position", "initial_velocity",
      "kernel",         "lambda",         "modes",
      "n_steps",        "probes",         "psi_norms",
      "rect_a",         "rect_b",         "seed",
      "target_position", "target_velocity"};
  return keys;
}

std::string canonical_echo(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& key : config_keys())
    out += key + " = " + config_get(cfg, key) + "\n";
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[' && t.back() == ']') continue;  // section header
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    apply_key(cfg, trim(t.substr(0, eq)), t.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream body;
  body << in.rdbuf();
  return parse_config(body.str());
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.basis == "synthetic") {
    if (cfg.lambda.empty()) throw ConfigError("lambda: required for the synthetic basis");
    if (cfg.lambda.size() != cfg.psi_norms.size())
      throw ConfigError("psi_norms: length must match lambda");
    if (cfg.lambda.size() != cfg.modes)
      throw ConfigError("modes: must equal the lambda list length");
  }
  const std::size_t n = cfg.modes;
  const std::pair<const std::vector<double>*, const char*> coeff_lists[] = {
      {&cfg.target_position, "target_position"},
      {&cfg.target_velocity, "target_velocity"},
      {&cfg.initial_position, "initial_position"},
      {&cfg.initial_velocity, "initial_velocity"}};
  for (const auto& [vec, key] : coeff_lists) {
    if (vec->size() > n)
      throw ConfigError(std::string(key) + ": more entries than modes");
  }
}

}  // namespace vplate
