// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <toml.hpp>

namespace robsem::cli {
namespace {

class Reader {
 public:
  explicit Reader(const toml::table& root) : root_(root) {}

  bool has(const std::string& key) const { return static_cast<bool>(root_.at_path(key)); }

  double number(const std::string& key) const {
    const auto node = root_.at_path(key);
    if (!node) throw ConfigError("missing config key '" + key + "'");
    if (const auto v = node.value<double>()) return *v;
    throw ConfigError("config key '" + key + "' must be a number");
  }
  double number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  long long integer(const std::string& key) const {
    const auto node = root_.at_path(key);
    if (!node) throw ConfigError("missing config key '" + key + "'");
    if (const auto v = node.value<long long>(); v && node.is_integer()) return *v;
    throw ConfigError("config key '" + key + "' must be an integer");
  }
  long long integer(const std::string& key, long long fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  std::string text(const std::string& key) const {
    const auto node = root_.at_path(key);
    if (!node) throw ConfigError("missing config key '" + key + "'");
    if (const auto v = node.value<std::string>()) return *v;
    throw ConfigError("config key '" + key + "' must be a string");
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    return has(key) ? text(key) : fallback;
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    if (const auto v = root_.at_path(key).value<bool>()) return *v;
    throw ConfigError("config key '" + key + "' must be a boolean");
  }

  std::vector<double> numbers(const std::string& key) const {
    const auto node = root_.at_path(key);
    if (!node) throw ConfigError("missing config key '" + key + "'");
    const toml::array* arr = node.as_array();
    if (arr == nullptr) throw ConfigError("config key '" + key + "' must be an array");
    std::vector<double> out;
    for (const auto& el : *arr) {
      const auto v = el.value<double>();
      if (!v) throw ConfigError("config key '" + key + "' must hold numbers");
      out.push_back(*v);
    }
    return out;
  }

 private:
  const toml::table& root_;
};

ReferenceModel read_model(const Reader& r) {
  const std::string type = r.text("model.type");
  if (type == "brownian") return ReferenceModel::brownian(r.number("model.sigma"), r.number("model.drift", 0.0));
  if (type == "ou") {
    return ReferenceModel::ou1d(r.number("model.beta"), r.number("model.mean_rate"),
                                r.number("model.sigma"));
  }
  if (type == "gbm") return ReferenceModel::gbm(r.number("model.alpha"), r.number("model.sigma"));
  if (type == "koopman") {
    return ReferenceModel::koopman(r.numbers("model.coefficients"), r.number("model.rk4_dt", 1e-3),
                                   r.number("model.x_min"), r.number("model.x_max"),
                                   r.number("model.lipschitz", -1.0));
  }
  throw ConfigError("config key 'model.type': unknown model '" + type + "'");
}

Penalty read_penalty(const Reader& r) {
  const std::string type = r.text("penalty.type");
  const double p = r.number("penalty.p", 2.0);
  if (type == "ball") return Penalty::ball(r.number("penalty.radius"), p);
  if (type == "power") {
    return Penalty::power(r.number("penalty.exponent"), r.number("penalty.scale"), p);
  }
  if (type == "table") return Penalty::table(r.numbers("penalty.knots"), r.numbers("penalty.values"), p);
  throw ConfigError("config key 'penalty.type': unknown penalty '" + type + "'");
}

FunctionSpec read_function(const Reader& r) {
  FunctionSpec f;
  f.type = r.text("function.type");
  f.value = r.number("function.value", f.value);
  f.bound = r.number("function.bound", f.bound);
  f.radius = r.number("function.radius", f.radius);
  if (f.type == "custom") f.path = r.text("function.path");
  const std::string ext = r.text("function.extension", "constant");
  if (ext == "constant") {
    f.extension = Extension::Constant;
  } else if (ext == "clamp-slope") {
    f.extension = Extension::ClampSlope;
    f.slope_cap = r.number("function.slope_cap");
  } else {
    throw ConfigError("config key 'function.extension': expected 'constant' or 'clamp-slope'");
  }
  return f;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

RunConfig parse_config(const std::string& text, const Overrides& overrides) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "config parse error: " << e.description() << " (line " << e.source().begin.line << ")";
    throw ConfigError(msg.str());
  }
  if (overrides.out) {
    if (!root.contains("output")) root.insert("output", toml::table{});
    root["output"].as_table()->insert_or_assign("dir", *overrides.out);
  }
  if (overrides.seed) root.insert_or_assign("seed", static_cast<std::int64_t>(*overrides.seed));

  const Reader r(root);
  RunConfig c(read_model(r), read_penalty(r));
  c.x_min = r.number("grid.x_min");
  c.x_max = r.number("grid.x_max");
  const long long n_nodes = r.integer("grid.n_nodes");
  if (n_nodes < 3) throw ConfigError("config key 'grid.n_nodes' must be >= 3");
  if (!(c.x_min < c.x_max)) throw ConfigError("config key 'grid.x_max' must exceed 'grid.x_min'");
  c.n_nodes = static_cast<std::size_t>(n_nodes);
  c.t = r.number("time.t");
  if (!(c.t >= 0.0)) throw ConfigError("config key 'time.t' must be >= 0");
  c.n_levels = static_cast<int>(r.integer("time.n_levels", 8));
  if (r.has("time.hjb_dt") && root.at_path("time.hjb_dt").is_string() &&
      r.text("time.hjb_dt") != "auto") {
    throw ConfigError("config key 'time.hjb_dt' must be a number or \"auto\"");
  }
  if (r.has("time.hjb_dt") && !root.at_path("time.hjb_dt").is_string()) {
    c.hjb_dt = r.number("time.hjb_dt");
    if (!(c.hjb_dt > 0.0)) throw ConfigError("config key 'time.hjb_dt' must be > 0 or \"auto\"");
  }
  c.n_atoms = static_cast<int>(r.integer("measure.n_atoms"));
  if (c.n_atoms < 1) throw ConfigError("config key 'measure.n_atoms' must be >= 1");
  c.function = read_function(r);
  c.out_dir = r.text("output.dir");
  c.timings = r.flag("output.timings", false);
  const long long seed = r.integer("seed", 0);
  if (seed < 0) throw ConfigError("config key 'seed' must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  c.tolerance = r.number("checks.tolerance", 1e-7);

  const long long stride = r.integer("hjb.snapshot_stride", 0);
  if (stride < 0) throw ConfigError("config key 'hjb.snapshot_stride' must be >= 0");
  c.snapshot_stride = static_cast<std::size_t>(stride);

  c.samples = static_cast<int>(r.integer("sensitivity.samples", 21));
  if (c.samples < 1) throw ConfigError("config key 'sensitivity.samples' must be >= 1");
  c.sample_lo = r.number("sensitivity.lo", 0.5 * c.x_min);
  c.sample_hi = r.number("sensitivity.hi", 0.5 * c.x_max);
  if (r.has("sensitivity.h")) c.h_sequence = r.numbers("sensitivity.h");
  c.mc_samples = static_cast<int>(r.integer("sensitivity.mc_samples", 0));
  c.s_levels = static_cast<int>(r.integer("sensitivity.s_levels", 6));

  c.consistency_s = r.number("consistency.s", c.t);
  if (r.has("consistency.atoms")) {
    c.consistency_atoms.clear();
    for (double a : r.numbers("consistency.atoms")) {
      if (a < 1.0 || a != std::floor(a)) {
        throw ConfigError("config key 'consistency.atoms' must hold positive integers");
      }
      c.consistency_atoms.push_back(static_cast<int>(a));
    }
  }

  std::ostringstream canon;
  canon << root;
  c.canonical = canon.str();
  // Where results land does not change them, so output.dir stays out of the hash.
  toml::table hashed = root;
  if (toml::table* out = hashed["output"].as_table()) out->erase("dir");
  std::ostringstream key;
  key << hashed;
  c.hash = fnv1a64(key.str());
  return c;
}

RunConfig load_config(const std::string& path, const Overrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

}  // namespace robsem::cli
