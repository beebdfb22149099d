// SPDX-License-Identifier: Apache-2.0
//
// Run configuration read from a TOML file.
//
//   seed = 0
//   [model]    type = "brownian" | "ou" | "gbm" | "koopman" and its parameters
//   [penalty]  type = "ball" | "power" | "table", p = 2
//   [grid]     x_min, x_max, n_nodes   (log coordinates for gbm)
//   [time]     t, n_levels = 8, hjb_dt = "auto"
//   [measure]  n_atoms
//   [function] type and parameters, see functions.hpp
//   [output]   dir, timings = false
//   [checks]   tolerance = 1e-7
//   [hjb]          snapshot_stride = 0 (0: about ten snapshots)
//   [sensitivity]  samples = 21, lo, hi, h = [...], mc_samples = 0, s_levels = 6
//   [consistency]  s = t, atoms = [50, 200, 800]
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "functions.hpp"
#include "robsem/error.hpp"
#include "robsem/models.hpp"
#include "robsem/penalty.hpp"

namespace robsem::cli {

/// Missing or malformed configuration entry; the message names the key.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
};

struct RunConfig {
  RunConfig(ReferenceModel m, Penalty p) : model(std::move(m)), penalty(std::move(p)) {}

  ReferenceModel model;
  Penalty penalty;
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t n_nodes = 0;
  double t = 0.0;
  int n_levels = 8;
  double hjb_dt = 0.0;  ///< 0 selects the stable step
  int n_atoms = 0;
  FunctionSpec function;
  std::string out_dir;
  bool timings = false;
  std::uint64_t seed = 0;
  double tolerance = 1e-7;

  std::size_t snapshot_stride = 0;

  int samples = 21;
  double sample_lo = 0.0;
  double sample_hi = 0.0;
  std::vector<double> h_sequence;
  int mc_samples = 0;
  int s_levels = 6;

  double consistency_s = 0.0;
  std::vector<int> consistency_atoms{50, 200, 800};

  /// Configuration after overrides, re-serialised, and its FNV-1a hash
  /// (computed without output.dir).
  std::string canonical;
  std::uint64_t hash = 0;
};

RunConfig load_config(const std::string& path, const Overrides& overrides = {});
RunConfig parse_config(const std::string& text, const Overrides& overrides = {});

std::uint64_t fnv1a64(const std::string& data);

}  // namespace robsem::cli
