// Copyright 2026 The sumlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sumlab/windowset.hpp"

namespace sumlab {

/// How to build a subset of Z on a window.
///   bernoulli       i.i.d. Bernoulli(p) from mt19937_64(seed)
///   all_ones        every integer
///   periodic        n mod period ∈ residues
///   power_rotation  {n : {n^power α} ∈ [lo, hi)}
///   squares, primes the members of that sequence
struct SetRecipe {
  std::string kind = "bernoulli";
  double p = 0.5;
  int power = 2;
  std::string alpha = "sqrt3";
  double lo = 0.0;
  double hi = 0.5;
  std::int64_t period = 1;
  std::vector<std::int64_t> residues{0};
};

/// A finite truncation A' of an infinite offset set.
///   powers    base^0 .. base^max_exp
///   family    S_j of a sequence family
///   list      explicit values
struct OffsetsRecipe {
  std::string kind = "powers";
  std::int64_t base = 2;
  int max_exp = 15;
  std::string family = "squares";
  std::int64_t j = 30;
  std::vector<std::int64_t> values{0};
};

/// Restricts scanned n: none, intersective S_{power,α} or a one-dimensional Bohr set.
struct FilterSpec {
  std::string kind = "none";
  int power = 2;
  std::string alpha = "sqrt2";
  int frac_bits = 192;
  std::string lo = "-0.05";  // Bohr box (lo, hi) mod 1
  std::string hi = "0.05";
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::string kind = "sumset_recurrence";  // sumset_recurrence | near_recurrence | equidist | dynamics
  std::uint64_t seed = 42;

  std::int64_t N = std::int64_t{1} << 20;
  std::int64_t M = 65535;
  int k = 3;
  double epsilon = 0.03;
  double delta = 0.5;
  std::int64_t n_first = 1;
  std::int64_t n_last = 5000;
  double min_freq = 0.5;
  std::int64_t max_gap_bound = 100;

  SetRecipe B;
  OffsetsRecipe A;
  FilterSpec filter;

  // near_recurrence
  SetRecipe near_A{"squares"};
  std::string near_family = "squares";
  std::int64_t near_j = 30;
  FilterSpec bohr{"bohr", 1, "sqrt2", 192, "-0.05", "0.05"};

  // equidist: (family, j) pairs
  std::vector<std::pair<std::string, std::int64_t>> families{
      {"squares", 100000}, {"primes", 1000000}, {"blocks", 10000}, {"floor_pow_5_2", 100000}, {"poly_floor", 5000}};
  int theta_count = 100;
  double weyl_tolerance = 0.05;
  int max_den = 6;

  // dynamics
  std::int64_t grid = 1019;
  std::string system_alpha = "sqrt2";
  std::int64_t decay_n_max = 1000;
  double decay_tol = 1e-9;
  std::string wiener_family = "squares";
  std::int64_t wiener_j = 1000;
  double wiener_eps = 0.05;
  std::int64_t torus_grid = 4096;
  double torus_lo = 0.0;
  double torus_hi = 0.3;
  std::string torus_poly = "n^2";
  double torus_eps = 0.05;
  std::int64_t torus_n_last = 10000;
  double torus_near_zero = 1e-3;
  double torus_min_freq = 0.02;
  std::string cesaro_generator = "powers:2";
  double cesaro_tol = 0.05;
  std::int64_t cesaro_cap = 2000;
  double cesaro_slack = 1.05;
  int cesaro_bits = 1024;
  std::int64_t control_cap = 50;
  double control_tol = 0.5;
  std::int64_t mixing_n_last = 1000;
  double mixing_eps = 0.01;
  double mixing_min_stat = 0.1;
  std::int64_t pipeline_n_last = 50;

  std::string report_path;  // empty: caller decides
  std::string csv_path;
};

/// INI file with sections [experiment] [params] [B] [A] [filter] [near] [bohr]
/// [equidist] [dynamics] [output]; unknown keys are rejected.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);

WindowSet build_set(const SetRecipe& r, Window window, std::uint64_t seed);
FiniteOffsets build_offsets(const OffsetsRecipe& r);

/// Reports carry: "experiment", "kind", "config" (echo), "canaries", "results"
/// (raw arrays), "verdicts", "all_pass" and "timing". Everything except
/// "timing" is a deterministic function of the config.
nlohmann::json run_sumset_recurrence(const ExperimentConfig& cfg);
nlohmann::json run_near_recurrence(const ExperimentConfig& cfg);
nlohmann::json run_equidist_report(const ExperimentConfig& cfg);
nlohmann::json run_dynamics_report(const ExperimentConfig& cfg);
nlohmann::json run_experiment(const ExperimentConfig& cfg);

/// Verdicts recomputed from "canaries" and "results" alone.
nlohmann::json compute_verdicts(const nlohmann::json& report);

struct VerifyOutcome {
  bool consistent = false;  // stored verdicts equal the recomputed ones
  bool all_pass = false;
  std::vector<std::string> mismatches;
};
VerifyOutcome verify_report(const nlohmann::json& report);

nlohmann::json strip_timing(nlohmann::json report);

/// Writes report JSON (and the raw scan CSV when cfg.csv_path is set).
void write_outputs(const ExperimentConfig& cfg, const nlohmann::json& report, const std::string& report_path);

}  // namespace sumlab
