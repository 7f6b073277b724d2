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

#include "sumlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "sumlab/density.hpp"
#include "sumlab/dynamics.hpp"
#include "sumlab/parallel.hpp"
#include "sumlab/progressions.hpp"
#include "sumlab/recipes.hpp"
#include "sumlab/sequences.hpp"
#include "sumlab/structure.hpp"

namespace sumlab {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------- config

template <typename T>
T to_value(const std::string& key, const std::string& text) {
  std::istringstream is(text);
  T v{};
  is >> v;
  if (!is || !(is >> std::ws).eof()) throw Error(Errc::parse_error, "bad value '" + text + "' for " + key);
  return v;
}

template <>
std::string to_value<std::string>(const std::string&, const std::string& text) {
  return text;
}

std::vector<std::int64_t> to_int_list(const std::string& key, const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(to_value<std::int64_t>(key, item));
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

class ConfigReader {
 public:
  explicit ConfigReader(const boost::property_tree::ptree& pt) : pt_(pt) {}

  template <typename T>
  void read(const std::string& key, T& field) {
    seen_.insert(key);
    if (auto v = pt_.get_optional<std::string>(key)) field = to_value<T>(key, trim(*v));
  }
  void read_list(const std::string& key, std::vector<std::int64_t>& field) {
    seen_.insert(key);
    if (auto v = pt_.get_optional<std::string>(key)) field = to_int_list(key, *v);
  }
  void read_families(const std::string& key, std::vector<std::pair<std::string, std::int64_t>>& field) {
    seen_.insert(key);
    auto v = pt_.get_optional<std::string>(key);
    if (!v) return;
    field.clear();
    std::stringstream ss(*v);
    for (std::string item; std::getline(ss, item, ',');) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw Error(Errc::parse_error, key + " entries look like family:j");
      field.emplace_back(trim(item.substr(0, colon)), to_value<std::int64_t>(key, trim(item.substr(colon + 1))));
    }
  }
  void read_set(const std::string& section, SetRecipe& r) {
    read(section + ".recipe", r.kind);
    read(section + ".p", r.p);
    read(section + ".power", r.power);
    read(section + ".alpha", r.alpha);
    read(section + ".lo", r.lo);
    read(section + ".hi", r.hi);
    read(section + ".period", r.period);
    read_list(section + ".residues", r.residues);
  }
  void read_filter(const std::string& section, FilterSpec& f) {
    read(section + ".kind", f.kind);
    read(section + ".power", f.power);
    read(section + ".alpha", f.alpha);
    read(section + ".frac_bits", f.frac_bits);
    read(section + ".lo", f.lo);
    read(section + ".hi", f.hi);
  }
  void reject_unknown() const {
    for (const auto& [section, body] : pt_) {
      if (body.empty() && !body.data().empty()) throw Error(Errc::parse_error, "key '" + section + "' outside a section");
      for (const auto& [key, _] : body) {
        if (!seen_.count(section + "." + key)) throw Error(Errc::parse_error, "unknown config key " + section + "." + key);
      }
    }
  }

 private:
  const boost::property_tree::ptree& pt_;
  std::set<std::string> seen_;
};

ExperimentConfig from_ptree(const boost::property_tree::ptree& pt) {
  ExperimentConfig c;
  ConfigReader r(pt);
  r.read("experiment.name", c.name);
  r.read("experiment.kind", c.kind);
  r.read("experiment.seed", c.seed);
  r.read("params.N", c.N);
  r.read("params.M", c.M);
  r.read("params.k", c.k);
  r.read("params.epsilon", c.epsilon);
  r.read("params.delta", c.delta);
  r.read("params.n_first", c.n_first);
  r.read("params.n_last", c.n_last);
  r.read("params.min_freq", c.min_freq);
  r.read("params.max_gap_bound", c.max_gap_bound);
  r.read_set("B", c.B);
  r.read("A.recipe", c.A.kind);
  r.read("A.base", c.A.base);
  r.read("A.max_exp", c.A.max_exp);
  r.read("A.family", c.A.family);
  r.read("A.j", c.A.j);
  r.read_list("A.values", c.A.values);
  r.read_filter("filter", c.filter);
  r.read_set("near", c.near_A);
  r.read("near.family", c.near_family);
  r.read("near.j", c.near_j);
  r.read_filter("bohr", c.bohr);
  r.read_families("equidist.families", c.families);
  r.read("equidist.theta_count", c.theta_count);
  r.read("equidist.tolerance", c.weyl_tolerance);
  r.read("equidist.max_den", c.max_den);
  r.read("dynamics.grid", c.grid);
  r.read("dynamics.alpha", c.system_alpha);
  r.read("dynamics.decay_n_max", c.decay_n_max);
  r.read("dynamics.decay_tol", c.decay_tol);
  r.read("dynamics.wiener_family", c.wiener_family);
  r.read("dynamics.wiener_j", c.wiener_j);
  r.read("dynamics.wiener_eps", c.wiener_eps);
  r.read("dynamics.torus_grid", c.torus_grid);
  r.read("dynamics.torus_lo", c.torus_lo);
  r.read("dynamics.torus_hi", c.torus_hi);
  r.read("dynamics.torus_poly", c.torus_poly);
  r.read("dynamics.torus_eps", c.torus_eps);
  r.read("dynamics.torus_n_last", c.torus_n_last);
  r.read("dynamics.torus_near_zero", c.torus_near_zero);
  r.read("dynamics.torus_min_freq", c.torus_min_freq);
  r.read("dynamics.cesaro_generator", c.cesaro_generator);
  r.read("dynamics.cesaro_tol", c.cesaro_tol);
  r.read("dynamics.cesaro_cap", c.cesaro_cap);
  r.read("dynamics.cesaro_slack", c.cesaro_slack);
  r.read("dynamics.cesaro_bits", c.cesaro_bits);
  r.read("dynamics.control_cap", c.control_cap);
  r.read("dynamics.control_tol", c.control_tol);
  r.read("dynamics.mixing_n_last", c.mixing_n_last);
  r.read("dynamics.mixing_eps", c.mixing_eps);
  r.read("dynamics.mixing_min_stat", c.mixing_min_stat);
  r.read("dynamics.pipeline_n_last", c.pipeline_n_last);
  r.read("output.report", c.report_path);
  r.read("output.csv", c.csv_path);
  r.reject_unknown();

  if (!(c.epsilon > 0 && c.epsilon < 1)) throw Error(Errc::invalid_argument, "epsilon must lie in (0,1)");
  if (!(c.delta > 0 && c.delta <= 1)) throw Error(Errc::invalid_argument, "delta must lie in (0,1]");
  if (c.n_first > c.n_last) throw Error(Errc::invalid_argument, "n_first exceeds n_last");
  if (c.k < 1) throw Error(Errc::invalid_argument, "k must be at least 1");
  return c;
}

json set_to_json(const SetRecipe& r) {
  return {{"recipe", r.kind}, {"p", r.p},   {"power", r.power},   {"alpha", r.alpha},
          {"lo", r.lo},       {"hi", r.hi}, {"period", r.period}, {"residues", r.residues}};
}

json filter_to_json(const FilterSpec& f) {
  return {{"kind", f.kind}, {"power", f.power}, {"alpha", f.alpha}, {"frac_bits", f.frac_bits}, {"lo", f.lo}, {"hi", f.hi}};
}

json config_to_json(const ExperimentConfig& c) {
  json fam = json::array();
  for (const auto& [name, j] : c.families) fam.push_back({name, j});
  return {
      {"name", c.name},
      {"kind", c.kind},
      {"seed", c.seed},
      {"params",
       {{"N", c.N}, {"M", c.M}, {"k", c.k}, {"epsilon", c.epsilon}, {"delta", c.delta}, {"n_first", c.n_first},
        {"n_last", c.n_last}, {"min_freq", c.min_freq}, {"max_gap_bound", c.max_gap_bound}}},
      {"B", set_to_json(c.B)},
      {"A",
       {{"recipe", c.A.kind}, {"base", c.A.base}, {"max_exp", c.A.max_exp}, {"family", c.A.family}, {"j", c.A.j},
        {"values", c.A.values}}},
      {"filter", filter_to_json(c.filter)},
      {"near", {{"A", set_to_json(c.near_A)}, {"family", c.near_family}, {"j", c.near_j}}},
      {"bohr", filter_to_json(c.bohr)},
      {"equidist", {{"families", fam}, {"theta_count", c.theta_count}, {"tolerance", c.weyl_tolerance}, {"max_den", c.max_den}}},
      {"dynamics",
       {{"grid", c.grid},
        {"alpha", c.system_alpha},
        {"decay_n_max", c.decay_n_max},
        {"decay_tol", c.decay_tol},
        {"wiener_family", c.wiener_family},
        {"wiener_j", c.wiener_j},
        {"wiener_eps", c.wiener_eps},
        {"torus_grid", c.torus_grid},
        {"torus_lo", c.torus_lo},
        {"torus_hi", c.torus_hi},
        {"torus_poly", c.torus_poly},
        {"torus_eps", c.torus_eps},
        {"torus_n_last", c.torus_n_last},
        {"torus_near_zero", c.torus_near_zero},
        {"torus_min_freq", c.torus_min_freq},
        {"cesaro_generator", c.cesaro_generator},
        {"cesaro_tol", c.cesaro_tol},
        {"cesaro_cap", c.cesaro_cap},
        {"cesaro_slack", c.cesaro_slack},
        {"cesaro_bits", c.cesaro_bits},
        {"control_cap", c.control_cap},
        {"control_tol", c.control_tol},
        {"mixing_n_last", c.mixing_n_last},
        {"mixing_eps", c.mixing_eps},
        {"mixing_min_stat", c.mixing_min_stat},
        {"pipeline_n_last", c.pipeline_n_last}}},
  };
}

// ---------------------------------------------------------------- helpers

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

json report_skeleton(const ExperimentConfig& cfg) {
  return {{"experiment", cfg.name},
          {"kind", cfg.kind},
          {"config", config_to_json(cfg)},
          {"canaries", json::array()},
          {"results", json::object()},
          {"timing", json::object()},
          {"finite_proxy",
           "syndeticity and density limits are evidenced on finite windows: relative_frequency >= min_freq and "
           "max_gap <= max_gap_bound over the scanned n range"}};
}

void finalize(json& report) {
  report["verdicts"] = compute_verdicts(report);
  bool all = true;
  for (const auto& v : report["verdicts"]) all = all && v.at("passed").get<bool>();
  report["all_pass"] = all;
}

// Independent recount for spot checks: per-position membership test and prefix sums.
Rational naive_pattern_density(const WindowSet& e, const std::vector<std::int64_t>& offsets, std::int64_t M) {
  const auto [tmin, tmax] = std::minmax_element(offsets.begin(), offsets.end());
  const std::int64_t lo = e.valid().lo - *tmin;
  const std::int64_t hi = e.valid().hi - *tmax;
  if (hi - lo < M + 1) throw Error(Errc::window_too_small, "naive oracle window too small");
  std::vector<std::int64_t> prefix(static_cast<std::size_t>(hi - lo) + 1, 0);
  for (std::int64_t x = lo; x < hi; ++x) {
    bool all = true;
    for (auto t : offsets) all = all && e.contains(x + t);
    prefix[x - lo + 1] = prefix[x - lo] + (all ? 1 : 0);
  }
  std::int64_t best = 0;
  for (std::int64_t s = 0; s + M + 1 <= hi - lo; ++s) best = std::max(best, prefix[s + M + 1] - prefix[s]);
  return {best, M + 1};
}

struct FilterResult {
  NFilter fn;
  json raw;
};

FilterResult make_filter(const FilterSpec& f, Window n_range) {
  if (f.kind == "none") return {NFilter{}, {{"kind", "none"}}};
  std::shared_ptr<std::vector<char>> allowed = std::make_shared<std::vector<char>>(n_range.length(), 0);
  json raw;
  if (f.kind == "intersective") {
    const auto alpha = FixedPointReal::parse(f.alpha, f.frac_bits);
    const auto im = intersective_members(f.power, alpha, n_range);
    for (auto n : im.members) (*allowed)[n - n_range.lo] = 1;
    raw = {{"kind", "intersective"}, {"members", im.members.size()}, {"boundary_ambiguous", im.ambiguous}};
  } else if (f.kind == "bohr") {
    BohrSpec spec{{FixedPointReal::parse(f.alpha, f.frac_bits)}, {CircleInterval::parse(f.lo, f.hi, f.frac_bits)}};
    const auto members = bohr_members(spec, n_range);
    for (auto n : members.elements()) (*allowed)[n - n_range.lo] = 1;
    raw = {{"kind", "bohr"}, {"members", members.count()}};
  } else {
    throw Error(Errc::parse_error, "unknown filter kind '" + f.kind + "'");
  }
  return {[allowed, lo = n_range.lo](std::int64_t n) { return (*allowed)[n - lo] != 0; }, raw};
}

json scan_canary(const FiniteOffsets& a, Window window, const PolyVec& pvec, double threshold, Window n_range,
                 std::int64_t M) {
  const auto e = sumset(a, WindowSet::full(window));
  const Window small{n_range.lo, std::min(n_range.hi, n_range.lo + 100)};
  return {{"name", "all_ones_B"}, {"scan", to_json(scan_good_n(e, pvec, threshold, small, M))}};
}

// ---------------------------------------------------------------- verdict rules

json verdict(const std::string& name, bool passed, json observed = json::object()) {
  return {{"name", name}, {"passed", passed}, {"observed", std::move(observed)}};
}

bool all_entries_pass(const ScanReport& r) {
  return !r.entries.empty() && r.passing.size() == r.entries.size() && (r.entries.size() < 2 || r.max_gap == 1);
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

void scan_verdicts(const json& res, json& out) {
  const auto scan = scan_report_from_json(res.at("scan"));
  const auto& rule = res.at("rule");
  out.push_back(verdict("threshold_matches_rule", scan.threshold == res.at("threshold").get<double>(),
                        {{"threshold", scan.threshold}}));
  out.push_back(verdict("passing_nonempty", !scan.passing.empty(), {{"passing", scan.passing.size()}}));
  const bool freq_ok = at_least(scan.relative_frequency, rule.at("min_freq").get<double>());
  const bool gap_ok = scan.max_gap <= rule.at("max_gap_bound").get<std::int64_t>();
  out.push_back(verdict("syndetic_proxy", freq_ok && gap_ok,
                        {{"relative_frequency", scan.relative_frequency.value()}, {"max_gap", scan.max_gap}}));
}

json verdicts_sumset(const json& report) {
  json out = json::array();
  const auto& res = report.at("results");
  scan_verdicts(res, out);
  const auto scan = scan_report_from_json(res.at("scan"));
  bool agree = true;
  for (const auto& sc : res.at("spot_checks")) {
    const auto n = sc.at("n").get<std::int64_t>();
    const Rational fast{sc.at("fast")[0].get<std::int64_t>(), sc.at("fast")[1].get<std::int64_t>()};
    const Rational naive{sc.at("naive")[0].get<std::int64_t>(), sc.at("naive")[1].get<std::int64_t>()};
    const auto it = std::find_if(scan.entries.begin(), scan.entries.end(), [&](const ScanEntry& e) { return e.n == n; });
    agree = agree && fast == naive && it != scan.entries.end() && it->density == fast;
  }
  out.push_back(verdict("spot_checks_agree", agree, {{"count", res.at("spot_checks").size()}}));
  return out;
}

json verdicts_near(const json& report) {
  json out = json::array();
  const auto& res = report.at("results");
  const auto& rd = res.at("relative_density");
  out.push_back(verdict("relative_density_positive", rd[0].get<std::int64_t>() > 0, rd));
  scan_verdicts(res, out);
  return out;
}

bool is_generic_family(const std::string& name) { return name == "blocks" || name == "floor_pow_5_2" || name == "poly_floor"; }

double magnitude(const json& entry) { return std::hypot(entry[1].get<double>(), entry[2].get<double>()); }

const json* find_turn(const json& entries, double turns) {
  for (const auto& e : entries) {
    if (e[0].get<double>() == turns) return &e;
  }
  return nullptr;
}

json verdicts_equidist(const json& report) {
  json out = json::array();
  const auto& res = report.at("results");
  const double tol = res.at("tolerance").get<double>();
  for (const auto& fam : res.at("families")) {
    const auto name = fam.at("family").get<std::string>();
    const auto j = fam.at("j").get<std::int64_t>();
    if (name == "blocks") {
      bool ok = true;
      double worst = 0.0;
      for (const auto* list : {&fam.at("generic"), &fam.at("suspects")}) {
        for (const auto& e : *list) {
          const double t = e[0].get<double>();
          const double bound = 2.0 / (static_cast<double>(j) * 2.0 * std::fabs(std::sin(M_PI * t)));
          ok = ok && magnitude(e) <= bound;
          worst = std::max(worst, magnitude(e) / bound);
        }
      }
      out.push_back(verdict("blocks_geometric_bound", ok, {{"max_ratio_to_bound", worst}}));
    }
    if (is_generic_family(name)) {
      double mx = 0.0;
      for (const auto& e : fam.at("generic")) mx = std::max(mx, magnitude(e));
      out.push_back(verdict(name + "_generic_below_tolerance", mx < tol, {{"max_magnitude", mx}}));
    }
    if (name == "squares") {
      const json* q = find_turn(fam.at("suspects"), 0.25);
      const bool ok = q && std::hypot((*q)[1].get<double>() - 0.5, (*q)[2].get<double>() - 0.5) < 0.01 && magnitude(*q) > tol;
      out.push_back(verdict("squares_exceptional_at_quarter_turn", ok, {{"magnitude", q ? magnitude(*q) : -1.0}}));
    }
    if (name == "primes") {
      const json* q = find_turn(fam.at("suspects"), 1.0 / 3.0);
      const bool ok = q && magnitude(*q) > tol;
      out.push_back(verdict("primes_exceptional_at_third_turn", ok, {{"magnitude", q ? magnitude(*q) : -1.0}}));
    }
  }
  return out;
}

json verdicts_dynamics(const json& report) {
  json out = json::array();
  const auto& res = report.at("results");

  const auto& decay = res.at("skew_decay");
  double mx = 0.0;
  for (const auto& m : decay.at("magnitudes")) mx = std::max(mx, m.get<double>());
  out.push_back(verdict("skew_correlation_decay", mx < decay.at("tol").get<double>(), {{"max_magnitude", mx}}));

  const auto& eig = res.at("kronecker_eigen");
  double dev = 0.0;
  for (const auto& m : eig.at("magnitudes")) dev = std::max(dev, std::fabs(m.get<double>() - 1.0));
  out.push_back(verdict("kronecker_eigenfunction_no_decay", dev < eig.at("tol").get<double>(), {{"max_deviation", dev}}));

  for (const auto& [key, expect] : {std::pair<std::string, std::int64_t>{"wiener_skew", 0}, {"wiener_atomic", 1}}) {
    const auto& w = res.at(key);
    const double eps = w.at("eps").get<double>();
    std::int64_t hits = 0, total = 0;
    for (const auto& m : w.at("magnitudes")) {
      ++total;
      hits += m.get<double>() > eps ? 1 : 0;
    }
    const bool ok = total > 0 && (expect == 0 ? hits == 0 : hits == total);
    out.push_back(verdict(key + "_exceedance", ok, {{"exceed", hits}, {"size", total}}));
  }

  const auto& tr = res.at("torus_recurrence");
  const auto scan = scan_report_from_json(tr.at("scan"));
  const bool freq_ok = greater_than(scan.relative_frequency, tr.at("min_freq").get<double>());
  out.push_back(verdict("torus_recurrence_frequent", !scan.passing.empty() && freq_ok,
                        {{"relative_frequency", scan.relative_frequency.value()}}));
  bool near_ok = true;
  for (const auto& n : tr.at("near_zero")) {
    near_ok = near_ok && std::binary_search(scan.passing.begin(), scan.passing.end(), n.get<std::int64_t>());
  }
  out.push_back(verdict("torus_recurrence_near_zero_pass", near_ok, {{"near_zero", tr.at("near_zero").size()}}));

  const auto& ce = res.at("cesaro");
  bool monotone = true;
  const auto norms = ce.at("norms").get<std::vector<double>>();
  for (std::size_t i = 1; i < norms.size(); ++i) monotone = monotone && norms[i] <= ce.at("slack").get<double>() * norms[i - 1];
  const bool ce_ok = ce.at("reached").get<bool>() && !norms.empty() && norms.back() < ce.at("tol").get<double>() &&
                     static_cast<std::int64_t>(norms.size()) <= ce.at("cap").get<std::int64_t>() && monotone;
  out.push_back(verdict("cesaro_flattening", ce_ok, {{"selected", norms.size()}, {"final_norm", norms.empty() ? -1.0 : norms.back()}}));
  out.push_back(verdict("cesaro_invariant_control", !res.at("cesaro_control").at("reached").get<bool>()));

  const auto& pipe = res.at("pipeline");
  const double drift = std::fabs(pipe.at("integral_average").get<double>() - pipe.at("integral_f").get<double>());
  out.push_back(verdict("pipeline_integral_preserved", drift < 1e-9, {{"drift", drift}}));
  bool in_unit = true;
  for (const auto& v : pipe.at("I")) in_unit = in_unit && v.get<double>() >= -1e-12 && v.get<double>() <= 1 + 1e-12;
  out.push_back(verdict("pipeline_correlations_in_unit_interval", in_unit));

  const auto& mix = res.at("kronecker_mixing");
  const double target = mix.at("target").get<double>();
  const double eps = mix.at("eps").get<double>();
  std::int64_t hits = 0, total = 0;
  for (const auto& v : mix.at("I")) {
    ++total;
    hits += std::fabs(v.get<double>() - target) > eps ? 1 : 0;
  }
  const Rational stat{hits, std::max<std::int64_t>(total, 1)};
  out.push_back(verdict("kronecker_not_weakly_mixing", greater_than(stat, mix.at("min_stat").get<double>()),
                        {{"statistic", stat.value()}}));
  return out;
}

json canary_verdicts(const json& report) {
  json out = json::array();
  for (const auto& c : report.at("canaries")) {
    const auto name = c.at("name").get<std::string>();
    if (c.contains("scan")) {
      out.push_back(verdict("canary_" + name, all_entries_pass(scan_report_from_json(c.at("scan")))));
    } else {
      double dev = 0.0;
      for (const auto& v : c.at("values")) dev = std::max(dev, std::fabs(v.get<double>() - c.at("expected").get<double>()));
      out.push_back(verdict("canary_" + name, dev <= c.at("tol").get<double>(), {{"max_deviation", dev}}));
    }
  }
  return out;
}

WindowSet set_of_sequence(const std::string& name, Window window) {
  const auto fam = SequenceFamily::parse(name);
  std::vector<std::int64_t> elems;
  if (fam.kind() == FamilyKind::squares) {
    for (std::int64_t m = 0; m * m < window.hi; ++m) elems.push_back(m * m);
  } else if (fam.kind() == FamilyKind::primes) {
    elems = fam.generate(std::max<std::int64_t>(window.hi, 2));
  } else {
    throw Error(Errc::invalid_argument, "only squares and primes can be used as a set recipe");
  }
  return WindowSet::from_elements(elems, window);
}

}  // namespace

// ---------------------------------------------------------------- public API

ExperimentConfig parse_config(const std::string& text) {
  boost::property_tree::ptree pt;
  std::istringstream is(text);
  try {
    boost::property_tree::ini_parser::read_ini(is, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(Errc::parse_error, std::string("config: ") + e.what());
  }
  return from_ptree(pt);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

WindowSet build_set(const SetRecipe& r, Window window, std::uint64_t seed) {
  if (r.kind == "bernoulli") return bernoulli_set(window, r.p, seed);
  if (r.kind == "all_ones") return WindowSet::full(window);
  if (r.kind == "periodic") return periodic_set(window, r.period, r.residues);
  if (r.kind == "power_rotation") return power_rotation_set(window, r.power, FixedPointReal::parse(r.alpha), r.lo, r.hi);
  if (r.kind == "squares" || r.kind == "primes") return set_of_sequence(r.kind, window);
  throw Error(Errc::parse_error, "unknown set recipe '" + r.kind + "'");
}

FiniteOffsets build_offsets(const OffsetsRecipe& r) {
  if (r.kind == "powers") return powers_of(r.base, r.max_exp);
  if (r.kind == "family") return FiniteOffsets(SequenceFamily::parse(r.family).generate(r.j));
  if (r.kind == "list") return FiniteOffsets(r.values);
  throw Error(Errc::parse_error, "unknown offsets recipe '" + r.kind + "'");
}

json run_sumset_recurrence(const ExperimentConfig& cfg) {
  Stopwatch sw;
  json report = report_skeleton(cfg);
  const Window window{0, cfg.N};
  const Window n_range{cfg.n_first, cfg.n_last + 1};
  const auto a = build_offsets(cfg.A);
  const auto pvec = PolyVec::arithmetic(cfg.k);
  const double threshold = clamp01(std::pow(cfg.delta, cfg.k) - cfg.epsilon);

  report["canaries"].push_back(scan_canary(a, window, pvec, threshold, n_range, cfg.M));
  report["timing"]["canaries"] = sw.lap();

  const auto b = build_set(cfg.B, window, cfg.seed);
  const auto e = sumset(a, b);
  auto filter = make_filter(cfg.filter, n_range);
  report["timing"]["build"] = sw.lap();
  const auto scan = scan_good_n(e, pvec, threshold, n_range, cfg.M, filter.fn);
  report["timing"]["scan"] = sw.lap();

  json spot = json::array();
  std::mt19937_64 rng(cfg.seed);
  std::vector<ScanEntry> ok;
  for (const auto& en : scan.entries) {
    if (en.flag == ScanFlag::ok) ok.push_back(en);
  }
  for (int i = 0; i < 10 && !ok.empty(); ++i) {
    const auto& en = ok[rng() % ok.size()];
    const auto naive = naive_pattern_density(e, pvec.offsets(en.n), cfg.M);
    spot.push_back({{"n", en.n}, {"fast", {en.density.num, en.density.den}}, {"naive", {naive.num, naive.den}}});
  }
  report["timing"]["spot_checks"] = sw.lap();

  report["results"] = {
      {"B", {{"count", b.count()}, {"window", {window.lo, window.hi}}, {"density", to_json(banach_density(b, cfg.M))}}},
      {"A_prime", std::vector<std::int64_t>(a.elements().begin(), a.elements().end())},
      {"E", {{"valid", {e.valid().lo, e.valid().hi}}, {"density", to_json(banach_density(e, cfg.M))}}},
      {"pattern", pvec.to_string()},
      {"filter", filter.raw},
      {"threshold", threshold},
      {"threshold_rule", "delta^k - epsilon"},
      {"rule", {{"min_freq", cfg.min_freq}, {"max_gap_bound", cfg.max_gap_bound}}},
      {"scan", to_json(scan)},
      {"spot_checks", spot},
  };
  finalize(report);
  return report;
}

json run_near_recurrence(const ExperimentConfig& cfg) {
  Stopwatch sw;
  json report = report_skeleton(cfg);
  const Window window{0, cfg.N};
  const Window n_range{cfg.n_first, cfg.n_last + 1};
  const auto pvec = PolyVec::arithmetic(cfg.k);
  const double threshold = clamp01(cfg.delta - cfg.epsilon);

  const auto family = SequenceFamily::parse(cfg.near_family);
  const auto sj = family.generate(cfg.near_j);
  const auto a_set = build_set(cfg.near_A, Window{0, sj.back() + 1}, cfg.seed);
  const auto rd = relative_density(a_set, sj);
  std::vector<std::int64_t> a_prime;
  for (auto n : sj) {
    if (a_set.contains(n)) a_prime.push_back(n);
  }
  if (a_prime.empty()) throw Error(Errc::invalid_argument, "A has no elements along S_j");
  const FiniteOffsets a(a_prime);

  report["canaries"].push_back(scan_canary(a, window, pvec, threshold, n_range, cfg.M));
  report["timing"]["canaries"] = sw.lap();

  const auto b = build_set(cfg.B, window, cfg.seed);
  const auto e = sumset(a, b);
  const auto scan = scan_good_n(e, pvec, threshold, n_range, cfg.M);
  report["timing"]["scan"] = sw.lap();

  BohrSpec spec{{FixedPointReal::parse(cfg.bohr.alpha, cfg.bohr.frac_bits)},
                {CircleInterval::parse(cfg.bohr.lo, cfg.bohr.hi, cfg.bohr.frac_bits)}};
  const auto bohr = bohr_members(spec, n_range).elements();
  std::vector<std::int64_t> overlap;
  std::set_intersection(scan.passing.begin(), scan.passing.end(), bohr.begin(), bohr.end(), std::back_inserter(overlap));

  // Degenerate control: A' = {0} scans B alone; reported without a verdict.
  const Window control_range{n_range.lo, std::min(n_range.hi, n_range.lo + 200)};
  const auto control = scan_good_n(b, pvec, threshold, control_range, cfg.M);
  report["timing"]["bohr_and_control"] = sw.lap();

  report["results"] = {
      {"relative_density", {rd.num, rd.den}},
      {"A_prime", a_prime},
      {"B", {{"count", b.count()}, {"density", to_json(banach_density(b, cfg.M))}}},
      {"threshold", threshold},
      {"threshold_rule", "delta - epsilon"},
      {"rule", {{"min_freq", cfg.min_freq}, {"max_gap_bound", cfg.max_gap_bound}}},
      {"scan", to_json(scan)},
      {"bohr",
       {{"alpha", cfg.bohr.alpha},
        {"box", {cfg.bohr.lo, cfg.bohr.hi}},
        {"members", bohr.size()},
        {"overlap", overlap.size()},
        {"overlap_fraction_of_bohr", bohr.empty() ? 0.0 : static_cast<double>(overlap.size()) / bohr.size()},
        {"overlap_fraction_of_passing",
         scan.passing.empty() ? 0.0 : static_cast<double>(overlap.size()) / scan.passing.size()}}},
      {"singleton_control",
       {{"n_first", control_range.lo},
        {"n_last", control_range.hi - 1},
        {"passing", control.passing.size()},
        {"relative_frequency", control.relative_frequency.value()}}},
  };
  finalize(report);
  return report;
}

json run_equidist_report(const ExperimentConfig& cfg) {
  Stopwatch sw;
  json report = report_skeleton(cfg);

  // Alternating cancellation over {1..2m} at θ = π.
  std::vector<std::int64_t> run(1000);
  for (std::size_t i = 0; i < run.size(); ++i) run[i] = static_cast<std::int64_t>(i) + 1;
  report["canaries"].push_back(
      {{"name", "alternating_sum"}, {"values", {std::abs(weyl_average(run, Angle::from_turns(0.5)))}}, {"expected", 0.0}, {"tol", 0.0}});

  const auto generic = generic_theta_grid(cfg.theta_count);
  json fams = json::array();
  for (const auto& [name, j] : cfg.families) {
    const auto fam = SequenceFamily::parse(name);
    const auto sj = fam.generate_translate(j);
    std::vector<Angle> suspects = analytic_suspects(fam, cfg.max_den);
    if (!fam.has_exceptional_frequencies()) suspects = {Angle::from_turns(0.25), Angle::from_turns(1.0 / 3.0)};
    auto eval = [&](const std::vector<Angle>& thetas) {
      std::vector<std::complex<double>> vals(thetas.size());
      parallel_for(thetas.size(), [&](std::size_t i) { vals[i] = weyl_average(sj, thetas[i]); });
      json arr = json::array();
      for (std::size_t i = 0; i < thetas.size(); ++i) arr.push_back({thetas[i].turns, vals[i].real(), vals[i].imag()});
      return arr;
    };
    json entry = {{"family", name}, {"j", j}, {"size", sj.size()}, {"generic", eval(generic)}, {"suspects", eval(suspects)}};
    json exceptional = json::array();
    for (const auto* list : {&entry["generic"], &entry["suspects"]}) {
      for (const auto& e : *list) {
        if (magnitude(e) > cfg.weyl_tolerance) exceptional.push_back(e[0]);
      }
    }
    entry["exceptional_turns"] = exceptional;
    fams.push_back(entry);
    report["timing"][name] = sw.lap();
  }
  report["results"] = {{"tolerance", cfg.weyl_tolerance}, {"families", fams}};
  finalize(report);
  return report;
}

json run_dynamics_report(const ExperimentConfig& cfg) {
  Stopwatch sw;
  json report = report_skeleton(cfg);
  const auto G = cfg.grid;
  const auto skew = TorusSystem::preset("skew_quadratic", cfg.system_alpha);
  const auto kron = TorusSystem::preset("kronecker1d", cfg.system_alpha);
  const auto pvec2 = PolyVec::arithmetic(3);

  {
    const auto one = GridFunction::constant(2, G, 1.0);
    std::vector<double> vals;
    for (std::int64_t n = 1; n <= 5; ++n) vals.push_back(multi_correlation(skew, one, pvec2, n));
    const auto c = GridFunction::constant(2, G, 0.375);
    for (std::int64_t n : {1, 7, 100}) vals.push_back(correlation(skew, c, one, n).real() / 0.375);
    report["canaries"].push_back({{"name", "constant_f"}, {"values", vals}, {"expected", 1.0}, {"tol", 1e-12}});
  }
  report["timing"]["canaries"] = sw.lap();

  json res;
  const auto ey = GridFunction::character(2, G, 1);
  {
    std::vector<std::int64_t> ns;
    for (std::int64_t n = 1; n <= cfg.decay_n_max; ++n) ns.push_back(n);
    const auto series = spectral_series_at(skew, ey, ey, ns);
    std::vector<double> mags;
    for (auto n : ns) mags.push_back(std::abs(series.at(n)));
    res["skew_decay"] = {{"grid", G}, {"n_max", cfg.decay_n_max}, {"tol", cfg.decay_tol}, {"magnitudes", mags}};
  }
  const auto ex = GridFunction::character(1, cfg.torus_grid, 0);
  {
    std::vector<double> mags;
    for (std::int64_t n = 1; n <= cfg.decay_n_max; ++n) mags.push_back(std::abs(correlation(kron, ex, ex, n)));
    res["kronecker_eigen"] = {{"grid", cfg.torus_grid}, {"tol", cfg.decay_tol}, {"magnitudes", mags}};
  }
  report["timing"]["decay"] = sw.lap();
  {
    const auto fam = SequenceFamily::parse(cfg.wiener_family);
    const auto sj = fam.generate(cfg.wiener_j);
    const auto skew_series = spectral_series_at(skew, ey, ey, sj);
    const auto atom_series = spectral_series_at(kron, ex, ex, sj);
    std::vector<double> skew_mags, atom_mags;
    for (auto n : sj) {
      skew_mags.push_back(std::abs(skew_series.at(n)));
      atom_mags.push_back(std::abs(atom_series.at(n)));
    }
    res["wiener_skew"] = {{"family", cfg.wiener_family}, {"j", cfg.wiener_j}, {"eps", cfg.wiener_eps}, {"magnitudes", skew_mags}};
    res["wiener_atomic"] = {{"family", cfg.wiener_family}, {"j", cfg.wiener_j}, {"eps", 0.5}, {"magnitudes", atom_mags}};
  }
  report["timing"]["wiener"] = sw.lap();
  {
    const auto D = TorusGridSet::box(cfg.torus_grid, {{cfg.torus_lo, cfg.torus_hi}});
    const auto alpha = FixedPointReal::parse(cfg.system_alpha);
    const auto polys = PolyVec::parse(cfg.torus_poly);
    const Window n_range{1, cfg.torus_n_last + 1};
    const auto scan = torus_recurrence_scan(D, {alpha}, polys, cfg.torus_eps, n_range);
    std::vector<std::int64_t> near_zero;
    for (std::int64_t n = n_range.lo; n < n_range.hi; ++n) {
      bool all_near = true;
      for (const auto& p : polys.polys()) all_near = all_near && alpha.times(p(n)).to_double() < cfg.torus_near_zero;
      if (all_near) near_zero.push_back(n);
    }
    res["torus_recurrence"] = {{"D", {cfg.torus_lo, cfg.torus_hi}},
                               {"grid", cfg.torus_grid},
                               {"polys", polys.to_string()},
                               {"eps", cfg.torus_eps},
                               {"min_freq", cfg.torus_min_freq},
                               {"near_zero_bound", cfg.torus_near_zero},
                               {"near_zero", near_zero},
                               {"scan", to_json(scan)}};
  }
  report["timing"]["torus"] = sw.lap();
  CesaroResult ce;
  {
    const auto wide = skew.at_precision(cfg.cesaro_bits);
    ce = cesaro_select(wide, ey, OffsetGenerator::parse(cfg.cesaro_generator), cfg.cesaro_tol, cfg.cesaro_cap, cfg.cesaro_slack);
    std::vector<std::string> sel;
    for (const auto& a : ce.selected) sel.push_back(a.get_str());
    res["cesaro"] = {{"generator", cfg.cesaro_generator}, {"tol", cfg.cesaro_tol}, {"cap", cfg.cesaro_cap},
                     {"slack", cfg.cesaro_slack}, {"frac_bits", cfg.cesaro_bits}, {"reached", ce.reached},
                     {"stop_reason", ce.stop_reason}, {"candidates_examined", ce.candidates_examined},
                     {"selected", sel}, {"norms", ce.norms}};
    const auto one = GridFunction::constant(2, G, 1.0);
    const auto control = cesaro_select(wide, one, OffsetGenerator::parse(cfg.cesaro_generator), cfg.control_tol,
                                       cfg.control_cap, cfg.cesaro_slack);
    res["cesaro_control"] = {{"observable", "constant 1 (invariant)"}, {"tol", cfg.control_tol}, {"reached", control.reached},
                             {"stop_reason", control.stop_reason}, {"final_norm", control.final_norm}};
  }
  report["timing"]["cesaro"] = sw.lap();
  {
    // f_{A'} for an indicator, followed by the multi-correlation it feeds.
    const auto wide = skew.at_precision(cfg.cesaro_bits);
    const auto f = GridFunction::indicator_box(G, {{0.0, 0.5}, {0.0, 0.5}});
    const auto avg = averaged_observable(wide, f, ce.selected.empty() ? std::vector<BigInt>{BigInt(0)} : ce.selected);
    std::vector<double> I;
    for (std::int64_t n = 1; n <= cfg.pipeline_n_last; ++n) I.push_back(multi_correlation(wide, avg, pvec2, n));
    res["pipeline"] = {{"observable", "indicator [0,0.5)x[0,0.5)"}, {"pattern", pvec2.to_string()},
                       {"integral_f", f.mean().real()}, {"integral_average", avg.mean().real()}, {"I", I}};
  }
  report["timing"]["pipeline"] = sw.lap();
  {
    const auto f = GridFunction::indicator_box(cfg.torus_grid, {{0.0, 0.5}});
    std::vector<double> I;
    for (std::int64_t n = 1; n <= cfg.mixing_n_last; ++n) I.push_back(multi_correlation(kron, f, pvec2, n));
    res["kronecker_mixing"] = {{"observable", "indicator [0,0.5)"}, {"pattern", pvec2.to_string()},
                               {"target", std::pow(f.mean().real(), pvec2.k())}, {"eps", cfg.mixing_eps},
                               {"min_stat", cfg.mixing_min_stat}, {"I", I}};
  }
  report["timing"]["mixing"] = sw.lap();
  report["results"] = res;
  finalize(report);
  return report;
}

json run_experiment(const ExperimentConfig& cfg) {
  Stopwatch sw;
  json report;
  if (cfg.kind == "sumset_recurrence") {
    report = run_sumset_recurrence(cfg);
  } else if (cfg.kind == "near_recurrence") {
    report = run_near_recurrence(cfg);
  } else if (cfg.kind == "equidist") {
    report = run_equidist_report(cfg);
  } else if (cfg.kind == "dynamics") {
    report = run_dynamics_report(cfg);
  } else {
    throw Error(Errc::parse_error, "unknown experiment kind '" + cfg.kind + "'");
  }
  report["timing"]["total"] = sw.lap();
  return report;
}

json compute_verdicts(const json& report) {
  try {
    json out = canary_verdicts(report);
    const auto kind = report.at("kind").get<std::string>();
    json rest;
    if (kind == "sumset_recurrence") {
      rest = verdicts_sumset(report);
    } else if (kind == "near_recurrence") {
      rest = verdicts_near(report);
    } else if (kind == "equidist") {
      rest = verdicts_equidist(report);
    } else if (kind == "dynamics") {
      rest = verdicts_dynamics(report);
    } else {
      throw Error(Errc::parse_error, "unknown report kind '" + kind + "'");
    }
    for (auto& v : rest) out.push_back(std::move(v));
    return out;
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("malformed report: ") + e.what());
  }
}

VerifyOutcome verify_report(const json& report) {
  VerifyOutcome out;
  const json fresh = compute_verdicts(report);
  const json stored = report.value("verdicts", json::array());
  if (fresh.size() != stored.size()) out.mismatches.push_back("verdict count differs");
  for (std::size_t i = 0; i < std::min(fresh.size(), stored.size()); ++i) {
    if (fresh[i] != stored[i]) out.mismatches.push_back(fresh[i].value("name", "?"));
  }
  out.consistent = out.mismatches.empty();
  out.all_pass = !fresh.empty();
  for (const auto& v : fresh) out.all_pass = out.all_pass && v.at("passed").get<bool>();
  if (report.value("all_pass", !out.all_pass) != out.all_pass) {
    out.consistent = false;
    out.mismatches.push_back("all_pass");
  }
  return out;
}

json strip_timing(json report) {
  report.erase("timing");
  return report;
}

void write_outputs(const ExperimentConfig& cfg, const json& report, const std::string& report_path) {
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) throw Error(Errc::io_error, "cannot write " + report_path);
    out << report.dump(1) << '\n';
  }
  if (!cfg.csv_path.empty()) {
    const auto& res = report.at("results");
    const json* scan = res.contains("scan") ? &res.at("scan")
                       : res.contains("torus_recurrence") ? &res.at("torus_recurrence").at("scan")
                                                          : nullptr;
    if (!scan) return;
    std::ofstream out(cfg.csv_path);
    if (!out) throw Error(Errc::io_error, "cannot write " + cfg.csv_path);
    write_csv(out, scan_report_from_json(*scan));
  }
}

}  // namespace sumlab
