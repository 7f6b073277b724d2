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

// Command line front end: set generation, the individual kernels, and
// config-driven experiments with re-verification of their reports.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sumlab/density.hpp"
#include "sumlab/dynamics.hpp"
#include "sumlab/experiments.hpp"
#include "sumlab/progressions.hpp"
#include "sumlab/recipes.hpp"
#include "sumlab/sequences.hpp"
#include "sumlab/structure.hpp"

using namespace sumlab;
using nlohmann::json;

namespace {

WindowSet load_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  return read_windowset(in);
}

void save_set(const std::string& path, const WindowSet& s) {
  if (path.empty() || path == "-") {
    write_windowset(std::cout, s);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
  write_windowset(out, s);
}

// "powers:2:15", "family:squares:30" or "list:0,5,9".
FiniteOffsets parse_offsets(const std::string& spec) {
  OffsetsRecipe r;
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() == 3 && parts[0] == "powers") {
    r.kind = "powers";
    r.base = std::stoll(parts[1]);
    r.max_exp = std::stoi(parts[2]);
  } else if (parts.size() == 3 && parts[0] == "family") {
    r.kind = "family";
    r.family = parts[1];
    r.j = std::stoll(parts[2]);
  } else if (parts.size() == 2 && parts[0] == "list") {
    r.kind = "list";
    r.values.clear();
    std::stringstream vs(parts[1]);
    for (std::string v; std::getline(vs, v, ',');) r.values.push_back(std::stoll(v));
  } else {
    throw Error(Errc::parse_error, "offsets look like powers:B:E, family:NAME:J or list:a,b,c");
  }
  return build_offsets(r);
}

GridFunction make_observable(const std::string& spec, int d, std::int64_t G) {
  if (spec == "exp_x") return GridFunction::character(d, G, 0);
  if (spec == "exp_y") return GridFunction::character(d, G, d - 1);
  if (spec == "constant") return GridFunction::constant(d, G, 1.0);
  if (spec.rfind("indicator:", 0) == 0) {
    // indicator:lo,hi per axis, axes separated by ';'
    std::vector<std::pair<double, double>> box;
    std::stringstream ss(spec.substr(10));
    for (std::string side; std::getline(ss, side, ';');) {
      const auto comma = side.find(',');
      if (comma == std::string::npos) throw Error(Errc::parse_error, "indicator sides look like lo,hi");
      box.emplace_back(std::stod(side.substr(0, comma)), std::stod(side.substr(comma + 1)));
    }
    if (static_cast<int>(box.size()) != d) throw Error(Errc::invalid_argument, "indicator needs one side per axis");
    return GridFunction::indicator_box(G, box);
  }
  if (spec.rfind("file:", 0) == 0) return GridFunction::read_binary(spec.substr(5), d, G);
  throw Error(Errc::parse_error, "unknown observable '" + spec + "'");
}

void print(const json& j) { std::cout << j.dump(1) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sumlab: finite-window experiments on sumsets, recurrence and equidistribution"};
  app.require_subcommand(1);
  int exit_code = 0;

  // gen-set
  auto* gen = app.add_subcommand("gen-set", "Build a set from a recipe and write it in WINDOWSET format");
  SetRecipe recipe;
  std::int64_t lo = 0, hi = std::int64_t{1} << 20;
  std::uint64_t seed = 42;
  std::string out_path;
  std::string residues = "0";
  gen->add_option("--recipe", recipe.kind, "bernoulli | all_ones | periodic | power_rotation | squares | primes");
  gen->add_option("--lo", lo, "window start");
  gen->add_option("--hi", hi, "window end (exclusive)");
  gen->add_option("--seed", seed);
  gen->add_option("--p", recipe.p, "Bernoulli probability");
  gen->add_option("--power", recipe.power);
  gen->add_option("--alpha", recipe.alpha);
  gen->add_option("--from", recipe.lo, "power_rotation interval start");
  gen->add_option("--to", recipe.hi, "power_rotation interval end");
  gen->add_option("--period", recipe.period);
  gen->add_option("--residues", residues, "comma separated residues");
  gen->add_option("-o,--out", out_path, "output file (default stdout)");
  gen->callback([&] {
    recipe.residues.clear();
    std::stringstream ss(residues);
    for (std::string r; std::getline(ss, r, ',');) recipe.residues.push_back(std::stoll(r));
    save_set(out_path, build_set(recipe, {lo, hi}, seed));
  });

  // sumset
  auto* sum = app.add_subcommand("sumset", "A + B for a finite offset set A and a WINDOWSET file B");
  std::string in_path, offsets = "powers:2:15";
  sum->add_option("-i,--in", in_path, "B as a WINDOWSET file")->required();
  sum->add_option("-a,--offsets", offsets, "powers:B:E | family:NAME:J | list:a,b,c");
  sum->add_option("-o,--out", out_path);
  sum->callback([&] { save_set(out_path, sumset(parse_offsets(offsets), load_set(in_path))); });

  // density
  auto* dens = app.add_subcommand("density", "Windowed upper Banach density estimates");
  std::vector<std::int64_t> Ms{999};
  dens->add_option("-i,--in", in_path)->required();
  dens->add_option("-M", Ms, "window parameters (window length M+1)");
  dens->callback([&] {
    json arr = json::array();
    for (const auto& e : banach_density_sweep(load_set(in_path), Ms)) arr.push_back(to_json(e));
    print(arr);
  });

  // scan-ap
  auto* scan = app.add_subcommand("scan-ap", "Threshold scan of pattern correlation densities over n");
  std::string pattern = "n, 2n", filter = "none", csv_path;
  double threshold = 0.1;
  std::int64_t n_first = 1, n_last = 1000, M = 999;
  FilterSpec fspec;
  scan->add_option("-i,--in", in_path, "E as a WINDOWSET file")->required();
  scan->add_option("--pattern", pattern, "polynomials p_1, ..., p_{k-1}");
  scan->add_option("--threshold", threshold);
  scan->add_option("--n-first", n_first);
  scan->add_option("--n-last", n_last);
  scan->add_option("-M", M);
  scan->add_option("--filter", fspec.kind, "none | intersective");
  scan->add_option("--filter-power", fspec.power);
  scan->add_option("--filter-alpha", fspec.alpha);
  scan->add_option("--csv", csv_path);
  scan->callback([&] {
    const Window range{n_first, n_last + 1};
    NFilter fn;
    if (fspec.kind == "intersective") {
      const auto im = intersective_members(fspec.power, FixedPointReal::parse(fspec.alpha), range);
      auto keep = std::make_shared<std::vector<std::int64_t>>(im.members);
      fn = [keep](std::int64_t n) { return std::binary_search(keep->begin(), keep->end(), n); };
    } else if (fspec.kind != "none") {
      throw Error(Errc::parse_error, "unknown filter '" + fspec.kind + "'");
    }
    const auto r = scan_good_n(load_set(in_path), PolyVec::parse(pattern), threshold, range, M, fn);
    if (!csv_path.empty()) {
      std::ofstream out(csv_path);
      write_csv(out, r);
    }
    auto j = to_json(r);
    j.erase("entries");
    print(j);
  });

  // weyl
  auto* weyl = app.add_subcommand("weyl", "Weyl-average profile of a sequence family");
  std::string family = "squares";
  std::int64_t j = 1000;
  int thetas = 100, max_den = 6;
  double tolerance = 0.05;
  weyl->add_option("--family", family, "squares | primes | blocks | floor_pow_5_2 | poly_floor");
  weyl->add_option("-j", j);
  weyl->add_option("--thetas", thetas, "number of generic angles");
  weyl->add_option("--max-den", max_den, "denominator bound for rational suspects");
  weyl->add_option("--tolerance", tolerance);
  weyl->add_option("--csv", csv_path);
  weyl->callback([&] {
    const auto fam = SequenceFamily::parse(family);
    auto grid = generic_theta_grid(thetas);
    const auto sus = analytic_suspects(fam, max_den);
    grid.insert(grid.end(), sus.begin(), sus.end());
    const auto prof = equidist_profile(fam, j, grid, tolerance);
    if (!csv_path.empty()) {
      std::ofstream out(csv_path);
      write_csv(out, prof);
    }
    json exc = json::array();
    for (const auto& t : prof.exceptional) exc.push_back(t.radians());
    print({{"family", family}, {"j", j}, {"thetas", grid.size()},
           {"max_magnitude", *std::max_element(prof.magnitudes.begin(), prof.magnitudes.end())},
           {"exceptional_radians", exc}});
  });

  // intersective
  auto* inter = app.add_subcommand("intersective", "Members of S_{k,alpha} = {n : {n^k alpha} in (1/4, 3/4)}");
  int k = 1, bits = 192;
  std::string alpha = "sqrt2";
  inter->add_option("-k", k);
  inter->add_option("--alpha", alpha, "decimal, p/q, or sqrt2 | sqrt3 | golden | pi_frac");
  inter->add_option("--bits", bits, "fractional bits");
  inter->add_option("--n-first", n_first);
  inter->add_option("--n-last", n_last);
  inter->add_option("-o,--out", out_path, "write members as a WINDOWSET file");
  inter->callback([&] {
    const Window range{n_first, n_last + 1};
    const auto im = intersective_members(k, FixedPointReal::parse(alpha, bits), range);
    if (!out_path.empty()) save_set(out_path, WindowSet::from_elements(im.members, range));
    print({{"members", im.members.size()}, {"range", range.length()},
           {"density", static_cast<double>(im.members.size()) / static_cast<double>(range.length())},
           {"boundary_ambiguous", im.ambiguous}});
  });

  // bohr
  auto* bohr = app.add_subcommand("bohr", "Bohr or Nil-Bohr set {n : p(n) alpha mod 1 in (lo, hi)}");
  std::string box_lo = "-0.05", box_hi = "0.05";
  std::vector<std::string> polys;
  bohr->add_option("--alpha", alpha);
  bohr->add_option("--lo", box_lo);
  bohr->add_option("--hi", box_hi);
  bohr->add_option("--poly", polys, "polynomials with p(0) = 0 (Nil-Bohr); omit for a Bohr set");
  bohr->add_option("--n-first", n_first);
  bohr->add_option("--n-last", n_last);
  bohr->add_option("-o,--out", out_path);
  bohr->callback([&] {
    const Window range{n_first, n_last + 1};
    BohrSpec spec{{FixedPointReal::parse(alpha)}, {CircleInterval::parse(box_lo, box_hi)}};
    WindowSet s;
    if (polys.empty()) {
      s = bohr_members(spec, range);
    } else {
      NilBohrSpec nb{spec, {}};
      for (const auto& p : polys) nb.polys.push_back(Polynomial::parse(p));
      s = nil_bohr_members(nb, range);
    }
    if (!out_path.empty()) save_set(out_path, s);
    const auto g = gap_profile(s);
    print({{"members", s.count()}, {"gaps", to_json(g)}});
  });

  // dynamics
  auto* dyn = app.add_subcommand("dynamics", "Correlation sequence of a torus system on a grid");
  std::string system = "skew_quadratic", f_spec = "exp_y", g_spec;
  std::int64_t G = 1019, n_max = 20;
  dyn->add_option("--system", system, "kronecker1d | skew_quadratic");
  dyn->add_option("--alpha", alpha);
  dyn->add_option("--grid", G, "cells per axis");
  dyn->add_option("-f", f_spec, "exp_x | exp_y | constant | indicator:lo,hi[;lo,hi] | file:path");
  dyn->add_option("-g", g_spec, "second observable (default f)");
  dyn->add_option("--n-max", n_max);
  dyn->callback([&] {
    const auto sys = TorusSystem::preset(system, alpha);
    const auto f = make_observable(f_spec, sys.dim(), G);
    const auto g = g_spec.empty() ? f : make_observable(g_spec, sys.dim(), G);
    const auto series = spectral_series(sys, f, g, n_max);
    json arr = json::array();
    for (const auto& [n, c] : series.coeffs) arr.push_back({n, c.real(), c.imag(), std::abs(c)});
    print({{"system", sys.describe()}, {"grid", G}, {"coeffs", arr}});
  });

  // experiment run
  auto* exp = app.add_subcommand("experiment", "Config-driven experiments");
  auto* run = exp->add_subcommand("run", "Run an experiment config and write its JSON report");
  exp->require_subcommand(1);
  std::string cfg_path, report_path;
  run->add_option("config", cfg_path, "INI config file")->required();
  run->add_option("-o,--out", report_path, "report path (default: [output] report, else stdout)");
  run->add_option("--csv", csv_path, "raw scan CSV path");
  run->callback([&] {
    auto cfg = load_config(cfg_path);
    if (!csv_path.empty()) cfg.csv_path = csv_path;
    const std::string path = report_path.empty() ? cfg.report_path : report_path;
    const auto report = run_experiment(cfg);
    write_outputs(cfg, report, path);
    if (path.empty()) print(report);
    for (const auto& v : report.at("verdicts")) {
      std::cerr << (v.at("passed").get<bool>() ? "PASS " : "FAIL ") << v.at("name").get<std::string>() << '\n';
    }
    exit_code = report.at("all_pass").get<bool>() ? 0 : 2;
  });

  // verify
  auto* ver = app.add_subcommand("verify", "Recompute the verdicts of a report from its raw data");
  ver->add_option("report", in_path, "JSON report")->required();
  ver->callback([&] {
    std::ifstream in(in_path);
    if (!in) throw Error(Errc::io_error, "cannot open " + in_path);
    json report;
    try {
      in >> report;
    } catch (const json::exception& e) {
      throw Error(Errc::parse_error, e.what());
    }
    const auto v = verify_report(report);
    for (const auto& m : v.mismatches) std::cerr << "MISMATCH " << m << '\n';
    std::cout << (v.consistent ? "consistent" : "inconsistent") << ", " << (v.all_pass ? "all verdicts pass" : "some verdicts fail")
              << '\n';
    exit_code = !v.consistent ? 1 : (v.all_pass ? 0 : 2);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return exit_code;
}
