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


#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "sumlab/experiments.hpp"

using namespace sumlab;

namespace {

const char* kSmall = R"(
; small sumset run
[experiment]
name = small
kind = sumset_recurrence
seed = 3

[params]
N = 65536
M = 4095
k = 3
epsilon = 0.03
delta = 0.5
n_first = 1
n_last = 300

[B]
recipe = bernoulli
p = 0.5

[A]
recipe = powers
base = 2
max_exp = 10
)";

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::invalid_argument;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(kSmall);
  CHECK(c.name == "small");
  CHECK(c.seed == 3);
  CHECK(c.N == 65536);
  CHECK(c.A.max_exp == 10);
  CHECK(c.B.p == 0.5);
  CHECK(c.filter.kind == "none");

  CHECK(code_of([] { parse_config("[params]\nbogus = 1\n"); }) == Errc::parse_error);
  CHECK(code_of([] { parse_config("[params]\nM = lots\n"); }) == Errc::parse_error);
  CHECK(code_of([] { parse_config("[params]\nepsilon = 1.5\n"); }) == Errc::invalid_argument);
  CHECK(code_of([] { parse_config("[params]\nn_first = 9\nn_last = 2\n"); }) == Errc::invalid_argument);
  CHECK(code_of([] { load_config("/nonexistent/config.ini"); }) == Errc::io_error);

  const auto e = parse_config("[equidist]\nfamilies = squares:100, blocks:20\n");
  REQUIRE(e.families.size() == 2);
  CHECK(e.families[1] == std::pair<std::string, std::int64_t>{"blocks", 20});
}

TEST_CASE("set and offset recipes") {
  const Window w{0, 1000};
  CHECK(build_set(SetRecipe{"all_ones"}, w, 1).count() == 1000);
  SetRecipe per{"periodic"};
  per.period = 4;
  per.residues = {1, 3};
  CHECK(build_set(per, w, 1).count() == 500);
  CHECK(build_set(SetRecipe{"squares"}, w, 1).elements().size() == 32);
  CHECK(build_set(SetRecipe{"bernoulli"}, w, 5) == build_set(SetRecipe{"bernoulli"}, w, 5));
  CHECK_FALSE(build_set(SetRecipe{"bernoulli"}, w, 5) == build_set(SetRecipe{"bernoulli"}, w, 6));
  CHECK_THROWS_AS(build_set(SetRecipe{"fractal"}, w, 1), Error);

  const auto p = build_offsets(OffsetsRecipe{});
  CHECK(p.size() == 16);
  CHECK(p.min() == 1);
  CHECK(p.max() == 32768);
  OffsetsRecipe fam{"family"};
  fam.j = 30;
  CHECK(build_offsets(fam).max() == 900);
  OffsetsRecipe list{"list"};
  list.values = {9, 1, 5, 1};
  CHECK(build_offsets(list).size() == 3);
}

TEST_CASE("sumset run, verification and tampering") {
  const auto cfg = parse_config(kSmall);
  const auto report = run_experiment(cfg);
  CHECK(report["all_pass"].get<bool>());
  CHECK(report.contains("timing"));
  CHECK(report.contains("finite_proxy"));

  const auto v = verify_report(report);
  CHECK(v.consistent);
  CHECK(v.all_pass);

  // Verdicts are re-derived from the raw per-n densities, so forge those.
  auto forged = report;
  for (auto& e : forged["results"]["scan"]["entries"]) e[1] = 0;
  const auto fv = verify_report(forged);
  CHECK_FALSE(fv.consistent);
  CHECK_FALSE(fv.mismatches.empty());

  CHECK_FALSE(strip_timing(report).contains("timing"));
  CHECK(strip_timing(report) == strip_timing(run_experiment(cfg)));
}

TEST_CASE("a failing canary fails the report") {
  const auto report = run_experiment(parse_config(kSmall));
  auto broken = report;
  for (auto& e : broken["canaries"][0]["scan"]["entries"]) e[1] = 0;
  const auto verdicts = compute_verdicts(broken);
  bool canary_failed = false;
  for (const auto& v : verdicts) {
    if (v["name"] == "canary_all_ones_B") canary_failed = !v["passed"].get<bool>();
  }
  CHECK(canary_failed);
}

TEST_CASE("reports and csv are written") {
  auto cfg = parse_config(kSmall);
  cfg.csv_path = "test_experiments_scan.csv";
  const auto report = run_experiment(cfg);
  write_outputs(cfg, report, "test_experiments_report.json");
  std::ifstream in("test_experiments_report.json");
  const auto back = nlohmann::json::parse(in);
  CHECK(back == report);
  std::ifstream csv(cfg.csv_path);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "n,density");
  std::remove("test_experiments_report.json");
  std::remove(cfg.csv_path.c_str());
}
