// Copyright 2026 The TC-SKNet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "tcsk/automl/search.hpp"
#include "tcsk/util/error.hpp"
#include "test_util.hpp"

using namespace tcsk;

namespace {

SearchSpace unit_interval() { return {{ParamSpec::uniform("x", 0.0, 1.0)}}; }

SearchSpace unit_square() {
  return {{ParamSpec::uniform("x", 0.0, 1.0), ParamSpec::uniform("y", 0.0, 1.0)}};
}

double parabola(const ParamConfig& c, std::uint64_t) {
  const double x = c.at("x");
  return -(x - 0.3) * (x - 0.3);
}

double bowl(const ParamConfig& c, std::uint64_t) {
  const double x = c.at("x"), y = c.at("y");
  return -((x - 0.3) * (x - 0.3) + (y - 0.7) * (y - 0.7));
}

SearchOptions budget(Index trials, std::uint64_t seed) {
  SearchOptions o;
  o.n_trials = trials;
  o.seed = seed;
  return o;
}

SearchOptions random_search(Index trials, std::uint64_t seed) {
  SearchOptions o = budget(trials, seed);
  o.tpe.n_startup = trials + 1;
  return o;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<Trial> random_history(const SearchSpace& space, Index n, Rng& rng) {
  std::vector<Trial> h;
  for (Index i = 0; i < n; ++i) {
    Trial t;
    t.trial_id = i;
    t.config = sample_prior(space, rng);
    t.objective = rng.uniform();
    t.status = TrialStatus::complete;
    h.push_back(t);
  }
  return h;
}

SearchSpace combined_space() {
  SearchSpace s = model_search_space();
  for (const auto& p : gridmask_search_space().specs) s.specs.push_back(p);
  return s;
}

}  // namespace

TEST_CASE("built-in spaces") {
  const SearchSpace model = model_search_space();
  CHECK(model.specs.size() == 6);
  CHECK(model.specs[0].values == std::vector<double>{0.0001, 0.001, 0.01});
  CHECK(model.specs[1].values == std::vector<double>{16, 32, 64, 128, 256});
  CHECK(model.specs[2].values == std::vector<double>{25, 30, 35, 40, 45, 50});
  CHECK(model.specs[3].values == std::vector<double>{30, 40, 50, 60});
  CHECK(model.specs[4].values == std::vector<double>{9, 11, 13, 15, 17});
  CHECK(model.specs[5].low == 0.1);
  CHECK(model.specs[5].high == 0.4);
  const SearchSpace gm = gridmask_search_space();
  CHECK(gm.specs.size() == 2);
  CHECK(gm.specs[0].low == 0.5);
  CHECK(gm.specs[0].high == 1.0);
  CHECK(gm.specs[1].low == 0.1);
  CHECK(gm.specs[1].high == 0.5);
}

TEST_CASE("shipped space files match the built-in spaces") {
  const std::filesystem::path root = TCSK_SOURCE_DIR;
  const SearchSpace model = load_search_space(root / "presets/space_model.toml");
  const SearchSpace gm = load_search_space(root / "presets/space_gridmask.toml");
  auto same = [](const SearchSpace& a, const SearchSpace& b) {
    REQUIRE(a.specs.size() == b.specs.size());
    for (std::size_t i = 0; i < a.specs.size(); ++i) {
      CHECK(a.specs[i].name == b.specs[i].name);
      CHECK(a.specs[i].kind == b.specs[i].kind);
      CHECK(a.specs[i].values == b.specs[i].values);
      CHECK(a.specs[i].low == b.specs[i].low);
      CHECK(a.specs[i].high == b.specs[i].high);
    }
  };
  same(model, model_search_space());
  same(gm, gridmask_search_space());
}

TEST_CASE("search space validation") {
  CHECK_THROWS_AS(SearchSpace{}.validate(), ConfigError);
  CHECK_THROWS_AS(ParamSpec::choice("a", {1}).validate(), ConfigError);
  CHECK_THROWS_AS(ParamSpec::uniform("a", 1, 1).validate(), ConfigError);
  CHECK_THROWS_AS((SearchSpace{{ParamSpec::uniform("a", 0, 1), ParamSpec::uniform("a", 0, 2)}}
                       .validate()),
                  ConfigError);
  CHECK_THROWS_AS(parse_search_space("[a]\ntype = \"normal\"\nspace = [0, 1]\n"), ConfigError);
  CHECK_THROWS_AS(parse_search_space("[a]\ntype = \"uniform\"\nspace = [0, 1, 2]\n"), ConfigError);
  CHECK_THROWS_AS(parse_search_space("[a]\ntype = \"uniform\"\nspace = [0, 1]\nstep = 2\n"),
                  ConfigError);
  Rng rng(1);
  CHECK_THROWS_AS(tpe_suggest({}, SearchSpace{}, {}, rng), ConfigError);
}

TEST_CASE("prior samples stay inside the space") {
  Rng rng(2);
  const SearchSpace gm = gridmask_search_space();
  const SearchSpace model = model_search_space();
  for (int i = 0; i < 2000; ++i) {
    const ParamConfig g = sample_prior(gm, rng);
    CHECK(g.at("p") >= 0.5);
    CHECK(g.at("p") <= 1.0);
    CHECK(g.at("mr") >= 0.1);
    CHECK(g.at("mr") <= 0.5);
    CHECK(model.contains(sample_prior(model, rng)));
  }
}

TEST_CASE("prior choice frequencies are balanced") {
  const SearchSpace coin{{ParamSpec::choice("c", {3, 8})}};
  Rng rng(3);
  int threes = 0;
  for (int i = 0; i < 10000; ++i) threes += sample_prior(coin, rng).at("c") == 3 ? 1 : 0;
  CHECK(threes / 10000.0 >= 0.47);
  CHECK(threes / 10000.0 <= 0.53);
}

TEST_CASE("empty history falls back to the prior") {
  const SearchSpace space = combined_space();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng a(seed), b(seed);
    CHECK(tpe_suggest({}, space, {}, a) == sample_prior(space, b));
  }
}

TEST_CASE("10000 suggestions conform to the search spaces") {
  Rng rng(4);
  const SearchSpace space = combined_space();
  const std::vector<Trial> history = random_history(space, 40, rng);
  int inside = 0;
  for (int i = 0; i < 10000; ++i) {
    const ParamConfig c = tpe_suggest(history, space, {}, rng);
    inside += space.contains(c) ? 1 : 0;
  }
  CHECK(inside == 10000);
}

TEST_CASE("only the rank order of objectives matters") {
  Rng rng(5);
  const SearchSpace space = combined_space();
  std::vector<Trial> history = random_history(space, 25, rng);
  std::vector<Trial> ranked = history;
  std::vector<std::size_t> order(history.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return history[a].objective < history[b].objective; });
  for (std::size_t r = 0; r < order.size(); ++r) ranked[order[r]].objective = static_cast<double>(r);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng a(seed), b(seed);
    CHECK(tpe_suggest(history, space, {}, a) == tpe_suggest(ranked, space, {}, b));
  }
}

TEST_CASE("equal objectives still give in-space suggestions") {
  Rng rng(6);
  const SearchSpace space = combined_space();
  std::vector<Trial> history = random_history(space, 30, rng);
  for (auto& t : history) t.objective = 0.5;
  for (int i = 0; i < 200; ++i) CHECK(space.contains(tpe_suggest(history, space, {}, rng)));
}

TEST_CASE("failed and out-of-space trials are ignored by the densities") {
  Rng rng(7);
  const SearchSpace space = unit_interval();
  std::vector<Trial> history = random_history(space, 12, rng);
  std::vector<Trial> padded = history;
  Trial failed;
  failed.config = {{"x", 0.9}};
  failed.status = TrialStatus::failed;
  failed.objective = std::nan("");
  padded.push_back(failed);
  Trial stray;
  stray.config = {{"x", 7.0}};
  stray.status = TrialStatus::complete;
  stray.objective = 10.0;
  padded.push_back(stray);
  Rng a(1), b(1);
  CHECK(tpe_suggest(history, space, {}, a) == tpe_suggest(padded, space, {}, b));
}

TEST_CASE("TPE finds the optimum of a 1-D parabola") {
  int hits = 0;
  std::vector<double> tpe_best, random_best;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Trial best = run_search(unit_interval(), parabola, budget(60, seed));
    tpe_best.push_back(best.objective);
    random_best.push_back(run_search(unit_interval(), parabola, random_search(60, seed)).objective);
    hits += best.objective >= -1e-3 ? 1 : 0;
  }
  MESSAGE("1-D hits " << hits << "/20, TPE median " << median(tpe_best) << ", random median "
                      << median(random_best));
  CHECK(hits >= 18);
  CHECK(median(tpe_best) >= median(random_best));
}

TEST_CASE("TPE beats random search on a 2-D bowl") {
  int hits = 0;
  std::vector<double> tpe_best, random_best;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Trial best = run_search(unit_square(), bowl, budget(60, seed));
    tpe_best.push_back(best.objective);
    random_best.push_back(run_search(unit_square(), bowl, random_search(60, seed)).objective);
    hits += best.objective >= -5e-3 ? 1 : 0;
  }
  MESSAGE("2-D hits " << hits << "/20, TPE median " << median(tpe_best) << ", random median "
                      << median(random_best));
  CHECK(hits >= 15);
  CHECK(median(tpe_best) >= median(random_best));
}

TEST_CASE("search with a budget of one returns the prior trial") {
  std::vector<Trial> history;
  const Trial t = run_search(unit_interval(), parabola, budget(1, 3), nullptr, &history);
  REQUIRE(history.size() == 1);
  CHECK(t == history[0]);
  Rng rng = Rng(3).fork(5).fork(0);
  CHECK(t.config == sample_prior(unit_interval(), rng));
  CHECK(t.seed == trial_seed(3, 0));
  CHECK(t.wall_time_s == 0.0);
}

TEST_CASE("trial store round trip and resume") {
  testing::TempDir dir("store");
  const TrialStore full(dir / "full.jsonl");
  run_search(unit_square(), bowl, budget(16, 9), &full);
  const std::vector<Trial> loaded = full.load();
  REQUIRE(loaded.size() == 16);
  for (const auto& t : loaded) CHECK(trial_from_json(trial_to_json(t)) == t);

  const TrialStore part(dir / "part.jsonl");
  run_search(unit_square(), bowl, budget(11, 9), &part);
  run_search(unit_square(), bowl, budget(16, 9), &part);
  CHECK(testing::read_file(dir / "part.jsonl") == testing::read_file(dir / "full.jsonl"));

  Rng a(42), b(42);
  std::vector<Trial> in_memory;
  run_search(unit_square(), bowl, budget(16, 9), nullptr, &in_memory);
  CHECK(tpe_suggest(in_memory, unit_square(), {}, a) == tpe_suggest(loaded, unit_square(), {}, b));
}

TEST_CASE("trial store rejects malformed lines") {
  testing::TempDir dir("store_bad");
  {
    std::ofstream out(dir / "bad.jsonl");
    out << R"({"trial_id":0,"seed":1,"config":{"x":0.5},"objective":0.1,"status":"complete","wall_time_s":0})"
        << "\n{not json}\n";
  }
  CHECK_THROWS_WITH_AS(TrialStore(dir / "bad.jsonl").load(), doctest::Contains(":2:"), FormatError);
  CHECK_THROWS_AS(trial_from_json(R"({"trial_id":0,"seed":1,"config":{},"objective":null,"status":"complete","wall_time_s":0})"),
                  FormatError);
  CHECK(TrialStore(dir / "absent.jsonl").load().empty());
}

TEST_CASE("failing evaluations are recorded and skipped") {
  const Evaluator flaky = [](const ParamConfig& c, std::uint64_t) {
    if (c.at("x") > 0.6) throw NumericError("diverged");
    return -c.at("x");
  };
  std::vector<Trial> history;
  const Trial best = run_search(unit_interval(), flaky, budget(30, 1), nullptr, &history);
  int failed = 0;
  for (const auto& t : history) {
    if (t.status == TrialStatus::failed) {
      ++failed;
      CHECK(std::isnan(t.objective));
      CHECK(t.config.at("x") > 0.6);
    }
  }
  CHECK(failed > 0);
  CHECK(best.status == TrialStatus::complete);

  const Evaluator broken = [](const ParamConfig&, std::uint64_t) { return std::nan(""); };
  CHECK_THROWS_AS(run_search(unit_interval(), broken, budget(3, 1)), Error);
}

TEST_CASE("two-stage search yields all eight parameters") {
  const Evaluator surrogate = [](const ParamConfig& c, std::uint64_t) {
    double score = -std::abs(std::log10(c.at("learning_rate")) + 3.0) - c.at("dropout");
    if (c.count("p")) score -= std::abs(c.at("p") - 0.6) + std::abs(c.at("mr") - 0.3);
    return score;
  };
  const TwoStageResult r = two_stage_search(model_search_space(), gridmask_search_space(),
                                            surrogate, budget(12, 1), budget(12, 2));
  CHECK(r.combined.size() == 8);
  CHECK(combined_space().contains(r.combined));
  for (const auto& [name, value] : r.model.config) CHECK(r.combined.at(name) == value);
  CHECK_THROWS_AS(two_stage_search(unit_interval(), unit_interval(), parabola, budget(2, 1),
                                   budget(2, 1)),
                  ConfigError);
}
