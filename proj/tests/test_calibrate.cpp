#include <cmath>
#include <memory>

#include "doctest.h"
#include "odcal/calibrate.hpp"
#include "odcal/error.hpp"
#include "oracles.hpp"

using namespace odcal;

namespace {

CalibrationProblem problem_for(Model model, const std::vector<std::optional<double>>& h,
                               std::size_t n = 300) {
  CalibrationProblem p;
  p.model = model;
  p.survey = synth_dataset(n, 0.1, 0.08, 0.06, 5);
  p.network = std::make_shared<const SocialNetwork>(generate_ba(n, 3, 6));
  p.c_th = ConcernThreshold(0.9);
  for (std::size_t i = 0; i < h.size(); ++i)
    p.targets.points.push_back({"2023-" + std::to_string(i + 1), h[i]});
  p.steps_per_period = 1000;
  p.replicates = 3;
  return p;
}

OptimizerConfig small_config(Algorithm a, std::size_t pop, std::size_t budget) {
  OptimizerConfig c;
  c.algorithm = a;
  c.population = pop;
  c.budget = budget;
  return c;
}

}  // namespace

TEST_CASE("genome dimensions per model") {
  CHECK(bounds_for(Model::FJ, 15).dimension() == 15);
  CHECK(bounds_for(Model::DW, 15).dimension() == 30);
  CHECK(bounds_for(Model::ATBCR, 15).dimension() == 45);
  CHECK(bounds_for(Model::ATBCR, 15).pairs.size() == 15);
  CHECK(bounds_for(Model::DW, 15).pairs.empty());
}

TEST_CASE("bounds follow the calibration domain") {
  const auto b = bounds_for(Model::ATBCR, 2);
  CHECK(b.lo[0] == kMinConvergenceSpeed);
  CHECK(b.hi[0] == 0.5);
  CHECK(b.lo[1] == 0.0);
  CHECK(b.hi[1] == 0.5);
  CHECK(b.lo[2] == 0.5);
  CHECK(b.hi[2] == 1.0);
  CHECK(b.pairs[1].lower == 4);
  CHECK(b.pairs[1].upper == 5);
  CHECK(b.pairs[1].min_gap == 0.1);
  CHECK(b.pairs[1].max_gap == 0.9);
  const auto f = bounds_for(Model::FJ, 1);
  CHECK(f.lo[0] == 0.1);
  CHECK(f.hi[0] == 1.0);
}

TEST_CASE("decode examples") {
  Genome fj(15);
  for (std::size_t i = 0; i < 15; ++i) fj[i] = 0.1 + 0.05 * double(i);
  const auto s = decode(fj, Model::FJ, 15, 100);
  CHECK(s.size() == 15);
  for (std::size_t i = 0; i < 15; ++i) CHECK(std::get<FjParams>(s[i]).xi == fj[i]);

  Genome at(45, 0.5);
  at[0] = 0.15;
  at[1] = 0.07;
  at[2] = 0.85;
  const auto a = decode(at, Model::ATBCR, 15, 13500);
  CHECK(std::get<AtbcrParams>(a[0]) == AtbcrParams{0.15, 0.07, 0.85});
  CHECK(a.steps_per_period() == 13500);

  CHECK_THROWS_AS(decode(Genome(44, 0.5), Model::ATBCR, 15, 1), InvalidGenome);
  CHECK_THROWS_AS(decode(Genome(29, 0.5), Model::DW, 15, 1), InvalidGenome);
}

TEST_CASE("decode and encode round-trip for every model") {
  Rng rng(4);
  for (Model m : {Model::FJ, Model::DW, Model::ATBCR}) {
    const auto b = bounds_for(m, 15);
    for (int t = 0; t < 100; ++t) {
      Genome g(b.dimension());
      for (std::size_t d = 0; d < g.size(); ++d) g[d] = rng.uniform(b.lo[d], b.hi[d]);
      repair(g, b);
      const auto s = decode(g, m, 15, 10);
      REQUIRE(encode(s) == g);
      REQUIRE(decode(encode(s), m, 15, 10) == s);
    }
  }
}

TEST_CASE("calibration is reproducible and its search fitness is replayable") {
  const auto p = problem_for(Model::ATBCR, {0.22, 0.3, std::nullopt, 0.25});
  const auto cfg = small_config(Algorithm::DE, 10, 60);
  const auto a = run_calibration(p, cfg, 31);
  const auto b = run_calibration(p, cfg, 31);
  CHECK(a.best == b.best);
  CHECK(a.search_fitness == b.search_fitness);
  CHECK(a.reevaluated == b.reevaluated);
  CHECK(a.evaluations == 60);
  CHECK(a.seeds.optimizer == mix_seed(31, 1));

  const auto replay = evaluate(a.best, p, p.replicates, a.seeds.search, a.best_tag);
  CHECK(replay.mean_mape == a.search_fitness);
  CHECK(a.schedule == decode(a.best, Model::ATBCR, 4, p.steps_per_period));
  CHECK(a.period_labels.front() == "2023-1");

  CalibrationOptions threaded;
  threaded.threads = 3;
  const auto c = run_calibration(p, cfg, 31, threaded);
  CHECK(c.best == a.best);
  CHECK(c.reevaluated == a.reevaluated);
}

TEST_CASE("calibration observer sees exactly the budgeted feasible genomes") {
  const auto p = problem_for(Model::ATBCR, {0.22, 0.3});
  const auto b = bounds_for(Model::ATBCR, 2);
  for (Algorithm alg : {Algorithm::DE, Algorithm::SHADE, Algorithm::LSHADE, Algorithm::PSO}) {
    std::size_t seen = 0, infeasible = 0;
    CalibrationOptions opt;
    opt.reevaluation_replicates = 2;
    opt.on_evaluate = [&](std::span<const double> g) {
      ++seen;
      infeasible += !b.feasible(g);
    };
    run_calibration(p, small_config(alg, 8, 50), 2, opt);
    CHECK(seen == 50);
    CHECK(infeasible == 0);
  }
}

TEST_CASE("constant targets make deactivated DW optimal") {
  auto p = problem_for(Model::DW, {});
  const double c0 = p.survey.mentioned_fraction();
  for (int i = 0; i < 3; ++i) p.targets.points.push_back({"m" + std::to_string(i), c0});
  const auto r = run_calibration(p, small_config(Algorithm::DE, 20, 400), 8);
  CHECK(r.search_fitness < 0.05);
  CHECK(r.reevaluated.mean_mape < 1.0);
}

TEST_CASE("re-evaluated fitness stays within three standard errors of the search") {
  const auto p = problem_for(Model::DW, {0.2, 0.22, 0.25}, 400);
  auto q = p;
  q.replicates = 10;
  CalibrationOptions opt;
  opt.reevaluation_replicates = 10;
  const auto r = run_calibration(q, small_config(Algorithm::SHADE, 10, 100), 5, opt);
  const double se = r.reevaluated.standard_error();
  CHECK(std::abs(r.reevaluated.mean_mape - r.search_fitness) <= 3.0 * se + 1e-9);
}

TEST_CASE("result files round-trip") {
  testutil::TempDir dir("calib");
  const auto p = problem_for(Model::ATBCR, {0.22, std::nullopt, 0.25});
  CalibrationOptions opt;
  opt.reevaluation_replicates = 2;
  const auto r = run_calibration(p, small_config(Algorithm::PSO, 6, 24), 1, opt);
  write_result(r, p, dir.path());

  const auto params = read_params(dir / "best_params.csv");
  CHECK(params.model == Model::ATBCR);
  CHECK(params.labels == r.period_labels);
  CHECK(params.genome == r.best);

  const auto concern = testutil::read_file(dir / "concern.csv");
  CHECK(concern.rfind("period,simulated,target\n", 0) == 0);
  CHECK(concern.find("2023-2,") != std::string::npos);
  CHECK(concern.find(",0.22\n") != std::string::npos);

  const auto conv = testutil::read_file(dir / "convergence.csv");
  CHECK(conv.rfind("evaluations,best,mean,population\n6,", 0) == 0);
}

TEST_CASE("read_params rejects broken files") {
  testutil::TempDir dir("params");
  testutil::write_file(dir / "a.csv", "period,param,value\np1,mu,0.1\np1,eps,0.1\np2,mu,0.2\n");
  CHECK_THROWS_AS(read_params(dir / "a.csv"), ParseError);
  testutil::write_file(dir / "b.csv", "period,param,value\np1,xi,0.3\np2,mu,0.1\n");
  CHECK_THROWS_AS(read_params(dir / "b.csv"), ParseError);
  testutil::write_file(dir / "c.csv", "period,param,value\np1,xi,abc\n");
  CHECK_THROWS_AS(read_params(dir / "c.csv"), ParseError);
  testutil::write_file(dir / "d.csv", "period,param,value\np1,mu,0.1\np1,eps,0.2\np2,mu,0.3\np2,eps,0.0\n");
  const auto d = read_params(dir / "d.csv");
  CHECK(d.model == Model::DW);
  CHECK(d.genome == Genome{0.1, 0.2, 0.3, 0.0});
}

TEST_CASE("problem validation") {
  auto p = problem_for(Model::DW, {0.2});
  p.network = std::make_shared<const SocialNetwork>(generate_ba(100, 3, 1));
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p = problem_for(Model::DW, {});
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
}
