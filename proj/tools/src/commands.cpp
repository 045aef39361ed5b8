#include "commands.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>

#include "CLI11.hpp"
#include "config.hpp"
#include "odcal/calibrate.hpp"
#include "odcal/csv.hpp"
#include "odcal/error.hpp"
#include "odcal/fitness.hpp"
#include "odcal/parallel.hpp"

namespace odcal::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct Overrides {
  fs::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<fs::path> out;
  std::optional<fs::path> params;
  bool grid = false;
  bool snapshots = false;
};

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

RunConfig resolved_config(const Overrides& o) {
  RunConfig c = load_config(o.config);
  if (o.seed) c.seed = o.seed;
  if (o.threads) c.threads = o.threads;
  if (o.out) c.out = fs::absolute(*o.out).lexically_normal();
  if (o.params) c.params = fs::absolute(*o.params).lexically_normal();
  if (o.snapshots) c.snapshots = true;
  c.validate();
  if (!c.seed) c.seed = entropy_seed();
  if (c.survey.empty()) throw ConfigError("config: \"survey\" is required");
  if (c.targets.empty()) throw ConfigError("config: \"targets\" is required");
  return c;
}

std::size_t thread_count(const RunConfig& c) { return c.threads ? *c.threads : default_threads(); }

// Survey, targets and the shared network, loaded once per invocation.
struct Inputs {
  SurveyDataset survey;
  TargetSeries targets;
  std::shared_ptr<const SocialNetwork> network;
};

Inputs load_inputs(RunConfig& c) {
  Inputs in;
  in.survey = parse_survey(c.survey);
  in.targets = parse_targets(c.targets);
  if (c.network.edge_list) {
    in.network = std::make_shared<const SocialNetwork>(read_edge_list(*c.network.edge_list, in.survey.size()));
    if (in.network->size() != in.survey.size())
      throw ConfigError("edge list has " + std::to_string(in.network->size()) + " nodes, survey has " +
                        std::to_string(in.survey.size()) + " respondents");
  } else if (!c.network.regenerate_per_replicate) {
    if (!c.network.seed) c.network.seed = mix_seed(*c.seed, 0);
    in.network = std::make_shared<const SocialNetwork>(
        generate_ba(in.survey.size(), c.network.m, *c.network.seed));
  }
  return in;
}

CalibrationProblem make_problem(const RunConfig& c, const Inputs& in) {
  CalibrationProblem p;
  p.model = c.model;
  p.network = in.network;
  p.survey = in.survey;
  p.c_th = ConcernThreshold(c.c_th);
  p.targets = in.targets;
  p.steps_per_period = c.steps_per_period;
  p.replicates = c.replicates;
  p.normalization = c.mape_normalization;
  p.simulation.fj_update = c.fj_update;
  p.simulation.steps_per_day = c.steps_per_day;
  p.regenerate_network = c.network.regenerate_per_replicate;
  p.network_m = c.network.m;
  p.validate();
  return p;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::string task_name(Model m, Algorithm a, double c_th) {
  return lower(to_string(m)) + "_" + lower(to_string(a)) + "_cth" + csv::format(c_th);
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f%%", v);
  return buf;
}

Json seeds_json(const CalibrationSeeds& s) {
  return Json{{"master", s.master}, {"optimizer", s.optimizer}, {"search", s.search},
              {"reevaluation", s.reevaluation}};
}

// One calibration with its own seed, written to `dir` with a replayable echo.
void calibrate_task(RunConfig task, const Inputs& in, std::ostream& out) {
  const CalibrationProblem problem = make_problem(task, in);
  CalibrationOptions options;
  options.threads = thread_count(task);
  options.reevaluation_replicates = task.reevaluation_replicates;
  const CalibrationResult r = run_calibration(problem, task.optimizer, *task.seed, options);

  write_result(r, problem, task.out);
  Json echo = to_json(task);
  Json per_period = Json::array();
  for (const auto& e : r.reevaluated.per_period_error)
    per_period.push_back(e ? Json(*e) : Json(nullptr));
  echo["result"] = Json{{"search_mape", r.search_fitness},
                        {"search_evaluation", r.best_tag},
                        {"mape", r.reevaluated.mean_mape},
                        {"standard_error", r.reevaluated.standard_error()},
                        {"per_replicate_mape", r.reevaluated.per_replicate},
                        {"per_period_error", per_period},
                        {"evaluations", r.evaluations},
                        {"final_population", r.final_population},
                        {"seeds", seeds_json(r.seeds)}};
  write_json(echo, task.out / "config.json");
  out << to_string(task.model) << ' ' << to_string(task.algorithm) << " c_th=" << csv::format(task.c_th)
      << " mape=" << percent(r.reevaluated.mean_mape) << " (search " << percent(r.search_fitness) << ") -> " << task.out.string() << '\n';
}

int cmd_calibrate(const Overrides& o, std::ostream& out) {
  RunConfig c = resolved_config(o);
  Inputs in = load_inputs(c);
  const fs::path root = fs::absolute(c.out).lexically_normal();
  const std::uint64_t master = *c.seed;

  struct Cell {
    Model model;
    Algorithm algorithm;
    double c_th;
  };
  std::vector<Cell> cells;
  const bool grid = o.grid || c.grid.has_value();
  if (grid) {
    const GridConfig g = c.grid.value_or(GridConfig{});
    const auto models = g.models.empty() ? std::vector<Model>{Model::FJ, Model::DW, Model::ATBCR} : g.models;
    const auto thresholds = g.c_th.empty() ? std::vector<double>{0.6, 0.75, 0.9} : g.c_th;
    const auto algorithms = g.algorithms.empty() ? std::vector<Algorithm>{c.algorithm} : g.algorithms;
    for (auto m : models)
      for (double t : thresholds)
        for (auto a : algorithms) cells.push_back({m, a, t});
  } else {
    cells.push_back({c.model, c.algorithm, c.c_th});
  }

  for (std::size_t k = 0; k < cells.size(); ++k) {
    RunConfig task = c;
    task.grid.reset();
    task.model = cells[k].model;
    task.algorithm = cells[k].algorithm;
    task.optimizer.algorithm = cells[k].algorithm;
    task.c_th = cells[k].c_th;
    const std::uint64_t task_seed = grid ? mix_seed(master, 1000 + k) : master;
    const fs::path dir = grid ? root / task_name(task.model, task.algorithm, task.c_th) : root;
    for (std::size_t rep = 0; rep < c.repetitions; ++rep) {
      RunConfig run = task;
      run.repetitions = 1;
      run.seed = c.repetitions > 1 ? mix_seed(task_seed, rep) : task_seed;
      run.out = c.repetitions > 1 ? dir / ("rep_" + std::to_string(rep)) : dir;
      calibrate_task(run, in, out);
    }
  }
  return kSuccess;
}

int cmd_simulate(const Overrides& o, std::ostream& out) {
  RunConfig c = resolved_config(o);
  if (!c.params) throw ConfigError("simulate needs a parameter file (--params or \"params\")");
  const ParamsFile params = read_params(*c.params);
  Inputs in = load_inputs(c);
  if (params.model != c.model)
    throw ConfigError("parameter file is for " + std::string(to_string(params.model)) + ", config model is " +
                      std::string(to_string(c.model)));
  if (params.labels.size() != in.targets.size())
    throw ConfigError("parameter file has " + std::to_string(params.labels.size()) + " periods, targets have " +
                      std::to_string(in.targets.size()));
  const ParameterSchedule schedule = decode(params.genome, c.model, params.labels.size(), c.steps_per_period);
  for (std::size_t p = 0; p < schedule.size(); ++p)
    if (!within_domain(schedule[p], 1e-12))
      throw ConfigError("parameters of period '" + params.labels[p] + "' are outside the model's domain");

  const CalibrationProblem problem = make_problem(c, in);
  const CalibrationSeeds seeds = CalibrationSeeds::derive(*c.seed);
  const std::size_t periods = schedule.size();
  std::vector<HorizonResult> runs(c.replicates);
  parallel_for(c.replicates, thread_count(c), [&](std::size_t r) {
    runs[r] = run_replicate(schedule, problem, replicate_seed(seeds.search, 0, r), c.snapshots && r == 0);
  });

  const fs::path dir = fs::absolute(c.out).lexically_normal();
  fs::create_directories(dir);
  std::vector<double> mean(periods, 0.0);
  std::vector<double> mapes;
  for (const auto& run : runs) {
    for (std::size_t p = 0; p < periods; ++p) mean[p] += run.concern[p];
    mapes.push_back(mape(run.concern, in.targets, c.mape_normalization));
  }
  for (double& m : mean) m /= static_cast<double>(runs.size());
  write_concern(mean, in.targets, dir / "concern.csv");

  {
    std::ofstream rep(dir / "concern_replicates.csv");
    rep << "replicate,period,concern\n";
    for (std::size_t r = 0; r < runs.size(); ++r)
      for (std::size_t p = 0; p < periods; ++p)
        rep << r << ',' << in.targets.points[p].period << ',' << csv::format(runs[r].concern[p]) << '\n';
    if (!rep) throw std::runtime_error("write failed: " + (dir / "concern_replicates.csv").string());
  }
  if (c.snapshots) {
    std::ofstream snap(dir / "snapshots.csv");
    snap << "period,agent,opinion\n";
    const auto& shots = runs[0].snapshots;
    for (std::size_t s = 0; s < shots.size(); ++s) {
      const std::string label = s == 0 ? "initial" : in.targets.points[s - 1].period;
      for (std::size_t i = 0; i < shots[s].size(); ++i)
        snap << label << ',' << i << ',' << csv::format(shots[s][i]) << '\n';
    }
    if (!snap) throw std::runtime_error("write failed: " + (dir / "snapshots.csv").string());
  }

  FitnessValue f;
  f.per_replicate = mapes;
  for (double m : mapes) f.mean_mape += m;
  f.mean_mape /= static_cast<double>(mapes.size());
  RunConfig echo_cfg = c;
  echo_cfg.out = dir;
  Json echo = to_json(echo_cfg);
  echo["result"] = Json{{"mape", f.mean_mape},
                        {"standard_error", f.standard_error()},
                        {"per_replicate_mape", mapes},
                        {"stream_seed", seeds.search}};
  write_json(echo, dir / "config.json");
  out << "simulated " << runs.size() << " replicates, mape=" << percent(f.mean_mape) << " -> "
      << dir.string() << '\n';
  return kSuccess;
}

struct SynthArgs {
  std::size_t n = 3961;
  double p1 = 0.0, p2 = 0.0, p3 = 0.0;
  fs::path trend;
  std::optional<std::size_t> months;
  std::optional<std::uint64_t> seed;
  fs::path out = ".";
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  TargetSeries series = parse_targets(a.trend);
  if (a.months) {
    if (*a.months == 0 || *a.months > series.size())
      throw ConfigError("--months must be between 1 and " + std::to_string(series.size()));
    series.points.resize(*a.months);
    validate_targets(series);
  }
  const std::uint64_t seed = a.seed ? *a.seed : entropy_seed();
  SurveyDataset survey = synth_dataset(a.n, a.p1, a.p2, a.p3, seed);
  fs::create_directories(a.out);
  write_survey(survey, a.out / "survey.csv");
  write_targets(series, a.out / "targets.csv");
  out << "seed " << seed << ": " << survey.size() << " respondents, " << series.size() << " months ("
      << series.present_count() << " with data) -> " << a.out.string() << '\n';
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Calibrate opinion-dynamics models to a concern time series", "odcal"};
  app.require_subcommand(1);

  Overrides cal;
  auto* calibrate = app.add_subcommand("calibrate", "Fit per-period parameters with an evolutionary algorithm");
  calibrate->add_option("--config", cal.config, "Run config (JSON)")->required();
  calibrate->add_option("--seed", cal.seed, "Master seed (drawn from entropy when absent)");
  calibrate->add_option("--threads", cal.threads, "Worker threads for fitness evaluation");
  calibrate->add_option("--out", cal.out, "Result directory");
  calibrate->add_flag("--grid", cal.grid, "Enumerate model x c_th x algorithm");

  Overrides sim;
  auto* simulate = app.add_subcommand("simulate", "Run a parameter schedule and report concern");
  simulate->add_option("--config", sim.config, "Run config (JSON)")->required();
  simulate->add_option("--params", sim.params, "Parameter file (period,param,value)");
  simulate->add_option("--seed", sim.seed, "Master seed (drawn from entropy when absent)");
  simulate->add_option("--threads", sim.threads, "Worker threads");
  simulate->add_option("--out", sim.out, "Output directory");
  simulate->add_flag("--snapshots", sim.snapshots, "Write per-period opinions of replicate 0");

  SynthArgs syn;
  auto* synth = app.add_subcommand("synth", "Write a synthetic survey and target series");
  synth->add_option("--n", syn.n, "Respondents")->capture_default_str();
  synth->add_option("--p1", syn.p1, "Share naming the topic first");
  synth->add_option("--p2", syn.p2, "Share naming the topic second");
  synth->add_option("--p3", syn.p3, "Share naming the topic third");
  synth->add_option("--trend", syn.trend, "Trend file (period,proportion; blank = missing)")->required();
  synth->add_option("--months", syn.months, "Use only the first N months of the trend");
  synth->add_option("--seed", syn.seed, "Seed (drawn from entropy when absent)");
  synth->add_option("--out", syn.out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigFailure;
  }

  try {
    if (*calibrate) return cmd_calibrate(cal, out);
    if (*simulate) return cmd_simulate(sim, out);
    return cmd_synth(syn, out);
  } catch (const std::invalid_argument& e) {
    err << "odcal: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const ParseError& e) {
    err << "odcal: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const std::exception& e) {
    err << "odcal: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}

}  // namespace odcal::cli
