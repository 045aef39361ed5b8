#include "odcal/calibrate.hpp"

#include <fstream>
#include <map>

#include "odcal/csv.hpp"
#include "odcal/error.hpp"
#include "odcal/parallel.hpp"

namespace odcal {

CalibrationSeeds CalibrationSeeds::derive(std::uint64_t master) noexcept {
  return {master, mix_seed(master, 1), mix_seed(master, 2), mix_seed(master, 3)};
}

CalibrationResult run_calibration(const CalibrationProblem& problem, const OptimizerConfig& config,
                                  std::uint64_t master_seed, const CalibrationOptions& options) {
  problem.validate();
  config.validate();
  const Bounds bounds = bounds_for(problem.model, problem.periods());
  const CalibrationSeeds seeds = CalibrationSeeds::derive(master_seed);

  std::uint64_t counter = 0;
  std::map<Genome, std::uint64_t> first_tag;  // genome -> evaluation index that scored it
  BatchObjective objective = [&](std::span<const Genome> genomes) {
    const std::uint64_t base = counter;
    counter += genomes.size();
    if (options.on_evaluate)
      for (const auto& g : genomes) options.on_evaluate(g);
    std::vector<double> f(genomes.size());
    parallel_for(genomes.size(), options.threads, [&](std::size_t i) {
      f[i] = evaluate(genomes[i], problem, problem.replicates, seeds.search, base + i).mean_mape;
    });
    for (std::size_t i = 0; i < genomes.size(); ++i) first_tag.try_emplace(genomes[i], base + i);
    return f;
  };

  OptimizeResult opt = optimize(objective, bounds, config, seeds.optimizer);
  const FitnessValue re = evaluate(opt.best, problem, options.reevaluation_replicates,
                                   seeds.reevaluation, 0, options.threads);

  std::vector<std::string> labels;
  labels.reserve(problem.periods());
  for (const auto& p : problem.targets.points) labels.push_back(p.period);

  return CalibrationResult{
      .model = problem.model,
      .algorithm = config.algorithm,
      .best = opt.best,
      .schedule = decode(opt.best, problem.model, problem.periods(), problem.steps_per_period),
      .search_fitness = opt.best_fitness,
      .best_tag = first_tag.at(opt.best),
      .reevaluated = re,
      .log = std::move(opt.log),
      .evaluations = opt.evaluations,
      .final_population = opt.final_population,
      .seeds = seeds,
      .period_labels = std::move(labels),
  };
}

std::vector<std::string> parameter_names(Model model) {
  switch (model) {
    case Model::FJ:
      return {"xi"};
    case Model::DW:
      return {"mu", "eps"};
    case Model::ATBCR:
      return {"mu", "eps", "theta"};
  }
  return {};
}

void write_best_params(const ParameterSchedule& schedule, const std::vector<std::string>& labels,
                       const std::filesystem::path& path) {
  if (labels.size() != schedule.size())
    throw InvalidParameter("period label count does not match schedule length");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  const auto names = parameter_names(schedule.model());
  const Genome g = encode(schedule);
  out << "period,param,value\n";
  for (std::size_t p = 0; p < schedule.size(); ++p)
    for (std::size_t k = 0; k < names.size(); ++k)
      out << labels[p] << ',' << names[k] << ',' << csv::format(g[p * names.size() + k]) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ParamsFile read_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open parameter file " + path.string());
  std::string line;
  if (!std::getline(in, line) || csv::trim(line) != "period,param,value")
    throw ParseError(path.string() + ": expected header 'period,param,value'", 1);

  struct Row {
    std::string label, name;
    double value;
    std::size_t line;
  };
  std::vector<Row> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (csv::trim(line).empty()) continue;
    const auto fields = csv::split(line);
    if (fields.size() != 3) throw ParseError("malformed parameter row", lineno);
    const auto value = csv::to_double(fields[2]);
    if (!value) throw ParseError("parameter value is not a number", lineno);
    rows.push_back({std::string(csv::trim(fields[0])), std::string(csv::trim(fields[1])), *value,
                    lineno});
  }
  if (rows.empty()) throw ParseError("parameter file has no rows");

  std::size_t first_period = 0;
  while (first_period < rows.size() && rows[first_period].label == rows.front().label)
    ++first_period;
  ParamsFile out{};
  bool matched = false;
  for (Model m : {Model::FJ, Model::DW, Model::ATBCR}) {
    const auto names = parameter_names(m);
    if (names.size() != first_period) continue;
    bool same = true;
    for (std::size_t k = 0; k < names.size(); ++k) same = same && rows[k].name == names[k];
    if (same) {
      out.model = m;
      matched = true;
    }
  }
  if (!matched) throw ParseError("first period does not list xi / mu,eps / mu,eps,theta", 2);

  const auto names = parameter_names(out.model);
  if (rows.size() % names.size() != 0)
    throw ParseError("last period '" + rows.back().label + "' is incomplete", rows.back().line);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t k = i % names.size();
    if (k == 0) out.labels.push_back(rows[i].label);
    if (rows[i].label != out.labels.back())
      throw ParseError("period '" + out.labels.back() + "' is incomplete", rows[i].line);
    if (rows[i].name != names[k])
      throw ParseError("expected parameter '" + names[k] + "', got '" + rows[i].name + "'",
                       rows[i].line);
    out.genome.push_back(rows[i].value);
  }
  return out;
}

void write_concern(std::span<const double> simulated, const TargetSeries& targets,
                   const std::filesystem::path& path) {
  if (simulated.size() != targets.size())
    throw InvalidParameter("simulated series length does not match targets");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "period,simulated,target\n";
  for (std::size_t p = 0; p < simulated.size(); ++p) {
    out << targets.points[p].period << ',' << csv::format(simulated[p]) << ',';
    if (targets.points[p].proportion) out << csv::format(*targets.points[p].proportion);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_convergence(const ConvergenceLog& log, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "evaluations,best,mean,population\n";
  for (const auto& r : log)
    out << r.evaluations << ',' << csv::format(r.best) << ',' << csv::format(r.mean) << ','
        << r.population << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_result(const CalibrationResult& result, const CalibrationProblem& problem,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_best_params(result.schedule, result.period_labels, dir / "best_params.csv");
  write_concern(result.reevaluated.mean_concern, problem.targets, dir / "concern.csv");
  write_convergence(result.log, dir / "convergence.csv");
}

}  // namespace odcal
