#include "config.hpp"

#include <fstream>
#include <set>

#include "odcal/csv.hpp"
#include "odcal/error.hpp"

namespace odcal::cli {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

// Walks one JSON object, rejecting keys nobody asked for.
class Section {
 public:
  Section(const Json& node, std::string where, std::set<std::string> ignored = {})
      : node_(node), where_(std::move(where)), ignored_(std::move(ignored)) {
    if (!node_.is_object()) fail(where_, "expected an object");
  }

  const Json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

  void finish() const {
    for (const auto& item : node_.items())
      if (!seen_.count(item.key()) && !ignored_.count(item.key()))
        fail(where_, "unknown key '" + item.key() + "'");
  }

  template <class T>
  void read(const std::string& key, T& out);

 private:
  const Json& node_;
  std::string where_;
  std::set<std::string> ignored_;
  std::set<std::string> seen_;
};

template <class T>
T as(const Json& v, const std::string& where) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) fail(where, "expected true or false");
    return v.get<bool>();
  } else if constexpr (std::is_same_v<T, double>) {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_unsigned()) fail(where, "expected a non-negative integer");
    return static_cast<T>(v.get<std::uint64_t>());
  } else {
    if (!v.is_string()) fail(where, "expected a string");
    return v.get<std::string>();
  }
}

template <class T>
void Section::read(const std::string& key, T& out) {
  if (const Json* v = find(key)) out = as<T>(*v, path(key));
}

Model model_from(const Json& v, const std::string& where) {
  try {
    return parse_model(as<std::string>(v, where));
  } catch (const InvalidParameter& e) {
    fail(where, e.what());
  }
}

Algorithm algorithm_from(const Json& v, const std::string& where) {
  try {
    return parse_algorithm(as<std::string>(v, where));
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

template <class T, class F>
std::vector<T> list(const Json& v, const std::string& where, F&& convert) {
  if (!v.is_array() || v.empty()) fail(where, "expected a non-empty array");
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(convert(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::string normalization_name(MapeNormalization n) {
  return n == MapeNormalization::AllPeriods ? "all_periods" : "present_targets";
}

std::string fj_update_name(FjUpdate u) {
  return u == FjUpdate::Synchronous ? "synchronous" : "asynchronous";
}

}  // namespace

void RunConfig::validate() const {
  if (!(c_th > 0.0 && c_th < 1.0)) fail("c_th", "must lie in (0,1)");
  if (steps_per_period == 0) fail("steps_per_period", "must be positive");
  if (replicates == 0) fail("replicates", "must be at least 1");
  if (reevaluation_replicates == 0) fail("reevaluation_replicates", "must be at least 1");
  if (repetitions == 0) fail("repetitions", "must be at least 1");
  if (steps_per_day == 0) fail("steps_per_day", "must be positive");
  if (network.m == 0) fail("network.m", "must be at least 1");
  if (threads && *threads == 0) fail("threads", "must be at least 1");
  if (grid)
    for (double c : grid->c_th)
      if (!(c > 0.0 && c < 1.0)) fail("grid.c_th", "values must lie in (0,1)");
  optimizer.validate();
}

RunConfig parse_config(const Json& doc, const fs::path& base_dir) {
  Section top(doc, "config", {"result"});
  const Json* schema = top.find("schema");
  if (!schema) fail("config", std::string("missing \"schema\" (expected \"") + kSchema + "\")");
  if (as<std::string>(*schema, "config.schema") != kSchema)
    fail("config.schema", "unsupported schema '" + schema->get<std::string>() + "'");

  RunConfig c;
  if (const Json* v = top.find("model")) c.model = model_from(*v, "config.model");
  if (const Json* v = top.find("algorithm")) c.algorithm = algorithm_from(*v, "config.algorithm");
  top.read("c_th", c.c_th);
  if (const Json* v = top.find("survey")) c.survey = resolve(base_dir, as<std::string>(*v, "config.survey"));
  if (const Json* v = top.find("targets")) c.targets = resolve(base_dir, as<std::string>(*v, "config.targets"));
  if (const Json* v = top.find("params")) c.params = resolve(base_dir, as<std::string>(*v, "config.params"));
  if (const Json* v = top.find("out")) c.out = resolve(base_dir, as<std::string>(*v, "config.out"));
  top.read("steps_per_period", c.steps_per_period);
  top.read("replicates", c.replicates);
  top.read("reevaluation_replicates", c.reevaluation_replicates);
  top.read("steps_per_day", c.steps_per_day);
  top.read("repetitions", c.repetitions);
  top.read("snapshots", c.snapshots);
  if (const Json* v = top.find("seed")) c.seed = as<std::uint64_t>(*v, "config.seed");
  if (const Json* v = top.find("threads")) c.threads = as<std::size_t>(*v, "config.threads");
  if (const Json* v = top.find("mape_normalization")) {
    const auto s = as<std::string>(*v, "config.mape_normalization");
    if (s == "present_targets") c.mape_normalization = MapeNormalization::PresentTargets;
    else if (s == "all_periods") c.mape_normalization = MapeNormalization::AllPeriods;
    else fail("config.mape_normalization", "expected present_targets or all_periods");
  }
  if (const Json* v = top.find("fj_update")) {
    const auto s = as<std::string>(*v, "config.fj_update");
    if (s == "asynchronous") c.fj_update = FjUpdate::Asynchronous;
    else if (s == "synchronous") c.fj_update = FjUpdate::Synchronous;
    else fail("config.fj_update", "expected asynchronous or synchronous");
  }

  if (const Json* v = top.find("network")) {
    Section net(*v, "config.network");
    net.read("m", c.network.m);
    net.read("regenerate_per_replicate", c.network.regenerate_per_replicate);
    if (const Json* s = net.find("seed")) c.network.seed = as<std::uint64_t>(*s, "config.network.seed");
    if (const Json* e = net.find("edge_list"))
      c.network.edge_list = resolve(base_dir, as<std::string>(*e, "config.network.edge_list"));
    net.finish();
  }

  if (const Json* v = top.find("optimizer")) {
    Section opt(*v, "config.optimizer");
    auto& o = c.optimizer;
    opt.read("population", o.population);
    opt.read("budget", o.budget);
    opt.read("de_cr", o.de_cr);
    opt.read("de_f", o.de_f);
    opt.read("shade_memory", o.shade_memory);
    opt.read("lshade_memory", o.lshade_memory);
    opt.read("lshade_min_population", o.lshade_min_population);
    opt.read("pbest_fraction", o.pbest_fraction);
    opt.read("archive_rate", o.archive_rate);
    opt.read("pso_c1", o.pso_c1);
    opt.read("pso_c2", o.pso_c2);
    opt.read("pso_w", o.pso_w);
    opt.finish();
  }

  if (const Json* v = top.find("grid")) {
    Section g(*v, "config.grid");
    GridConfig grid;
    if (const Json* m = g.find("models")) grid.models = list<Model>(*m, "config.grid.models", model_from);
    if (const Json* t = g.find("c_th"))
      grid.c_th = list<double>(*t, "config.grid.c_th", [](const Json& x, const std::string& w) { return as<double>(x, w); });
    if (const Json* a = g.find("algorithms"))
      grid.algorithms = list<Algorithm>(*a, "config.grid.algorithms", algorithm_from);
    g.finish();
    c.grid = std::move(grid);
  }
  top.finish();
  c.optimizer.algorithm = c.algorithm;
  c.validate();
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  return parse_config(doc, fs::absolute(path).parent_path());
}

Json to_json(const RunConfig& c) {
  Json j;
  j["schema"] = kSchema;
  j["model"] = std::string(to_string(c.model));
  j["algorithm"] = std::string(to_string(c.algorithm));
  j["c_th"] = c.c_th;
  j["survey"] = c.survey.string();
  j["targets"] = c.targets.string();
  if (c.params) j["params"] = c.params->string();

  Json net;
  net["m"] = c.network.m;
  if (c.network.seed) net["seed"] = *c.network.seed;
  if (c.network.edge_list) net["edge_list"] = c.network.edge_list->string();
  net["regenerate_per_replicate"] = c.network.regenerate_per_replicate;
  j["network"] = net;

  j["steps_per_period"] = c.steps_per_period;
  j["replicates"] = c.replicates;
  j["reevaluation_replicates"] = c.reevaluation_replicates;
  j["mape_normalization"] = normalization_name(c.mape_normalization);
  j["fj_update"] = fj_update_name(c.fj_update);
  j["steps_per_day"] = c.steps_per_day;

  const auto& o = c.optimizer;
  j["optimizer"] = Json{{"population", o.population},
                        {"budget", o.budget},
                        {"de_cr", o.de_cr},
                        {"de_f", o.de_f},
                        {"shade_memory", o.shade_memory},
                        {"lshade_memory", o.lshade_memory},
                        {"lshade_min_population", o.lshade_min_population},
                        {"pbest_fraction", o.pbest_fraction},
                        {"archive_rate", o.archive_rate},
                        {"pso_c1", o.pso_c1},
                        {"pso_c2", o.pso_c2},
                        {"pso_w", o.pso_w}};
  j["repetitions"] = c.repetitions;
  if (c.seed) j["seed"] = *c.seed;
  if (c.threads) j["threads"] = *c.threads;
  j["out"] = c.out.string();
  j["snapshots"] = c.snapshots;
  if (c.grid) {
    Json g = Json::object();
    if (!c.grid->models.empty()) {
      g["models"] = Json::array();
      for (auto m : c.grid->models) g["models"].push_back(std::string(to_string(m)));
    }
    if (!c.grid->c_th.empty()) g["c_th"] = c.grid->c_th;
    if (!c.grid->algorithms.empty()) {
      g["algorithms"] = Json::array();
      for (auto a : c.grid->algorithms) g["algorithms"].push_back(std::string(to_string(a)));
    }
    j["grid"] = g;
  }
  return j;
}

void write_json(const Json& doc, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace odcal::cli
