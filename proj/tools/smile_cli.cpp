#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smile/benchmark.hpp"
#include "smile/environment.hpp"
#include "smile/errors.hpp"
#include "smile/evaluation.hpp"
#include "smile/io.hpp"
#include "smile/parallel.hpp"
#include "smile/predictions.hpp"
#include "smile/runner.hpp"

#ifndef SMILE_GIT_DESCRIBE
#define SMILE_GIT_DESCRIBE "unknown"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

/// Output path problems count as usage errors.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::string task = "gaussian";
  std::vector<double> sigma{1.0};
  std::vector<double> s{1.0};
  std::vector<double> pc{0.1};
  std::vector<double> pc_assumed;
  int T = 1000;
  int tune_T = 0;
  std::uint64_t seed = 1;
  int seeds = 1;
  int tune_seeds = 3;
  std::vector<std::string> algorithms;
  std::vector<std::string> fixed;
  int particles = 20;
  std::string out = ".";
  std::string use_tuned;
  int which = 1;
  int subjects = 20;
  int transient_max = 100;
  int threads = smile::default_threads();
  double weight_cutoff = smile::kPracticalCutoff;
  bool algorithms_explicit = false;

  bool gaussian() const { return task == "gaussian"; }
  const std::vector<double>& env_params() const { return gaussian() ? sigma : s; }
  int tuning_horizon() const { return tune_T > 0 ? tune_T : T; }
};

json to_json(const Options& o) {
  json j;
  j["task"] = o.task;
  j[o.gaussian() ? "sigma" : "s"] = o.env_params();
  j["pc"] = o.pc;
  if (!o.pc_assumed.empty()) j["pc_assumed"] = o.pc_assumed;
  j["T"] = o.T;
  j["tune_T"] = o.tuning_horizon();
  j["seed"] = o.seed;
  j["seeds"] = o.seeds;
  j["tune_seeds"] = o.tune_seeds;
  j["algorithms"] = o.algorithms;
  j["fixed"] = o.fixed;
  j["particles"] = o.particles;
  j["use_tuned"] = o.use_tuned;
  j["which"] = o.which;
  j["subjects"] = o.subjects;
  j["transient_max"] = o.transient_max;
  j["weight_cutoff"] = o.weight_cutoff;
  return j;
}

// --- config file -----------------------------------------------------------

template <class T>
void take(const json& j, const char* key, const CLI::Option* opt, T& target) {
  if (!j.contains(key) || opt->count() > 0) return;
  target = j.at(key).get<T>();
}

template <class T>
void take(const json& j, const char* key, const CLI::Option* opt, std::vector<T>& target) {
  if (!j.contains(key) || opt->count() > 0) return;
  const json& v = j.at(key);
  target = v.is_array() ? v.get<std::vector<T>>() : std::vector<T>{v.get<T>()};
}

struct Bound {
  std::map<std::string, CLI::Option*> opts;
};

void apply_config(Options& o, const Bound& b) {
  o.algorithms_explicit = b.opts.at("algorithms")->count() > 0;
  if (o.config.empty()) return;
  std::ifstream in(o.config);
  if (!in) throw smile::ContractViolation("cannot read config file '" + o.config + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw smile::ContractViolation("config file '" + o.config + "': " + e.what());
  }
  smile::require(j.is_object(), "config file must hold a JSON object");
  for (const auto& item : j.items())
    if (!b.opts.count(item.key())) throw smile::ContractViolation("config file: unknown field '" + item.key() + "'");
  try {
    const auto& m = b.opts;
    take(j, "task", m.at("task"), o.task);
    take(j, "sigma", m.at("sigma"), o.sigma);
    take(j, "s", m.at("s"), o.s);
    take(j, "pc", m.at("pc"), o.pc);
    if (m.count("pc_assumed")) take(j, "pc_assumed", m.at("pc_assumed"), o.pc_assumed);
    take(j, "T", m.at("T"), o.T);
    take(j, "tune_T", m.at("tune_T"), o.tune_T);
    take(j, "seed", m.at("seed"), o.seed);
    take(j, "seeds", m.at("seeds"), o.seeds);
    take(j, "tune_seeds", m.at("tune_seeds"), o.tune_seeds);
    take(j, "algorithms", m.at("algorithms"), o.algorithms);
    if (j.contains("algorithms")) o.algorithms_explicit = true;
    take(j, "fixed", m.at("fixed"), o.fixed);
    take(j, "particles", m.at("particles"), o.particles);
    take(j, "out", m.at("out"), o.out);
    take(j, "use_tuned", m.at("use_tuned"), o.use_tuned);
    if (m.count("which")) take(j, "which", m.at("which"), o.which);
    take(j, "subjects", m.at("subjects"), o.subjects);
    take(j, "transient_max", m.at("transient_max"), o.transient_max);
    take(j, "threads", m.at("threads"), o.threads);
    take(j, "weight_cutoff", m.at("weight_cutoff"), o.weight_cutoff);
  } catch (const json::exception& e) {
    throw smile::ContractViolation(std::string("config file: ") + e.what());
  }
}

Bound add_common(CLI::App* sub, Options& o) {
  Bound b;
  auto& m = b.opts;
  sub->add_option("--config", o.config, "JSON file with default values for any flag");
  m["task"] = sub->add_option("--task", o.task, "gaussian | categorical")->capture_default_str();
  m["sigma"] = sub->add_option("--sigma", o.sigma, "Gaussian observation noise values")->delimiter(',')->capture_default_str();
  m["s"] = sub->add_option("--s", o.s, "Dirichlet concentration values")->delimiter(',')->capture_default_str();
  m["pc"] = sub->add_option("--pc", o.pc, "change probabilities in (0, 1)")->delimiter(',')->capture_default_str();
  m["T"] = sub->add_option("--T", o.T, "horizon")->capture_default_str();
  m["tune_T"] = sub->add_option("--tune-T", o.tune_T, "horizon of tuning runs (0: same as --T)")->capture_default_str();
  m["seed"] = sub->add_option("--seed", o.seed, "first seed")->capture_default_str();
  m["seeds"] = sub->add_option("--seeds", o.seeds, "number of consecutive seeds")->capture_default_str();
  m["tune_seeds"] = sub->add_option("--tune-seeds", o.tune_seeds, "traces per tuning grid point")->capture_default_str();
  m["algorithms"] =
      sub->add_option("--algorithms", o.algorithms, "exact, mpN, pfN, varsmile, smile, nas10, nas12, leaky")
          ->delimiter(',');
  m["fixed"] = sub->add_option("--fixed", o.fixed, "label=value parameter overrides")->delimiter(',');
  m["particles"] = sub->add_option("--particles", o.particles, "N for bare 'mp' / 'pf'")->capture_default_str();
  m["out"] = sub->add_option("--out", o.out, "output directory")->capture_default_str();
  m["use_tuned"] = sub->add_option("--use-tuned", o.use_tuned, "tuned.csv written by the tune command");
  m["subjects"] = sub->add_option("--subjects", o.subjects, "simulated subjects (predict)")->capture_default_str();
  m["transient_max"] =
      sub->add_option("--transient-max", o.transient_max, "largest run length in transient curves")->capture_default_str();
  m["threads"] = sub->add_option("--threads", o.threads, "worker threads")->capture_default_str();
  m["weight_cutoff"] = sub->add_option("--weight-cutoff", o.weight_cutoff, "particle weight pruning threshold")
                           ->capture_default_str();
  return b;
}

// --- validation and helpers ------------------------------------------------

void validate(Options& o) {
  using smile::require;
  require(o.task == "gaussian" || o.task == "categorical", "--task must be gaussian or categorical");
  require(!o.env_params().empty(), o.gaussian() ? "--sigma needs a value" : "--s needs a value");
  for (double v : o.env_params()) require(v > 0.0, o.gaussian() ? "--sigma must be > 0" : "--s must be > 0");
  require(!o.pc.empty(), "--pc needs a value");
  for (double p : o.pc) require(p > 0.0 && p < 1.0, "--pc values must lie in (0, 1)");
  for (double p : o.pc_assumed) require(p > 0.0 && p < 1.0, "--pc-assumed values must lie in (0, 1)");
  require(o.T >= 1, "--T must be >= 1");
  require(o.tune_T >= 0, "--tune-T must be >= 0");
  require(o.seeds >= 1 && o.tune_seeds >= 1, "--seeds and --tune-seeds must be >= 1");
  require(o.particles >= 1, "--particles must be >= 1");
  require(o.subjects >= 1, "--subjects must be >= 1");
  require(o.transient_max >= 1, "--transient-max must be >= 1");
  require(o.weight_cutoff >= 0.0 && o.weight_cutoff < 1.0, "--weight-cutoff must lie in [0, 1)");
  if (o.threads < 1) o.threads = 1;
  if (!o.gaussian() && !o.algorithms_explicit)
    std::erase_if(o.algorithms, [](const std::string& a) { return a.rfind("nas", 0) == 0; });
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string cell_label(const Options& o, double env_param, double p_c) {
  return std::string(o.gaussian() ? "sigma=" : "s=") + short_number(env_param) + ";pc=" + short_number(p_c);
}

smile::EnvConfig make_env(const Options& o, double env_param, double p_c, int horizon, std::uint64_t seed) {
  return o.gaussian() ? smile::gaussian_task(env_param, p_c, horizon, seed)
                      : smile::categorical_task(env_param, p_c, horizon, seed);
}

std::vector<smile::AlgorithmSpec> parse_algorithms(const Options& o) {
  std::vector<smile::AlgorithmSpec> out;
  for (std::string token : o.algorithms) {
    if (token == "mp" || token == "pf") token += std::to_string(o.particles);
    smile::AlgorithmSpec spec = smile::parse_algorithm(token);
    spec.weight_cutoff = o.weight_cutoff;
    if (!o.gaussian() && (spec.kind == smile::Algorithm::Nas10 || spec.kind == smile::Algorithm::Nas12))
      throw smile::UnsupportedModel(smile::algorithm_label(spec) + " is defined for the Gaussian task only");
    out.push_back(spec);
  }
  smile::require(!out.empty(), "--algorithms needs at least one entry");
  return out;
}

std::map<std::string, double> parse_fixed(const Options& o) {
  std::map<std::string, double> out;
  for (const std::string& item : o.fixed) {
    const auto eq = item.find('=');
    smile::require(eq != std::string::npos, "--fixed entries look like label=value");
    try {
      out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw smile::ContractViolation("--fixed: bad value in '" + item + "'");
    }
  }
  return out;
}

using TunedTable = std::map<std::pair<std::string, std::string>, double>;

TunedTable read_tuned(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw smile::ContractViolation("missing tuned table '" + path + "'");
  TunedTable table;
  std::string line;
  std::getline(in, line);
  if (line != "algorithm,cell,param,mse") throw smile::ContractViolation("'" + path + "' is not a tuned table");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != 4) throw smile::ContractViolation("malformed tuned table row: " + line);
    table[{fields[0], fields[1]}] = std::stod(fields[2]);
  }
  return table;
}

/// Parameter source precedence: --fixed, then --use-tuned, then the default rule.
class ParameterSource {
 public:
  explicit ParameterSource(const Options& o) : o_(o), fixed_(parse_fixed(o)) {
    if (!o.use_tuned.empty()) tuned_ = read_tuned(o.use_tuned);
  }

  smile::AlgorithmSpec resolve(smile::AlgorithmSpec spec, double env_param, double p_c) const {
    const std::string label = smile::algorithm_label(spec);
    if (auto it = fixed_.find(label); it != fixed_.end()) {
      spec.param = it->second;
      return spec;
    }
    if (!o_.use_tuned.empty()) {
      const auto it = tuned_.find({label, cell_label(o_, env_param, p_c)});
      if (it == tuned_.end())
        throw smile::ContractViolation("tuned table has no entry for " + label + " at " + cell_label(o_, env_param, p_c));
      spec.param = it->second;
      return spec;
    }
    const smile::EnvConfig env = make_env(o_, env_param, p_c, o_.tuning_horizon(), o_.seed);
    return smile::resolve_parameter(spec, env, o_.tune_seeds, o_.threads);
  }

 private:
  const Options& o_;
  std::map<std::string, double> fixed_;
  TunedTable tuned_;
};

json spec_json(const smile::AlgorithmSpec& a) {
  json j;
  j["label"] = smile::algorithm_label(a);
  j["param"] = a.param;
  if (a.kind == smile::Algorithm::PF) j["resample_fraction"] = a.resample_fraction;
  if (a.kind == smile::Algorithm::ExactBayes || a.kind == smile::Algorithm::MPN) j["weight_cutoff"] = a.weight_cutoff;
  return j;
}

json seed_list(std::uint64_t first, int n) {
  json j = json::array();
  for (int k = 0; k < n; ++k) j.push_back(first + static_cast<std::uint64_t>(k));
  return j;
}

/// Writes `body` to out/name and a JSON sidecar next to it.
class Emitter {
 public:
  Emitter(const Options& o, std::string command) : dir_(o.out), command_(std::move(command)), spec_(to_json(o)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) throw OutputError("cannot create output directory '" + dir_.string() + "'");
  }

  void emit(const std::string& name, const std::string& body, const json& extra) const {
    const fs::path csv = dir_ / name;
    write(csv, body);
    json meta;
    meta["command"] = command_;
    meta["file"] = name;
    meta["git_describe"] = SMILE_GIT_DESCRIBE;
    meta["spec"] = spec_;
    for (const auto& item : extra.items()) meta[item.key()] = item.value();
    fs::path sidecar = csv;
    sidecar.replace_extension(".json");
    write(sidecar, meta.dump(2) + "\n");
    std::cout << csv.string() << "\n";
  }

 private:
  static void write(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << body;
    out.close();
    if (!out) throw OutputError("cannot write '" + path.string() + "'");
  }

  fs::path dir_;
  std::string command_;
  json spec_;
};

std::string env_param_name(const Options& o) { return o.gaussian() ? "sigma" : "s"; }

// --- commands --------------------------------------------------------------

void cmd_simulate(const Options& o) {
  const Emitter emitter(o, "simulate");
  // step tables only when algorithms were asked for
  const std::vector<smile::AlgorithmSpec> specs =
      o.algorithms.empty() ? std::vector<smile::AlgorithmSpec>{} : parse_algorithms(o);
  const ParameterSource source(o);
  for (double v : o.env_params())
    for (double p : o.pc)
      for (int k = 0; k < o.seeds; ++k) {
        const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(k);
        const smile::EnvTrace trace = smile::simulate(make_env(o, v, p, o.T, seed));
        std::ostringstream body;
        smile::write_trace_csv(body, trace);
        const std::string name = "trace_" + o.task + "_" + env_param_name(o) + short_number(v) + "_pc" +
                                 short_number(p) + "_seed" + std::to_string(seed) + ".csv";
        emitter.emit(name, body.str(), json{{"seeds", json::array({seed})}, {"cell", cell_label(o, v, p)}});
        for (const auto& spec : specs) {
          const smile::AlgorithmSpec resolved = source.resolve(spec, v, p);
          const smile::EnvConfig env = make_env(o, v, p, o.T, seed);
          std::ostringstream steps;
          smile::write_step_csv(steps, trace, smile::run(resolved, env.model, trace, seed, {true, false}));
          emitter.emit("steps_" + smile::algorithm_label(resolved) + "_" + name.substr(6), steps.str(),
                       json{{"seeds", json::array({seed})},
                            {"cell", cell_label(o, v, p)},
                            {"algorithms", json::array({spec_json(resolved)})}});
        }
      }
}

void cmd_tune(const Options& o) {
  const Emitter emitter(o, "tune");
  const auto algorithms = parse_algorithms(o);
  std::ostringstream best, grid;
  best << "algorithm,cell,param,mse\n";
  grid << "algorithm,cell,param,mse\n";
  for (const auto& base : algorithms)
    for (double v : o.env_params())
      for (double p : o.pc) {
        const smile::EnvConfig env = make_env(o, v, p, o.tuning_horizon(), o.seed);
        const auto res = smile::grid_search(base, env, smile::default_grid(base.kind), o.tune_seeds, o.threads);
        const std::string label = smile::algorithm_label(base);
        const std::string cell = cell_label(o, v, p);
        for (const auto& pt : res.table) {
          grid << label << ',' << cell << ',' << smile::format_number(pt.param) << ','
               << smile::format_number(pt.mse) << '\n';
          if (pt.param == res.best)
            best << label << ',' << cell << ',' << smile::format_number(pt.param) << ','
                 << smile::format_number(pt.mse) << '\n';
        }
      }
  const json extra{{"seeds", seed_list(o.seed, o.tune_seeds)}};
  emitter.emit("tuned.csv", best.str(), extra);
  emitter.emit("tune_grid.csv", grid.str(), extra);
}

void cmd_benchmark(const Options& o) {
  const Emitter emitter(o, "benchmark");
  const auto algorithms = parse_algorithms(o);
  const ParameterSource source(o);
  std::ostringstream results, heatmap, transient;
  const std::string head = "algorithm," + std::string("env_param") + ",p_c,param_value";
  results << head << ",seed,mse,delta_mse\n";
  heatmap << head << ",mean_delta_mse,sem_delta_mse\n";
  transient << "algorithm,env_param,p_c,n,mse\n";
  json resolved = json::array();
  for (double v : o.env_params())
    for (double p : o.pc) {
      std::vector<smile::AlgorithmSpec> specs;
      for (const auto& a : algorithms) specs.push_back(source.resolve(a, v, p));
      const smile::EnvConfig env = make_env(o, v, p, o.T, o.seed);
      const smile::CellReport cell =
          smile::benchmark_cell(specs, env, o.seeds, o.transient_max, o.weight_cutoff, o.threads);
      for (std::size_t a = 0; a < specs.size(); ++a) {
        const auto i = static_cast<Eigen::Index>(a);
        const std::string prefix = smile::algorithm_label(specs[a]) + ',' + smile::format_number(v) + ',' +
                                   smile::format_number(p) + ',' + smile::format_number(specs[a].param);
        for (int k = 0; k < o.seeds; ++k)
          results << prefix << ',' << o.seed + static_cast<std::uint64_t>(k) << ','
                  << smile::format_number(cell.mse(i, k)) << ',' << smile::format_number(cell.delta_mse(i, k)) << '\n';
        const smile::SampleSummary sum = smile::summarize_sample(cell.delta_mse.row(i).transpose().array());
        heatmap << prefix << ',' << smile::format_number(sum.mean) << ','
                << (std::isnan(sum.sem) ? std::string("NA") : smile::format_number(sum.sem)) << '\n';
        for (int n = 1; n <= o.transient_max; ++n)
          transient << smile::algorithm_label(specs[a]) << ',' << smile::format_number(v) << ','
                    << smile::format_number(p) << ',' << n << ','
                    << smile::format_number(cell.transient[a][static_cast<std::size_t>(n - 1)]) << '\n';
        json r = spec_json(specs[a]);
        r["cell"] = cell_label(o, v, p);
        resolved.push_back(r);
      }
    }
  const json extra{{"seeds", seed_list(o.seed, o.seeds)}, {"algorithms", resolved}};
  emitter.emit("results.csv", results.str(), extra);
  emitter.emit("heatmap.csv", heatmap.str(), extra);
  emitter.emit("transient.csv", transient.str(), extra);
}

void cmd_robustness(Options o) {
  if (o.pc_assumed.empty()) o.pc_assumed = o.pc;
  const Emitter emitter(o, "robustness");
  const auto algorithms = parse_algorithms(o);
  const ParameterSource source(o);
  for (const auto& base : algorithms) {
    const std::string label = smile::algorithm_label(base);
    std::ostringstream rows, summary;
    rows << "env_param,pc_assumed,param_value,p_c,seed,regret\n";
    summary << "env_param,pc_assumed,param_value,p_c,mean_regret,sem_regret\n";
    json resolved = json::array();
    for (double v : o.env_params())
      for (double assumed : o.pc_assumed) {
        const smile::AlgorithmSpec spec = source.resolve(base, v, assumed);
        const smile::EnvConfig env = make_env(o, v, assumed, o.T, o.seed);
        const smile::RegretCurve curve = smile::regret_curve(spec, env, o.pc, o.seeds, o.weight_cutoff, o.threads);
        const std::string prefix =
            smile::format_number(v) + ',' + smile::format_number(assumed) + ',' + smile::format_number(spec.param);
        for (std::size_t j = 0; j < curve.p_true.size(); ++j) {
          const auto i = static_cast<Eigen::Index>(j);
          for (int k = 0; k < o.seeds; ++k)
            rows << prefix << ',' << smile::format_number(curve.p_true[j]) << ','
                 << o.seed + static_cast<std::uint64_t>(k) << ',' << smile::format_number(curve.regret(i, k)) << '\n';
          const smile::SampleSummary s = smile::summarize_sample(curve.regret.row(i).transpose().array());
          summary << prefix << ',' << smile::format_number(curve.p_true[j]) << ',' << smile::format_number(s.mean)
                  << ',' << (std::isnan(s.sem) ? std::string("NA") : smile::format_number(s.sem)) << '\n';
        }
        json r = spec_json(spec);
        r["cell"] = cell_label(o, v, assumed);
        resolved.push_back(r);
      }
    const json extra{{"seeds", seed_list(o.seed, o.seeds)}, {"algorithms", resolved}};
    emitter.emit("regret_" + label + ".csv", rows.str(), extra);
    emitter.emit("regret_" + label + "_summary.csv", summary.str(), extra);
  }
}

void cmd_predict(const Options& o) {
  smile::require(o.which == 1 || o.which == 2, "--which must be 1 or 2");
  smile::require(o.gaussian(), "predict runs on the Gaussian task only");
  smile::require(o.sigma.size() == 1 && o.pc.size() == 1, "predict takes a single --sigma and --pc");
  const Emitter emitter(o, "predict");
  const ParameterSource source(o);
  for (const auto& base : parse_algorithms(o)) {
    smile::PredictionConfig cfg;
    cfg.algorithm = source.resolve(base, o.sigma[0], o.pc[0]);
    cfg.sigma = o.sigma[0];
    cfg.p_c = o.pc[0];
    cfg.horizon = o.T;
    cfg.subjects = o.subjects;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    std::ostringstream body;
    if (o.which == 1)
      smile::write_prediction1_csv(body, smile::run_prediction1(cfg));
    else
      smile::write_prediction2_csv(body, smile::run_prediction2(cfg));
    const json extra{{"seeds", seed_list(o.seed, o.subjects)},
                     {"algorithms", json::array({spec_json(cfg.algorithm)})},
                     {"bins",
                      {{"theta_anchor", cfg.theta_anchor},
                       {"d_theta", cfg.d_theta},
                       {"sigma_c", cfg.sigma_c},
                       {"d_sigma_c", cfg.d_sigma_c},
                       {"d_delta", cfg.d_delta},
                       {"delta_grid", cfg.delta_grid},
                       {"d_p", cfg.d_p},
                       {"p_grid", cfg.p_grid}}}};
    emitter.emit("prediction" + std::to_string(o.which) + "_" + smile::algorithm_label(cfg.algorithm) + ".csv",
                 body.str(), extra);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surprise-modulated online learning in changing environments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SMILE_GIT_DESCRIBE);

  const std::vector<std::string> all_gaussian{"exact", "mp20", "pf20", "varsmile", "smile", "nas10", "nas12", "leaky"};

  Options sim_o;
  auto* sim = app.add_subcommand("simulate", "write environment traces");
  const Bound sim_b = add_common(sim, sim_o);

  Options tune_o;
  tune_o.T = 10000;
  tune_o.tune_T = 0;
  tune_o.algorithms = all_gaussian;
  auto* tune = app.add_subcommand("tune", "grid-search each algorithm's free parameter");
  const Bound tune_b = add_common(tune, tune_o);

  Options bench_o;
  bench_o.T = 100000;
  bench_o.seeds = 10;
  bench_o.algorithms = all_gaussian;
  auto* bench = app.add_subcommand("benchmark", "delta-MSE tables and transient curves");
  const Bound bench_b = add_common(bench, bench_o);

  Options rob_o;
  rob_o.T = 10000;
  rob_o.seeds = 3;
  rob_o.sigma = {0.1};
  rob_o.pc = smile::change_probability_levels();
  rob_o.algorithms = all_gaussian;
  auto* rob = app.add_subcommand("robustness", "regret under a mismatched change probability");
  Bound rob_b = add_common(rob, rob_o);
  rob_b.opts["pc_assumed"] =
      rob->add_option("--pc-assumed", rob_o.pc_assumed, "assumed change probabilities (default: --pc)")->delimiter(',');

  Options pred_o;
  pred_o.T = 500;
  pred_o.sigma = {0.5};
  pred_o.pc = {0.1};
  pred_o.tune_T = 10000;
  pred_o.algorithms = {"nas12", "pf20"};
  auto* pred = app.add_subcommand("predict", "surprise discrimination tables");
  Bound pred_b = add_common(pred, pred_o);
  pred_b.opts["which"] = pred->add_option("--which", pred_o.which, "1: sign bias, 2: equal predictive")
                             ->check(CLI::IsMember({1, 2}))
                             ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (sim->parsed()) {
      apply_config(sim_o, sim_b);
      validate(sim_o);
      cmd_simulate(sim_o);
    } else if (tune->parsed()) {
      apply_config(tune_o, tune_b);
      validate(tune_o);
      cmd_tune(tune_o);
    } else if (bench->parsed()) {
      apply_config(bench_o, bench_b);
      validate(bench_o);
      cmd_benchmark(bench_o);
    } else if (rob->parsed()) {
      apply_config(rob_o, rob_b);
      validate(rob_o);
      cmd_robustness(rob_o);
    } else if (pred->parsed()) {
      apply_config(pred_o, pred_b);
      validate(pred_o);
      cmd_predict(pred_o);
    }
  } catch (const smile::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const smile::DomainError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const OutputError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
