#include "rlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "rlab/csv.hpp"
#include "rlab/parallel.hpp"

namespace rlab::harness {

std::string task_name(Task t) {
  switch (t) {
    case Task::kMcPrediction: return "mc_prediction";
    case Task::kMcControl: return "mc_control";
    case Task::kAcrobotControl: return "acrobot_control";
  }
  throw std::invalid_argument("task_name: unknown task");
}

Task task_from_name(const std::string& name) {
  if (name == "mc_prediction") return Task::kMcPrediction;
  if (name == "mc_control") return Task::kMcControl;
  if (name == "acrobot_control") return Task::kAcrobotControl;
  throw std::invalid_argument("unknown task: " + name);
}

std::string preprocessing_name(Preprocessing p) {
  switch (p) {
    case Preprocessing::kRaw: return "raw";
    case Preprocessing::kDiscretize: return "discretize";
    case Preprocessing::kTilecode: return "tilecode";
  }
  throw std::invalid_argument("preprocessing_name: unknown preprocessing");
}

Preprocessing preprocessing_from_name(const std::string& name) {
  if (name == "raw") return Preprocessing::kRaw;
  if (name == "discretize") return Preprocessing::kDiscretize;
  if (name == "tilecode") return Preprocessing::kTilecode;
  throw std::invalid_argument("unknown preprocessing: " + name);
}

std::string profile_name(Profile p) {
  return p == Profile::kPaper ? "paper" : "desk";
}

Profile profile_from_name(const std::string& name) {
  if (name == "paper") return Profile::kPaper;
  if (name == "desk") return Profile::kDesk;
  throw std::invalid_argument("unknown profile: " + name);
}

bool is_control(Task t) { return t != Task::kMcPrediction; }

feat::BoundsSpec bounds_for(Task t) {
  return t == Task::kAcrobotControl ? feat::BoundsSpec::acrobot()
                                    : feat::BoundsSpec::mountain_car();
}

namespace {

constexpr int kMcBins = 20;
constexpr int kAcrobotBins = 32;
constexpr int kTilings = 8;
constexpr int kTilesPerDim = 4;
constexpr int kMcTileCapacity = 128;
constexpr int kAcrobotTileCapacity = 512;

}  // namespace

std::unique_ptr<feat::Featurizer> make_featurizer(Task t, Preprocessing p) {
  feat::BoundsSpec bounds = bounds_for(t);
  const bool acrobot = t == Task::kAcrobotControl;
  switch (p) {
    case Preprocessing::kRaw:
      return std::make_unique<feat::RawNormalizer>(std::move(bounds));
    case Preprocessing::kDiscretize:
      return std::make_unique<feat::Discretizer>(std::move(bounds),
                                                 acrobot ? kAcrobotBins : kMcBins);
    case Preprocessing::kTilecode: {
      feat::TileCoderConfig config;
      config.num_tilings = kTilings;
      config.tiles_per_dim = kTilesPerDim;
      config.capacity = acrobot ? kAcrobotTileCapacity : kMcTileCapacity;
      return std::make_unique<feat::TileCoder>(std::move(bounds), config);
    }
  }
  throw std::invalid_argument("make_featurizer: unknown preprocessing");
}

int feature_length(Task t, Preprocessing p) {
  return make_featurizer(t, p)->length();
}

void ExperimentConfig::validate() const {
  if (hidden_layers.empty()) {
    throw std::invalid_argument("config: hidden_layers must not be empty");
  }
  network_spec().validate();
  if (episodes < 1) throw std::invalid_argument("config: episodes must be >= 1");
  if (runs < 1) throw std::invalid_argument("config: runs must be >= 1");
  if (is_control(task) && cutoff_steps < 1) {
    throw std::invalid_argument("config: control tasks need cutoff_steps >= 1");
  }
  if (is_control(task) && measure_interference) {
    throw std::invalid_argument(
        "config: interference measurement applies to prediction only");
  }
  if (step_size_grid.empty()) {
    throw std::invalid_argument("config: step_size_grid must not be empty");
  }
  for (double a : step_size_grid) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw std::invalid_argument("config: step sizes must be positive");
    }
  }
  if (agent::uses_adam(system)) {
    if (beta1_grid.empty() || beta2_grid.empty()) {
      throw std::invalid_argument("config: Adam systems need beta grids");
    }
    for (double b : beta1_grid) {
      if (b < 0.0 || b >= 1.0) {
        throw std::invalid_argument("config: beta1 must lie in [0, 1)");
      }
    }
    for (double b : beta2_grid) {
      if (b < 0.0 || b >= 1.0) {
        throw std::invalid_argument("config: beta2 must lie in [0, 1)");
      }
    }
  }
  if (smooth_window < 1) {
    throw std::invalid_argument("config: smooth_window must be >= 1");
  }
  if (!(divergence_ceiling > 1.0)) {
    throw std::invalid_argument("config: divergence_ceiling must be > 1");
  }
  if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
  if (!is_control(task)) {
    if (dataset.path.empty()) {
      if (dataset.sample_size < 2 ||
          static_cast<long long>(dataset.sample_size) > dataset.walk_steps) {
        throw std::invalid_argument(
            "config: need 2 <= dataset.sample_size <= dataset.walk_steps");
      }
    }
  }
}

nets::NetworkSpec ExperimentConfig::network_spec() const {
  nets::NetworkSpec spec;
  spec.input_length = feature_length(task, preprocessing);
  spec.hidden_layers = hidden_layers;
  spec.outputs = is_control(task) ? env::kNumActions : 1;
  return spec;
}

agent::LearnerConfig ExperimentConfig::learner_config(double step_size,
                                                      double beta1,
                                                      double beta2) const {
  agent::LearnerConfig lc;
  lc.system = system;
  lc.step_size = step_size;
  lc.beta1 = beta1;
  lc.beta2 = beta2;
  lc.gamma = gamma;
  lc.exploration = exploration;
  lc.batch_size = batch_size;
  lc.replay_capacity = replay_capacity;
  lc.target_sync_period = target_sync_period;
  return lc;
}

namespace {

std::vector<double> power_of_two_grid(int from_exponent, int to_exponent,
                                      int stride) {
  // Entries 2^-c, emitted from the largest step size to the smallest.
  std::vector<double> grid;
  for (int c = from_exponent; c <= to_exponent; c += stride) {
    grid.push_back(std::ldexp(1.0, -c));
  }
  return grid;
}

}  // namespace

ExperimentConfig default_config(Task task, Profile profile) {
  ExperimentConfig cfg;
  cfg.task = task;
  const bool paper = profile == Profile::kPaper;
  const int stride = paper ? 1 : 2;

  switch (task) {
    case Task::kMcPrediction:
      cfg.hidden_layers = {50};
      cfg.step_size_grid = power_of_two_grid(3, 18, stride);
      cfg.cutoff_steps = 0;  // episodes run to termination
      cfg.episodes = paper ? 500 : 300;
      break;
    case Task::kMcControl:
      cfg.hidden_layers = {50};
      cfg.step_size_grid = power_of_two_grid(1, 18, stride);
      cfg.cutoff_steps = 1000;
      cfg.episodes = paper ? 500 : 300;
      break;
    case Task::kAcrobotControl:
      cfg.hidden_layers = {100};
      cfg.step_size_grid = power_of_two_grid(5, 18, stride);
      cfg.cutoff_steps = 500;
      cfg.episodes = paper ? 500 : 200;
      break;
  }
  cfg.runs = paper ? 30 : 10;
  cfg.beta1_grid = {0.9, 0.99, 0.999};
  cfg.beta2_grid = {0.9, 0.99, 0.999, 0.9999};
  cfg.dataset.walk_steps = paper ? 10000000LL : 100000LL;
  cfg.dataset.sample_size = 500;
  return cfg;
}

namespace {

template <class T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  Task task = Task::kMcPrediction;
  Profile profile = Profile::kDesk;
  if (j.contains("task")) task = task_from_name(j.at("task").get<std::string>());
  if (j.contains("profile")) {
    profile = profile_from_name(j.at("profile").get<std::string>());
  }
  ExperimentConfig cfg = default_config(task, profile);
  if (j.contains("preprocessing")) {
    cfg.preprocessing =
        preprocessing_from_name(j.at("preprocessing").get<std::string>());
  }
  if (j.contains("system")) {
    cfg.system = agent::system_from_name(j.at("system").get<std::string>());
  }
  read_field(j, "hidden_layers", cfg.hidden_layers);
  read_field(j, "episodes", cfg.episodes);
  read_field(j, "runs", cfg.runs);
  read_field(j, "cutoff_steps", cfg.cutoff_steps);
  read_field(j, "base_seed", cfg.base_seed);
  read_field(j, "step_size_grid", cfg.step_size_grid);
  read_field(j, "beta1_grid", cfg.beta1_grid);
  read_field(j, "beta2_grid", cfg.beta2_grid);
  read_field(j, "gamma", cfg.gamma);
  read_field(j, "exploration", cfg.exploration);
  read_field(j, "batch_size", cfg.batch_size);
  read_field(j, "replay_capacity", cfg.replay_capacity);
  read_field(j, "target_sync_period", cfg.target_sync_period);
  read_field(j, "measure_interference", cfg.measure_interference);
  read_field(j, "smooth_window", cfg.smooth_window);
  read_field(j, "divergence_ceiling", cfg.divergence_ceiling);
  if (j.contains("ttest")) {
    const std::string kind = j.at("ttest").get<std::string>();
    if (kind == "pooled") {
      cfg.ttest_kind = stats::TTestKind::kPooled;
    } else if (kind == "welch") {
      cfg.ttest_kind = stats::TTestKind::kWelch;
    } else {
      throw std::invalid_argument("unknown ttest kind: " + kind);
    }
  }
  if (j.contains("dataset")) {
    const auto& d = j.at("dataset");
    read_field(d, "walk_steps", cfg.dataset.walk_steps);
    read_field(d, "sample_size", cfg.dataset.sample_size);
    read_field(d, "path", cfg.dataset.path);
  }
  read_field(j, "workers", cfg.workers);
  return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["task"] = task_name(cfg.task);
  j["preprocessing"] = preprocessing_name(cfg.preprocessing);
  j["system"] = agent::system_name(cfg.system);
  j["hidden_layers"] = cfg.hidden_layers;
  j["episodes"] = cfg.episodes;
  j["runs"] = cfg.runs;
  j["cutoff_steps"] = cfg.cutoff_steps;
  j["base_seed"] = cfg.base_seed;
  j["step_size_grid"] = cfg.step_size_grid;
  j["beta1_grid"] = cfg.beta1_grid;
  j["beta2_grid"] = cfg.beta2_grid;
  j["gamma"] = cfg.gamma;
  j["exploration"] = cfg.exploration;
  j["batch_size"] = cfg.batch_size;
  j["replay_capacity"] = cfg.replay_capacity;
  j["target_sync_period"] = cfg.target_sync_period;
  j["measure_interference"] = cfg.measure_interference;
  j["smooth_window"] = cfg.smooth_window;
  j["divergence_ceiling"] = cfg.divergence_ceiling;
  j["ttest"] = cfg.ttest_kind == stats::TTestKind::kPooled ? "pooled" : "welch";
  j["dataset"] = {{"walk_steps", cfg.dataset.walk_steps},
                  {"sample_size", cfg.dataset.sample_size},
                  {"path", cfg.dataset.path}};
  j["workers"] = cfg.workers;
  return j;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  nlohmann::json j;
  in >> j;
  return config_from_json(j);
}

std::vector<ParamSetting> setting_grid(const ExperimentConfig& cfg) {
  std::vector<ParamSetting> grid;
  if (agent::uses_adam(cfg.system)) {
    grid.reserve(cfg.step_size_grid.size() * cfg.beta1_grid.size() *
                 cfg.beta2_grid.size());
    for (double alpha : cfg.step_size_grid) {
      for (double b1 : cfg.beta1_grid) {
        for (double b2 : cfg.beta2_grid) {
          grid.push_back({alpha, b1, b2});
        }
      }
    }
  } else {
    grid.reserve(cfg.step_size_grid.size());
    for (double alpha : cfg.step_size_grid) {
      grid.push_back({alpha, 0.0, 0.0});
    }
  }
  return grid;
}

std::vector<int> SweepResult::sensitivity_indices() const {
  if (best_index < 0) {
    throw std::logic_error("sensitivity_indices: sweep has no best setting");
  }
  const ParamSetting& best_setting = settings[best_index].setting;
  std::vector<int> indices;
  for (std::size_t i = 0; i < settings.size(); ++i) {
    const ParamSetting& s = settings[i].setting;
    if (s.beta1 == best_setting.beta1 && s.beta2 == best_setting.beta2) {
      indices.push_back(static_cast<int>(i));
    }
  }
  std::sort(indices.begin(), indices.end(), [&](int lhs, int rhs) {
    return settings[lhs].setting.step_size < settings[rhs].setting.step_size;
  });
  return indices;
}

eval::EvalDataset prepare_dataset(const ExperimentConfig& cfg) {
  if (cfg.task != Task::kMcPrediction) {
    throw std::invalid_argument("prepare_dataset: prediction task required");
  }
  if (!cfg.dataset.path.empty()) {
    const csv::Table table = csv::read_csv(cfg.dataset.path);
    const int pos = table.column("position");
    const int vel = table.column("velocity");
    const int val = table.column("true_value");
    if (pos < 0 || vel < 0 || val < 0) {
      throw std::runtime_error("dataset file missing required columns: " +
                               cfg.dataset.path);
    }
    eval::EvalDataset ds;
    for (const auto& row : table.rows) {
      ds.states.push_back({std::stod(row[pos]), std::stod(row[vel])});
      ds.true_values.push_back(std::stod(row[val]));
    }
    if (ds.size() < 2) {
      throw std::runtime_error("dataset file too small: " + cfg.dataset.path);
    }
    return ds;
  }
  return eval::build_eval_dataset(
      [](const env::MountainCar& car) { return env::energy_pumping_action(car); },
      cfg.dataset.walk_steps, cfg.dataset.sample_size,
      derive_seed(cfg.base_seed, seed_stream::kDataset));
}

namespace {

struct RunParts {
  Rng env_rng;
  std::unique_ptr<feat::Featurizer> featurizer;
  agent::Learner learner;
};

RunParts make_run_parts(const ExperimentConfig& cfg, const ParamSetting& setting,
                        std::uint64_t seed) {
  return RunParts{
      Rng(derive_seed(seed, seed_stream::kEnv)),
      make_featurizer(cfg.task, cfg.preprocessing),
      agent::Learner(cfg.learner_config(setting.step_size, setting.beta1,
                                        setting.beta2),
                     cfg.network_spec(), derive_seed(seed, seed_stream::kNet),
                     derive_seed(seed, seed_stream::kAgent)),
  };
}

template <class Env>
feat::FeatureVector encode_state(feat::Featurizer& featurizer, const Env& env) {
  const auto s = env.state();
  return featurizer.encode(std::span<const double>(s.begin(), s.end()));
}

template <class Env>
TrainedRun run_control_impl(const ExperimentConfig& cfg,
                            const ParamSetting& setting, std::uint64_t seed,
                            bool keep_net) {
  RunParts parts = make_run_parts(cfg, setting, seed);
  TrainedRun out;
  out.record.seed = seed;
  out.record.per_episode.assign(static_cast<std::size_t>(cfg.episodes),
                                static_cast<double>(cfg.cutoff_steps));
  Env env;
  for (int ep = 0; ep < cfg.episodes; ++ep) {
    env.reset(parts.env_rng);
    parts.learner.start_episode(encode_state(*parts.featurizer, env));
    int steps = 0;
    bool terminal = false;
    while (steps < cfg.cutoff_steps) {
      const env::StepResult sr = parts.learner.step_control(env, *parts.featurizer);
      ++steps;
      if (parts.learner.diverged()) break;
      if (sr.terminal) {
        terminal = true;
        break;
      }
    }
    const bool diverged =
        parts.learner.diverged() || !parts.learner.network().params_finite();
    if (diverged) {
      out.record.diverged = true;  // this and later episodes stay at cutoff
      break;
    }
    out.record.per_episode[ep] =
        terminal ? static_cast<double>(steps) : static_cast<double>(cfg.cutoff_steps);
  }
  if (keep_net) {
    out.net = parts.learner.network();
    out.featurizer = std::move(parts.featurizer);
  }
  return out;
}

TrainedRun run_prediction_impl(const ExperimentConfig& cfg,
                               const ParamSetting& setting, std::uint64_t seed,
                               const eval::EvalDataset* dataset, bool keep_net) {
  if (dataset == nullptr) {
    throw std::invalid_argument("run_single: prediction task needs a dataset");
  }
  RunParts parts = make_run_parts(cfg, setting, seed);
  const auto policy = [](const env::MountainCar& car) {
    return env::energy_pumping_action(car);
  };

  TrainedRun out;
  out.record.seed = seed;
  const double initial =
      eval::rve(parts.learner.network(), *parts.featurizer, *dataset);
  const double ceiling = cfg.divergence_ceiling * initial;
  out.record.per_episode.assign(static_cast<std::size_t>(cfg.episodes), ceiling);

  std::vector<int> schedule;
  if (cfg.measure_interference) {
    schedule = eval::interference_episodes(cfg.episodes);
  }
  const auto snapshot_due = [&](int completed) {
    return std::binary_search(schedule.begin(), schedule.end(), completed);
  };
  const auto take_snapshot = [&](int completed) {
    const eval::InterferenceResult r = eval::pairwise_interference(
        parts.learner.network(), *parts.featurizer, *dataset);
    out.record.snapshots.push_back({completed, r.mean});
  };
  if (snapshot_due(0)) take_snapshot(0);

  env::MountainCar env;
  for (int ep = 0; ep < cfg.episodes; ++ep) {
    env.reset(parts.env_rng);
    parts.learner.start_episode(encode_state(*parts.featurizer, env));
    long long steps = 0;
    while (true) {
      const env::StepResult sr =
          parts.learner.step_prediction(env, policy, *parts.featurizer);
      ++steps;
      if (parts.learner.diverged() || sr.terminal) break;
      if (steps >= eval::kRolloutCap) {
        throw std::runtime_error("prediction episode exceeded the step cap");
      }
    }
    bool diverged =
        parts.learner.diverged() || !parts.learner.network().params_finite();
    if (!diverged) {
      const double error =
          eval::rve(parts.learner.network(), *parts.featurizer, *dataset);
      if (std::isfinite(error) && error < ceiling) {
        out.record.per_episode[ep] = error;
      } else {
        diverged = true;  // error at or past the ceiling counts as divergence
      }
    }
    if (diverged) {
      out.record.diverged = true;  // this and later episodes stay at ceiling
      break;
    }
    if (snapshot_due(ep + 1)) take_snapshot(ep + 1);
  }
  if (keep_net) {
    out.net = parts.learner.network();
    out.featurizer = std::move(parts.featurizer);
  }
  return out;
}

TrainedRun run_impl(const ExperimentConfig& cfg, const ParamSetting& setting,
                    std::uint64_t seed, const eval::EvalDataset* dataset,
                    bool keep_net) {
  switch (cfg.task) {
    case Task::kMcPrediction:
      return run_prediction_impl(cfg, setting, seed, dataset, keep_net);
    case Task::kMcControl:
      return run_control_impl<env::MountainCar>(cfg, setting, seed, keep_net);
    case Task::kAcrobotControl:
      return run_control_impl<env::Acrobot>(cfg, setting, seed, keep_net);
  }
  throw std::invalid_argument("run_single: unknown task");
}

}  // namespace

RunRecord run_single(const ExperimentConfig& cfg, const ParamSetting& setting,
                     std::uint64_t seed, const eval::EvalDataset* dataset) {
  return run_impl(cfg, setting, seed, dataset, false).record;
}

TrainedRun run_single_trained(const ExperimentConfig& cfg,
                              const ParamSetting& setting, std::uint64_t seed,
                              const eval::EvalDataset* dataset) {
  return run_impl(cfg, setting, seed, dataset, true);
}

namespace {

void summarize_setting(SettingResult& setting) {
  setting.aucs.clear();
  setting.aucs.reserve(setting.runs.size());
  setting.diverged_runs = 0;
  for (const RunRecord& run : setting.runs) {
    setting.aucs.push_back(stats::auc(run.per_episode));
    if (run.diverged) ++setting.diverged_runs;
  }
  setting.mean_auc = stats::mean(setting.aucs);
  setting.se_auc =
      setting.aucs.size() > 1
          ? std::sqrt(stats::sample_variance(setting.aucs) /
                      static_cast<double>(setting.aucs.size()))
          : 0.0;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& cfg,
                      const eval::EvalDataset* dataset) {
  cfg.validate();
  const std::vector<ParamSetting> grid = setting_grid(cfg);
  SweepResult result;
  result.settings.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    result.settings[i].setting = grid[i];
    result.settings[i].runs.resize(static_cast<std::size_t>(cfg.runs));
  }
  const int jobs = static_cast<int>(grid.size()) * cfg.runs;
  parallel_for(jobs, cfg.workers, [&](int job) {
    const int si = job / cfg.runs;
    const int ri = job % cfg.runs;
    result.settings[si].runs[ri] = run_single(
        cfg, grid[si], cfg.base_seed + static_cast<std::uint64_t>(ri), dataset);
  });
  for (SettingResult& setting : result.settings) {
    summarize_setting(setting);
  }
  result.best_index = 0;
  for (std::size_t i = 1; i < result.settings.size(); ++i) {
    if (result.settings[i].mean_auc < result.settings[result.best_index].mean_auc) {
      result.best_index = static_cast<int>(i);
    }
  }
  return result;
}

std::vector<RunRecord> rerun_with_interference(const ExperimentConfig& cfg,
                                               const ParamSetting& setting,
                                               const eval::EvalDataset& dataset) {
  ExperimentConfig with_snapshots = cfg;
  with_snapshots.measure_interference = true;
  with_snapshots.validate();
  std::vector<RunRecord> records(static_cast<std::size_t>(cfg.runs));
  parallel_for(cfg.runs, cfg.workers, [&](int ri) {
    records[static_cast<std::size_t>(ri)] =
        run_single(with_snapshots, setting,
                   cfg.base_seed + static_cast<std::uint64_t>(ri), &dataset);
  });
  return records;
}

CompareResult compare(const ExperimentConfig& config_a,
                      const ExperimentConfig& config_b,
                      const eval::EvalDataset* dataset) {
  if (config_a.task != config_b.task) {
    throw std::invalid_argument("compare: tasks differ");
  }
  if (config_a.runs != config_b.runs || config_a.episodes != config_b.episodes) {
    throw std::invalid_argument("compare: runs/episodes differ");
  }
  CompareResult result;
  result.a = run_sweep(config_a, dataset);
  result.b = run_sweep(config_b, dataset);
  result.ttest = stats::two_sample_ttest(result.a.best().aucs,
                                         result.b.best().aucs,
                                         config_a.ttest_kind);
  return result;
}

std::vector<SizeSweepRow> network_size_sweep(const ExperimentConfig& config,
                                             SizeAxis axis,
                                             const std::vector<int>& sizes,
                                             const eval::EvalDataset& dataset) {
  if (is_control(config.task)) {
    throw std::invalid_argument("network_size_sweep: prediction task required");
  }
  if (sizes.empty()) {
    throw std::invalid_argument("network_size_sweep: no sizes given");
  }
  std::vector<SizeSweepRow> rows;
  rows.reserve(sizes.size());
  for (int size : sizes) {
    if (size < 1) {
      throw std::invalid_argument("network_size_sweep: sizes must be >= 1");
    }
    ExperimentConfig cfg = config;
    cfg.measure_interference = false;
    if (axis == SizeAxis::kHiddenUnits) {
      cfg.hidden_layers = {size};
    } else {
      cfg.hidden_layers.assign(static_cast<std::size_t>(size), 25);
    }
    const SweepResult sweep = run_sweep(cfg, &dataset);
    const std::vector<RunRecord> records =
        rerun_with_interference(cfg, sweep.best().setting, dataset);

    std::vector<double> per_run;
    per_run.reserve(records.size());
    for (const RunRecord& rec : records) {
      if (rec.snapshots.empty()) continue;  // run diverged before measuring
      double sum = 0.0;
      for (const auto& snap : rec.snapshots) sum += snap.mean;
      per_run.push_back(sum / static_cast<double>(rec.snapshots.size()));
    }
    if (per_run.size() < 2) {
      throw std::runtime_error(
          "network_size_sweep: too few non-diverged runs at size " +
          std::to_string(size));
    }
    SizeSweepRow row;
    row.size = size;
    row.mean_interference = stats::mean(per_run);
    row.sd_interference = std::sqrt(stats::sample_variance(per_run));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rlab::harness
