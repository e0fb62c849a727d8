#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rlab/agent.hpp"
#include "rlab/eval.hpp"
#include "rlab/featurize.hpp"
#include "rlab/net.hpp"
#include "rlab/stats.hpp"

namespace rlab::harness {

enum class Task { kMcPrediction, kMcControl, kAcrobotControl };
enum class Preprocessing { kRaw, kDiscretize, kTilecode };
enum class Profile { kPaper, kDesk };

std::string task_name(Task t);
Task task_from_name(const std::string& name);
std::string preprocessing_name(Preprocessing p);
Preprocessing preprocessing_from_name(const std::string& name);
std::string profile_name(Profile p);
Profile profile_from_name(const std::string& name);

bool is_control(Task t);

feat::BoundsSpec bounds_for(Task t);
std::unique_ptr<feat::Featurizer> make_featurizer(Task t, Preprocessing p);
int feature_length(Task t, Preprocessing p);

struct DatasetConfig {
  long long walk_steps = 100000;
  int sample_size = 500;
  std::string path;  // optional CSV to load instead of rebuilding
};

struct ExperimentConfig {
  Task task = Task::kMcPrediction;
  Preprocessing preprocessing = Preprocessing::kTilecode;
  agent::System system = agent::System::kSgd;

  std::vector<int> hidden_layers;
  int episodes = 0;
  int runs = 0;
  int cutoff_steps = 0;          // control episode truncation
  std::uint64_t base_seed = 0;

  std::vector<double> step_size_grid;
  std::vector<double> beta1_grid;
  std::vector<double> beta2_grid;

  double gamma = 1.0;
  double exploration = 0.1;
  int batch_size = 32;
  int replay_capacity = 2000;
  int target_sync_period = 100;

  bool measure_interference = false;
  int smooth_window = 10;
  // A prediction run is flagged divergent once its error reaches
  // divergence_ceiling x the run's initial error.
  double divergence_ceiling = 10.0;
  stats::TTestKind ttest_kind = stats::TTestKind::kPooled;

  DatasetConfig dataset;
  int workers = 1;

  void validate() const;
  nets::NetworkSpec network_spec() const;
  agent::LearnerConfig learner_config(double step_size, double beta1,
                                      double beta2) const;
};

// Task defaults at two scales: `paper` reproduces the published protocol,
// `desk` is a single-machine profile (fewer runs and episodes, thinned
// step-size grid, shorter evaluation walk).
ExperimentConfig default_config(Task task, Profile profile);

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config_file(const std::string& path);

// One optimizer setting drawn from the grids. beta values are ignored (and
// recorded as 0) for SGD-family systems.
struct ParamSetting {
  double step_size = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
};

std::vector<ParamSetting> setting_grid(const ExperimentConfig& config);

struct RunRecord {
  std::uint64_t seed = 0;
  // Control: steps to goal per episode (cutoff when truncated or diverged).
  // Prediction: error measure after each episode (ceiling once diverged).
  std::vector<double> per_episode;
  std::vector<eval::InterferenceSnapshot> snapshots;
  bool diverged = false;
};

// Builds (or loads, when dataset.path is set) the shared evaluation dataset
// for prediction tasks. The dataset seed derives from base_seed only, so
// configurations that share a base seed share the dataset.
eval::EvalDataset prepare_dataset(const ExperimentConfig& config);

// One seeded run at one optimizer setting. Run index i uses seed
// base_seed + i; environment, initialization, and agent randomness come from
// substreams of that seed. `dataset` is required for prediction tasks.
RunRecord run_single(const ExperimentConfig& config, const ParamSetting& setting,
                     std::uint64_t seed, const eval::EvalDataset* dataset);

// Same, but also returns the trained network and its featurizer state.
struct TrainedRun {
  RunRecord record;
  std::optional<nets::Network> net;
  std::unique_ptr<feat::Featurizer> featurizer;
};
TrainedRun run_single_trained(const ExperimentConfig& config,
                              const ParamSetting& setting, std::uint64_t seed,
                              const eval::EvalDataset* dataset);

struct SettingResult {
  ParamSetting setting;
  std::vector<RunRecord> runs;
  std::vector<double> aucs;  // one per run, from the raw per-episode series
  double mean_auc = 0.0;
  double se_auc = 0.0;
  int diverged_runs = 0;
};

struct SweepResult {
  std::vector<SettingResult> settings;  // grid order
  int best_index = -1;                  // lowest mean AUC; first on ties

  const SettingResult& best() const { return settings.at(best_index); }
  // Positions of the settings sharing the best setting's betas, in step-size
  // order: the step-size sensitivity slice.
  std::vector<int> sensitivity_indices() const;
};

// Full grid sweep: every setting x every run index, parallelized over
// config.workers with results written to fixed slots (worker count and
// scheduling cannot change any output).
SweepResult run_sweep(const ExperimentConfig& config,
                      const eval::EvalDataset* dataset);

// Repeats one setting across all run seeds with interference snapshots
// enabled (the second phase of the interference protocol).
std::vector<RunRecord> rerun_with_interference(const ExperimentConfig& config,
                                               const ParamSetting& setting,
                                               const eval::EvalDataset& dataset);

struct CompareResult {
  SweepResult a;
  SweepResult b;
  stats::TTestResult ttest;  // on per-run AUCs at each side's best setting
};

// Runs both configurations (sharing run seeds and, for prediction, requiring
// the same dataset) and tests best-setting AUC samples against each other.
CompareResult compare(const ExperimentConfig& config_a,
                      const ExperimentConfig& config_b,
                      const eval::EvalDataset* dataset);

enum class SizeAxis { kHiddenUnits, kHiddenLayers };

struct SizeSweepRow {
  int size = 0;
  double mean_interference = 0.0;
  double sd_interference = 0.0;  // sample standard deviation across runs
};

// For each network size: sweep step sizes, then rerun the best setting with
// interference snapshots on, and summarize each run's time-averaged
// interference. Prediction tasks only.
std::vector<SizeSweepRow> network_size_sweep(const ExperimentConfig& config,
                                             SizeAxis axis,
                                             const std::vector<int>& sizes,
                                             const eval::EvalDataset& dataset);

}  // namespace rlab::harness
