#include "rlab/emit.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "rlab/csv.hpp"

namespace rlab::harness {

namespace {

std::string fd(double v) { return csv::format_double(v); }
std::string fi(long long v) { return csv::format_int(v); }

}  // namespace

void write_learning_curve_csv(const std::string& path,
                              const std::vector<RunRecord>& runs,
                              int smooth_window) {
  if (runs.size() < 2) {
    throw std::invalid_argument("write_learning_curve_csv: need >= 2 runs");
  }
  std::vector<std::vector<double>> smoothed;
  smoothed.reserve(runs.size());
  for (const RunRecord& run : runs) {
    smoothed.push_back(stats::smooth(run.per_episode, smooth_window));
  }
  const stats::Aggregate agg = stats::aggregate(smoothed);
  csv::Writer out(path);
  out.row({"episode", "mean", "stderr"});
  for (std::size_t k = 0; k < agg.mean.size(); ++k) {
    out.row({fi(static_cast<long long>(k) + 1), fd(agg.mean[k]), fd(agg.se[k])});
  }
  out.finish();
}

void write_sensitivity_csv(const std::string& path, const SweepResult& sweep) {
  csv::Writer out(path);
  out.row({"step_size", "mean_auc", "stderr"});
  for (int index : sweep.sensitivity_indices()) {
    const SettingResult& s = sweep.settings[index];
    out.row({fd(s.setting.step_size), fd(s.mean_auc), fd(s.se_auc)});
  }
  out.finish();
}

void write_sweep_summary_csv(const std::string& path, const SweepResult& sweep) {
  csv::Writer out(path);
  out.row({"step_size", "beta1", "beta2", "mean_auc", "stderr", "diverged_runs"});
  for (const SettingResult& s : sweep.settings) {
    out.row({fd(s.setting.step_size), fd(s.setting.beta1), fd(s.setting.beta2),
             fd(s.mean_auc), fd(s.se_auc), fi(s.diverged_runs)});
  }
  out.finish();
}

void write_interference_csv(const std::string& path,
                            const std::vector<RunRecord>& runs) {
  // Collate snapshot values by episode, keeping schedule order.
  std::map<int, std::vector<double>> by_episode;
  for (const RunRecord& run : runs) {
    for (const auto& snap : run.snapshots) {
      by_episode[snap.episode].push_back(snap.mean);
    }
  }
  csv::Writer out(path);
  out.row({"episode", "mean_pi", "stderr"});
  for (const auto& [episode, values] : by_episode) {
    if (values.size() < 2) continue;  // divergence left a single straggler
    const double mean = stats::mean(values);
    const double se = std::sqrt(stats::sample_variance(values) /
                                static_cast<double>(values.size()));
    out.row({fi(episode), fd(mean), fd(se)});
  }
  out.finish();
}

void write_runs_csv(const std::string& path, const std::vector<RunRecord>& runs) {
  csv::Writer out(path);
  out.row({"run", "episode", "value", "diverged"});
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const std::string flag = runs[r].diverged ? "1" : "0";
    for (std::size_t k = 0; k < runs[r].per_episode.size(); ++k) {
      out.row({fi(static_cast<long long>(r)), fi(static_cast<long long>(k) + 1),
               fd(runs[r].per_episode[k]), flag});
    }
  }
  out.finish();
}

void write_auc_csv(const std::string& path, const std::vector<RunRecord>& runs) {
  csv::Writer out(path);
  out.row({"run", "auc"});
  for (std::size_t r = 0; r < runs.size(); ++r) {
    out.row({fi(static_cast<long long>(r)), fd(stats::auc(runs[r].per_episode))});
  }
  out.finish();
}

void write_ttest_csv(const std::string& path, const std::string& task,
                     const std::string& system, const std::string& label_a,
                     const std::string& label_b, const stats::TTestResult& result) {
  csv::Writer out(path);
  out.row({"task", "system", "preprocessing_a", "preprocessing_b", "t", "df", "p",
           "significant"});
  out.row({task, system, label_a, label_b, fd(result.t), fd(result.df),
           fd(result.p), result.significant ? "1" : "0"});
  out.finish();
}

void write_dataset_csv(const std::string& path, const eval::EvalDataset& dataset) {
  csv::Writer out(path);
  out.row({"position", "velocity", "true_value"});
  for (int i = 0; i < dataset.size(); ++i) {
    out.row({fd(dataset.states[i][0]), fd(dataset.states[i][1]),
             fd(dataset.true_values[i])});
  }
  out.finish();
}

void write_response_map_csv(const std::string& path,
                            const std::vector<nets::ResponseEntry>& entries) {
  csv::Writer out(path);
  out.row({"unit", "x0", "x1", "activation"});
  for (const auto& e : entries) {
    out.row({fi(e.unit), fd(e.x0), fd(e.x1), fd(e.activation)});
  }
  out.finish();
}

void write_size_sweep_csv(const std::string& path,
                          const std::vector<SizeSweepRow>& rows) {
  csv::Writer out(path);
  out.row({"size", "mean_pi", "sd"});
  for (const auto& row : rows) {
    out.row({fi(row.size), fd(row.mean_interference), fd(row.sd_interference)});
  }
  out.finish();
}

}  // namespace rlab::harness
