#pragma once

#include <string>
#include <vector>

#include "rlab/harness.hpp"

namespace rlab::harness {

// All writers emit a header row and deterministic shortest-round-trip number
// formatting, so identical results produce byte-identical files.

// episode, mean, stderr: per-episode series smoothed per run, then averaged
// across runs. Episodes are numbered from 1.
void write_learning_curve_csv(const std::string& path,
                              const std::vector<RunRecord>& runs,
                              int smooth_window);

// step_size, mean_auc, stderr: the step-size slice through the best setting.
void write_sensitivity_csv(const std::string& path, const SweepResult& sweep);

// step_size, beta1, beta2, mean_auc, stderr, diverged_runs: every setting.
void write_sweep_summary_csv(const std::string& path, const SweepResult& sweep);

// episode, mean_pi, stderr: interference snapshots averaged across the runs
// that reached each scheduled episode (at least two required per row).
void write_interference_csv(const std::string& path,
                            const std::vector<RunRecord>& runs);

// run, episode, value, diverged: raw per-run series. Episodes from 1;
// diverged is 0/1 for the whole run.
void write_runs_csv(const std::string& path, const std::vector<RunRecord>& runs);

// run, auc: per-run area under the raw curve.
void write_auc_csv(const std::string& path, const std::vector<RunRecord>& runs);

// task, system, preprocessing_a, preprocessing_b, t, df, p, significant
void write_ttest_csv(const std::string& path, const std::string& task,
                     const std::string& system, const std::string& label_a,
                     const std::string& label_b, const stats::TTestResult& result);

// position, velocity, true_value
void write_dataset_csv(const std::string& path, const eval::EvalDataset& dataset);

// unit, x0, x1, activation
void write_response_map_csv(const std::string& path,
                            const std::vector<nets::ResponseEntry>& entries);

// size, mean_pi, sd
void write_size_sweep_csv(const std::string& path,
                          const std::vector<SizeSweepRow>& rows);

}  // namespace rlab::harness
