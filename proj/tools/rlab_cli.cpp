// Command-line front end for the experiment harness: single runs, step-size
// sweeps, preprocessing comparisons, evaluation datasets, interference
// measurements, network-size sweeps, response maps, t-tests, and SVG plots.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlab/csv.hpp"
#include "rlab/emit.hpp"
#include "rlab/harness.hpp"
#include "rlab/parallel.hpp"
#include "rlab/svg.hpp"

namespace fs = std::filesystem;
using rlab::harness::ExperimentConfig;
using rlab::harness::ParamSetting;
using rlab::harness::RunRecord;
using rlab::harness::SweepResult;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string task;
  std::string preprocessing;
  std::string system;
  std::string profile;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<int> episodes;
  std::optional<int> workers;
  std::string dataset_path;
  std::string out = "out";
};

void add_common_options(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--task", o.task, "mc_prediction | mc_control | acrobot_control")
      ->check(CLI::IsMember({"mc_prediction", "mc_control", "acrobot_control"}));
  cmd->add_option("--preprocessing", o.preprocessing,
                  "raw | discretize | tilecode")
      ->check(CLI::IsMember({"raw", "discretize", "tilecode"}));
  cmd->add_option("--system", o.system,
                  "sgd | sgd_er | adam | adam_er | adam_er_tn")
      ->check(CLI::IsMember({"sgd", "sgd_er", "adam", "adam_er", "adam_er_tn"}));
  cmd->add_option("--profile", o.profile, "paper | desk (default desk)")
      ->check(CLI::IsMember({"paper", "desk"}));
  cmd->add_option("--seed", o.seed, "base seed; run i uses base seed + i");
  cmd->add_option("--runs", o.runs, "independent runs");
  cmd->add_option("--episodes", o.episodes, "episodes per run");
  cmd->add_option("--workers", o.workers, "parallel worker threads");
  cmd->add_option("--dataset", o.dataset_path,
                  "evaluation dataset CSV to load instead of rebuilding");
  cmd->add_option("--out", o.out, "output directory");
}

ExperimentConfig build_config(const CommonOpts& o) {
  nlohmann::json j = nlohmann::json::object();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) {
      throw std::runtime_error("cannot open config file: " + o.config_path);
    }
    in >> j;
  }
  // Flags override file fields; defaults fill whatever remains.
  if (!o.task.empty()) j["task"] = o.task;
  if (!o.profile.empty()) j["profile"] = o.profile;
  if (!o.preprocessing.empty()) j["preprocessing"] = o.preprocessing;
  if (!o.system.empty()) j["system"] = o.system;
  if (o.seed) j["base_seed"] = *o.seed;
  if (o.runs) j["runs"] = *o.runs;
  if (o.episodes) j["episodes"] = *o.episodes;
  if (o.workers) j["workers"] = *o.workers;
  if (!o.dataset_path.empty()) j["dataset"]["path"] = o.dataset_path;
  return rlab::harness::config_from_json(j);
}

fs::path prepare_out_dir(const CommonOpts& o) {
  fs::path dir(o.out);
  fs::create_directories(dir);
  return dir;
}

void write_config_echo(const fs::path& dir, const ExperimentConfig& cfg) {
  std::ofstream out(dir / "config.json", std::ios::trunc);
  out << rlab::harness::config_to_json(cfg).dump(2) << "\n";
}

std::optional<rlab::eval::EvalDataset> dataset_for(const ExperimentConfig& cfg) {
  if (rlab::harness::is_control(cfg.task)) return std::nullopt;
  return rlab::harness::prepare_dataset(cfg);
}

ParamSetting setting_from(const ExperimentConfig& cfg, double alpha, double beta1,
                          double beta2) {
  ParamSetting s;
  s.step_size = alpha;
  if (rlab::agent::uses_adam(cfg.system)) {
    s.beta1 = beta1;
    s.beta2 = beta2;
  }
  return s;
}

std::vector<RunRecord> run_setting(const ExperimentConfig& cfg,
                                   const ParamSetting& setting,
                                   const rlab::eval::EvalDataset* dataset) {
  std::vector<RunRecord> records(static_cast<std::size_t>(cfg.runs));
  rlab::parallel_for(cfg.runs, cfg.workers, [&](int ri) {
    records[static_cast<std::size_t>(ri)] = rlab::harness::run_single(
        cfg, setting, cfg.base_seed + static_cast<std::uint64_t>(ri), dataset);
  });
  return records;
}

void emit_setting_outputs(const fs::path& dir, const ExperimentConfig& cfg,
                          const std::vector<RunRecord>& records) {
  rlab::harness::write_runs_csv((dir / "runs.csv").string(), records);
  rlab::harness::write_auc_csv((dir / "auc.csv").string(), records);
  if (records.size() >= 2) {
    rlab::harness::write_learning_curve_csv((dir / "curve.csv").string(), records,
                                            cfg.smooth_window);
  }
}

int cmd_run(const CommonOpts& o, double alpha, double beta1, double beta2,
            bool interference) {
  ExperimentConfig cfg = build_config(o);
  cfg.measure_interference = interference && !rlab::harness::is_control(cfg.task);
  cfg.validate();
  const fs::path dir = prepare_out_dir(o);
  write_config_echo(dir, cfg);
  const auto dataset = dataset_for(cfg);
  const ParamSetting setting = setting_from(cfg, alpha, beta1, beta2);
  const auto records = run_setting(cfg, setting, dataset ? &*dataset : nullptr);
  emit_setting_outputs(dir, cfg, records);
  if (cfg.measure_interference) {
    rlab::harness::write_interference_csv((dir / "interference.csv").string(),
                                          records);
  }
  int diverged = 0;
  for (const auto& r : records) diverged += r.diverged ? 1 : 0;
  std::printf("run: %s %s %s alpha=%s runs=%d diverged=%d -> %s\n",
              rlab::harness::task_name(cfg.task).c_str(),
              rlab::harness::preprocessing_name(cfg.preprocessing).c_str(),
              rlab::agent::system_name(cfg.system).c_str(),
              rlab::csv::format_double(alpha).c_str(), cfg.runs, diverged,
              dir.string().c_str());
  return 0;
}

void emit_sweep_outputs(const fs::path& dir, const ExperimentConfig& cfg,
                        const SweepResult& sweep, const std::string& prefix) {
  rlab::harness::write_sweep_summary_csv((dir / (prefix + "sweep.csv")).string(),
                                         sweep);
  rlab::harness::write_sensitivity_csv(
      (dir / (prefix + "sensitivity.csv")).string(), sweep);
  const auto& best = sweep.best();
  emit_setting_outputs(dir, cfg, best.runs);
  if (!prefix.empty()) {
    // compare mode: keep each side's per-setting outputs apart
    fs::rename(dir / "runs.csv", dir / (prefix + "runs.csv"));
    fs::rename(dir / "auc.csv", dir / (prefix + "auc.csv"));
    if (fs::exists(dir / "curve.csv")) {
      fs::rename(dir / "curve.csv", dir / (prefix + "curve.csv"));
    }
  }
}

void print_best(const char* label, const ExperimentConfig& cfg,
                const SweepResult& sweep) {
  const auto& best = sweep.best();
  std::printf(
      "%s best setting: alpha=%s beta1=%s beta2=%s mean_auc=%.6g (se %.3g), "
      "diverged %d/%d\n",
      label, rlab::csv::format_double(best.setting.step_size).c_str(),
      rlab::csv::format_double(best.setting.beta1).c_str(),
      rlab::csv::format_double(best.setting.beta2).c_str(), best.mean_auc,
      best.se_auc, best.diverged_runs, cfg.runs);
}

int cmd_sweep(const CommonOpts& o, bool interference) {
  ExperimentConfig cfg = build_config(o);
  cfg.validate();
  const fs::path dir = prepare_out_dir(o);
  write_config_echo(dir, cfg);
  const auto dataset = dataset_for(cfg);
  const SweepResult sweep =
      rlab::harness::run_sweep(cfg, dataset ? &*dataset : nullptr);
  emit_sweep_outputs(dir, cfg, sweep, "");
  if (interference) {
    if (rlab::harness::is_control(cfg.task)) {
      throw std::runtime_error("--interference requires a prediction task");
    }
    const auto records = rlab::harness::rerun_with_interference(
        cfg, sweep.best().setting, *dataset);
    rlab::harness::write_interference_csv((dir / "interference.csv").string(),
                                          records);
  }
  print_best("sweep:", cfg, sweep);
  return 0;
}

int cmd_compare(const CommonOpts& o, const std::string& pre_a,
                const std::string& pre_b) {
  ExperimentConfig cfg_a = build_config(o);
  cfg_a.preprocessing = rlab::harness::preprocessing_from_name(pre_a);
  ExperimentConfig cfg_b = cfg_a;
  cfg_b.preprocessing = rlab::harness::preprocessing_from_name(pre_b);
  cfg_a.validate();
  cfg_b.validate();
  const fs::path dir = prepare_out_dir(o);
  const auto dataset = dataset_for(cfg_a);
  const auto result = rlab::harness::compare(cfg_a, cfg_b,
                                             dataset ? &*dataset : nullptr);
  emit_sweep_outputs(dir, cfg_a, result.a, "a_");
  emit_sweep_outputs(dir, cfg_b, result.b, "b_");
  rlab::harness::write_ttest_csv(
      (dir / "ttest.csv").string(), rlab::harness::task_name(cfg_a.task),
      rlab::agent::system_name(cfg_a.system), pre_a, pre_b, result.ttest);
  print_best(("compare " + pre_a + ":").c_str(), cfg_a, result.a);
  print_best(("compare " + pre_b + ":").c_str(), cfg_b, result.b);
  std::printf("compare: t=%.4f df=%.4g p=%.4g significant=%d\n", result.ttest.t,
              result.ttest.df, result.ttest.p, result.ttest.significant ? 1 : 0);
  return 0;
}

int cmd_eval_dataset(const CommonOpts& o, long long walk_steps, int sample_size) {
  CommonOpts opts = o;
  opts.task = "mc_prediction";
  ExperimentConfig cfg = build_config(opts);
  cfg.dataset.path.clear();  // always rebuild here
  if (walk_steps > 0) cfg.dataset.walk_steps = walk_steps;
  if (sample_size > 0) cfg.dataset.sample_size = sample_size;
  cfg.validate();
  const fs::path dir = prepare_out_dir(o);
  const auto dataset = rlab::harness::prepare_dataset(cfg);
  rlab::harness::write_dataset_csv((dir / "dataset.csv").string(), dataset);
  std::printf("eval-dataset: %d states from a %lld-step walk -> %s\n",
              dataset.size(), static_cast<long long>(cfg.dataset.walk_steps),
              (dir / "dataset.csv").string().c_str());
  return 0;
}

int cmd_interference(const CommonOpts& o, double alpha, double beta1,
                     double beta2) {
  return cmd_run(o, alpha, beta1, beta2, true);
}

int cmd_net_size_sweep(const CommonOpts& o, const std::string& axis,
                       std::vector<int> sizes) {
  ExperimentConfig cfg = build_config(o);
  cfg.validate();
  const rlab::harness::SizeAxis size_axis =
      axis == "layers" ? rlab::harness::SizeAxis::kHiddenLayers
                       : rlab::harness::SizeAxis::kHiddenUnits;
  if (sizes.empty()) {
    sizes = size_axis == rlab::harness::SizeAxis::kHiddenUnits
                ? std::vector<int>{5, 10, 25, 50, 75}
                : std::vector<int>{1, 2, 3, 4};
  }
  const fs::path dir = prepare_out_dir(o);
  write_config_echo(dir, cfg);
  const auto dataset = rlab::harness::prepare_dataset(cfg);
  const auto rows =
      rlab::harness::network_size_sweep(cfg, size_axis, sizes, dataset);
  rlab::harness::write_size_sweep_csv((dir / "net_size.csv").string(), rows);
  for (const auto& row : rows) {
    std::printf("net-size-sweep: size=%d mean_pi=%.6f sd=%.6f\n", row.size,
                row.mean_interference, row.sd_interference);
  }
  return 0;
}

int cmd_response_map(const CommonOpts& o, double alpha, double beta1,
                     double beta2, int grid) {
  ExperimentConfig cfg = build_config(o);
  cfg.validate();
  if (cfg.task == rlab::harness::Task::kAcrobotControl) {
    throw std::runtime_error("response-map: needs a 2-D task");
  }
  const fs::path dir = prepare_out_dir(o);
  write_config_echo(dir, cfg);
  const auto dataset = dataset_for(cfg);
  const ParamSetting setting = setting_from(cfg, alpha, beta1, beta2);
  auto trained = rlab::harness::run_single_trained(
      cfg, setting, cfg.base_seed, dataset ? &*dataset : nullptr);
  const auto entries =
      rlab::nets::response_map(*trained.net, *trained.featurizer,
                               rlab::harness::bounds_for(cfg.task), grid);
  rlab::harness::write_response_map_csv((dir / "response_map.csv").string(),
                                        entries);
  std::printf("response-map: %zu entries -> %s\n", entries.size(),
              (dir / "response_map.csv").string().c_str());
  return 0;
}

std::vector<double> auc_column(const std::string& path) {
  const rlab::csv::Table table = rlab::csv::read_csv(path);
  const int col = table.column("auc");
  if (col < 0) {
    throw std::runtime_error("ttest: no 'auc' column in " + path);
  }
  std::vector<double> values;
  values.reserve(table.rows.size());
  for (const auto& row : table.rows) values.push_back(std::stod(row[col]));
  return values;
}

int cmd_ttest(const CommonOpts& o, const std::string& path_a,
              const std::string& path_b, const std::string& label_a,
              const std::string& label_b) {
  ExperimentConfig cfg = build_config(o);
  const auto a = auc_column(path_a);
  const auto b = auc_column(path_b);
  const auto result = rlab::stats::two_sample_ttest(a, b, cfg.ttest_kind);
  const fs::path dir = prepare_out_dir(o);
  rlab::harness::write_ttest_csv(
      (dir / "ttest.csv").string(), rlab::harness::task_name(cfg.task),
      rlab::agent::system_name(cfg.system),
      label_a.empty() ? fs::path(path_a).stem().string() : label_a,
      label_b.empty() ? fs::path(path_b).stem().string() : label_b, result);
  std::printf("ttest: t=%.6f df=%.6g p=%.6g significant=%d\n", result.t,
              result.df, result.p, result.significant ? 1 : 0);
  return 0;
}

struct PlotColumns {
  int x = -1;
  int y = -1;
  int band = -1;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
};

PlotColumns detect_plot_columns(const rlab::csv::Table& table,
                                const std::string& path) {
  PlotColumns c;
  const auto pick = [&](const char* x, const char* y, const char* band,
                        bool log_x) {
    c.x = table.column(x);
    c.y = table.column(y);
    c.band = band ? table.column(band) : -1;
    c.x_label = x;
    c.y_label = y;
    c.log_x = log_x;
    return c.x >= 0 && c.y >= 0;
  };
  if (pick("step_size", "mean_auc", "stderr", true)) return c;
  if (pick("episode", "mean_pi", "stderr", false)) return c;
  if (pick("episode", "mean", "stderr", false)) return c;
  if (pick("size", "mean_pi", "sd", false)) return c;
  if (pick("run", "auc", nullptr, false)) return c;
  throw std::runtime_error("plot: unrecognized columns in " + path);
}

int cmd_plot(const std::vector<std::string>& inputs,
             std::vector<std::string> labels, const std::string& output,
             std::string title) {
  if (inputs.empty()) {
    throw std::runtime_error("plot: need at least one --input");
  }
  std::vector<rlab::plot::Series> series;
  rlab::plot::PlotSpec spec;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const rlab::csv::Table table = rlab::csv::read_csv(inputs[i]);
    const PlotColumns cols = detect_plot_columns(table, inputs[i]);
    rlab::plot::Series s;
    s.label = i < labels.size() ? labels[i] : fs::path(inputs[i]).stem().string();
    for (const auto& row : table.rows) {
      s.x.push_back(std::stod(row[cols.x]));
      s.y.push_back(std::stod(row[cols.y]));
      if (cols.band >= 0) s.half_band.push_back(std::stod(row[cols.band]));
    }
    spec.x_label = cols.x_label;
    spec.y_label = cols.y_label;
    spec.log_x = cols.log_x;
    series.push_back(std::move(s));
  }
  spec.title = title.empty() ? fs::path(output).stem().string() : std::move(title);
  rlab::plot::write_line_svg(output, spec, series);
  std::printf("plot: %zu series -> %s\n", series.size(), output.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TD(0) learning-systems laboratory"};
  app.require_subcommand(1);

  CommonOpts run_opts, sweep_opts, compare_opts, dataset_opts, interf_opts,
      size_opts, resp_opts, ttest_opts;
  double alpha = 0.0, beta1 = 0.9, beta2 = 0.999;
  double i_alpha = 0.0, i_beta1 = 0.9, i_beta2 = 0.999;
  double r_alpha = 0.0, r_beta1 = 0.9, r_beta2 = 0.999;
  bool run_interference = false, sweep_interference = false;
  std::string pre_a, pre_b, axis = "units";
  std::vector<int> sizes;
  long long walk_steps = 0;
  int sample_size = 0, grid = 64;
  std::string ttest_a, ttest_b, ttest_label_a, ttest_label_b;
  std::vector<std::string> plot_inputs, plot_labels;
  std::string plot_output = "plot.svg", plot_title;

  CLI::App* cmd_run_p = app.add_subcommand("run", "train one optimizer setting");
  add_common_options(cmd_run_p, run_opts);
  cmd_run_p->add_option("--alpha", alpha, "step size")->required();
  cmd_run_p->add_option("--beta1", beta1, "Adam beta1");
  cmd_run_p->add_option("--beta2", beta2, "Adam beta2");
  cmd_run_p->add_flag("--interference", run_interference,
                      "record interference snapshots (prediction)");

  CLI::App* cmd_sweep_p =
      app.add_subcommand("sweep", "run the optimizer-setting grid");
  add_common_options(cmd_sweep_p, sweep_opts);
  cmd_sweep_p->add_flag("--interference", sweep_interference,
                        "rerun the best setting with interference snapshots");

  CLI::App* cmd_compare_p =
      app.add_subcommand("compare", "sweep two preprocessings and t-test them");
  add_common_options(cmd_compare_p, compare_opts);
  cmd_compare_p->add_option("--preprocessing-a", pre_a)->required();
  cmd_compare_p->add_option("--preprocessing-b", pre_b)->required();

  CLI::App* cmd_dataset_p =
      app.add_subcommand("eval-dataset", "build the evaluation dataset CSV");
  add_common_options(cmd_dataset_p, dataset_opts);
  cmd_dataset_p->add_option("--walk-steps", walk_steps, "on-policy walk length");
  cmd_dataset_p->add_option("--sample-size", sample_size, "states to keep");

  CLI::App* cmd_interf_p = app.add_subcommand(
      "interference", "train one setting with interference snapshots");
  add_common_options(cmd_interf_p, interf_opts);
  cmd_interf_p->add_option("--alpha", i_alpha, "step size")->required();
  cmd_interf_p->add_option("--beta1", i_beta1, "Adam beta1");
  cmd_interf_p->add_option("--beta2", i_beta2, "Adam beta2");

  CLI::App* cmd_size_p = app.add_subcommand(
      "net-size-sweep", "interference vs hidden units or depth");
  add_common_options(cmd_size_p, size_opts);
  cmd_size_p->add_option("--axis", axis, "units | layers")
      ->check(CLI::IsMember({"units", "layers"}));
  cmd_size_p->add_option("--sizes", sizes, "sizes to sweep");

  CLI::App* cmd_resp_p = app.add_subcommand(
      "response-map", "first-layer unit activations over the state space");
  add_common_options(cmd_resp_p, resp_opts);
  cmd_resp_p->add_option("--alpha", r_alpha, "step size")->required();
  cmd_resp_p->add_option("--beta1", r_beta1, "Adam beta1");
  cmd_resp_p->add_option("--beta2", r_beta2, "Adam beta2");
  cmd_resp_p->add_option("--grid", grid, "lattice points per axis");

  CLI::App* cmd_ttest_p =
      app.add_subcommand("ttest", "two-sample t-test on per-run AUC files");
  add_common_options(cmd_ttest_p, ttest_opts);
  cmd_ttest_p->add_option("--a", ttest_a, "auc.csv for sample A")->required();
  cmd_ttest_p->add_option("--b", ttest_b, "auc.csv for sample B")->required();
  cmd_ttest_p->add_option("--label-a", ttest_label_a);
  cmd_ttest_p->add_option("--label-b", ttest_label_b);

  CLI::App* cmd_plot_p = app.add_subcommand("plot", "render result CSVs as SVG");
  cmd_plot_p->add_option("--input", plot_inputs, "CSV file(s)")->required();
  cmd_plot_p->add_option("--labels", plot_labels, "series labels");
  cmd_plot_p->add_option("--output", plot_output, "SVG path");
  cmd_plot_p->add_option("--title", plot_title, "plot title");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run_p->parsed()) {
      return cmd_run(run_opts, alpha, beta1, beta2, run_interference);
    }
    if (cmd_sweep_p->parsed()) return cmd_sweep(sweep_opts, sweep_interference);
    if (cmd_compare_p->parsed()) return cmd_compare(compare_opts, pre_a, pre_b);
    if (cmd_dataset_p->parsed()) {
      return cmd_eval_dataset(dataset_opts, walk_steps, sample_size);
    }
    if (cmd_interf_p->parsed()) {
      return cmd_interference(interf_opts, i_alpha, i_beta1, i_beta2);
    }
    if (cmd_size_p->parsed()) return cmd_net_size_sweep(size_opts, axis, sizes);
    if (cmd_resp_p->parsed()) {
      return cmd_response_map(resp_opts, r_alpha, r_beta1, r_beta2, grid);
    }
    if (cmd_ttest_p->parsed()) {
      return cmd_ttest(ttest_opts, ttest_a, ttest_b, ttest_label_a, ttest_label_b);
    }
    if (cmd_plot_p->parsed()) {
      return cmd_plot(plot_inputs, plot_labels, plot_output, plot_title);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
