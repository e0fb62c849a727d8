// Acceptance gate. Runs eleven end-to-end checks against the built library
// and the command-line binary, printing exactly one [PASS]/[FAIL] line per
// criterion. Exit status is the number of failed criteria.
//
// Usage: rlab_acceptance --cli /path/to/rlab [--artifacts DIR] [--only 1,4,10]

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rlab/agent.hpp"
#include "rlab/emit.hpp"
#include "rlab/env.hpp"
#include "rlab/eval.hpp"
#include "rlab/featurize.hpp"
#include "rlab/harness.hpp"
#include "rlab/net.hpp"
#include "rlab/rng.hpp"
#include "rlab/stats.hpp"

#include "acrobot_oracle.hpp"

namespace fs = std::filesystem;
using rlab::Rng;
namespace env = rlab::env;
namespace eval = rlab::eval;
namespace feat = rlab::feat;
namespace harness = rlab::harness;
namespace nets = rlab::nets;
namespace stats = rlab::stats;

namespace {

std::string g_cli_path;
fs::path g_artifacts = "acceptance_artifacts";

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void detail(const char* fmt, ...) {
  std::va_list args;
  va_start(args, fmt);
  std::printf("    ");
  std::vprintf(fmt, args);
  std::printf("\n");
  va_end(args);
  std::fflush(stdout);
}

bool check(bool ok, std::string& why, const std::string& message) {
  if (!ok && why.empty()) why = message;
  return ok;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// shared numeric helpers

std::vector<double> dense_input_of(const nets::NetworkSpec& spec,
                                   const feat::FeatureVector& x) {
  if (!x.sparse) return x.values;
  std::vector<double> v(static_cast<std::size_t>(spec.input_length), 0.0);
  for (int i : x.active) v[static_cast<std::size_t>(i)] = 1.0;
  return v;
}

// Recomputes every hidden pre-activation from the flat parameter vector and
// reports whether all of them sit at least `margin` away from the ReLU kink,
// so finite differencing with h << margin cannot cross a nondifferentiable
// point.
bool far_from_kinks(const nets::Network& net, const feat::FeatureVector& x,
                    double margin) {
  const nets::NetworkSpec& spec = net.spec();
  std::span<const double> p = std::as_const(net).params();
  std::vector<double> in = dense_input_of(spec, x);
  std::size_t off = 0;
  int fan_in = spec.input_length;
  for (int units : spec.hidden_layers) {
    const std::size_t bias_off =
        off + static_cast<std::size_t>(units) * static_cast<std::size_t>(fan_in);
    std::vector<double> out(static_cast<std::size_t>(units), 0.0);
    for (int u = 0; u < units; ++u) {
      double z = p[bias_off + static_cast<std::size_t>(u)];
      const std::size_t row =
          off + static_cast<std::size_t>(u) * static_cast<std::size_t>(fan_in);
      for (int j = 0; j < fan_in; ++j) {
        z += p[row + static_cast<std::size_t>(j)] * in[static_cast<std::size_t>(j)];
      }
      if (std::abs(z) < margin) return false;
      out[static_cast<std::size_t>(u)] = z > 0.0 ? z : 0.0;
    }
    in = std::move(out);
    off = bias_off + static_cast<std::size_t>(units);
    fan_in = units;
  }
  return true;
}

feat::FeatureVector random_probe_input(const nets::NetworkSpec& spec, Rng& rng,
                                       bool sparse) {
  feat::FeatureVector x;
  x.length = spec.input_length;
  if (sparse) {
    x.sparse = true;
    const int max_active = std::min(spec.input_length, 4);
    const int k = 1 + rng.uniform_int(max_active);
    std::set<int> picks;
    while (static_cast<int>(picks.size()) < k) {
      picks.insert(rng.uniform_int(spec.input_length));
    }
    x.active.assign(picks.begin(), picks.end());
  } else {
    x.values.resize(static_cast<std::size_t>(spec.input_length));
    for (double& v : x.values) v = rng.uniform(-2.0, 2.0);
  }
  return x;
}

template <class F>
double simpson(F f, double lo, double hi, int panels) {
  const double h = (hi - lo) / panels;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i) {
    sum += (i % 2 == 1 ? 4.0 : 2.0) * f(lo + i * h);
  }
  return sum * h / 3.0;
}

// Regularized incomplete beta by quadrature of the beta density. With
// non-integer a the raw integrand u^(a-1) has unbounded higher derivatives at
// u = 0, which ruins Simpson's convergence, so substitute u = x v^4:
//   Integral_0^x u^(a-1)(1-u)^(b-1) du
//     = 4 x^a Integral_0^1 v^(4a-1) (1 - x v^4)^(b-1) dv,
// whose integrand is C^3 at v = 0 for every a >= 1 and smooth at v = 1 for
// x < 1. Valid for a, b >= 1 and x in [0, 1).
double ibeta_by_quadrature(double x, double a, double b) {
  const double log_beta =
      std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const double integral = simpson(
      [&](double v) {
        const double left = (v == 0.0) ? 0.0 : std::pow(v, 4.0 * a - 1.0);
        return left * std::pow(1.0 - x * v * v * v * v, b - 1.0);
      },
      0.0, 1.0, 20000);
  return 4.0 * std::pow(x, a) * integral / std::exp(log_beta);
}

// Two-sided Student-t p-value by quadrature of the t density over [0, |t|]:
// p = 1 - 2 C(nu) * Integral_0^|t| (1 + x^2/nu)^(-(nu+1)/2) dx. The integrand
// is smooth on the finite interval for every df >= 1.
double tail_p_by_quadrature(double t, double df) {
  const double c = std::exp(std::lgamma((df + 1.0) / 2.0) -
                            std::lgamma(df / 2.0)) /
                   std::sqrt(df * 3.14159265358979323846);
  const double body = simpson(
      [&](double x) {
        return std::pow(1.0 + x * x / df, -(df + 1.0) / 2.0);
      },
      0.0, std::abs(t), 20000);
  return 1.0 - 2.0 * c * body;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = "\"" + g_cli_path + "\" " + args + " >> \"" +
                          log.string() + "\" 2>&1";
  return std::system(cmd.c_str());
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

// ---------------------------------------------------------------------------
// criterion 1: analytic gradients vs central finite differences

bool criterion_gradcheck(std::string& why) {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(20260801);
  const double h = 1e-5;
  const double tol = 1e-4;
  const double margin = 1e-3;

  std::vector<nets::NetworkSpec> specs;
  for (int t = 0; t < 100; ++t) {
    nets::NetworkSpec spec;
    spec.input_length = 2 + rng.uniform_int(7);
    const int layers = 1 + t % 4;
    int units;
    if (t % 17 == 0) {
      units = 5;
    } else if (t % 13 == 0) {
      units = 26 + rng.uniform_int(35);
    } else {
      units = 5 + rng.uniform_int(21);
    }
    spec.hidden_layers.clear();
    for (int l = 0; l < layers; ++l) {
      spec.hidden_layers.push_back(
          std::max(5, units + rng.uniform_int(5) - 2));
    }
    spec.outputs = 1 + rng.uniform_int(3);
    specs.push_back(spec);
  }
  specs.push_back({10, {100}, 1});
  specs.push_back({5, {100, 100}, 2});
  specs.push_back({8, {60, 60, 60}, 1});
  specs.push_back({6, {40, 40, 40, 40}, 3});

  int pairs = 0;
  double worst_rel = 0.0;
  std::set<int> layer_counts_seen;
  int min_units = 1 << 30;
  int max_units = 0;

  for (std::size_t si = 0; si < specs.size(); ++si) {
    const nets::NetworkSpec& spec = specs[si];
    layer_counts_seen.insert(static_cast<int>(spec.hidden_layers.size()));
    for (int u : spec.hidden_layers) {
      min_units = std::min(min_units, u);
      max_units = std::max(max_units, u);
    }

    const bool sparse = rng.uniform() < 0.3;
    std::optional<nets::Network> net;
    feat::FeatureVector x;
    bool found = false;
    for (int reseed = 0; reseed < 20 && !found; ++reseed) {
      Rng init(rng.next_u64());
      net.emplace(spec, init);
      for (int attempt = 0; attempt < 50; ++attempt) {
        x = random_probe_input(spec, rng, sparse);
        if (far_from_kinks(*net, x, margin)) {
          found = true;
          break;
        }
      }
    }
    if (!found) {
      why = "no kink-free probe input found for an architecture";
      return false;
    }

    const int out_idx = rng.uniform_int(spec.outputs);
    net->forward(x);
    const std::vector<double> analytic = net->backward(out_idx);

    auto params = net->params();
    for (int i = 0; i < net->param_count(); ++i) {
      const double saved = params[static_cast<std::size_t>(i)];
      params[static_cast<std::size_t>(i)] = saved + h;
      const double up = net->forward(x)[static_cast<std::size_t>(out_idx)];
      params[static_cast<std::size_t>(i)] = saved - h;
      const double down = net->forward(x)[static_cast<std::size_t>(out_idx)];
      params[static_cast<std::size_t>(i)] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double a = analytic[static_cast<std::size_t>(i)];
      const double rel = std::abs(a - numeric) /
                         std::max({1.0, std::abs(a), std::abs(numeric)});
      worst_rel = std::max(worst_rel, rel);
      if (rel > tol) {
        why = "coordinate " + std::to_string(i) + " of architecture " +
              std::to_string(si) + " off by rel " + fmt(rel);
        return false;
      }
    }
    ++pairs;
  }

  const double elapsed = seconds_since(t0);
  detail("%d (architecture, input) pairs, hidden layers %d-%d, units %d-%d",
         pairs, *layer_counts_seen.begin(), *layer_counts_seen.rbegin(),
         min_units, max_units);
  detail("worst relative error %s (tolerance %s), %.2f s", fmt(worst_rel).c_str(),
         fmt(tol).c_str(), elapsed);
  if (!check(pairs >= 100, why, "fewer than 100 pairs checked")) return false;
  if (!check(layer_counts_seen == std::set<int>{1, 2, 3, 4}, why,
             "layer depth coverage incomplete"))
    return false;
  if (!check(min_units <= 5 && max_units >= 100, why,
             "unit count coverage incomplete"))
    return false;
  if (!check(elapsed < 10.0, why,
             "gradient check took " + fmt(elapsed) + " s (limit 10 s)"))
    return false;
  return true;
}

// ---------------------------------------------------------------------------
// criterion 2: feature encoders emit exact activation counts

bool criterion_features(std::string& why) {
  Rng rng(20260802);
  const int trials = 10000;

  // One-hot binning: exactly one active index per dimension, inside that
  // dimension's block.
  struct DiscreteCase {
    harness::Task task;
    int dims;
    int bins;
  };
  const DiscreteCase cases[] = {{harness::Task::kMcControl, 2, 20},
                                {harness::Task::kAcrobotControl, 4, 32}};
  for (const DiscreteCase& dc : cases) {
    auto featurizer =
        harness::make_featurizer(dc.task, harness::Preprocessing::kDiscretize);
    const feat::BoundsSpec bounds = harness::bounds_for(dc.task);
    if (!check(featurizer->length() == dc.dims * dc.bins, why,
               "one-hot length mismatch"))
      return false;
    for (int t = 0; t < trials; ++t) {
      std::vector<double> s(static_cast<std::size_t>(dc.dims));
      for (int d = 0; d < dc.dims; ++d) {
        s[static_cast<std::size_t>(d)] =
            rng.uniform(bounds.lo[static_cast<std::size_t>(d)],
                        bounds.hi[static_cast<std::size_t>(d)]);
      }
      const feat::FeatureVector fv = featurizer->encode(s);
      if (!check(fv.sparse && static_cast<int>(fv.active.size()) == dc.dims, why,
                 "one-hot encoding does not activate exactly one bin per "
                 "dimension"))
        return false;
      for (int d = 0; d < dc.dims; ++d) {
        const int idx = fv.active[static_cast<std::size_t>(d)];
        if (!check(idx >= d * dc.bins && idx < (d + 1) * dc.bins, why,
                   "one-hot index outside its dimension block"))
          return false;
      }
    }
  }
  detail("one-hot: %d states per task, exactly one active bin per dimension",
         trials);

  // Mountain-car tile coder: exactly 8 distinct indices in [0, 128) per
  // state, with the index table never overflowing (no hashing, so no
  // collisions are possible).
  feat::TileCoder mc_coder(feat::BoundsSpec::mountain_car(),
                           feat::TileCoderConfig{8, 4, 128});
  for (int t = 0; t < trials; ++t) {
    const std::array<double, 2> s = {rng.uniform(-1.2, 0.6),
                                     rng.uniform(-0.07, 0.07)};
    const feat::FeatureVector fv = mc_coder.encode(s);
    if (!check(fv.sparse && static_cast<int>(fv.active.size()) == 8, why,
               "tile coding did not produce exactly 8 active indices"))
      return false;
    std::set<int> distinct(fv.active.begin(), fv.active.end());
    if (!check(distinct.size() == 8, why, "tile indices not distinct")) {
      return false;
    }
    if (!check(*distinct.begin() >= 0 && *distinct.rbegin() < 128, why,
               "tile index outside [0, 128)"))
      return false;
  }
  if (!check(!mc_coder.table().overflowed(), why,
             "mountain-car tile table overflowed (collisions possible)"))
    return false;
  detail("tile coding: %d states, 8 distinct indices each, table size %d/128, "
         "no overflow",
         trials, mc_coder.table().size());

  // Reduced example: 3 tilings of a 4x4 grid over the car's state box gives a
  // 48-length binary vector with exactly 3 ones.
  feat::TileCoder small(feat::BoundsSpec::mountain_car(),
                        feat::TileCoderConfig{3, 4, 48});
  for (int t = 0; t < trials; ++t) {
    const std::array<double, 2> s = {rng.uniform(-1.2, 0.6),
                                     rng.uniform(-0.07, 0.07)};
    const feat::FeatureVector fv = small.encode(s);
    if (!check(fv.length == 48 && fv.sparse &&
                   static_cast<int>(fv.active.size()) == 3,
               why, "3-tiling example did not produce exactly 3 ones in 48"))
      return false;
  }
  detail("3 tilings x 4x4 grid: exactly 3 ones in a 48-length vector");
  return true;
}

// ---------------------------------------------------------------------------
// criterion 3: environment dynamics vs independent oracles

bool criterion_envs(std::string& why) {
  // Hand-evaluated car transitions.
  {
    env::MountainCar car;
    car.set_state(-0.5, 0.0);
    const env::StepResult r = car.step(env::kForward);
    const double v1 = 0.001 - 0.0025 * std::cos(3.0 * -0.5);
    const double x1 = -0.5 + v1;
    if (!check(std::abs(car.velocity() - v1) <= 1e-12 &&
                   std::abs(car.position() - x1) <= 1e-12 && !r.terminal &&
                   r.reward == -1.0,
               why, "car forward step deviates from hand evaluation"))
      return false;

    car.set_state(-1.19, -0.05);
    car.step(env::kReverse);
    if (!check(car.position() == -1.2 && car.velocity() == 0.0, why,
               "left wall did not stop the car"))
      return false;

    car.set_state(0.49, 0.07);
    const env::StepResult g = car.step(env::kForward);
    if (!check(g.terminal && g.reward == 0.0 && car.position() >= 0.5, why,
               "goal transition not terminal with reward 0"))
      return false;
  }
  detail("car dynamics match hand-evaluated transitions to 1e-12");

  // Acrobot vs an independently coded mass-matrix + RK4 integrator.
  {
    Rng rng(20260803);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      std::array<double, 4> s = {rng.uniform(-3.1, 3.1), rng.uniform(-3.1, 3.1),
                                 rng.uniform(-4.0 * oracle::kPi, 4.0 * oracle::kPi),
                                 rng.uniform(-9.0 * oracle::kPi, 9.0 * oracle::kPi)};
      const int action = rng.uniform_int(3);
      env::Acrobot bot;
      bot.set_state(s);
      bot.step(action);
      const std::array<double, 4> expected =
          oracle::acrobot_rk4_step(s, static_cast<double>(action - 1));
      for (int i = 0; i < 4; ++i) {
        worst = std::max(worst, std::abs(bot.state()[static_cast<std::size_t>(i)] -
                                         expected[static_cast<std::size_t>(i)]));
      }
    }
    detail("acrobot vs independent RK4 oracle: worst |diff| %s over 1000 "
           "(state, action) pairs",
           fmt(worst).c_str());
    if (!check(worst <= 1e-10, why,
               "acrobot transition deviates from oracle by " + fmt(worst)))
      return false;
  }

  // The energy-pumping policy must reach the goal from every reset.
  {
    Rng rng(20260804);
    int max_steps = 0;
    for (int t = 0; t < 1000; ++t) {
      env::MountainCar car;
      const env::EpisodeTrace trace = env::run_episode(
          car, [](const env::MountainCar& c) { return env::energy_pumping_action(c); },
          1000, rng);
      if (!check(trace.terminated, why,
                 "energy-pumping episode failed to terminate within 1000 steps"))
        return false;
      max_steps = std::max(max_steps, trace.steps);
    }
    detail("energy pumping reached the goal from 1000 resets; longest episode "
           "%d steps",
           max_steps);
  }
  return true;
}

// ---------------------------------------------------------------------------
// criterion 4: pairwise interference vs brute force

eval::InterferenceResult brute_force_interference(
    const std::vector<std::vector<double>>& gradients) {
  std::vector<std::vector<double>> unit;
  long long skipped_vectors = 0;
  for (const std::vector<double>& g : gradients) {
    double norm = 0.0;
    for (double v : g) norm += v * v;
    norm = std::sqrt(norm);
    if (norm < eval::kGradientNormFloor) {
      ++skipped_vectors;
      continue;
    }
    std::vector<double> u = g;
    for (double& v : u) v /= norm;
    unit.push_back(std::move(u));
  }
  const long long n = static_cast<long long>(gradients.size());
  const long long m = static_cast<long long>(unit.size());
  eval::InterferenceResult out;
  out.pairs_used = m * (m - 1) / 2;
  out.pairs_skipped = n * (n - 1) / 2 - out.pairs_used;
  double sum = 0.0;
  for (std::size_t i = 0; i < unit.size(); ++i) {
    for (std::size_t j = i + 1; j < unit.size(); ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < unit[i].size(); ++k) {
        dot += unit[i][k] * unit[j][k];
      }
      sum += dot;
    }
  }
  out.mean = sum / static_cast<double>(out.pairs_used);
  return out;
}

bool criterion_interference(std::string& why) {
  Rng rng(20260805);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const harness::Task task = harness::Task::kMcPrediction;
    const harness::Preprocessing pre = static_cast<harness::Preprocessing>(
        rng.uniform_int(3));
    auto featurizer = harness::make_featurizer(task, pre);
    nets::NetworkSpec spec;
    spec.input_length = featurizer->length();
    spec.hidden_layers = {4 + rng.uniform_int(13)};
    if (rng.uniform() < 0.4) spec.hidden_layers.push_back(4 + rng.uniform_int(9));
    spec.outputs = 1;
    Rng init(rng.next_u64());
    nets::Network net(spec, init);

    eval::EvalDataset dataset;
    const int n = 2 + rng.uniform_int(49);
    for (int i = 0; i < n; ++i) {
      dataset.states.push_back({rng.uniform(-1.2, 0.6), rng.uniform(-0.07, 0.07)});
      dataset.true_values.push_back(rng.uniform(-200.0, 0.0));
    }

    const eval::InterferenceResult got =
        eval::pairwise_interference(net, *featurizer, dataset);

    std::vector<std::vector<double>> gradients;
    for (const std::array<double, 2>& s : dataset.states) {
      net.forward(featurizer->encode(s));
      gradients.push_back(net.backward(0));
    }
    const eval::InterferenceResult expected = brute_force_interference(gradients);

    worst = std::max(worst, std::abs(got.mean - expected.mean));
    if (!check(std::abs(got.mean - expected.mean) <= 1e-10, why,
               "interference mean differs from brute force by " +
                   fmt(std::abs(got.mean - expected.mean))))
      return false;
    if (!check(got.pairs_used == expected.pairs_used &&
                   got.pairs_skipped == expected.pairs_skipped,
               why, "pair accounting differs from brute force"))
      return false;
    if (!check(got.mean >= -1.0 - 1e-12 && got.mean <= 1.0 + 1e-12, why,
               "interference outside [-1, 1]"))
      return false;

    // Cosines ignore positive per-vector rescaling.
    std::vector<std::vector<double>> rescaled = gradients;
    for (std::size_t i = 0; i < rescaled.size(); ++i) {
      const double factor = std::exp(rng.uniform(-7.0, 4.0));
      for (double& v : rescaled[i]) v *= factor;
    }
    const eval::InterferenceResult direct = eval::mean_pairwise_cosine(gradients);
    const eval::InterferenceResult scaled = eval::mean_pairwise_cosine(rescaled);
    if (!check(std::abs(direct.mean - scaled.mean) <= 1e-12 &&
                   direct.pairs_used == scaled.pairs_used,
               why, "positive rescaling changed the interference mean"))
      return false;
  }
  detail("50 random (network, dataset) instances; worst |production - brute "
         "force| = %s",
         fmt(worst).c_str());
  detail("mean always in [-1, 1]; invariant to positive per-gradient rescaling "
         "at 1e-12");
  return true;
}

// ---------------------------------------------------------------------------
// criterion 5: value-error metric vs direct recomputation

bool criterion_rve(std::string& why) {
  Rng rng(20260806);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const harness::Preprocessing pre =
        static_cast<harness::Preprocessing>(rng.uniform_int(3));
    auto featurizer =
        harness::make_featurizer(harness::Task::kMcPrediction, pre);
    nets::NetworkSpec spec;
    spec.input_length = featurizer->length();
    spec.hidden_layers = {3 + rng.uniform_int(14)};
    spec.outputs = 1;
    Rng init(rng.next_u64());
    nets::Network net(spec, init);

    eval::EvalDataset dataset;
    const int n = 1 + rng.uniform_int(40);
    for (int i = 0; i < n; ++i) {
      dataset.states.push_back({rng.uniform(-1.2, 0.6), rng.uniform(-0.07, 0.07)});
      dataset.true_values.push_back(rng.uniform(-200.0, 0.0));
    }

    const double got = eval::rve(net, *featurizer, dataset);
    double sum_sq = 0.0;
    for (int i = 0; i < dataset.size(); ++i) {
      const double v =
          net.forward(featurizer->encode(dataset.states[static_cast<std::size_t>(i)]))[0];
      const double diff = v - dataset.true_values[static_cast<std::size_t>(i)];
      sum_sq += diff * diff;
    }
    const double expected = std::sqrt(sum_sq / static_cast<double>(dataset.size()));
    worst = std::max(worst, std::abs(got - expected));
    if (!check(std::abs(got - expected) <= 1e-12, why,
               "error metric differs from direct recomputation by " +
                   fmt(std::abs(got - expected))))
      return false;

    // With labels replaced by the network's own predictions the error is
    // exactly zero.
    eval::EvalDataset fitted = dataset;
    for (int i = 0; i < fitted.size(); ++i) {
      fitted.true_values[static_cast<std::size_t>(i)] = net.forward(
          featurizer->encode(fitted.states[static_cast<std::size_t>(i)]))[0];
    }
    if (!check(eval::rve(net, *featurizer, fitted) == 0.0, why,
               "error metric nonzero when labels equal predictions"))
      return false;
  }
  detail("50 random (network, dataset) instances; worst |metric - direct "
         "recomputation| = %s",
         fmt(worst).c_str());
  detail("metric exactly 0 when labels are set to the network's predictions");
  return true;
}

// ---------------------------------------------------------------------------
// criterion 6: t-test machinery vs frozen values and quadrature

bool criterion_stats(std::string& why) {
  const std::vector<double> a = {0.0, 1.0, 2.0};
  const std::vector<double> b = {2.0, 3.0, 4.0};
  const stats::TTestResult r =
      stats::two_sample_ttest(a, b, stats::TTestKind::kPooled);
  detail("pooled fixture: t=%s df=%s p=%s", fmt(r.t).c_str(), fmt(r.df).c_str(),
         fmt(r.p).c_str());
  if (!check(std::abs(r.t - (-2.449489742783178)) <= 1e-9, why,
             "fixture t statistic off: " + fmt(r.t)))
    return false;
  if (!check(r.df == 4.0, why, "fixture df off: " + fmt(r.df))) return false;
  if (!check(std::abs(r.p - 0.0705) <= 1e-3, why, "fixture p off: " + fmt(r.p)))
    return false;

  const std::vector<double> same = {1.0, 2.0, 3.0};
  const stats::TTestResult id =
      stats::two_sample_ttest(same, same, stats::TTestKind::kPooled);
  if (!check(id.t == 0.0 && id.p == 1.0, why,
             "identical samples did not give t=0, p=1"))
    return false;

  Rng rng(20260807);
  double worst_ibeta = 0.0;
  for (int t = 0; t < 50; ++t) {
    const double x = rng.uniform(0.05, 0.95);
    const double pa = rng.uniform(1.0, 8.0);
    const double pb = rng.uniform(1.0, 8.0);
    const double got = stats::regularized_incomplete_beta(x, pa, pb);
    const double expected = ibeta_by_quadrature(x, pa, pb);
    worst_ibeta = std::max(worst_ibeta, std::abs(got - expected));
    if (!check(std::abs(got - expected) <= 1e-7, why,
               "incomplete beta deviates from quadrature by " +
                   fmt(std::abs(got - expected))))
      return false;
  }
  detail("incomplete beta vs density quadrature: worst |diff| %s over 50 "
         "random points",
         fmt(worst_ibeta).c_str());

  double worst_p = 0.0;
  for (int t = 0; t < 20; ++t) {
    const double tv = rng.uniform(-6.0, 6.0);
    const double df = rng.uniform(1.0, 41.0);
    const double got = stats::student_t_two_sided_p(tv, df);
    const double expected = tail_p_by_quadrature(tv, df);
    worst_p = std::max(worst_p, std::abs(got - expected));
    if (!check(std::abs(got - expected) <= 1e-7, why,
               "two-sided p deviates from quadrature by " +
                   fmt(std::abs(got - expected))))
      return false;
  }
  detail("two-sided p vs t-density quadrature: worst |diff| %s over 20 random "
         "(t, df) points",
         fmt(worst_p).c_str());
  return true;
}

// ---------------------------------------------------------------------------
// criterion 7: car control, binned inputs beat raw inputs

bool criterion_control_claim(std::string& why) {
  const auto t0 = std::chrono::steady_clock::now();
  harness::ExperimentConfig base =
      harness::default_config(harness::Task::kMcControl, harness::Profile::kDesk);
  base.workers = 1;

  auto sweep_for = [&](harness::Preprocessing pre, const char* tag) {
    harness::ExperimentConfig cfg = base;
    cfg.preprocessing = pre;
    const harness::SweepResult sweep = harness::run_sweep(cfg, nullptr);
    harness::write_sweep_summary_csv(
        (g_artifacts / (std::string("control_") + tag + "_sweep.csv")).string(),
        sweep);
    harness::write_sensitivity_csv(
        (g_artifacts / (std::string("control_") + tag + "_sensitivity.csv"))
            .string(),
        sweep);
    return sweep;
  };

  const harness::SweepResult raw =
      sweep_for(harness::Preprocessing::kRaw, "raw");
  const harness::SweepResult disc =
      sweep_for(harness::Preprocessing::kDiscretize, "discretize");
  const harness::SweepResult tile =
      sweep_for(harness::Preprocessing::kTilecode, "tilecode");

  detail("best mean steps-to-goal AUC: raw %s (alpha %s), one-hot %s (alpha "
         "%s), tile %s (alpha %s)",
         fmt(raw.best().mean_auc).c_str(), fmt(raw.best().setting.step_size).c_str(),
         fmt(disc.best().mean_auc).c_str(), fmt(disc.best().setting.step_size).c_str(),
         fmt(tile.best().mean_auc).c_str(), fmt(tile.best().setting.step_size).c_str());

  const stats::TTestResult tile_vs_raw = stats::two_sample_ttest(
      tile.best().aucs, raw.best().aucs, base.ttest_kind);
  const stats::TTestResult disc_vs_raw = stats::two_sample_ttest(
      disc.best().aucs, raw.best().aucs, base.ttest_kind);
  detail("tile vs raw: t=%s p=%s; one-hot vs raw: t=%s p=%s",
         fmt(tile_vs_raw.t).c_str(), fmt(tile_vs_raw.p).c_str(),
         fmt(disc_vs_raw.t).c_str(), fmt(disc_vs_raw.p).c_str());

  const double elapsed = seconds_since(t0);
  detail("three 10-run sweeps in %.1f s (limit 1800 s)", elapsed);

  if (!check(tile.best().mean_auc < raw.best().mean_auc, why,
             "tile coding did not beat raw on mean AUC"))
    return false;
  if (!check(tile_vs_raw.p < 0.05, why,
             "tile-vs-raw difference not significant (p=" + fmt(tile_vs_raw.p) +
                 ")"))
    return false;
  if (!check(disc.best().mean_auc < raw.best().mean_auc, why,
             "one-hot binning did not beat raw on mean AUC"))
    return false;
  if (!check(disc_vs_raw.p < 0.05, why,
             "one-hot-vs-raw difference not significant (p=" +
                 fmt(disc_vs_raw.p) + ")"))
    return false;
  if (!check(elapsed < 1800.0, why, "control sweeps exceeded the 30 min budget"))
    return false;
  return true;
}

// ---------------------------------------------------------------------------
// criteria 8 and 9 share two prediction sweeps

struct PredictionStudy {
  bool ready = false;
  harness::ExperimentConfig cfg_raw;
  harness::ExperimentConfig cfg_tile;
  eval::EvalDataset dataset;
  harness::SweepResult raw;
  harness::SweepResult tile;
};

void ensure_prediction_study(PredictionStudy& study) {
  if (study.ready) return;
  harness::ExperimentConfig base = harness::default_config(
      harness::Task::kMcPrediction, harness::Profile::kDesk);
  base.workers = 1;
  study.cfg_raw = base;
  study.cfg_raw.preprocessing = harness::Preprocessing::kRaw;
  study.cfg_tile = base;
  study.cfg_tile.preprocessing = harness::Preprocessing::kTilecode;
  study.dataset = harness::prepare_dataset(base);
  study.raw = harness::run_sweep(study.cfg_raw, &study.dataset);
  study.tile = harness::run_sweep(study.cfg_tile, &study.dataset);
  harness::write_sweep_summary_csv(
      (g_artifacts / "prediction_raw_sweep.csv").string(), study.raw);
  harness::write_sweep_summary_csv(
      (g_artifacts / "prediction_tilecode_sweep.csv").string(), study.tile);
  harness::write_sensitivity_csv(
      (g_artifacts / "prediction_raw_sensitivity.csv").string(), study.raw);
  harness::write_sensitivity_csv(
      (g_artifacts / "prediction_tilecode_sensitivity.csv").string(),
      study.tile);
  study.ready = true;
}

bool criterion_prediction_claim(PredictionStudy& study, std::string& why) {
  ensure_prediction_study(study);
  if (!check(static_cast<long long>(study.dataset.size()) ==
                     study.cfg_raw.dataset.sample_size &&
                 study.cfg_raw.dataset.walk_steps == 100000,
             why, "evaluation dataset is not the 100k-walk/500-state one"))
    return false;

  auto final_smoothed = [](const harness::SettingResult& setting, int window) {
    std::vector<double> finals;
    for (const harness::RunRecord& run : setting.runs) {
      finals.push_back(stats::smooth(run.per_episode, window).back());
    }
    return finals;
  };
  const std::vector<double> tile_finals =
      final_smoothed(study.tile.best(), study.cfg_tile.smooth_window);
  const std::vector<double> raw_finals =
      final_smoothed(study.raw.best(), study.cfg_raw.smooth_window);
  const stats::TTestResult tt = stats::two_sample_ttest(
      tile_finals, raw_finals, study.cfg_raw.ttest_kind);
  detail("final smoothed value error over 10 runs: tile mean %s, raw mean %s, "
         "t=%s p=%s",
         fmt(mean_of(tile_finals)).c_str(), fmt(mean_of(raw_finals)).c_str(),
         fmt(tt.t).c_str(), fmt(tt.p).c_str());
  if (!check(mean_of(tile_finals) < mean_of(raw_finals), why,
             "tile coding did not reach a lower final error"))
    return false;
  if (!check(tt.p < 0.05, why,
             "final-error difference not significant (p=" + fmt(tt.p) + ")"))
    return false;

  auto time_averaged_pi = [](const std::vector<harness::RunRecord>& runs) {
    std::vector<double> per_run;
    for (const harness::RunRecord& run : runs) {
      double sum = 0.0;
      for (const eval::InterferenceSnapshot& snap : run.snapshots) {
        sum += snap.mean;
      }
      per_run.push_back(sum / static_cast<double>(run.snapshots.size()));
    }
    return per_run;
  };
  const std::vector<harness::RunRecord> tile_runs =
      harness::rerun_with_interference(study.cfg_tile,
                                       study.tile.best().setting, study.dataset);
  const std::vector<harness::RunRecord> raw_runs =
      harness::rerun_with_interference(study.cfg_raw, study.raw.best().setting,
                                       study.dataset);
  harness::write_interference_csv(
      (g_artifacts / "prediction_tilecode_interference.csv").string(),
      tile_runs);
  harness::write_interference_csv(
      (g_artifacts / "prediction_raw_interference.csv").string(), raw_runs);
  const double tile_pi = mean_of(time_averaged_pi(tile_runs));
  const double raw_pi = mean_of(time_averaged_pi(raw_runs));
  detail("time-averaged pairwise interference (mean over 10 runs): tile %s, "
         "raw %s",
         fmt(tile_pi).c_str(), fmt(raw_pi).c_str());
  if (!check(tile_pi < raw_pi, why,
             "tile coding did not lower time-averaged interference"))
    return false;
  return true;
}

bool criterion_sensitivity_claim(PredictionStudy& study, std::string& why) {
  ensure_prediction_study(study);
  const std::vector<int> tile_slice = study.tile.sensitivity_indices();
  const std::vector<int> raw_slice = study.raw.sensitivity_indices();
  if (!check(tile_slice.size() == raw_slice.size(), why,
             "sensitivity slices have different sizes"))
    return false;

  int compared = 0;
  int skipped = 0;
  bool dominated = true;
  for (std::size_t k = 0; k < tile_slice.size(); ++k) {
    const harness::SettingResult& ts =
        study.tile.settings[static_cast<std::size_t>(tile_slice[k])];
    const harness::SettingResult& rs =
        study.raw.settings[static_cast<std::size_t>(raw_slice[k])];
    if (!check(ts.setting.step_size == rs.setting.step_size, why,
               "sensitivity slices are not aligned on step size"))
      return false;
    if (ts.diverged_runs > 0 || rs.diverged_runs > 0) {
      ++skipped;
      continue;
    }
    ++compared;
    detail("alpha %-10s tile AUC %-12s raw AUC %-12s %s",
           fmt(ts.setting.step_size).c_str(), fmt(ts.mean_auc).c_str(),
           fmt(rs.mean_auc).c_str(),
           ts.mean_auc <= rs.mean_auc ? "tile <= raw" : "VIOLATED");
    if (ts.mean_auc > rs.mean_auc) dominated = false;
  }
  detail("%d step sizes compared, %d skipped for divergence; full curves in %s",
         compared, skipped, g_artifacts.string().c_str());
  if (!check(compared >= 1, why, "no step size had both sides stable"))
    return false;
  if (!check(dominated, why,
             "raw beat tile coding at a step size where both were stable"))
    return false;
  return true;
}

// ---------------------------------------------------------------------------
// criterion 10: byte-identical reproducibility through the CLI

bool criterion_reproducibility(std::string& why) {
  if (!check(!g_cli_path.empty() && fs::exists(g_cli_path), why,
             "command-line binary not found (pass --cli)"))
    return false;

  const fs::path dir = g_artifacts / "repro";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path log = dir / "cli.log";
  const fs::path cfg_path = dir / "config.json";
  {
    std::ofstream out(cfg_path);
    out << "{\n"
           "  \"task\": \"mc_prediction\",\n"
           "  \"profile\": \"desk\",\n"
           "  \"preprocessing\": \"tilecode\",\n"
           "  \"system\": \"sgd\",\n"
           "  \"hidden_layers\": [10],\n"
           "  \"runs\": 3,\n"
           "  \"episodes\": 12,\n"
           "  \"base_seed\": 4242,\n"
           "  \"step_size_grid\": [0.03, 0.01, 0.003],\n"
           "  \"dataset\": {\"walk_steps\": 20000, \"sample_size\": 200},\n"
           "  \"workers\": 1\n"
           "}\n";
  }
  const std::string cfg = "--config \"" + cfg_path.string() + "\"";

  auto run_dir = [&](const char* name) { return (dir / name).string(); };
  if (!check(run_cli("run " + cfg + " --alpha 0.01 --out \"" + run_dir("run_a") +
                         "\"",
                     log) == 0 &&
                 run_cli("run " + cfg + " --alpha 0.01 --out \"" +
                             run_dir("run_b") + "\"",
                         log) == 0,
             why, "CLI run invocation failed (see repro/cli.log)"))
    return false;
  for (const char* file : {"runs.csv", "auc.csv", "curve.csv"}) {
    const std::string a = slurp(dir / "run_a" / file);
    const std::string b = slurp(dir / "run_b" / file);
    if (!check(!a.empty() && a == b, why,
               std::string("repeated run produced different ") + file))
      return false;
  }
  detail("run twice with one config and seed: runs.csv, auc.csv, curve.csv "
         "byte-identical");

  if (!check(run_cli("sweep " + cfg + " --workers 1 --out \"" +
                         run_dir("sweep_w1") + "\"",
                     log) == 0 &&
                 run_cli("sweep " + cfg + " --workers 8 --out \"" +
                             run_dir("sweep_w8") + "\"",
                         log) == 0,
             why, "CLI sweep invocation failed (see repro/cli.log)"))
    return false;
  for (const char* file : {"sweep.csv", "sensitivity.csv", "runs.csv", "auc.csv"}) {
    const std::string a = slurp(dir / "sweep_w1" / file);
    const std::string b = slurp(dir / "sweep_w8" / file);
    if (!check(!a.empty() && a == b, why,
               std::string("worker counts 1 and 8 produced different ") + file))
      return false;
  }
  detail("sweep with --workers 1 and --workers 8: sweep.csv, sensitivity.csv, "
         "best-setting runs.csv and auc.csv byte-identical");
  return true;
}

// ---------------------------------------------------------------------------
// criterion 11: interference snapshot schedule

bool criterion_schedule(std::string& why) {
  std::vector<int> expected = {0, 1, 5, 10, 25};
  for (int e = 50; e <= 500; e += 25) expected.push_back(e);
  const std::vector<int> got = eval::interference_episodes(500);
  if (!check(got == expected, why,
             "schedule for 500 episodes does not match {0, 1, 5, 10, 25, 50, "
             "75, ..., 500}"))
    return false;
  detail("schedule for 500 episodes: %zu points, {0, 1, 5, 10, 25} then every "
         "25 through 500",
         got.size());

  // The snapshots recorded by an actual run land exactly on the schedule.
  harness::ExperimentConfig cfg = harness::default_config(
      harness::Task::kMcPrediction, harness::Profile::kDesk);
  cfg.episodes = 26;
  cfg.runs = 1;
  cfg.hidden_layers = {6};
  cfg.measure_interference = true;
  cfg.dataset.walk_steps = 2000;
  cfg.dataset.sample_size = 40;
  cfg.base_seed = 606;
  const eval::EvalDataset dataset = harness::prepare_dataset(cfg);
  harness::ParamSetting setting;
  setting.step_size = 0.01;
  const harness::RunRecord record =
      harness::run_single(cfg, setting, cfg.base_seed, &dataset);
  std::vector<int> seen;
  for (const eval::InterferenceSnapshot& snap : record.snapshots) {
    seen.push_back(snap.episode);
  }
  if (!check(seen == eval::interference_episodes(cfg.episodes), why,
             "recorded snapshots deviate from the schedule"))
    return false;
  detail("a 26-episode run recorded snapshots exactly at {0, 1, 5, 10, 25}");
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) {
      g_cli_path = argv[++i];
    } else if (arg == "--artifacts" && i + 1 < argc) {
      g_artifacts = argv[++i];
    } else if (arg == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string part;
      while (std::getline(ss, part, ',')) only.insert(std::stoi(part));
    } else {
      std::fprintf(stderr,
                   "usage: %s --cli PATH [--artifacts DIR] [--only N,N,...]\n",
                   argv[0]);
      return 2;
    }
  }
  fs::create_directories(g_artifacts);

  PredictionStudy study;
  struct Criterion {
    int number;
    const char* label;
    std::function<bool(std::string&)> body;
  };
  const std::vector<Criterion> criteria = {
      {1, "network gradients match central finite differences",
       criterion_gradcheck},
      {2, "feature encoders produce exact activation counts",
       criterion_features},
      {3, "environment dynamics match independent oracles", criterion_envs},
      {4, "pairwise interference matches brute-force cosine averaging",
       criterion_interference},
      {5, "value-error metric matches direct recomputation", criterion_rve},
      {6, "t-test machinery reproduces frozen and quadrature oracles",
       criterion_stats},
      {7, "car control: binned inputs beat raw inputs",
       criterion_control_claim},
      {8, "car prediction: tile coding cuts final error and interference",
       [&](std::string& why) { return criterion_prediction_claim(study, why); }},
      {9, "step-size sensitivity: tile coding dominates raw where both stay "
          "stable",
       [&](std::string& why) { return criterion_sensitivity_claim(study, why); }},
      {10, "identical configs reproduce byte-identical outputs",
       criterion_reproducibility},
      {11, "interference snapshot schedule matches the pinned episode set",
       criterion_schedule},
  };

  int failures = 0;
  int attempted = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.number)) {
      std::printf("[SKIP] criterion %d: %s\n", c.number, c.label);
      std::fflush(stdout);
      continue;
    }
    std::printf("---- criterion %d ----\n", c.number);
    std::fflush(stdout);
    ++attempted;
    std::string why;
    bool pass = false;
    try {
      pass = c.body(why);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    if (pass) {
      std::printf("[PASS] criterion %d: %s\n", c.number, c.label);
    } else {
      std::printf("[FAIL] criterion %d: %s -- %s\n", c.number, c.label,
                  why.empty() ? "(no detail)" : why.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }

  std::printf("%d/%d criteria passed\n", attempted - failures, attempted);
  std::fflush(stdout);
  return failures;
}
