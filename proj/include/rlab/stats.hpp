#pragma once

#include <span>
#include <vector>

namespace rlab::stats {

// Trailing moving average: entry k averages the last `window` entries ending
// at k, or all available entries when fewer exist.
std::vector<double> smooth(std::span<const double> series, int window = 10);

// Mean of the raw per-episode series (episode-axis area under the curve,
// normalized by length). Computed on the unsmoothed series.
double auc(std::span<const double> per_episode);

struct Aggregate {
  std::vector<double> mean;
  std::vector<double> se;  // sample standard deviation (n-1) over sqrt(n)
};

// Pointwise mean and standard error across runs; every run must have the same
// length and there must be at least two runs.
Aggregate aggregate(const std::vector<std::vector<double>>& runs);

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);  // n-1 denominator

enum class TTestKind { kPooled, kWelch };

struct TTestResult {
  double t = 0.0;
  double df = 0.0;  // fractional under Welch
  double p = 0.0;   // two-sided
  bool significant = false;  // p < 0.05
};

// Two-sample t-test on independent samples. kPooled assumes equal variances
// (df = n_a + n_b - 2); kWelch uses the Satterthwaite approximation. Throws
// when either sample has fewer than two points or the variance estimate used
// by the test is zero.
TTestResult two_sample_ttest(std::span<const double> a, std::span<const double> b,
                             TTestKind kind = TTestKind::kPooled);

// Regularized incomplete beta I_x(a, b) via the continued fraction with
// modified Lentz evaluation. Absolute error well below 1e-10 over the domain
// used here (a, b > 0, x in [0, 1]).
double regularized_incomplete_beta(double x, double a, double b);

double student_t_cdf(double t, double df);

// P(|T| >= |t|) for T ~ Student-t with `df` degrees of freedom, computed
// directly as I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_sided_p(double t, double df);

}  // namespace rlab::stats
