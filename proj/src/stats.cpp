#include "rlab/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace rlab::stats {

std::vector<double> smooth(std::span<const double> series, int window) {
  if (window < 1) {
    throw std::invalid_argument("smooth: window must be >= 1");
  }
  if (series.empty()) {
    throw std::invalid_argument("smooth: empty series");
  }
  std::vector<double> out(series.size());
  double running = 0.0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    running += series[k];
    if (k >= static_cast<std::size_t>(window)) {
      running -= series[k - window];
    }
    const std::size_t count = std::min<std::size_t>(k + 1, window);
    out[k] = running / static_cast<double>(count);
  }
  return out;
}

double auc(std::span<const double> per_episode) {
  if (per_episode.empty()) {
    throw std::invalid_argument("auc: empty series");
  }
  return mean(per_episode);
}

double mean(std::span<const double> xs) {
  if (xs.empty()) {
    throw std::invalid_argument("mean: empty sample");
  }
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) {
    throw std::invalid_argument("sample_variance: need at least two points");
  }
  const double m = mean(xs);
  double sum_sq = 0.0;
  for (double x : xs) {
    const double d = x - m;
    sum_sq += d * d;
  }
  return sum_sq / static_cast<double>(xs.size() - 1);
}

Aggregate aggregate(const std::vector<std::vector<double>>& runs) {
  if (runs.size() < 2) {
    throw std::invalid_argument("aggregate: need at least two runs");
  }
  const std::size_t len = runs[0].size();
  for (const auto& r : runs) {
    if (r.size() != len) {
      throw std::invalid_argument("aggregate: run length mismatch");
    }
  }
  Aggregate out;
  out.mean.resize(len);
  out.se.resize(len);
  const double n = static_cast<double>(runs.size());
  std::vector<double> column(runs.size());
  for (std::size_t k = 0; k < len; ++k) {
    for (std::size_t r = 0; r < runs.size(); ++r) column[r] = runs[r][k];
    out.mean[k] = mean(column);
    out.se[k] = std::sqrt(sample_variance(column) / n);
  }
  return out;
}

namespace {

// log Gamma via the Lanczos approximation, accurate to ~1e-15 for x > 0.
double log_gamma(double x) {
  static const double coeffs[6] = {76.18009172947146,  -86.50532032941677,
                                   24.01409824083091,  -1.231739572450155,
                                   0.1208650973866179e-2, -0.5395239384953e-5};
  const double tmp0 = x + 5.5;
  const double tmp = tmp0 - (x + 0.5) * std::log(tmp0);
  double series = 1.000000000190015;
  double denom = x;
  for (double c : coeffs) {
    denom += 1.0;
    series += c / denom;
  }
  return -tmp + std::log(2.5066282746310005 * series / x);
}

// Continued fraction for the incomplete beta, evaluated with the modified
// Lentz method.
double beta_continued_fraction(double x, double a, double b) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-15;
  constexpr int kMaxIterations = 1000;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("regularized_incomplete_beta: did not converge");
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("regularized_incomplete_beta: a, b must be > 0");
  }
  if (x < 0.0 || x > 1.0) {
    throw std::invalid_argument("regularized_incomplete_beta: x outside [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = log_gamma(a + b) - log_gamma(a) - log_gamma(b) +
                           a * std::log(x) + b * std::log(1.0 - x);
  const double front = std::exp(log_front);
  // Use the continued fraction on the side where it converges fast.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(x, a, b) / a;
  }
  return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) {
    throw std::invalid_argument("student_t_two_sided_p: df must be > 0");
  }
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return regularized_incomplete_beta(x, df / 2.0, 0.5);
}

double student_t_cdf(double t, double df) {
  const double half_p = student_t_two_sided_p(t, df) / 2.0;
  return t >= 0.0 ? 1.0 - half_p : half_p;
}

TTestResult two_sample_ttest(std::span<const double> a, std::span<const double> b,
                             TTestKind kind) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("two_sample_ttest: each sample needs >= 2 points");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean(a);
  const double mb = mean(b);
  const double va = sample_variance(a);
  const double vb = sample_variance(b);

  TTestResult result;
  if (kind == TTestKind::kPooled) {
    const double pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
    if (pooled <= 0.0) {
      throw std::domain_error("two_sample_ttest: zero pooled variance");
    }
    result.df = na + nb - 2.0;
    result.t = (ma - mb) / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  } else {
    const double qa = va / na;
    const double qb = vb / nb;
    if (qa + qb <= 0.0) {
      throw std::domain_error("two_sample_ttest: zero variance in both samples");
    }
    result.t = (ma - mb) / std::sqrt(qa + qb);
    result.df = (qa + qb) * (qa + qb) /
                (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
  }
  result.p = student_t_two_sided_p(result.t, result.df);
  result.significant = result.p < 0.05;
  return result;
}

}  // namespace rlab::stats
