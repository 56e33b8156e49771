#include "frfx/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace frfx {

namespace {

// Lentz's continued fraction for the incomplete beta (Numerical Recipes form).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
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
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double f_distribution_sf(double f, double df1, double df2) {
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return regularized_incomplete_beta(df2 / 2.0, df1 / 2.0,
                                     df2 / (df2 + df1 * f));
}

AnovaResult anova_two_group(const Eigen::VectorXd& values,
                            const std::vector<int>& labels) {
  const auto n = values.size();
  if (static_cast<Eigen::Index>(labels.size()) != n) {
    throw DegenerateGroups("label count does not match value count");
  }
  double sum[2] = {0.0, 0.0};
  std::int64_t count[2] = {0, 0};
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    sum[y] += values(i);
    count[y]++;
  }
  if (count[0] == 0 || count[1] == 0) {
    throw DegenerateGroups("both classes must be present");
  }
  if (n < 3) {
    throw DegenerateGroups("F statistic needs at least 3 observations");
  }

  const double mean0 = sum[0] / count[0];
  const double mean1 = sum[1] / count[1];
  const double grand = (sum[0] + sum[1]) / static_cast<double>(n);

  AnovaResult r;
  r.ss_model = count[0] * (mean0 - grand) * (mean0 - grand) +
               count[1] * (mean1 - grand) * (mean1 - grand);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double m = labels[static_cast<std::size_t>(i)] == 0 ? mean0 : mean1;
    const double e = values(i) - m;
    r.ss_error += e * e;
    const double t = values(i) - grand;
    r.ss_total += t * t;
  }

  const double df_error = static_cast<double>(n) - 2.0;
  if (r.ss_total == 0.0) {
    // all values identical: no effect, nothing to test
    r.f = 0.0;
    r.p_value = 1.0;
    r.eta_squared = 0.0;
    return r;
  }
  r.eta_squared = r.ss_model / r.ss_total;
  if (r.ss_error == 0.0) {
    r.infinite_f = true;
    r.f = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
    return r;
  }
  r.f = (r.ss_model / 1.0) / (r.ss_error / df_error);
  r.p_value = f_distribution_sf(r.f, 1.0, df_error);
  return r;
}

std::vector<AnovaResult> anova_fpc(const Eigen::MatrixXd& scores,
                                   const std::vector<int>& labels) {
  std::vector<AnovaResult> out;
  out.reserve(static_cast<std::size_t>(scores.cols()));
  for (Eigen::Index k = 0; k < scores.cols(); ++k) {
    out.push_back(anova_two_group(scores.col(k), labels));
  }
  return out;
}

double quantile_linear(std::vector<double> sample, double p) {
  if (sample.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(sample.begin(), sample.end());
  const double h = (static_cast<double>(sample.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sample.size() - 1);
  return sample[lo] + (h - static_cast<double>(lo)) * (sample[hi] - sample[lo]);
}

double silverman_bandwidth(const std::vector<double>& sample) {
  const auto n = static_cast<double>(sample.size());
  if (sample.size() < 2) return 1e-3;
  double mean = 0.0;
  for (double v : sample) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : sample) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const double iqr =
      quantile_linear(sample, 0.75) - quantile_linear(sample, 0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) {
    return std::max(1e-3, 1e-3 * std::fabs(mean));
  }
  return 0.9 * spread * std::pow(n, -0.2);
}

KernelDensity gaussian_kde(const std::vector<double>& sample, int grid_size) {
  KernelDensity kde;
  if (sample.empty() || grid_size < 2) return kde;
  const double h = silverman_bandwidth(sample);
  const auto [lo_it, hi_it] = std::minmax_element(sample.begin(), sample.end());
  const double lo = *lo_it - 4.0 * h;
  const double hi = *hi_it + 4.0 * h;

  kde.bandwidth = h;
  kde.grid.resize(grid_size);
  kde.density.setZero(grid_size);
  const double inv = 1.0 / (sample.size() * h * std::sqrt(2.0 * 3.14159265358979323846));
  for (int g = 0; g < grid_size; ++g) {
    const double x = lo + (hi - lo) * g / (grid_size - 1);
    kde.grid(g) = x;
    double acc = 0.0;
    for (double v : sample) {
      const double z = (x - v) / h;
      acc += std::exp(-0.5 * z * z);
    }
    kde.density(g) = inv * acc;
  }
  return kde;
}

}  // namespace frfx
