#include <doctest.h>

#include <cmath>

#include "frfx/stats.hpp"
#include "frfx/rng.hpp"

using namespace frfx;

namespace {

// Independent oracle for P(F(1, nu) >= f): with one numerator df,
// F = T^2 for T ~ t(nu), so the tail is 2 P(T >= sqrt(f)). The t density
// is smooth on [tau, inf) and is integrated by plain Simpson.
double t_pdf(double x, double nu) {
  const double log_c = std::lgamma((nu + 1.0) / 2.0) -
                       std::lgamma(nu / 2.0) -
                       0.5 * std::log(nu * 3.14159265358979323846);
  return std::exp(log_c - (nu + 1.0) / 2.0 * std::log1p(x * x / nu));
}

double sf_oracle_f1(double f, double nu) {
  const double tau = std::sqrt(f);
  const double upper = tau + 400.0;  // density ~ x^-(nu+1) is dust out here
  const int n = 400000;
  const double h = (upper - tau) / n;
  double acc = t_pdf(tau, nu) + t_pdf(upper, nu);
  for (int i = 1; i < n; ++i) {
    acc += t_pdf(tau + i * h, nu) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return 2.0 * acc * h / 3.0;
}

}  // namespace

TEST_CASE("regularized incomplete beta endpoints and symmetry") {
  CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
  // I_x(a,b) = 1 - I_{1-x}(b,a)
  for (double x : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    CHECK(regularized_incomplete_beta(2.5, 4.0, x) ==
          doctest::Approx(1.0 - regularized_incomplete_beta(4.0, 2.5, 1.0 - x))
              .epsilon(1e-12));
  }
  // I_x(1,1) = x, uniform case
  CHECK(regularized_incomplete_beta(1.0, 1.0, 0.42) == doctest::Approx(0.42));
}

TEST_CASE("F distribution tail against the quadrature oracle") {
  CHECK(f_distribution_sf(2.0, 1.0, 10.0) ==
        doctest::Approx(sf_oracle_f1(2.0, 10.0)).epsilon(1e-7));
  CHECK(f_distribution_sf(5.0, 1.0, 30.0) ==
        doctest::Approx(sf_oracle_f1(5.0, 30.0)).epsilon(1e-7));
  CHECK(f_distribution_sf(1.0, 1.0, 98.0) ==
        doctest::Approx(sf_oracle_f1(1.0, 98.0)).epsilon(1e-7));
  CHECK(f_distribution_sf(0.0, 1.0, 10.0) == 1.0);
  CHECK(f_distribution_sf(std::numeric_limits<double>::infinity(), 1.0, 10.0) ==
        0.0);
}

TEST_CASE("two-group ANOVA on the worked example") {
  Eigen::VectorXd values(4);
  values << 0, 1, 1, 2;
  const std::vector<int> labels{0, 0, 1, 1};
  const AnovaResult r = anova_two_group(values, labels);
  CHECK(r.ss_model == doctest::Approx(1.0));
  CHECK(r.ss_error == doctest::Approx(1.0));
  CHECK(r.ss_total == doctest::Approx(2.0));
  CHECK(r.f == doctest::Approx(2.0));
  CHECK(r.eta_squared == doctest::Approx(0.5));
  CHECK_FALSE(r.infinite_f);
}

TEST_CASE("ANOVA edge cases") {
  SUBCASE("identical group means give F = 0") {
    Eigen::VectorXd values(4);
    values << 1, 3, 0, 4;  // both means are 2
    const AnovaResult r = anova_two_group(values, {0, 0, 1, 1});
    CHECK(r.f == 0.0);
    CHECK(r.eta_squared == 0.0);
    CHECK(r.p_value == doctest::Approx(1.0));
  }

  SUBCASE("perfect separation flags an infinite F") {
    Eigen::VectorXd values(4);
    values << 0, 0, 1, 1;
    const AnovaResult r = anova_two_group(values, {0, 0, 1, 1});
    CHECK(r.infinite_f);
    CHECK(std::isinf(r.f));
    CHECK(r.eta_squared == doctest::Approx(1.0));
    CHECK(r.p_value == 0.0);
  }

  SUBCASE("degenerate groups") {
    Eigen::VectorXd values(3);
    values << 1, 2, 3;
    CHECK_THROWS_AS(anova_two_group(values, {0, 0, 0}), DegenerateGroups);
    Eigen::VectorXd two(2);
    two << 1, 2;
    CHECK_THROWS_AS(anova_two_group(two, {0, 1}), DegenerateGroups);
  }
}

TEST_CASE("ANOVA identities on random samples") {
  Rng rng(2718);
  for (int trial = 0; trial < 200; ++trial) {
    const int n0 = 1 + static_cast<int>(rng.below(20));
    const int n1 = 1 + static_cast<int>(rng.below(20));
    if (n0 + n1 < 3) continue;
    Eigen::VectorXd values(n0 + n1);
    std::vector<int> labels;
    for (int i = 0; i < n0 + n1; ++i) {
      labels.push_back(i < n0 ? 0 : 1);
      values(i) = rng.normal() + (i < n0 ? 0.0 : 0.8);
    }
    const AnovaResult r = anova_two_group(values, labels);

    CHECK(std::abs(r.ss_model + r.ss_error - r.ss_total) <=
          1e-8 * std::max(1.0, r.ss_total));

    // two-group F equals the squared pooled t statistic
    double mean[2] = {0, 0};
    for (int i = 0; i < n0 + n1; ++i) mean[labels[static_cast<std::size_t>(i)]] += values(i);
    mean[0] /= n0;
    mean[1] /= n1;
    double pooled_ss = 0.0;
    for (int i = 0; i < n0 + n1; ++i) {
      const double d = values(i) - mean[labels[static_cast<std::size_t>(i)]];
      pooled_ss += d * d;
    }
    const double sp2 = pooled_ss / (n0 + n1 - 2);
    const double t =
        (mean[1] - mean[0]) / std::sqrt(sp2 * (1.0 / n0 + 1.0 / n1));
    CHECK(std::abs(r.f - t * t) <= 1e-10 * std::max(1.0, std::abs(r.f)));

    if (r.eta_squared < 1.0) {
      const double df_error = n0 + n1 - 2.0;
      const double from_eta =
          r.eta_squared / (1.0 - r.eta_squared) * df_error / 1.0;
      CHECK(std::abs(r.f - from_eta) <= 1e-10 * std::max(1.0, std::abs(r.f)));
    }
  }
}

TEST_CASE("type-7 quantiles") {
  CHECK(quantile_linear({1, 2, 3, 4}, 0.5) == doctest::Approx(2.5));
  CHECK(quantile_linear({1, 2, 3, 4, 5}, 0.5) == doctest::Approx(3.0));
  CHECK(quantile_linear({4, 1, 3, 2}, 0.25) == doctest::Approx(1.75));
  CHECK(quantile_linear({7}, 0.25) == doctest::Approx(7.0));
  CHECK(quantile_linear({1, 2}, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("gaussian kde integrates to one") {
  Rng rng(5);
  std::vector<double> sample;
  for (int i = 0; i < 80; ++i) sample.push_back(rng.normal() * 2.0 + 1.0);
  const KernelDensity kde = gaussian_kde(sample);
  double integral = 0.0;
  for (Eigen::Index i = 0; i + 1 < kde.grid.size(); ++i) {
    integral += 0.5 * (kde.density(i) + kde.density(i + 1)) *
                (kde.grid(i + 1) - kde.grid(i));
  }
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-3));
  CHECK((kde.density.array() >= 0.0).all());
}
