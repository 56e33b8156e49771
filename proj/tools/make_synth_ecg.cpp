// Generates the bundled synthetic heartbeat dataset (data/synth_ecg_*.txt):
// two classes of ECG-shaped curves in the UCR file convention, built from a
// fixed set of orthonormal variation modes with a decaying variance profile
// and class-dependent mean shifts on a few modes. The drawn coefficients are
// seeded, so regenerating reproduces the committed files byte for byte.

#include <fstream>
#include <iostream>
#include <vector>

#include <Eigen/Dense>

#include "frfx/grid.hpp"
#include "frfx/rng.hpp"

namespace {

constexpr int kSeriesLength = 96;
constexpr int kModes = 19;
constexpr std::uint64_t kSeed = 20240911;

double bump(double t, double center, double width) {
  const double z = (t - center) / width;
  return std::exp(-0.5 * z * z);
}

// ECG-ish average heartbeat: P wave, QRS complex, T wave.
double mean_shape(double t) {
  return 0.30 * bump(t, 0.18, 0.030) - 0.55 * bump(t, 0.305, 0.013) +
         2.10 * bump(t, 0.350, 0.020) - 0.75 * bump(t, 0.400, 0.016) +
         0.55 * bump(t, 0.640, 0.055) - 0.28;
}

// Smooth raw modes; orthonormalized below. Low frequencies first so the
// variance ordering survives spline smoothing.
double raw_mode(int k, double t) {
  const double tau = 2.0 * 3.14159265358979323846;
  switch (k) {
    case 0: return bump(t, 0.35, 0.075);                      // QRS amplitude
    case 1: return bump(t, 0.30, 0.045) - bump(t, 0.46, 0.055); // peak shift
    case 2: return bump(t, 0.14, 0.055) - 0.5 * bump(t, 0.64, 0.10); // early lift
    case 3: return std::sin(tau * t);
    case 4: return std::cos(tau * t);
    case 5: return bump(t, 0.52, 0.06);
    case 6: return std::sin(2.0 * tau * t);
    case 7: return std::cos(2.0 * tau * t);
    case 8: return bump(t, 0.80, 0.05);
    case 9: return std::sin(3.0 * tau * t);
    case 10: return std::cos(3.0 * tau * t);
    case 11: return bump(t, 0.07, 0.04);
    case 12: return std::sin(4.0 * tau * t);
    case 13: return std::cos(4.0 * tau * t);
    case 14: return bump(t, 0.93, 0.04);
    case 15: return std::sin(5.0 * tau * t);
    case 16: return std::cos(5.0 * tau * t);
    case 17: return std::sin(6.0 * tau * t);
    default: return std::cos(6.0 * tau * t);
  }
}

struct ClassProfile {
  // within-class sd and class mean shift per mode (class 0 gets -shift/2,
  // class 1 gets +shift/2)
  double sd[kModes];
  double shift[kModes];
};

ClassProfile profile() {
  ClassProfile p{};
  const double sds[kModes] = {1.95, 0.92, 0.83, 0.81, 0.71, 0.63, 0.55,
                              0.50, 0.45, 0.40, 0.36, 0.33, 0.30, 0.275,
                              0.245, 0.225, 0.20, 0.155, 0.14};
  for (int k = 0; k < kModes; ++k) p.sd[k] = sds[k];
  p.shift[0] = 0.35;   // mild common-variability separation
  p.shift[1] = -1.55;  // main discriminative mode
  p.shift[2] = -0.95;  // secondary discriminative mode
  p.shift[4] = 0.40;
  return p;
}

void write_file(const std::string& path, const frfx::TimeGrid& grid,
                const Eigen::MatrixXd& modes, const Eigen::VectorXd& mean,
                int n_diseased, int n_healthy, frfx::Rng& rng) {
  const ClassProfile p = profile();
  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot write " << path << '\n';
    std::exit(1);
  }
  out.precision(8);
  out << std::fixed;

  std::vector<int> labels;
  for (int i = 0; i < n_diseased; ++i) labels.push_back(1);
  for (int i = 0; i < n_healthy; ++i) labels.push_back(-1);
  rng.shuffle(labels);

  for (int label : labels) {
    Eigen::VectorXd curve = mean;
    const double side = label == 1 ? 0.5 : -0.5;
    for (int k = 0; k < kModes; ++k) {
      const double coef = side * p.shift[k] + p.sd[k] * rng.normal();
      curve += coef * modes.row(k).transpose();
    }
    for (int j = 0; j < curve.size(); ++j) {
      curve(j) += 0.05 * rng.normal();  // observation noise
    }
    out << label;
    for (int j = 0; j < curve.size(); ++j) out << ',' << curve(j);
    out << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out_dir = argc > 1 ? argv[1] : "data";
  const frfx::TimeGrid grid = frfx::TimeGrid::uniform(0.0, 1.0, kSeriesLength);

  Eigen::VectorXd mean(kSeriesLength);
  Eigen::MatrixXd modes(kModes, kSeriesLength);
  for (int j = 0; j < kSeriesLength; ++j) {
    const double t = grid.points(j);
    mean(j) = mean_shape(t);
    for (int k = 0; k < kModes; ++k) modes(k, j) = raw_mode(k, t);
  }

  // Gram-Schmidt under the quadrature inner product.
  for (int k = 0; k < kModes; ++k) {
    Eigen::VectorXd v = modes.row(k).transpose();
    for (int prev = 0; prev < k; ++prev) {
      const Eigen::VectorXd u = modes.row(prev).transpose();
      v -= frfx::weighted_inner(grid, v, u) * u;
    }
    modes.row(k) = (v / frfx::weighted_norm(grid, v)).transpose();
  }

  frfx::Rng train_rng = frfx::Rng::derive(kSeed, 1);
  frfx::Rng test_rng = frfx::Rng::derive(kSeed, 2);
  write_file(out_dir + "/synth_ecg_TRAIN.txt", grid, modes, mean, 31, 69, train_rng);
  write_file(out_dir + "/synth_ecg_TEST.txt", grid, modes, mean, 36, 64, test_rng);
  std::cout << "wrote " << out_dir << "/synth_ecg_TRAIN.txt and _TEST.txt\n";
  return 0;
}
