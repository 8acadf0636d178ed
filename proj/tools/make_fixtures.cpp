// Regenerates the synthetic fixtures in data/:
//   synthetic_observations_H.csv  transition frequencies of set H at several biases
//   synthetic_s21.csv             |S21| traces with a cubic background, 0.5% noise
//
// usage: make_fixtures <data-dir>

#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include "rabispec/io.hpp"
#include "rabispec/spectro.hpp"

namespace rs = rabispec;

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : rs::io::default_data_dir();
  char buf[128];

  {
    const auto sets = rs::io::load_reference_sets(dir + "/table1.csv");
    const auto truth = rs::io::find_set(sets, "H").params;
    std::ofstream out(dir + "/synthetic_observations_H.csv");
    out << "# Synthetic, noiseless: exact model transition frequencies for\n"
           "# delta = 1.68, omega = 6.345, g = 7.27 GHz (set H), n_max = 40.\n"
           "# Regenerate with tools/make_fixtures.\n";
    out << rs::io::kObservationHeader << '\n';
    for (double eps : {0.0, 0.3, 0.6, 0.9, 1.2, 1.5}) {
      rs::CircuitParams p = truth;
      p.epsilon = eps;
      const auto e = rs::eigenvalues_only(p);
      for (auto [from, to] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
        std::snprintf(buf, sizeof buf, "%.2f,%d,%d,%.12f\n", eps, from, to, e(to) - e(from));
        out << buf;
      }
    }
  }

  {
    std::ofstream out(dir + "/synthetic_s21.csv");
    out << "# Synthetic hanger traces at two biases. Truth per bias:\n"
           "#   eps 0.0: omega0 6.300 GHz, Q_L 20000, Q_e 30000, phi 0.30\n"
           "#   eps 0.5: omega0 6.302 GHz, Q_L 18000, Q_e 25000, phi 0.25\n"
           "# Background 0.8 + 2 x - 300 x^2 + 1e4 x^3, x = omega_p - omega0.\n"
           "# Multiplicative Gaussian noise 0.5%, mt19937 seed 7.\n"
           "# Regenerate with tools/make_fixtures.\n";
    out << rs::io::kSpectrumHeader << '\n';
    std::mt19937 rng(7);
    std::normal_distribution<double> n01(0.0, 1.0);
    const rs::LineshapeParams truth[2] = {{6.300, 2.0e4, 3.0e4, 0.30}, {6.302, 1.8e4, 2.5e4, 0.25}};
    const double eps[2] = {0.0, 0.5};
    for (int k = 0; k < 2; ++k) {
      rs::BackgroundPoly bg;
      bg.center = truth[k].omega0;
      bg.coefficients = {0.8, 2.0, -300.0, 1.0e4};
      const double lw = truth[k].omega0 / truth[k].q_total;
      for (int i = 0; i < 201; ++i) {
        const double w = truth[k].omega0 - 8 * lw + 16 * lw * i / 200;
        const double v = rs::s21_magnitude(truth[k], bg, w) * (1.0 + 5e-3 * n01(rng));
        std::snprintf(buf, sizeof buf, "%.1f,%.9f,%.9f\n", eps[k], w, v);
        out << buf;
      }
    }
  }
  return 0;
}
