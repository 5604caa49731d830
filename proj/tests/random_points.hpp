#pragma once

#include <cmath>
#include <random>
#include <vector>

// Reproducible in-domain parameter points for property tests.
struct Point {
  double s;
  double gamma;
  double phi;
};

inline std::vector<Point> random_points(int count, unsigned seed, double s_lo = 0.3,
                                        double s_hi = 0.995, double g_lo = 1.2,
                                        double g_hi = 9.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> s(s_lo, s_hi);
  std::uniform_real_distribution<double> lg(std::log(g_lo), std::log(g_hi));
  std::uniform_real_distribution<double> phi(0.02, 3.1);
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) out.push_back({s(rng), std::exp(lg(rng)), phi(rng)});
  return out;
}
