#include "piml/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace piml {

namespace {

QuadRule build_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadRule rule;
  rule.nodes.resize(std::size_t(n));
  rule.weights.resize(std::size_t(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    rule.nodes[std::size_t(i)] = -x;
    rule.nodes[std::size_t(n - 1 - i)] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[std::size_t(i)] = w;
    rule.weights[std::size_t(n - 1 - i)] = w;
  }
  return rule;
}

}  // namespace

const QuadRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, QuadRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& breakpoints,
                        int points_per_panel) {
  if (breakpoints.size() < 2)
    throw std::invalid_argument("integrate_panels: need >= 2 breakpoints");
  const QuadRule& rule = gauss_legendre(points_per_panel);
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    const double a = breakpoints[p], b = breakpoints[p + 1];
    if (b < a) throw std::invalid_argument("integrate_panels: unsorted panels");
    if (b == a) continue;
    const double mid = 0.5 * (a + b), scale = 0.5 * (b - a);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      total += scale * rule.weights[q] * f(mid + scale * rule.nodes[q]);
  }
  return total;
}

}  // namespace piml
