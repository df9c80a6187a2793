#pragma once
// Gauss-Legendre quadrature: reference rules on [-1, 1] plus composite
// integration with caller-supplied panel breakpoints (used to split
// integrands at kink locations, where piecewise-smooth quadrature keeps
// its spectral accuracy).

#include <functional>
#include <vector>

namespace piml {

struct QuadRule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;  // sum to 2
};

// n-point rule by Newton iteration on the Legendre recurrence; accurate to
// machine precision for any practical n.
const QuadRule& gauss_legendre(int n);

// Integrate f over consecutive panels [b_0,b_1], [b_1,b_2], ... with an
// n-point rule per panel.  Breakpoints must be non-decreasing.
double integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& breakpoints,
                        int points_per_panel);

}  // namespace piml
