#pragma once

#include <stdexcept>
#include <vector>

namespace tubecalc {

// Central difference of order 1..3 at t=0 with a Richardson table over halved
// steps. All stencils have even error expansions, so each column kills h^{2j}.
// R is double or an Eigen vector/matrix type.
template <class R, class F>
R central_derivative(const F& f, int order, double h, int levels) {
  auto stencil = [&](double s, const R* f0) -> R {
    switch (order) {
      case 1:
        return R((f(s) - f(-s)) / (2.0 * s));
      case 2:
        return R((f(s) - 2.0 * (*f0) + f(-s)) / (s * s));
      case 3:
        return R((f(2 * s) - 2.0 * f(s) + 2.0 * f(-s) - f(-2 * s)) / (2.0 * s * s * s));
      default:
        throw std::invalid_argument("central_derivative: order must be 1..3");
    }
  };
  R f0{};
  if (order == 2) f0 = f(0.0);
  std::vector<std::vector<R>> t(levels);
  double s = h;
  for (int k = 0; k < levels; ++k, s *= 0.5) {
    t[k].push_back(stencil(s, &f0));
    double p = 4.0;
    for (int j = 1; j <= k; ++j, p *= 4.0) {
      t[k].push_back(R(t[k][j - 1] + (t[k][j - 1] - t[k - 1][j - 1]) / (p - 1.0)));
    }
  }
  return t[levels - 1][levels - 1];
}

}  // namespace tubecalc
