#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "blochlab/errors.hpp"
#include "blochlab/numfmt.hpp"

namespace blochlab {

struct QuadratureResult {
  double value = 0.0;
  double error_bound = 0.0;
  int panels = 0;
};

// 15-point Kronrod rule with embedded 7-point Gauss rule on [a, b].
// err receives |G7 - K15|, a conservative estimate of the Kronrod error.
template <class F>
double gauss_kronrod_15(const F& f, double a, double b, double& err) {
  // node (|x| on [-1,1]), Gauss weight, Kronrod weight
  static const double nw[8][3] = {
      {0.000000000000000, 0.417959183673469, 0.209482141084728},
      {0.405845151377397, 0.381830050505119, 0.190350578064785},
      {0.741531185599394, 0.279705391489277, 0.140653259715525},
      {0.949107912342759, 0.129484966168870, 0.063092092629979},
      {0.207784955007898, 0.0, 0.204432940075298},
      {0.586087235467691, 0.0, 0.169004726639267},
      {0.864864423359769, 0.0, 0.104790010322250},
      {0.991455371120813, 0.0, 0.022935322010529}};

  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  const double f0 = f(c);
  double g7 = nw[0][1] * f0;
  double k15 = nw[0][2] * f0;
  for (int i = 1; i < 8; ++i) {
    const double dx = h * nw[i][0];
    const double fi = f(c + dx) + f(c - dx);
    g7 += nw[i][1] * fi;
    k15 += nw[i][2] * fi;
  }
  g7 *= h;
  k15 *= h;
  err = std::fabs(g7 - k15);
  return k15;
}

// Adaptive bisection until the summed per-panel error estimates drop below
// abs_tol. Throws numeric_error carrying the partial sum when the panel
// budget runs out.
template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b,
                                    double abs_tol, int max_panels = 4000) {
  struct Panel {
    double a, b, value, err;
  };
  if (a == b) return {0.0, 0.0, 0};

  std::vector<Panel> panels;
  {
    double e0 = 0.0;
    const double v0 = gauss_kronrod_15(f, a, b, e0);
    panels.push_back({a, b, v0, e0});
  }
  double total_err = panels[0].err;

  while (total_err > abs_tol) {
    if (static_cast<int>(panels.size()) >= max_panels) {
      double partial = 0.0;
      for (const auto& p : panels) partial += p.value;
      throw numeric_error(
          "quadrature did not reach tolerance " + format_double(abs_tol) +
              " within " + std::to_string(max_panels) + " panels",
          partial);
    }
    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i) {
      if (panels[i].err > panels[worst].err) worst = i;
    }
    const Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    double el = 0.0, er = 0.0;
    const double vl = gauss_kronrod_15(f, p.a, mid, el);
    const double vr = gauss_kronrod_15(f, mid, p.b, er);
    total_err += el + er - p.err;
    panels[worst] = {p.a, mid, vl, el};
    panels.push_back({mid, p.b, vr, er});
  }

  // Sum left to right for a reproducible result.
  std::sort(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  QuadratureResult out;
  out.panels = static_cast<int>(panels.size());
  for (const auto& p : panels) {
    out.value += p.value;
    out.error_bound += p.err;
  }
  return out;
}

}  // namespace blochlab
