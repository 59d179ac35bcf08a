#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "gyrochip/errors.hpp"

namespace gyrochip::quadrature {

struct Options {
  double relative_tolerance = 1e-6;
  double absolute_tolerance = 0.0;
  std::size_t max_panels = 20'000'000;
};

struct Result {
  double value;
  double error_estimate;  // sum of per-panel |K15 - G7|
  std::size_t panels;
  std::size_t evaluations;
  bool converged;
};

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

// 7-point Gauss / 15-point Kronrod rule on [a, b].
template <class F>
Panel gauss_kronrod_15(F& f, double a, double b) {
  static constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                   0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = wgk[7] * fc;
  double gauss = wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * xgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += wgk[j] * sum;
    if (j % 2 == 1) gauss += wg[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

namespace detail {

struct Compensated {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace detail

// Adaptive integration of f over [breakpoints.front(), breakpoints.back()].
// Every breakpoint is a panel boundary; the panel with the largest error is
// bisected until the summed error meets the tolerance. The final sum runs in
// ascending panel order, so the result does not depend on refinement order.
template <class F>
Result integrate(F&& f, std::span<const double> breakpoints, const Options& options = {}) {
  if (breakpoints.size() < 2) throw InvalidInputError("integrate: need at least two breakpoints");
  std::vector<Panel> panels;
  panels.reserve(breakpoints.size() - 1);
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) {
      throw InvalidInputError("integrate: breakpoints must be strictly increasing");
    }
    panels.push_back(gauss_kronrod_15(f, breakpoints[i], breakpoints[i + 1]));
  }
  std::size_t evaluations = 15 * panels.size();

  auto totals = [&] {
    detail::Compensated v, e;
    for (const auto& p : panels) {
      v.add(p.value);
      e.add(p.error);
    }
    return std::pair{v.value(), e.value()};
  };
  auto [value, error] = totals();
  auto target = [&](double v) { return std::max(options.absolute_tolerance, options.relative_tolerance * std::abs(v)); };

  if (error > target(value)) {
    std::vector<std::size_t> heap(panels.size());
    for (std::size_t i = 0; i < heap.size(); ++i) heap[i] = i;
    auto less = [&](std::size_t x, std::size_t y) {
      if (panels[x].error != panels[y].error) return panels[x].error < panels[y].error;
      return x > y;
    };
    std::make_heap(heap.begin(), heap.end(), less);
    while (error > target(value) && panels.size() < options.max_panels) {
      std::pop_heap(heap.begin(), heap.end(), less);
      const std::size_t worst = heap.back();
      heap.pop_back();
      const Panel old = panels[worst];
      const double mid = 0.5 * (old.a + old.b);
      if (!(mid > old.a && mid < old.b)) break;  // panel at floating-point resolution
      panels[worst] = gauss_kronrod_15(f, old.a, mid);
      panels.push_back(gauss_kronrod_15(f, mid, old.b));
      evaluations += 30;
      value += panels[worst].value + panels.back().value - old.value;
      error += panels[worst].error + panels.back().error - old.error;
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), less);
      heap.push_back(panels.size() - 1);
      std::push_heap(heap.begin(), heap.end(), less);
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    std::tie(value, error) = totals();
  }
  return {value, error, panels.size(), evaluations, error <= target(value)};
}

}  // namespace gyrochip::quadrature
