#pragma once

// Gauss-Legendre node tables and a globally adaptive Gauss-Kronrod (7/15)
// integrator for real integrands on finite intervals.

#include <algorithm>
#include <cmath>
#include <queue>
#include <span>
#include <vector>

namespace barron {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule; tables are built once per n and cached.
const GaussRule& gauss_legendre(int n);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  bool converged = true;
};

namespace detail {

// Kronrod 15 / Gauss 7 abscissae and weights on [-1, 1].
inline constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                   0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                   0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                   0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                   0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                   0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                   0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                  0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    resk += kWgk[j] * sum;
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  return {a, b, resk * half, std::abs((resk - resg) * half)};
}

}  // namespace detail

/// Adaptive integral of f over [knots.front(), knots.back()], starting from
/// one GK15 segment per knot interval. Stops when the summed error estimate
/// is below max(abs_tol, rel_tol * |value|) or `max_intervals` is reached.
template <class F>
QuadResult integrate_adaptive(F&& f, std::span<const double> knots, double abs_tol, double rel_tol,
                              int max_intervals = 20000) {
  QuadResult out;
  if (knots.size() < 2) return out;
  std::priority_queue<detail::Segment> heap;
  double total = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (!(knots[i + 1] > knots[i])) continue;
    auto seg = detail::gk15(f, knots[i], knots[i + 1]);
    total += seg.value;
    err += seg.error;
    heap.push(seg);
  }
  int count = static_cast<int>(heap.size());
  while (!heap.empty() && err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (count >= max_intervals) {
      out.converged = false;
      break;
    }
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      out.converged = false;
      break;
    }
    heap.pop();
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum to shed the drift of the running updates.
  double resum = 0.0, reerr = 0.0;
  while (!heap.empty()) {
    resum += heap.top().value;
    reerr += heap.top().error;
    heap.pop();
  }
  out.value = resum;
  out.error = reerr;
  out.intervals = count;
  return out;
}

template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, double abs_tol, double rel_tol,
                              int max_intervals = 20000) {
  const double knots[2] = {a, b};
  return integrate_adaptive(std::forward<F>(f), std::span<const double>(knots, 2), abs_tol, rel_tol,
                            max_intervals);
}

/// Least-squares line y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_abs_residual = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace barron
