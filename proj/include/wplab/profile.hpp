#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <vector>

#include "wplab/common.hpp"

namespace wplab {

// Transition profile shared by every bump in the library: the normalized
// antiderivative of s -> exp(-2/(s(1-s))), which is exp(-1/s)-flat at both
// endpoints. The squared kernel buys enough spectral decay that a truncated
// packet expansion at |n| <= 64 reconstructs to < 1e-6 relative error, which
// the plain exp(-1/s)/(exp(-1/s)+exp(-1/(1-s))) quotient step cannot reach
// at that truncation.
namespace detail {

inline double step_kernel(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return std::exp(-2.0 / (t * (1.0 - t)));
}

struct StepTable {
  static constexpr int kCells = 1 << 13;
  std::vector<double> cumulative;  // kCells + 1 nodes on [0,1]
  std::vector<double> slope;       // normalized kernel at nodes
  double total = 0.0;

  StepTable() {
    const int n = kCells;
    const double h = 1.0 / n;
    cumulative.assign(n + 1, 0.0);
    std::vector<double> cell(n, 0.0);
    // per-cell Simpson with 8 panels; kernel is smooth so this is exact to
    // well below the Hermite interpolation error
    for (int i = 0; i < n; ++i) {
      const double a = i * h;
      const int sub = 8;
      const double hh = h / sub;
      double s = 0.0;
      for (int j = 0; j < sub; ++j) {
        const double x0 = a + j * hh;
        s += (step_kernel(x0) + 4.0 * step_kernel(x0 + 0.5 * hh) + step_kernel(x0 + hh)) * (hh / 6.0);
      }
      cell[i] = s;
    }
    CompensatedSum<double> acc;
    for (int i = 0; i < n; ++i) {
      acc.add(cell[i]);
      cumulative[i + 1] = acc.value();
    }
    total = cumulative[n];
    slope.assign(n + 1, 0.0);
    for (int i = 0; i <= n; ++i) slope[i] = step_kernel(i * h) / total;
    for (int i = 0; i <= n; ++i) cumulative[i] /= total;
    cumulative[n] = 1.0;
  }
};

inline const StepTable& step_table() {
  static const StepTable table;
  return table;
}

}  // namespace detail

/// Smooth step: 0 for s <= 0, 1 for s >= 1, C^inf monotone in between.
/// Evaluated by cubic Hermite interpolation of the tabulated antiderivative;
/// the node derivatives are the exact kernel values, so the interpolation
/// error is O(h^4) ~ 1e-17.
inline double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const auto& tab = detail::step_table();
  const int n = detail::StepTable::kCells;
  const double x = s * n;
  int i = static_cast<int>(x);
  if (i >= n) i = n - 1;
  const double u = x - i;
  const double h = 1.0 / n;
  const double f0 = tab.cumulative[i], f1 = tab.cumulative[i + 1];
  const double d0 = tab.slope[i] * h, d1 = tab.slope[i + 1] * h;
  const double u2 = u * u, u3 = u2 * u;
  const double v = (2 * u3 - 3 * u2 + 1) * f0 + (u3 - 2 * u2 + u) * d0 + (-2 * u3 + 3 * u2) * f1 + (u3 - u2) * d1;
  // clamping to the cell range keeps the tabulated monotonicity exact; the
  // correction only bites in the flat tails at subnormal scales
  return std::clamp(v, f0, f1);
}

/// Canonical bump profile on base [-1/2, 1/2]: identically 1 on the base,
/// supported on [-c/2, c/2], symmetric, values in [0,1].
inline double bump_profile(double s, double enlargement) {
  const double a = std::abs(s);
  if (a <= 0.5) return 1.0;
  const double half_support = 0.5 * enlargement;
  if (a >= half_support) return 0.0;
  const double w = 0.5 * (enlargement - 1.0);
  return smooth_step((half_support - a) / w);
}

/// Bump adapted to [lo, hi]: == 1 there, supported on the c-dilate about the
/// same center, transition width (c-1)(hi-lo)/2 per side.
inline double bump(double x, double lo, double hi, double enlargement) {
  const double center = 0.5 * (lo + hi);
  const double len = hi - lo;
  return bump_profile((x - center) / len, enlargement);
}

/// Fourier transform of the canonical profile: Bhat(u) = int B(s) e^{-2pi i s u} ds.
/// B is even, so Bhat is real and even. Composite trapezoid over the support;
/// the integrand vanishes to all orders at the endpoints, so the rule is
/// spectrally accurate once the oscillation is resolved.
inline double profile_transform(double u, double enlargement, int min_cells = 4096) {
  const double half = 0.5 * enlargement;
  int cells = min_cells;
  // at least ~16 points per oscillation period
  const double needed = 16.0 * std::abs(u) * enlargement;
  while (cells < needed) cells *= 2;
  const double h = 2.0 * half / cells;
  CompensatedSum<double> acc;
  for (int j = 0; j <= cells; ++j) {
    const double s = -half + j * h;
    const double w = (j == 0 || j == cells) ? 0.5 * h : h;
    acc.add(w * bump_profile(s, enlargement) * std::cos(two_pi * s * u));
  }
  return acc.value();
}

}  // namespace wplab
