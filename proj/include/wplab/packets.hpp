#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "wplab/common.hpp"
#include "wplab/grid.hpp"
#include "wplab/profile.hpp"

namespace wplab {

struct BumpSpec {
  /// support = enlargement-dilate of the base; transition width
  /// (enlargement-1)*|base|/2 per side. 1.4 keeps the L2-normalized packet
  /// norm above 0.9 while the truncated expansion at |n| <= 64 still
  /// reconstructs below 1e-6.
  double enlargement = 1.4;
};

enum class PacketSide { frequency, physical };
enum class Normalization { linf, l2 };

/// Rectangle base for a packet: one axis for interval packets, two for
/// rectangle packets.
struct PacketBase {
  std::vector<std::pair<double, double>> sides;  // (lo, hi) per axis

  int rank() const { return static_cast<int>(sides.size()); }
  double len(int d) const { return sides[d].second - sides[d].first; }
  double center(int d) const { return 0.5 * (sides[d].first + sides[d].second); }
};

inline PacketBase interval_base(double lo, double hi) { return PacketBase{{{lo, hi}}}; }
inline PacketBase rect_base(double lo1, double hi1, double lo2, double hi2) {
  return PacketBase{{{lo1, hi1}, {lo2, hi2}}};
}

/// L-infinity normalized bump adapted to the base: == 1 on the base, smooth,
/// supported on the enlargement-dilate.
inline std::function<double(std::span<const double>)> make_bump(const PacketBase& base, const BumpSpec& spec = {}) {
  return [base, c = spec.enlargement](std::span<const double> xi) {
    double v = 1.0;
    for (int d = 0; d < base.rank(); ++d) v *= bump_profile((xi[d] - base.center(d)) / base.len(d), c);
    return v;
  };
}

/// Modulated wave packet. On the frequency side
///   phi(xi) = beta * prod_d B((xi_d - c_d)/len_d) * e^{-2pi i n_d xi_d / p_d},
/// with per-axis period p_d = enlargement * len_d and prefactor
/// beta = prod_d p_d^{-1/2} (so the modulation family is an orthonormal
/// system on the support and Bessel/reconstruction hold exactly). The
/// physical side is the Fourier transform of the frequency side.
struct WavePacket {
  PacketBase base;
  std::vector<int> modulation;  // one entry per axis
  BumpSpec spec;
  PacketSide side = PacketSide::frequency;
  Normalization norm = Normalization::l2;

  int rank() const { return base.rank(); }
  double period(int d) const { return spec.enlargement * base.len(d); }
  double support_lo(int d) const { return base.center(d) - 0.5 * period(d); }
  double support_hi(int d) const { return base.center(d) + 0.5 * period(d); }

  double prefactor() const {
    if (norm == Normalization::linf) return 1.0;
    double b = 1.0;
    for (int d = 0; d < rank(); ++d) b /= std::sqrt(period(d));
    return b;
  }

  cplx eval_freq(std::span<const double> xi) const {
    double env = prefactor();
    double phase = 0.0;
    for (int d = 0; d < rank(); ++d) {
      env *= bump_profile((xi[d] - base.center(d)) / base.len(d), spec.enlargement);
      phase -= two_pi * modulation[d] * xi[d] / period(d);
    }
    if (env == 0.0) return {0.0, 0.0};
    return env * cplx{std::cos(phase), std::sin(phase)};
  }

  /// Fourier transform of the frequency-side packet at x. Per axis,
  ///   FT(x) = beta_d * len * e^{-2pi i c_d (x + n/p)} * Bhat(len *(x + n/p)),
  /// where Bhat is the profile transform evaluated by quadrature over the
  /// packet support.
  cplx eval_phys(std::span<const double> x) const {
    cplx v = {prefactor(), 0.0};
    for (int d = 0; d < rank(); ++d) {
      const double len = base.len(d);
      const double shifted = x[d] + modulation[d] / period(d);
      const double mag = len * profile_transform(len * shifted, spec.enlargement);
      const double ph = -two_pi * base.center(d) * shifted;
      v *= mag * cplx{std::cos(ph), std::sin(ph)};
    }
    return v;
  }

  cplx operator()(std::span<const double> p) const {
    return side == PacketSide::frequency ? eval_freq(p) : eval_phys(p);
  }
};

inline WavePacket packet_freq(const PacketBase& base, std::vector<int> modulation, const BumpSpec& spec = {}) {
  if (static_cast<int>(modulation.size()) != base.rank())
    throw std::domain_error("packet_freq: modulation rank mismatch");
  return WavePacket{base, std::move(modulation), spec, PacketSide::frequency, Normalization::l2};
}

inline cplx packet_phys(const PacketBase& base, std::vector<int> modulation, const BumpSpec& spec,
                        std::span<const double> x) {
  WavePacket p = packet_freq(base, std::move(modulation), spec);
  return p.eval_phys(x);
}

namespace detail {

inline void check_chirp_resolved(const SampledFunction& h, int m) {
  for (int d = 0; d < h.rank(); ++d) {
    const double dxi = h.axis(d).step();
    if (std::abs(m) * dxi > 0.1)
      throw under_resolved("mod_coeff: chirp e^{-2pi i m |xi|^2} under-resolved: |m|*dxi = " +
                           std::to_string(std::abs(m) * dxi) + " > 0.1 (m=" + std::to_string(m) +
                           ", dxi=" + std::to_string(dxi) + ")");
  }
}

// index range of h's axis d intersecting [lo, hi]
inline std::pair<int, int> node_range(const Axis& a, double lo, double hi) {
  int i0 = static_cast<int>(std::ceil((lo - a.lo) / a.step() - 1e-12));
  int i1 = static_cast<int>(std::floor((hi - a.lo) / a.step() + 1e-12));
  i0 = std::max(i0, 0);
  i1 = std::min(i1, a.cells);
  return {i0, i1};
}

}  // namespace detail

/// <h(.) e^{-2pi i m |.|^2}, packet> by composite trapezoid over h's grid.
/// h is zero outside its box, so a packet support sticking out of the box
/// contributes nothing. Refuses when the grid cannot resolve the chirp.
inline cplx mod_coeff(const SampledFunction& h, int m, const WavePacket& packet) {
  if (packet.side != PacketSide::frequency) throw std::domain_error("mod_coeff: frequency-side packet required");
  if (h.rank() != packet.rank()) throw std::domain_error("mod_coeff: rank mismatch");
  detail::check_chirp_resolved(h, m);

  if (h.rank() == 1) {
    const Axis& a = h.axis(0);
    auto [i0, i1] = detail::node_range(a, packet.support_lo(0), packet.support_hi(0));
    CompensatedSum<cplx> acc;
    for (int i = i0; i <= i1; ++i) {
      const double xi = a.node(i);
      const double pt[1] = {xi};
      const cplx pk = packet.eval_freq(pt);
      if (pk == cplx{0.0, 0.0}) continue;
      const double ph = -two_pi * m * xi * xi;
      acc.add(a.weight(i) * h.samples()[i] * cplx{std::cos(ph), std::sin(ph)} * std::conj(pk));
    }
    return acc.value();
  }
  if (h.rank() == 2) {
    const Axis& a0 = h.axis(0);
    const Axis& a1 = h.axis(1);
    auto [i0, i1] = detail::node_range(a0, packet.support_lo(0), packet.support_hi(0));
    auto [j0, j1] = detail::node_range(a1, packet.support_lo(1), packet.support_hi(1));
    CompensatedSum<cplx> acc;
    for (int i = i0; i <= i1; ++i) {
      const double xi0 = a0.node(i);
      for (int j = j0; j <= j1; ++j) {
        const double xi1 = a1.node(j);
        const double pt[2] = {xi0, xi1};
        const cplx pk = packet.eval_freq(pt);
        if (pk == cplx{0.0, 0.0}) continue;
        const double ph = -two_pi * m * (xi0 * xi0 + xi1 * xi1);
        acc.add(a0.weight(i) * a1.weight(j) * h.samples()[h.flat(std::array{i, j})] *
                cplx{std::cos(ph), std::sin(ph)} * std::conj(pk));
      }
    }
    return acc.value();
  }
  throw std::domain_error("mod_coeff: rank must be 1 or 2");
}

/// Fourier coefficient of the quadratic chirp e^{-2pi i (t-m)|.|^2} against
/// the unit-box packet of modulation u. Tensorizes over axes; each factor is
/// a 1-d quadrature over the dilate of [0,1].
inline cplx gauss_coeff(std::array<int, 2> u, int m, double t, const BumpSpec& spec = {}) {
  const double tau = t - m;
  if (std::abs(tau) > 1.0)
    throw std::domain_error("gauss_coeff: |t - m| must be <= 1 (chirp support condition)");
  const double c = spec.enlargement;
  const double p = c;  // unit base
  auto factor = [&](int un) {
    int cells = 4096;
    while (cells < 64 * std::abs(un)) cells *= 2;
    const double lo = 0.5 - 0.5 * p;
    const double h = p / cells;
    CompensatedSum<cplx> acc;
    for (int j = 0; j <= cells; ++j) {
      const double xi = lo + j * h;
      const double w = (j == 0 || j == cells) ? 0.5 * h : h;
      const double env = bump_profile(xi - 0.5, c);
      if (env == 0.0) continue;
      // chirp * conj(packet) = e^{-2pi i tau xi^2} * beta * B * e^{+2pi i u xi/p}
      const double ph = -two_pi * tau * xi * xi + two_pi * un * xi / p;
      acc.add(w * env * cplx{std::cos(ph), std::sin(ph)});
    }
    return acc.value() / std::sqrt(p);
  };
  return factor(u[0]) * factor(u[1]);
}

/// Partial packet expansion of h e^{-2pi i m |.|^2} over the base rectangle:
///   sum_{|n|_inf <= N} mod_coeff(h, m, phi^n) phi^n,
/// evaluated on a fresh grid over the base with the requested resolution.
/// Separable two-stage sums; cost O(nodes^2 * N) per axis.
inline SampledFunction reconstruct(const SampledFunction& h, int m, const PacketBase& base, int N,
                                   std::vector<int> out_cells, const BumpSpec& spec = {}) {
  if (N < 1) throw std::domain_error("reconstruct: N must be >= 1");
  if (h.rank() != base.rank()) throw std::domain_error("reconstruct: rank mismatch");
  detail::check_chirp_resolved(h, m);
  const double c = spec.enlargement;
  const int nmodes = 2 * N + 1;

  // per-axis tables on h's grid: window, chirp, modulation phases
  struct AxisTables {
    int i0, i1;
    std::vector<double> win, wgt;
    std::vector<cplx> chirp;
    std::vector<cplx> mod;  // [n][i] e^{+2pi i n xi/p}, row-major
  };
  std::vector<AxisTables> tabs(h.rank());
  for (int d = 0; d < h.rank(); ++d) {
    const Axis& a = h.axis(d);
    const double p = c * base.len(d);
    const double slo = base.center(d) - 0.5 * p, shi = base.center(d) + 0.5 * p;
    auto [i0, i1] = detail::node_range(a, slo, shi);
    AxisTables t;
    t.i0 = i0;
    t.i1 = i1;
    const int count = i1 - i0 + 1;
    t.win.resize(count);
    t.wgt.resize(count);
    t.chirp.resize(count);
    t.mod.resize(static_cast<std::size_t>(nmodes) * count);
    for (int i = 0; i < count; ++i) {
      const double xi = a.node(i0 + i);
      t.win[i] = bump_profile((xi - base.center(d)) / base.len(d), c);
      t.wgt[i] = a.weight(i0 + i);
      // e^{-2pi i m |xi|^2} factors across axes as e^{-2pi i m xi_d^2}
      const double ph = -two_pi * m * xi * xi;
      t.chirp[i] = cplx{std::cos(ph), std::sin(ph)};
      for (int n = -N; n <= N; ++n) {
        const double mph = two_pi * n * xi / p;
        t.mod[static_cast<std::size_t>(n + N) * count + i] = cplx{std::cos(mph), std::sin(mph)};
      }
    }
    tabs[d] = std::move(t);
  }

  double beta = 1.0;
  for (int d = 0; d < h.rank(); ++d) beta /= std::sqrt(c * base.len(d));

  std::vector<Axis> out_axes;
  for (int d = 0; d < h.rank(); ++d)
    out_axes.push_back(axis(base.sides[d].first, base.sides[d].second, out_cells[d]));
  SampledFunction out(out_axes);

  if (h.rank() == 1) {
    const auto& t = tabs[0];
    const int count = t.i1 - t.i0 + 1;
    std::vector<cplx> coeff(nmodes);
    for (int n = 0; n < nmodes; ++n) {
      CompensatedSum<cplx> acc;
      for (int i = 0; i < count; ++i)
        acc.add(t.wgt[i] * h.samples()[t.i0 + i] * t.chirp[i] * t.win[i] * t.mod[static_cast<std::size_t>(n) * count + i]);
      coeff[n] = beta * acc.value();
    }
    const double p = c * base.len(0);
    for (int i = 0; i <= out.axis(0).cells; ++i) {
      const double xi = out.axis(0).node(i);
      const double env = beta * bump_profile((xi - base.center(0)) / base.len(0), c);
      CompensatedSum<cplx> acc;
      for (int n = -N; n <= N; ++n) {
        const double ph = -two_pi * n * xi / p;
        acc.add(coeff[n + N] * cplx{std::cos(ph), std::sin(ph)});
      }
      out.samples()[i] = env * acc.value();
    }
    return out;
  }

  // rank 2
  const auto& t0 = tabs[0];
  const auto& t1 = tabs[1];
  const int c0 = t0.i1 - t0.i0 + 1;
  const int c1 = t1.i1 - t1.i0 + 1;
  // stage 1: R[n0][j] = sum_i w h(i,j) chirp0 win0 mod0(n0,i)
  std::vector<cplx> R(static_cast<std::size_t>(nmodes) * c1);
  for (int n0 = 0; n0 < nmodes; ++n0) {
    for (int j = 0; j < c1; ++j) {
      cplx s{0.0, 0.0};
      for (int i = 0; i < c0; ++i) {
        const cplx hval = h.samples()[h.flat(std::array{t0.i0 + i, t1.i0 + j})];
        s += t0.wgt[i] * hval * t0.chirp[i] * t0.win[i] * t0.mod[static_cast<std::size_t>(n0) * c0 + i];
      }
      R[static_cast<std::size_t>(n0) * c1 + j] = s;
    }
  }
  // stage 2: coeff[n0][n1]
  std::vector<cplx> coeff(static_cast<std::size_t>(nmodes) * nmodes);
  for (int n0 = 0; n0 < nmodes; ++n0) {
    for (int n1 = 0; n1 < nmodes; ++n1) {
      cplx s{0.0, 0.0};
      for (int j = 0; j < c1; ++j)
        s += t1.wgt[j] * t1.chirp[j] * t1.win[j] * t1.mod[static_cast<std::size_t>(n1) * c1 + j] *
             R[static_cast<std::size_t>(n0) * c1 + j];
      coeff[static_cast<std::size_t>(n0) * nmodes + n1] = beta * s;
    }
  }
  // synthesis, separable: S[n0][q1] = sum_n1 coeff e^{-2pi i n1 xi_q1 / p1}
  const double p0 = c * base.len(0), p1 = c * base.len(1);
  const int q0n = out.axis(0).nodes(), q1n = out.axis(1).nodes();
  std::vector<cplx> S(static_cast<std::size_t>(nmodes) * q1n);
  for (int n0 = 0; n0 < nmodes; ++n0) {
    for (int q1 = 0; q1 < q1n; ++q1) {
      const double xi = out.axis(1).node(q1);
      cplx s{0.0, 0.0};
      for (int n1 = -N; n1 <= N; ++n1) {
        const double ph = -two_pi * n1 * xi / p1;
        s += coeff[static_cast<std::size_t>(n0) * nmodes + (n1 + N)] * cplx{std::cos(ph), std::sin(ph)};
      }
      S[static_cast<std::size_t>(n0) * q1n + q1] = s;
    }
  }
  for (int q0 = 0; q0 < q0n; ++q0) {
    const double xi0 = out.axis(0).node(q0);
    const double env0 = bump_profile((xi0 - base.center(0)) / base.len(0), c);
    for (int q1 = 0; q1 < q1n; ++q1) {
      const double xi1 = out.axis(1).node(q1);
      const double env1 = bump_profile((xi1 - base.center(1)) / base.len(1), c);
      cplx s{0.0, 0.0};
      for (int n0 = -N; n0 <= N; ++n0) {
        const double ph = -two_pi * n0 * xi0 / p0;
        s += cplx{std::cos(ph), std::sin(ph)} * S[static_cast<std::size_t>(n0 + N) * q1n + q1];
      }
      out.samples()[out.flat(std::array{q0, q1})] = beta * env0 * env1 * s;
    }
  }
  return out;
}

/// sum_{|n|<=N} |<h chirp_m, phi^n_I>|^2 / ||h phi_I||_2^2 for a 1-d packet
/// family at fixed (I, m). Bounded by 1 up to quadrature error.
inline double bessel_ratio(const SampledFunction& h, double lo, double hi, int m, int N,
                           const BumpSpec& spec = {}) {
  if (h.rank() != 1) throw std::domain_error("bessel_ratio: 1-d h required");
  CompensatedSum<double> num;
  for (int n = -N; n <= N; ++n) {
    const cplx cn = mod_coeff(h, m, packet_freq(interval_base(lo, hi), {n}, spec));
    num.add(std::norm(cn));
  }
  const Axis& a = h.axis(0);
  CompensatedSum<double> den;
  for (int i = 0; i <= a.cells; ++i) {
    const double b = bump(a.node(i), lo, hi, spec.enlargement);
    den.add(a.weight(i) * std::norm(h.samples()[i]) * b * b);
  }
  return num.value() / den.value();
}

}  // namespace wplab
