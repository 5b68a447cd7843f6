#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wplab/common.hpp"
#include "wplab/fft.hpp"
#include "wplab/grid.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wplab {

/// Truncation window for space-time norms: [-X,X]^d x [-T,T] with
/// power-of-two cell counts per axis.
struct SpaceTimeBox {
  double X = 8.0;
  double T = 8.0;
  int nx = 128;  // cells per spatial axis
  int nt = 128;  // cells in time

  double dx() const { return 2.0 * X / nx; }
  double dt() const { return 2.0 * T / nt; }
};

/// Uniform evaluation lattice x_q = q * dx for q in [q0, q0 + count).
struct XLattice {
  double dx = 0.0;
  std::int64_t q0 = 0;
  int count = 0;

  double point(int i) const { return (q0 + i) * dx; }
};

inline XLattice lattice_for(const SpaceTimeBox& box) {
  return XLattice{box.dx(), -box.nx / 2, box.nx + 1};
}

namespace detail {

inline void check_extension_resolved(const SampledFunction& g, double x_max, double t_max) {
  for (int d = 0; d < g.rank(); ++d) {
    const double dxi = g.axis(d).step();
    const double freq = x_max + 2.0 * t_max;  // max d/dxi of x xi + t xi^2 on [0,1]
    if (freq * dxi > 0.25)
      throw under_resolved("extension: phase under-resolved on the frequency grid: (|x|+2|t|)*dxi = " +
                           std::to_string(freq * dxi) + " > 0.25 (|x|<=" + std::to_string(x_max) +
                           ", |t|<=" + std::to_string(t_max) + ", dxi=" + std::to_string(dxi) + ")");
  }
}

// zero-padding length: 1/(dx * dxi) must be an integer >= nodes
inline int padded_length(double dx, double dxi, int nodes) {
  const double L = 1.0 / (dx * dxi);
  const double rounded = std::round(L);
  if (std::abs(L - rounded) > 1e-9 * L || rounded < nodes)
    throw std::invalid_argument(
        "extension lattice is not commensurate with the frequency grid: 1/(dx*dxi) = " + std::to_string(L) +
        "; use extend_point for arbitrary points");
  return static_cast<int>(rounded);
}

}  // namespace detail

/// E_d g at a single space-time point by direct quadrature over g's grid.
inline cplx extend_point(const SampledFunction& g, std::span<const double> x, double t) {
  const int d = g.rank();
  if (static_cast<int>(x.size()) != d) throw std::domain_error("extend_point: dimension mismatch");
  double xmax = 0.0;
  for (double xi : x) xmax = std::max(xmax, std::abs(xi));
  detail::check_extension_resolved(g, xmax, std::abs(t));

  CompensatedSum<cplx> acc;
  if (d == 1) {
    const Axis& a = g.axis(0);
    for (int i = 0; i <= a.cells; ++i) {
      const double xi = a.node(i);
      const double ph = -two_pi * (x[0] * xi + t * xi * xi);
      acc.add(a.weight(i) * g.samples()[i] * cplx{std::cos(ph), std::sin(ph)});
    }
  } else if (d == 2) {
    const Axis& a0 = g.axis(0);
    const Axis& a1 = g.axis(1);
    for (int i = 0; i <= a0.cells; ++i) {
      const double xi0 = a0.node(i);
      for (int j = 0; j <= a1.cells; ++j) {
        const double xi1 = a1.node(j);
        const double ph = -two_pi * (x[0] * xi0 + x[1] * xi1 + t * (xi0 * xi0 + xi1 * xi1));
        acc.add(a0.weight(i) * a1.weight(j) * g.samples()[g.flat(std::array{i, j})] *
                cplx{std::cos(ph), std::sin(ph)});
      }
    }
  } else {
    throw std::domain_error("extend_point: d must be 1 or 2");
  }
  return acc.value();
}

/// Free Schrodinger solution u(x,t) with initial datum given through its
/// Fourier transform on [0,1]^d: u(x,t) = E_d(u0_hat)(-x,-t).
inline cplx schrodinger_evolve(const SampledFunction& u0_hat, std::span<const double> x, double t) {
  std::vector<double> nx(x.begin(), x.end());
  for (double& v : nx) v = -v;
  return extend_point(u0_hat, nx, -t);
}

/// One fixed-t slice of E_d g on a uniform x-lattice, evaluated per axis by
/// zero-padded FFTs pruned to the requested output window. Requires the
/// lattice spacing to satisfy 1/(dx * dxi) in Z.
inline std::vector<cplx> extend_slice(const SampledFunction& g, double t, std::span<const XLattice> lat) {
  const int d = g.rank();
  if (static_cast<int>(lat.size()) != d) throw std::domain_error("extend_slice: lattice rank mismatch");

  if (d == 1) {
    const Axis& a = g.axis(0);
    const int L = detail::padded_length(lat[0].dx, a.step(), a.nodes());
    std::vector<cplx> in(L, cplx{0, 0}), out(L);
    for (int j = 0; j <= a.cells; ++j) {
      const double xi = a.node(j);
      const double ph = -two_pi * t * xi * xi;
      in[j] = a.weight(j) * g.samples()[j] * cplx{std::cos(ph), std::sin(ph)};
    }
    Dft::plan(L).forward(in.data(), out.data());
    std::vector<cplx> res(lat[0].count);
    const double lo = a.lo;
    for (int i = 0; i < lat[0].count; ++i) {
      const std::int64_t q = lat[0].q0 + i;
      cplx v = out[static_cast<std::size_t>(((q % L) + L) % L)];
      if (lo != 0.0) {
        const double ph = -two_pi * lat[0].point(i) * lo;
        // the FFT index handles xi - lo; restore the absolute offset
        v *= cplx{std::cos(ph), std::sin(ph)};
      }
      res[i] = v;
    }
    return res;
  }

  if (d == 2) {
    const Axis& a0 = g.axis(0);
    const Axis& a1 = g.axis(1);
    const int L0 = detail::padded_length(lat[0].dx, a0.step(), a0.nodes());
    const int L1 = detail::padded_length(lat[1].dx, a1.step(), a1.nodes());
    const int n0 = lat[0].count, n1 = lat[1].count;

    // pass 1: transform along axis 0 for each xi1 node, keep the x0 window
    std::vector<cplx> mid(static_cast<std::size_t>(n0) * a1.nodes());
    {
      std::vector<cplx> in(L0), out(L0);
      for (int j1 = 0; j1 <= a1.cells; ++j1) {
        const double xi1 = a1.node(j1);
        std::fill(in.begin(), in.end(), cplx{0, 0});
        for (int j0 = 0; j0 <= a0.cells; ++j0) {
          const double xi0 = a0.node(j0);
          const double ph = -two_pi * t * (xi0 * xi0 + xi1 * xi1);
          in[j0] = a0.weight(j0) * g.samples()[g.flat(std::array{j0, j1})] * cplx{std::cos(ph), std::sin(ph)};
        }
        Dft::plan(L0).forward(in.data(), out.data());
        for (int i0 = 0; i0 < n0; ++i0) {
          const std::int64_t q = lat[0].q0 + i0;
          mid[static_cast<std::size_t>(i0) * a1.nodes() + j1] = out[static_cast<std::size_t>(((q % L0) + L0) % L0)];
        }
      }
    }
    // pass 2: transform along axis 1 for each kept x0 column
    std::vector<cplx> res(static_cast<std::size_t>(n0) * n1);
    {
      std::vector<cplx> in(L1), out(L1);
      for (int i0 = 0; i0 < n0; ++i0) {
        std::fill(in.begin(), in.end(), cplx{0, 0});
        for (int j1 = 0; j1 <= a1.cells; ++j1)
          in[j1] = a1.weight(j1) * mid[static_cast<std::size_t>(i0) * a1.nodes() + j1];
        Dft::plan(L1).forward(in.data(), out.data());
        for (int i1 = 0; i1 < n1; ++i1) {
          const std::int64_t q = lat[1].q0 + i1;
          res[static_cast<std::size_t>(i0) * n1 + i1] = out[static_cast<std::size_t>(((q % L1) + L1) % L1)];
        }
      }
    }
    // absolute offsets of the frequency box, if any
    if (a0.lo != 0.0 || a1.lo != 0.0) {
      for (int i0 = 0; i0 < n0; ++i0)
        for (int i1 = 0; i1 < n1; ++i1) {
          const double ph = -two_pi * (lat[0].point(i0) * a0.lo + lat[1].point(i1) * a1.lo);
          res[static_cast<std::size_t>(i0) * n1 + i1] *= cplx{std::cos(ph), std::sin(ph)};
        }
    }
    return res;
  }
  throw std::domain_error("extend_slice: d must be 1 or 2");
}

/// Materialized E_d g on the box lattice; axes are (x1[, x2], t).
inline SampledFunction extend(const SampledFunction& g, const SpaceTimeBox& box) {
  const int d = g.rank();
  detail::check_extension_resolved(g, box.X, box.T);
  std::vector<Axis> axes;
  for (int i = 0; i < d; ++i) axes.push_back(axis(-box.X, box.X, box.nx));
  axes.push_back(axis(-box.T, box.T, box.nt));
  SampledFunction F(axes);

  std::vector<XLattice> lat(d, lattice_for(box));
  const std::size_t slice_sz = F.size() / (box.nt + 1);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int it = 0; it <= box.nt; ++it) {
    const double t = -box.T + it * box.dt();
    const auto slice = extend_slice(g, t, lat);
    // time is the last (fastest) axis
    for (std::size_t s = 0; s < slice_sz; ++s) F.samples()[s * (box.nt + 1) + it] = slice[s];
  }
  return F;
}

/// (sum of weights * |F|^q)^(1/q) over F's box.
inline double spacetime_norm(const SampledFunction& F, double q) { return F.norm_lq(q); }

/// ||E_d g||_{L^q(box)} / ||g||_2, streaming over t-slices.
inline double strichartz_ratio(const SampledFunction& g, double q, const SpaceTimeBox& box) {
  const double gnorm = g.norm_l2();
  if (gnorm == 0.0) throw std::domain_error("strichartz_ratio: g must be nonzero");
  detail::check_extension_resolved(g, box.X, box.T);

  const int d = g.rank();
  std::vector<XLattice> lat(d, lattice_for(box));
  const Axis taxis = axis(-box.T, box.T, box.nt);
  std::vector<double> partial(box.nt + 1, 0.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int it = 0; it <= box.nt; ++it) {
    const auto slice = extend_slice(g, taxis.node(it), lat);
    CompensatedSum<double> acc;
    std::size_t s = 0;
    if (d == 1) {
      const Axis xa = axis(-box.X, box.X, box.nx);
      for (int i = 0; i <= box.nx; ++i) acc.add(xa.weight(i) * std::pow(std::abs(slice[s++]), q));
    } else {
      const Axis xa = axis(-box.X, box.X, box.nx);
      for (int i0 = 0; i0 <= box.nx; ++i0)
        for (int i1 = 0; i1 <= box.nx; ++i1)
          acc.add(xa.weight(i0) * xa.weight(i1) * std::pow(std::abs(slice[s++]), q));
    }
    partial[it] = acc.value();
  }
  CompensatedSum<double> total;
  for (int it = 0; it <= box.nt; ++it) total.add(taxis.weight(it) * partial[it]);
  return std::pow(total.value(), 1.0 / q) / gnorm;
}

}  // namespace wplab
