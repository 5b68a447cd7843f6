#include "doctest.h"

#include <array>
#include <cmath>
#include <random>

#include "wplab/extension.hpp"
#include "wplab/packets.hpp"

using namespace wplab;

namespace {

SampledFunction unit_g(int d, int cells) {
  std::vector<Axis> axes(d, axis(0.0, 1.0, cells));
  SampledFunction g(axes);
  g.fill([](std::span<const double>) { return cplx{1.0, 0.0}; });
  return g;
}

SampledFunction gaussian_g(int d, int cells, double center = 0.5, double width = 0.15) {
  std::vector<Axis> axes(d, axis(0.0, 1.0, cells));
  SampledFunction g(axes);
  g.fill([&](std::span<const double> xi) {
    double e = 0.0;
    for (double x : xi) e += (x - center) * (x - center);
    return cplx{std::exp(-e / (2.0 * width * width)), 0.0};
  });
  return g;
}

SampledFunction random_band_g(int d, int cells, unsigned seed) {
  std::mt19937_64 rng(seed);
  auto unif = [&] { return (rng() >> 11) * 0x1.0p-53 - 0.5; };
  const int B = 3;
  std::vector<cplx> w;
  for (int i = 0; i < (2 * B + 1) * (d == 2 ? (2 * B + 1) : 1); ++i) w.push_back({unif(), unif()});
  std::vector<Axis> axes(d, axis(0.0, 1.0, cells));
  SampledFunction g(axes);
  g.fill([&](std::span<const double> xi) {
    cplx v{0.0, 0.0};
    int idx = 0;
    if (d == 1) {
      for (int j = -B; j <= B; ++j) {
        const double ph = two_pi * j * xi[0];
        v += w[idx++] * cplx{std::cos(ph), std::sin(ph)};
      }
    } else {
      for (int j0 = -B; j0 <= B; ++j0)
        for (int j1 = -B; j1 <= B; ++j1) {
          const double ph = two_pi * (j0 * xi[0] + j1 * xi[1]);
          v += w[idx++] * cplx{std::cos(ph), std::sin(ph)};
        }
    }
    return v;
  });
  return g;
}

}  // namespace

TEST_CASE("extension at the origin integrates g") {
  auto g2 = unit_g(2, 256);
  CHECK(std::abs(extend_point(g2, std::array{0.0, 0.0}, 0.0) - cplx{1.0, 0.0}) < 1e-12);
}

TEST_CASE("d=1 closed form at x=1/2, t=0") {
  auto g = unit_g(1, 4096);
  const cplx v = extend_point(g, std::array{0.5}, 0.0);
  CHECK(std::abs(v) == doctest::Approx(2.0 / 3.14159265358979323846).epsilon(1e-7));
}

TEST_CASE("t=0 slice is the Fourier transform of g") {
  // take g equal to a frequency packet; its transform has an independent
  // evaluation path through the profile transform
  const auto pk = packet_freq(interval_base(0.0, 1.0), {0});
  SampledFunction g({axis(0.0, 1.0, 4096)});
  g.fill([&](std::span<const double> xi) { return pk.eval_freq(xi); });
  for (double x : {0.0, 0.5, 2.0, -3.5}) {
    const cplx via_ext = extend_point(g, std::array{x}, 0.0);
    // independently coded transform on the same discretization
    const int cells = g.axis(0).cells;
    CompensatedSum<cplx> acc;
    const double lo = 0.0, hi = 1.0, h = (hi - lo) / cells;
    for (int j = 0; j <= cells; ++j) {
      const double xi = lo + j * h;
      const double w = (j == 0 || j == cells) ? 0.5 * h : h;
      const double ph = -two_pi * x * xi;
      acc.add(w * pk.eval_freq(std::array{xi}) * cplx{std::cos(ph), std::sin(ph)});
    }
    CHECK(std::abs(via_ext - acc.value()) < 1e-10);
  }
}

TEST_CASE("FFT lattice path agrees with direct quadrature") {
  SUBCASE("d=1") {
    auto g = random_band_g(1, 256, 11);
    XLattice lat{0.125, -32, 65};
    const auto slice = extend_slice(g, 0.7, std::array{lat});
    for (int i : {0, 7, 32, 64}) {
      const cplx direct = extend_point(g, std::array{lat.point(i)}, 0.7);
      CHECK(std::abs(slice[i] - direct) < 1e-8);
    }
  }
  SUBCASE("d=2") {
    auto g = random_band_g(2, 128, 12);
    XLattice lat{0.25, -16, 33};
    const auto slice = extend_slice(g, -1.3, std::array{lat, lat});
    for (int i0 : {0, 9, 32}) {
      for (int i1 : {3, 16}) {
        const cplx direct = extend_point(g, std::array{lat.point(i0), lat.point(i1)}, -1.3);
        CHECK(std::abs(slice[static_cast<std::size_t>(i0) * 33 + i1] - direct) < 1e-8);
      }
    }
  }
  SUBCASE("frequency box with nonzero offset") {
    SampledFunction g({axis(0.25, 0.75, 128)});
    g.fill([](std::span<const double> xi) { return cplx{1.0 + xi[0], -0.5}; });
    XLattice lat{0.25, -8, 17};
    const auto slice = extend_slice(g, 0.4, std::array{lat});
    for (int i : {0, 5, 16}) {
      const cplx direct = extend_point(g, std::array{lat.point(i)}, 0.4);
      CHECK(std::abs(slice[i] - direct) < 1e-8);
    }
  }
}

TEST_CASE("incommensurate lattice is refused, arbitrary points fall back to quadrature") {
  auto g = unit_g(1, 256);
  XLattice bad{0.3, 0, 4};
  CHECK_THROWS_AS(extend_slice(g, 0.0, std::array{bad}), std::invalid_argument);
  CHECK_NOTHROW(extend_point(g, std::array{0.3}, 0.0));
}

TEST_CASE("under-resolved phase is refused with a diagnostic") {
  auto g = unit_g(1, 64);
  CHECK_THROWS_AS(extend_point(g, std::array{0.0}, 40.0), under_resolved);
  SpaceTimeBox box{8.0, 40.0, 64, 64};
  CHECK_THROWS_AS(strichartz_ratio(g, 6.0, box), under_resolved);
}

TEST_CASE("schrodinger evolution") {
  auto u0 = gaussian_g(1, 512);
  SUBCASE("definition is bit-identical to the negated extension") {
    const cplx a = schrodinger_evolve(u0, std::array{1.25}, 0.75);
    const cplx b = extend_point(u0, std::array{-1.25}, -0.75);
    CHECK(a == b);
  }
  SUBCASE("t=0 recovers the inverse transform") {
    const cplx v = schrodinger_evolve(u0, std::array{0.5}, 0.0);
    CompensatedSum<cplx> acc;
    const Axis& a = u0.axis(0);
    for (int j = 0; j <= a.cells; ++j) {
      const double ph = two_pi * 0.5 * a.node(j);
      acc.add(a.weight(j) * u0.samples()[j] * cplx{std::cos(ph), std::sin(ph)});
    }
    CHECK(std::abs(v - acc.value()) < 1e-12);
  }
  SUBCASE("mass is conserved within 1%") {
    const double X = 32.0;
    const int nx = 1 << 9;
    std::vector<double> mass;
    for (double t : {0.0, 0.5, 1.0, -1.0}) {
      XLattice lat{2.0 * X / nx, -nx / 2, nx + 1};
      const auto slice = extend_slice(u0, -t, std::array{lat});
      CompensatedSum<double> acc;
      const Axis xa = axis(-X, X, nx);
      for (int i = 0; i <= nx; ++i) acc.add(xa.weight(i) * std::norm(slice[i]));
      mass.push_back(std::sqrt(acc.value()));
    }
    for (double m : mass) CHECK(m == doctest::Approx(mass[0]).epsilon(0.01));
  }
}

TEST_CASE("space-time norms") {
  SUBCASE("constant on a unit-volume box") {
    SampledFunction F({axis(0.0, 1.0, 16), axis(0.0, 1.0, 16)});
    F.fill([](std::span<const double>) { return cplx{1.0, 0.0}; });
    for (double q : {1.0, 2.0, 4.0, 4.5}) CHECK(spacetime_norm(F, q) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("homogeneity") {
    SampledFunction F({axis(-1.0, 1.0, 32)});
    F.fill([](std::span<const double> x) { return cplx{x[0], 0.3}; });
    const double base = spacetime_norm(F, 3.0);
    F.scale(cplx{-2.5, 0.0});
    CHECK(spacetime_norm(F, 3.0) == doctest::Approx(2.5 * base).epsilon(1e-12));
  }
  SUBCASE("gaussian against the separable closed form") {
    SampledFunction F({axis(-4.0, 4.0, 256), axis(-4.0, 4.0, 256)});
    F.fill([](std::span<const double> p) {
      return cplx{std::exp(-3.14159265358979323846 * (p[0] * p[0] + p[1] * p[1])), 0.0};
    });
    // ||F||_4^4 = (int e^{-4 pi s^2} ds)^2 = (1/2)^2
    CHECK(spacetime_norm(F, 4.0) == doctest::Approx(std::pow(0.25, 0.25)).epsilon(1e-4));
  }
}

TEST_CASE("strichartz ratio invariances") {
  auto g = gaussian_g(1, 1024);
  // the d=1 wave train reaches |x| = 2|t|, so keep X = 2T
  SpaceTimeBox box{32.0, 16.0, 512, 256};
  const double r0 = strichartz_ratio(g, 6.0, box);
  CHECK(std::isfinite(r0));

  SUBCASE("scaling invariance") {
    g.scale(cplx{0.0, 3.0});
    CHECK(strichartz_ratio(g, 6.0, box) == doctest::Approx(r0).epsilon(1e-12));
  }
  SUBCASE("zero input is a domain error") {
    SampledFunction z({axis(0.0, 1.0, 64)});
    CHECK_THROWS_AS(strichartz_ratio(z, 6.0, box), std::domain_error);
  }
  SUBCASE("modulation covariance") {
    auto gm = g;
    for (int i = 0; i <= gm.axis(0).cells; ++i) {
      const double ph = -two_pi * 1.0 * gm.axis(0).node(i);  // x0 = 1: translate E by 1 in x
      gm.samples()[i] *= cplx{std::cos(ph), std::sin(ph)};
    }
    const double b = strichartz_ratio(gm, 6.0, box);
    CHECK(r0 == doctest::Approx(b).epsilon(2e-3));
  }
  SUBCASE("box refinement stability") {
    SpaceTimeBox doubled{64.0, 32.0, 1024, 512};
    const double r1 = strichartz_ratio(g, 6.0, doubled);
    CHECK(r1 == doctest::Approx(r0).epsilon(0.01));
  }
}
