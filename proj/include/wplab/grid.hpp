#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "wplab/common.hpp"

namespace wplab {

/// One axis of a sampling box: cells uniform subintervals of [lo, hi],
/// cells + 1 nodes, composite-trapezoid weights.
struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int cells = 1;

  int nodes() const { return cells + 1; }
  double step() const { return (hi - lo) / cells; }
  double node(int i) const { return lo + i * step(); }
  double weight(int i) const {
    const double h = step();
    return (i == 0 || i == cells) ? 0.5 * h : h;
  }
};

inline Axis axis(double lo, double hi, int cells) {
  if (!(hi > lo)) throw std::domain_error("axis: empty interval");
  if (!is_power_of_two(cells)) throw std::domain_error("axis: resolution must be a power of two");
  return Axis{lo, hi, cells};
}

/// Complex-valued function sampled on a uniform grid over a box, together
/// with composite-trapezoid quadrature weights. The represented function is
/// zero outside its box. Row-major storage, last axis fastest.
class SampledFunction {
public:
  SampledFunction() = default;
  explicit SampledFunction(std::vector<Axis> axes) : axes_(std::move(axes)) {
    std::size_t total = 1;
    for (const Axis& a : axes_) total *= static_cast<std::size_t>(a.nodes());
    samples_.assign(total, cplx{0.0, 0.0});
  }

  int rank() const { return static_cast<int>(axes_.size()); }
  const std::vector<Axis>& axes() const { return axes_; }
  const Axis& axis(int d) const { return axes_.at(d); }
  std::size_t size() const { return samples_.size(); }
  std::vector<cplx>& samples() { return samples_; }
  const std::vector<cplx>& samples() const { return samples_; }

  cplx& at(std::span<const int> idx) { return samples_[flat(idx)]; }
  const cplx& at(std::span<const int> idx) const { return samples_[flat(idx)]; }

  std::size_t flat(std::span<const int> idx) const {
    std::size_t f = 0;
    for (int d = 0; d < rank(); ++d) f = f * axes_[d].nodes() + idx[d];
    return f;
  }

  double weight_at_flat(std::size_t f) const {
    double w = 1.0;
    for (int d = rank() - 1; d >= 0; --d) {
      const int n = axes_[d].nodes();
      w *= axes_[d].weight(static_cast<int>(f % n));
      f /= n;
    }
    return w;
  }

  /// Fill by evaluating gen at grid nodes. gen receives a span of coordinates.
  template <typename Gen>
  void fill(Gen&& gen) {
    std::vector<int> idx(rank(), 0);
    std::vector<double> pt(rank(), 0.0);
    for (std::size_t f = 0; f < samples_.size(); ++f) {
      for (int d = 0; d < rank(); ++d) pt[d] = axes_[d].node(idx[d]);
      samples_[f] = gen(std::span<const double>(pt));
      for (int d = rank() - 1; d >= 0; --d) {
        if (++idx[d] <= axes_[d].cells) break;
        idx[d] = 0;
      }
    }
  }

  double volume() const {
    double v = 1.0;
    for (const Axis& a : axes_) v *= (a.hi - a.lo);
    return v;
  }

  /// integral of |f|^2 over the box
  double norm_l2_sq() const {
    CompensatedSum<double> acc;
    for (std::size_t f = 0; f < samples_.size(); ++f) acc.add(weight_at_flat(f) * std::norm(samples_[f]));
    return acc.value();
  }
  double norm_l2() const { return std::sqrt(norm_l2_sq()); }

  /// L^q norm, q >= 1
  double norm_lq(double q) const {
    if (q < 1.0) throw std::domain_error("norm_lq: q must be >= 1");
    CompensatedSum<double> acc;
    for (std::size_t f = 0; f < samples_.size(); ++f)
      acc.add(weight_at_flat(f) * std::pow(std::abs(samples_[f]), q));
    return std::pow(acc.value(), 1.0 / q);
  }

  void scale(cplx c) {
    for (auto& s : samples_) s *= c;
  }

private:
  std::vector<Axis> axes_;
  std::vector<cplx> samples_;
};

inline SampledFunction make_sampled(std::vector<Axis> axes, const std::function<cplx(std::span<const double>)>& gen) {
  SampledFunction f(std::move(axes));
  f.fill(gen);
  return f;
}

}  // namespace wplab
