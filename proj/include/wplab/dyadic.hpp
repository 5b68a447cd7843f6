#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wplab/common.hpp"

namespace wplab {

/// Closed dyadic interval [l 2^-k, (l+1) 2^-k] inside [0,1].
/// Endpoints and lengths are exact binary rationals; every comparison below
/// is done in integer arithmetic, never through floating point.
struct DyadicInterval {
  int k = 0;           // scale, length = 2^-k
  std::int64_t l = 0;  // index, 0 <= l < 2^k

  double lo() const { return std::ldexp(static_cast<double>(l), -k); }
  double hi() const { return std::ldexp(static_cast<double>(l + 1), -k); }
  double length() const { return std::ldexp(1.0, -k); }
  double center() const { return std::ldexp(static_cast<double>(2 * l + 1), -(k + 1)); }

  friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

inline DyadicInterval interval(int k, std::int64_t l) {
  if (k < 0 || k > 60) throw std::domain_error("dyadic scale out of range: k=" + std::to_string(k));
  if (l < 0 || l >= (std::int64_t{1} << k))
    throw std::domain_error("dyadic index out of range: l=" + std::to_string(l) + " at k=" + std::to_string(k));
  return DyadicInterval{k, l};
}

/// The unique dyadic interval of twice the length containing I.
inline DyadicInterval parent(const DyadicInterval& I) {
  if (I.k < 1) throw std::domain_error("the unit interval has no parent inside [0,1]");
  return DyadicInterval{I.k - 1, I.l / 2};
}

/// I ~ J: same scale, disjoint as closed sets, parents not disjoint.
inline bool is_close(const DyadicInterval& I, const DyadicInterval& J) {
  if (I.k != J.k || I.k < 1) return false;
  const std::int64_t d = std::abs(I.l - J.l);
  if (d < 2) return false;  // closed intervals overlap or share an endpoint
  return std::abs(I.l / 2 - J.l / 2) <= 1;
}

/// Ordered pair of close intervals; gap/length is 1 or 2 exactly.
struct ClosePair {
  DyadicInterval first;
  DyadicInterval second;

  int scale() const { return first.k; }
  /// distance between the intervals in units of their common length
  std::int64_t gap_over_length() const { return std::abs(first.l - second.l) - 1; }
  friend bool operator==(const ClosePair&, const ClosePair&) = default;
};

inline ClosePair close_pair(const DyadicInterval& I, const DyadicInterval& J) {
  if (!is_close(I, J)) throw std::domain_error("intervals are not close");
  return ClosePair{I, J};
}

/// All ordered close pairs at scale k, lexicographic in (first.l, second.l).
inline std::vector<ClosePair> close_pairs(int k) {
  if (k < 0 || k > 30) throw std::domain_error("close_pairs: scale out of range");
  std::vector<ClosePair> out;
  const std::int64_t n = std::int64_t{1} << k;
  for (std::int64_t l1 = 0; l1 < n; ++l1) {
    for (std::int64_t d : {-3, -2, 2, 3}) {
      const std::int64_t l2 = l1 + d;
      if (l2 < 0 || l2 >= n) continue;
      if (is_close(DyadicInterval{k, l1}, DyadicInterval{k, l2}))
        out.push_back(ClosePair{DyadicInterval{k, l1}, DyadicInterval{k, l2}});
    }
  }
  std::sort(out.begin(), out.end(), [](const ClosePair& a, const ClosePair& b) {
    return std::pair(a.first.l, a.second.l) < std::pair(b.first.l, b.second.l);
  });
  return out;
}

namespace detail {

// open-interval overlap of [a.lo,a.hi] and [b.lo,b.hi] interiors, exact:
// scale both to the finer grid and compare integer endpoints
inline bool interiors_overlap(const DyadicInterval& a, const DyadicInterval& b) {
  const int K = std::max(a.k, b.k);
  const std::int64_t alo = a.l << (K - a.k), ahi = (a.l + 1) << (K - a.k);
  const std::int64_t blo = b.l << (K - b.k), bhi = (b.l + 1) << (K - b.k);
  return std::max(alo, blo) < std::min(ahi, bhi);
}

inline bool rect_interiors_overlap(const ClosePair& p, const ClosePair& q) {
  return interiors_overlap(p.first, q.first) && interiors_overlap(p.second, q.second);
}

}  // namespace detail

/// Whitney cover of [0,1]^2 minus the diagonal by rectangles I1 x I2 with
/// I1 ~ I2, scales 2..max_scale. Scales 0 and 1 admit no close pairs, so the
/// cover starts at k = 2 and leaves a diagonal collar of width ~4*2^-max_scale
/// uncovered.
struct WhitneyCover {
  int max_scale = 0;
  std::vector<ClosePair> pairs;  // sorted by (scale, first.l, second.l)
};

/// Greedy coarse-to-fine construction with lexicographic tie-breaking: a finer
/// rectangle is kept only if its interior misses every kept coarser one.
inline WhitneyCover whitney_cover(int max_scale) {
  if (max_scale < 2) throw std::domain_error("whitney_cover: max_scale must be >= 2");
  WhitneyCover cover;
  cover.max_scale = max_scale;
  for (int k = 2; k <= max_scale; ++k) {
    for (const ClosePair& cand : close_pairs(k)) {
      bool blocked = false;
      for (const ClosePair& kept : cover.pairs) {
        if (kept.scale() == k) break;  // same-scale pairs never overlap
        if (detail::rect_interiors_overlap(cand, kept)) {
          blocked = true;
          break;
        }
      }
      if (!blocked) cover.pairs.push_back(cand);
    }
  }
  return cover;
}

/// The rectangle of the cover containing (x, y), if any. Points on shared
/// boundaries report the first rectangle in cover order.
inline std::optional<ClosePair> covering_rect(const WhitneyCover& cover, double x, double y) {
  for (const ClosePair& p : cover.pairs) {
    if (x >= p.first.lo() && x <= p.first.hi() && y >= p.second.lo() && y <= p.second.hi()) return p;
  }
  return std::nullopt;
}

/// Split of a cover into <= 4 classes such that within each class the map
/// first -> second (and second -> first) is single-valued. The class of a
/// pair is determined by the index offset second.l - first.l in {2,3,-2,-3}.
struct DiagonalSplit {
  std::array<std::vector<ClosePair>, 4> classes;

  static int class_of(const ClosePair& p) {
    switch (p.second.l - p.first.l) {
      case 2: return 0;
      case -2: return 1;
      case 3: return 2;
      case -3: return 3;
      default: throw std::logic_error("not a close pair offset");
    }
  }
};

inline DiagonalSplit diagonal_split(const WhitneyCover& cover) {
  DiagonalSplit split;
  for (const ClosePair& p : cover.pairs) split.classes[DiagonalSplit::class_of(p)].push_back(p);
  return split;
}

/// One diagonal class restricted to a single scale: the list of I1 intervals
/// that have a partner, with I2 = I1 + offset cells. This is the "I1
/// determines I2" input shape consumed by the model operator.
struct DiagonalClass {
  int k = 0;
  std::int64_t offset = 2;       // second.l - first.l
  std::vector<ClosePair> pairs;  // sorted by first.l
};

inline DiagonalClass diagonal_class(int k, std::int64_t offset = 2) {
  DiagonalClass cls;
  cls.k = k;
  cls.offset = offset;
  for (const ClosePair& p : close_pairs(k))
    if (p.second.l - p.first.l == offset) cls.pairs.push_back(p);
  std::sort(cls.pairs.begin(), cls.pairs.end(),
            [](const ClosePair& a, const ClosePair& b) { return a.first.l < b.first.l; });
  return cls;
}

}  // namespace wplab
