#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wplab {

using cplx = std::complex<double>;

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Thrown when a quadrature grid cannot resolve a requested oscillation.
/// Carries a human-readable diagnostic describing the offending phase.
class under_resolved : public std::runtime_error {
public:
  explicit under_resolved(const std::string& what) : std::runtime_error(what) {}
};

/// Neumaier compensated accumulator. Summation order is fixed by the caller,
/// so results are deterministic regardless of thread count upstream.
template <typename T>
class CompensatedSum {
public:
  void add(T value) {
    T t = sum_ + value;
    if constexpr (std::is_same_v<T, double>) {
      if (std::abs(sum_) >= std::abs(value))
        comp_ += (sum_ - t) + value;
      else
        comp_ += (value - t) + sum_;
    } else {
      // complex: compensate each component through the real formula
      comp_ += (sum_ - t) + value;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

private:
  T sum_{};
  T comp_{};
};

inline double compensated_total(std::span<const double> xs) {
  CompensatedSum<double> acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

inline bool is_power_of_two(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

/// FNV-1a over bytes; used for config hashes and argmax digests.
inline std::uint64_t fnv1a64(std::span<const char> bytes, std::uint64_t seed = 1469598103934665603ull) {
  std::uint64_t h = seed;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s) {
  return fnv1a64(std::span<const char>(s.data(), s.size()));
}

}  // namespace wplab
