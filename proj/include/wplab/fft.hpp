#pragma once

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "wplab/common.hpp"

namespace wplab {

/// Forward c2c DFT of a fixed size, sign e^{-2pi i jk/n}. Plans are created
/// once per size under a lock; execution uses the new-array interface so any
/// number of threads may transform concurrently on their own buffers.
class Dft {
public:
  explicit Dft(int n) : n_(n) {
    static std::mutex plan_mutex;
    std::scoped_lock lock(plan_mutex);
    std::vector<cplx> a(n), b(n);
    plan_ = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                             reinterpret_cast<fftw_complex*>(b.data()), FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  ~Dft() {
    if (plan_) fftw_destroy_plan(plan_);
  }
  Dft(const Dft&) = delete;
  Dft& operator=(const Dft&) = delete;

  int size() const { return n_; }

  void forward(cplx* in, cplx* out) const {
    fftw_execute_dft(plan_, reinterpret_cast<fftw_complex*>(in), reinterpret_cast<fftw_complex*>(out));
  }

  /// shared plan registry, keyed by transform size
  static const Dft& plan(int n) {
    static std::mutex reg_mutex;
    static std::map<int, std::unique_ptr<Dft>> registry;
    std::scoped_lock lock(reg_mutex);
    auto& slot = registry[n];
    if (!slot) slot = std::make_unique<Dft>(n);
    return *slot;
  }

private:
  int n_ = 0;
  fftw_plan plan_ = nullptr;
};

}  // namespace wplab
