#pragma once

// Minimal RAII ownership of an in-place complex FFTW transform pair.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <utility>

#include "causal/error.hpp"

namespace causal {

namespace detail {
// The FFTW planner is not re-entrant.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/// Owns an aligned buffer of n complex values and forward/backward plans over
/// it. Unnormalized: backward(forward(v)) == n * v.
class FourierWorkspace {
 public:
  explicit FourierWorkspace(std::size_t n) : n_(n) {
    detail::require(n >= 2, "FourierWorkspace: size must be at least 2");
    data_ = fftw_alloc_complex(n);
    if (!data_) throw BudgetError("FourierWorkspace: allocation failed");
    std::lock_guard lock(detail::fftw_planner_mutex());
    const int len = static_cast<int>(n);
    forward_ = fftw_plan_dft_1d(len, data_, data_, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(len, data_, data_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  FourierWorkspace(const FourierWorkspace&) = delete;
  FourierWorkspace& operator=(const FourierWorkspace&) = delete;

  FourierWorkspace(FourierWorkspace&& o) noexcept
      : n_(std::exchange(o.n_, 0)),
        data_(std::exchange(o.data_, nullptr)),
        forward_(std::exchange(o.forward_, nullptr)),
        backward_(std::exchange(o.backward_, nullptr)) {}

  FourierWorkspace& operator=(FourierWorkspace&& o) noexcept {
    if (this != &o) {
      release();
      n_ = std::exchange(o.n_, 0);
      data_ = std::exchange(o.data_, nullptr);
      forward_ = std::exchange(o.forward_, nullptr);
      backward_ = std::exchange(o.backward_, nullptr);
    }
    return *this;
  }

  ~FourierWorkspace() { release(); }

  std::size_t size() const noexcept { return n_; }

  std::span<std::complex<double>> data() noexcept {
    return {reinterpret_cast<std::complex<double>*>(data_), n_};
  }

  /// data[k] <- sum_j data[j] exp(-2 pi i jk / n)
  void forward() noexcept { fftw_execute(forward_); }
  /// data[j] <- sum_k data[k] exp(+2 pi i jk / n)
  void backward() noexcept { fftw_execute(backward_); }

 private:
  void release() noexcept {
    if (forward_ || backward_) {
      std::lock_guard lock(detail::fftw_planner_mutex());
      if (forward_) fftw_destroy_plan(forward_);
      if (backward_) fftw_destroy_plan(backward_);
    }
    if (data_) fftw_free(data_);
    forward_ = backward_ = nullptr;
    data_ = nullptr;
  }

  std::size_t n_ = 0;
  fftw_complex* data_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace causal
