#include "spinsplit/fft.hpp"

#include <fftw3.h>

#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace spinsplit {
namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan as_plan(void* p) { return static_cast<fftw_plan>(p); }

}  // namespace

BatchedFft::BatchedFft(std::size_t n, std::size_t batch) : n_(n), batch_(batch) {
  if (n == 0 || batch == 0) throw std::invalid_argument("empty FFT");
  ComplexBuffer scratch(n * batch);
  auto* raw = reinterpret_cast<fftw_complex*>(scratch.data());
  const int len = static_cast<int>(n);
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_many_dft(1, &len, static_cast<int>(batch), raw,
                                     nullptr, 1, len, raw, nullptr, 1, len,
                                     FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_many_dft(1, &len, static_cast<int>(batch), raw,
                                      nullptr, 1, len, raw, nullptr, 1, len,
                                      FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!forward_plan_ || !backward_plan_) {
    throw std::runtime_error("FFTW plan creation failed");
  }
}

BatchedFft::~BatchedFft() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(as_plan(forward_plan_));
  if (backward_plan_) fftw_destroy_plan(as_plan(backward_plan_));
}

BatchedFft::BatchedFft(BatchedFft&& other) noexcept
    : n_(other.n_),
      batch_(other.batch_),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr)) {}

BatchedFft& BatchedFft::operator=(BatchedFft&& other) noexcept {
  std::swap(n_, other.n_);
  std::swap(batch_, other.batch_);
  std::swap(forward_plan_, other.forward_plan_);
  std::swap(backward_plan_, other.backward_plan_);
  return *this;
}

void BatchedFft::check(std::span<std::complex<double>> data) const {
  if (data.size() != n_ * batch_) {
    throw std::invalid_argument("FFT buffer size mismatch");
  }
  if (reinterpret_cast<std::uintptr_t>(data.data()) %
          AlignedAllocator<std::complex<double>>::alignment !=
      0) {
    throw std::invalid_argument("FFT buffer is not 64-byte aligned");
  }
}

void BatchedFft::forward(std::span<std::complex<double>> data) const {
  check(data);
  auto* raw = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(as_plan(forward_plan_), raw, raw);
}

void BatchedFft::backward_unscaled(std::span<std::complex<double>> data) const {
  check(data);
  auto* raw = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(as_plan(backward_plan_), raw, raw);
}

void BatchedFft::backward(std::span<std::complex<double>> data) const {
  backward_unscaled(data);
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : data) v *= scale;
}

}  // namespace spinsplit
