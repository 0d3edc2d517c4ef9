#pragma once

#include <complex>
#include <cstddef>
#include <cstdlib>
#include <new>
#include <span>
#include <vector>

namespace spinsplit {

/// 64-byte aligned allocator so that every amplitude buffer matches the
/// alignment the FFT plans were created with.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t alignment = 64;

  AlignedAllocator() = default;
  template <class U>
  constexpr AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    const std::size_t bytes =
        ((n * sizeof(T) + alignment - 1) / alignment) * alignment;
    void* p = std::aligned_alloc(alignment, bytes == 0 ? alignment : bytes);
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { std::free(p); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using ComplexBuffer =
    std::vector<std::complex<double>, AlignedAllocator<std::complex<double>>>;

/// Batched in-place complex FFT over `batch` contiguous blocks of length n.
///
/// Plans are created with FFTW_ESTIMATE so the chosen algorithm, and hence the
/// rounding, is identical from run to run. Forward is unnormalized;
/// backward includes the 1/n factor.
class BatchedFft {
 public:
  BatchedFft(std::size_t n, std::size_t batch);
  ~BatchedFft();
  BatchedFft(const BatchedFft&) = delete;
  BatchedFft& operator=(const BatchedFft&) = delete;
  BatchedFft(BatchedFft&&) noexcept;
  BatchedFft& operator=(BatchedFft&&) noexcept;

  std::size_t size() const { return n_; }
  std::size_t batch() const { return batch_; }

  void forward(std::span<std::complex<double>> data) const;
  /// Inverse transform without the 1/n normalization.
  void backward_unscaled(std::span<std::complex<double>> data) const;
  void backward(std::span<std::complex<double>> data) const;

 private:
  void check(std::span<std::complex<double>> data) const;

  std::size_t n_ = 0;
  std::size_t batch_ = 0;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

}  // namespace spinsplit
