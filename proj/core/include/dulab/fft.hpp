#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace dulab {

// Owning, SIMD-aligned complex buffer for the FFT kernels.
class FftBuffer {
 public:
  explicit FftBuffer(std::size_t n);
  ~FftBuffer();
  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;
  FftBuffer(FftBuffer&& other) noexcept;
  FftBuffer& operator=(FftBuffer&& other) noexcept;

  std::size_t size() const { return n_; }
  std::complex<double>* data() { return data_; }
  const std::complex<double>* data() const { return data_; }
  std::span<std::complex<double>> span() { return {data_, n_}; }
  std::span<const std::complex<double>> span() const { return {data_, n_}; }
  void zero();

 private:
  std::size_t n_ = 0;
  std::complex<double>* data_ = nullptr;
};

// out[j] = sum_m in[m] exp(+2 pi i j m / n). Plans are cached per size and
// shared between threads; execution is thread-safe.
void fft_positive(const FftBuffer& in, FftBuffer& out);

std::size_t next_pow2(std::size_t n);

}  // namespace dulab
