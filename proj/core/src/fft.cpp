#include "dulab/fft.hpp"

#include <cstring>
#include <map>
#include <mutex>
#include <new>

#include <fftw3.h>

#include "dulab/error.hpp"

namespace dulab {

FftBuffer::FftBuffer(std::size_t n) : n_(n) {
  data_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(std::complex<double>) * (n ? n : 1)));
  if (!data_) throw std::bad_alloc();
  zero();
}

FftBuffer::~FftBuffer() {
  if (data_) fftw_free(data_);
}

FftBuffer::FftBuffer(FftBuffer&& other) noexcept : n_(other.n_), data_(other.data_) {
  other.n_ = 0;
  other.data_ = nullptr;
}

FftBuffer& FftBuffer::operator=(FftBuffer&& other) noexcept {
  if (this != &other) {
    if (data_) fftw_free(data_);
    n_ = other.n_;
    data_ = other.data_;
    other.n_ = 0;
    other.data_ = nullptr;
  }
  return *this;
}

void FftBuffer::zero() { std::memset(static_cast<void*>(data_), 0, sizeof(std::complex<double>) * n_); }

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan plan_for(std::size_t n) {
  static std::map<std::size_t, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  FftBuffer a(n), b(n);
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(a.data()),
                                    reinterpret_cast<fftw_complex*>(b.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!plan) throw InvariantViolation("fftw: plan creation failed");
  cache.emplace(n, plan);
  return plan;
}

}  // namespace

void fft_positive(const FftBuffer& in, FftBuffer& out) {
  if (in.size() != out.size() || in.size() == 0) throw InvariantViolation("fft: buffer size mismatch");
  fftw_plan plan = plan_for(in.size());
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace dulab
