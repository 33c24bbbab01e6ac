#include "fft.hpp"

#include <mutex>
#include <new>

namespace pulsesq::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FftPlan::FftPlan(int n, int sign) : n_(n) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  in_ = fftw_alloc_complex(n);
  out_ = fftw_alloc_complex(n);
  if (in_ == nullptr || out_ == nullptr) {
    fftw_free(in_);
    fftw_free(out_);
    throw std::bad_alloc();
  }
  plan_ = fftw_plan_dft_1d(n, in_, out_, sign, FFTW_ESTIMATE);
}

FftPlan::~FftPlan() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan_);
  fftw_free(in_);
  fftw_free(out_);
}

}  // namespace pulsesq::detail
