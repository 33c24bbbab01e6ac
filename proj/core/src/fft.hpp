#pragma once

#include <complex>

#include <fftw3.h>

namespace pulsesq::detail {

// Owns aligned in/out buffers and a FFTW_ESTIMATE plan. Planning is serialized.
class FftPlan {
 public:
  FftPlan(int n, int sign);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::complex<double>* in() { return reinterpret_cast<std::complex<double>*>(in_); }
  std::complex<double>* out() { return reinterpret_cast<std::complex<double>*>(out_); }
  int size() const { return n_; }
  void execute() { fftw_execute(plan_); }

 private:
  int n_;
  fftw_complex* in_;
  fftw_complex* out_;
  fftw_plan plan_;
};

}  // namespace pulsesq::detail
