#pragma once

#include <complex>
#include <vector>

#include <fftw3.h>

namespace rhd {

// Minimal in-place 3-D complex FFT on an N^3 cube, x fastest. Forward
// divides by N^3 so spectral coefficients are expansion coefficients:
// f(x) = sum_k fhat_k e^{i k.x}. Plans are created unaligned so they can be
// executed on any buffer; execution on distinct buffers is thread-safe.
class Fft3 {
  public:
    explicit Fft3(int N);
    ~Fft3();
    Fft3(const Fft3&) = delete;
    Fft3& operator=(const Fft3&) = delete;

    int size() const { return N_; }

    void forward(std::vector<std::complex<double>>& field) const;
    void backward(std::vector<std::complex<double>>& field) const;

  private:
    int N_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

} // namespace rhd
