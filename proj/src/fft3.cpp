#include "rhd/fft3.hpp"

#include <stdexcept>

namespace rhd {

Fft3::Fft3(int N) : N_(N) {
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(N) * N * N);
    auto* ptr = reinterpret_cast<fftw_complex*>(buf.data());
    fwd_ = fftw_plan_dft_3d(N, N, N, ptr, ptr, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_3d(N, N, N, ptr, ptr, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!fwd_ || !bwd_) throw std::runtime_error("Fft3: plan creation failed");
}

Fft3::~Fft3() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
}

void Fft3::forward(std::vector<std::complex<double>>& field) const {
    auto* ptr = reinterpret_cast<fftw_complex*>(field.data());
    fftw_execute_dft(fwd_, ptr, ptr);
    const double scale = 1.0 / (static_cast<double>(N_) * N_ * N_);
    for (auto& c : field) c *= scale;
}

void Fft3::backward(std::vector<std::complex<double>>& field) const {
    auto* ptr = reinterpret_cast<fftw_complex*>(field.data());
    fftw_execute_dft(bwd_, ptr, ptr);
}

} // namespace rhd
