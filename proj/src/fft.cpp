#include "g2sim/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace g2sim::fft {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution of distinct
// plans is. FFTW_ESTIMATE keeps planning deterministic (no runtime timing).
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

void transform(std::vector<std::complex<double>>& data, int sign) {
    if (data.empty())
        return;
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign, FFTW_ESTIMATE);
    }
    if (!plan)
        throw std::runtime_error("fftw_plan_dft_1d failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(plan);
    }
}

} // namespace

void forward(std::vector<std::complex<double>>& data) {
    transform(data, FFTW_FORWARD);
}

void backward(std::vector<std::complex<double>>& data) {
    transform(data, FFTW_BACKWARD);
}

} // namespace g2sim::fft
