#include "fiberprop/spectral.hpp"

#include <mutex>
#include <utility>

#include <fftw3.h>

#include "fiberprop/error.hpp"

namespace fiberprop {
namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

SpectralWorkspace::SpectralWorkspace(std::size_t n) : n_(n) {
    if (n == 0) {
        throw InvalidArgument("DFT length must be positive");
    }
    std::lock_guard lock(planner_mutex());
    data_ = reinterpret_cast<Complex*>(fftw_alloc_complex(n));
    auto* raw = reinterpret_cast<fftw_complex*>(data_);
    const int len = static_cast<int>(n);
    // FFTW_BACKWARD carries exp(+i...), which is our forward kernel.
    plan_to_ = fftw_plan_dft_1d(len, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
    plan_from_ = fftw_plan_dft_1d(len, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
}

SpectralWorkspace::~SpectralWorkspace() { release(); }

SpectralWorkspace::SpectralWorkspace(SpectralWorkspace&& other) noexcept
    : n_(std::exchange(other.n_, 0)),
      data_(std::exchange(other.data_, nullptr)),
      plan_to_(std::exchange(other.plan_to_, nullptr)),
      plan_from_(std::exchange(other.plan_from_, nullptr)) {}

SpectralWorkspace& SpectralWorkspace::operator=(SpectralWorkspace&& other) noexcept {
    if (this != &other) {
        release();
        n_ = std::exchange(other.n_, 0);
        data_ = std::exchange(other.data_, nullptr);
        plan_to_ = std::exchange(other.plan_to_, nullptr);
        plan_from_ = std::exchange(other.plan_from_, nullptr);
    }
    return *this;
}

void SpectralWorkspace::release() {
    if (data_ == nullptr) return;
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_to_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_from_));
    fftw_free(data_);
    data_ = nullptr;
}

std::span<Complex> SpectralWorkspace::buffer() { return {data_, n_}; }

void SpectralWorkspace::to_spectrum() { fftw_execute(static_cast<fftw_plan>(plan_to_)); }

void SpectralWorkspace::from_spectrum() {
    fftw_execute(static_cast<fftw_plan>(plan_from_));
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t k = 0; k < n_; ++k) data_[k] *= scale;
}

}  // namespace fiberprop
