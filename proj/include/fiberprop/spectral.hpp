#pragma once

#include <cstddef>
#include <span>

#include "fiberprop/grid.hpp"

namespace fiberprop {

/// Per-caller DFT workspace (FFTW plans plus an aligned scratch buffer).
///
/// Transform pair used throughout the library:
///   to_spectrum:    S_k = sum_j A_j exp(+i w_k T_j)
///   from_spectrum:  A_j = (1/2N) sum_k S_k exp(-i w_k T_j)
/// so d/dT acts as -i w in the spectral domain. Bin k holds signed index
/// s = k for k < N and s = k - 2N otherwise (FFTW natural order).
class SpectralWorkspace {
public:
    explicit SpectralWorkspace(std::size_t n);
    ~SpectralWorkspace();

    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;
    SpectralWorkspace(SpectralWorkspace&& other) noexcept;
    SpectralWorkspace& operator=(SpectralWorkspace&& other) noexcept;

    std::size_t size() const { return n_; }

    /// Scratch buffer the transforms operate on in place.
    std::span<Complex> buffer();

    void to_spectrum();    // buffer <- F(buffer)
    void from_spectrum();  // buffer <- F^-1(buffer), normalized

private:
    void release();

    std::size_t n_ = 0;
    Complex* data_ = nullptr;
    void* plan_to_ = nullptr;
    void* plan_from_ = nullptr;
};

/// Signed spectral index of FFTW bin k for a transform of length 2N.
inline int signed_bin(std::size_t k, int n_half) {
    const int ki = static_cast<int>(k);
    return ki < n_half ? ki : ki - 2 * n_half;
}

}  // namespace fiberprop
