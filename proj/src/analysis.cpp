#include "fiberprop/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "fiberprop/error.hpp"
#include "fiberprop/spectral.hpp"

namespace fiberprop {

double peak_power(const ComplexEnvelope& a) {
    double m = 0.0;
    for (const auto& v : a.samples()) m = std::max(m, std::norm(v));
    return m;
}

double pulse_energy(const ComplexEnvelope& a) {
    double s = 0.0;
    for (const auto& v : a.samples()) s += std::norm(v);
    return s * a.grid().dt();
}

double centroid(const ComplexEnvelope& a) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double w = std::norm(a[i]);
        num += a.grid().time(i) * w;
        den += w;
    }
    if (den == 0.0) throw InvalidArgument("centroid of a zero field is undefined");
    return num / den;
}

double error_maxnorm(std::span<const double> candidate, const SimGrid& gc,
                     std::span<const double> reference, const SimGrid& gr) {
    if (candidate.size() != gc.size() || reference.size() != gr.size()) {
        throw GridMismatch("intensity arrays do not match their grids");
    }
    const int ratio = gr.n_half() / gc.n_half();
    const bool nested = ratio >= 1 && gr.n_half() == ratio * gc.n_half() &&
                        (ratio & (ratio - 1)) == 0 &&
                        std::abs(gc.dt() - ratio * gr.dt()) <= 1e-12 * gc.dt();
    if (!nested) {
        throw GridMismatch(fmt::format("grids (N={}, dt={}) and (N={}, dt={}) are not nested",
                                       gc.n_half(), gc.dt(), gr.n_half(), gr.dt()));
    }
    double e = 0.0;
    for (std::size_t i = 0; i < candidate.size(); ++i) {
        e = std::max(e, std::abs(candidate[i] - reference[i * ratio]));
    }
    return e;
}

double convergence_order(std::span<const LadderRung> rungs) {
    if (rungs.size() < 3) {
        throw InvalidArgument(fmt::format("order fit needs >= 3 rungs, got {}", rungs.size()));
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& r : rungs) {
        if (!(r.error > 0.0) || !(r.h > 0.0)) {
            throw InvalidArgument("order fit needs positive errors and step sizes");
        }
        const double x = std::log(r.h);
        const double y = std::log(r.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(rungs.size());
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw InvalidArgument("order fit needs distinct step sizes");
    return (n * sxy - sx * sy) / den;
}

double convergence_order(const ConvergenceLadder& ladder) {
    return convergence_order(std::span<const LadderRung>(ladder.rungs));
}

PowerSpectrum power_spectrum(const ComplexEnvelope& a, double lambda0_m) {
    const SimGrid& g = a.grid();
    const std::size_t n = g.size();
    SpectralWorkspace ws(n);
    auto buf = ws.buffer();
    std::copy(a.samples().begin(), a.samples().end(), buf.begin());
    ws.to_spectrum();

    PowerSpectrum out;
    out.freq_offset_thz.resize(n);
    out.power.resize(n);
    out.power_norm.resize(n);
    const double scale = g.dt() / static_cast<double>(n);
    double pmax = 0.0;
    // Output index m holds signed bin m - N.
    for (std::size_t m = 0; m < n; ++m) {
        const int s = static_cast<int>(m) - g.n_half();
        const std::size_t k = s < 0 ? static_cast<std::size_t>(s + static_cast<int>(n))
                                    : static_cast<std::size_t>(s);
        out.freq_offset_thz[m] = g.omega(s) / (2.0 * std::numbers::pi);
        out.power[m] = scale * std::norm(buf[k]);
        pmax = std::max(pmax, out.power[m]);
    }
    for (std::size_t m = 0; m < n; ++m) {
        out.power_norm[m] = pmax > 0.0 ? out.power[m] / pmax : 0.0;
    }
    if (lambda0_m > 0.0) {
        const double nu0_thz = kSpeedOfLight / lambda0_m * 1e-12;
        out.wavelength_nm.resize(n);
        for (std::size_t m = 0; m < n; ++m) {
            out.wavelength_nm[m] = kSpeedOfLight / ((nu0_thz + out.freq_offset_thz[m]) * 1e12) * 1e9;
        }
    }
    return out;
}

double dispersion_length(double t0, double beta2) {
    if (beta2 == 0.0) throw InvalidArgument("dispersion length needs beta2 != 0");
    return t0 * t0 / std::abs(beta2);
}

double third_order_length(double t0, double beta3) {
    if (beta3 == 0.0) throw InvalidArgument("third-order length needs beta3 != 0");
    return t0 * t0 * t0 / std::abs(beta3);
}

double nonlinear_length(double gamma, double p0) {
    if (gamma * p0 == 0.0) throw InvalidArgument("nonlinear length needs gamma P0 != 0");
    return 1.0 / std::abs(gamma * p0);
}

std::optional<double> oscillation_period(std::span<const double> z,
                                         std::span<const double> values, double threshold) {
    if (z.size() != values.size()) throw InvalidArgument("trace arrays differ in length");
    if (values.size() < 3) return std::nullopt;
    const double vmax = *std::max_element(values.begin(), values.end());
    const double floor = threshold * vmax;
    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        if (values[i] > floor && values[i] >= values[i - 1] && values[i] > values[i + 1]) {
            peaks.push_back(z[i]);
        }
    }
    if (peaks.size() < 2) return std::nullopt;
    return (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

}  // namespace fiberprop
