#pragma once

// Straight-line transcriptions of the upwind and high-resolution update
// formulas, written independently of the library kernels. Used only as test
// oracles. `partner` may be empty (single field).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "fiberprop/nonlinear_single.hpp"

namespace fiberprop::oracle {

struct Coeffs {
    double gamma, s, tr, b = 0.0, c = 0.0;
};

struct State {
    std::vector<double> i, phi;
};

inline double mod_diff(double theta) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double tau = std::min({std::abs(theta), std::abs(theta + two_pi), std::abs(theta - two_pi)});
    if (std::abs(theta) == tau) return theta;
    if (std::abs(theta + two_pi) == tau) return theta + two_pi;
    return theta - two_pi;
}

inline double van_albada(double r) {
    if (std::isinf(r)) return 1.0;
    return std::max(0.0, (r * r + r) / (1.0 + r * r));
}

inline double slope(double dm, double dp) {
    if (dm == 0.0 && dp == 0.0) return 0.0;
    return van_albada(dm / dp) * dp + van_albada(dp / dm) * dm;
}

/// First-order homogeneous update (no source).
inline State upwind_homogeneous(const State& q, const std::vector<double>& partner,
                                const Coeffs& k, double ratio) {
    const int n = static_cast<int>(q.i.size());
    State out = q;
    for (int j = 0; j < n; ++j) {
        const double l_j = partner.empty() ? 0.0 : partner[j];
        double it, lt, di, dl, dth;
        if (k.gamma > 0) {
            const int m = (j - 1 + n) % n;
            const double l_m = partner.empty() ? 0.0 : partner[m];
            it = 0.5 * (q.i[j] + q.i[m]);
            lt = 0.5 * (l_j + l_m);
            di = q.i[j] - q.i[m];
            dl = l_j - l_m;
            dth = q.phi[j] - q.phi[m];
        } else {
            const int p = (j + 1) % n;
            const double l_p = partner.empty() ? 0.0 : partner[p];
            it = 0.5 * (q.i[j] + q.i[p]);
            lt = 0.5 * (l_j + l_p);
            di = q.i[p] - q.i[j];
            dl = l_p - l_j;
            dth = q.phi[p] - q.phi[j];
        }
        const double dphi = mod_diff(dth);
        out.i[j] = q.i[j] - ratio * k.gamma * k.s * ((3 * it + k.b * lt) * di + 2 * k.b * it * dl);
        out.phi[j] = q.phi[j] -
                     ratio * k.gamma * (k.tr * (di + k.b * dl) + k.s * (it + k.b * lt) * dphi);
    }
    return out;
}

inline void source(State& q, const std::vector<double>& partner, const Coeffs& k, double dz) {
    for (std::size_t j = 0; j < q.i.size(); ++j) {
        const double l = partner.empty() ? 0.0 : partner[j];
        q.phi[j] += dz * k.gamma * (q.i[j] + k.c * l);
    }
}

inline State upwind_step(const State& q, const std::vector<double>& partner, const Coeffs& k,
                         double dz, double dt) {
    State out = upwind_homogeneous(q, partner, k, dz / dt);
    source(out, partner, k, dz);
    return out;
}

/// Predictor, limited reconstruction and corrector. Interface coefficients
/// are evaluated at the mean of the two facing reconstructed intensities,
/// the cell term at the predictor value; the partner is not reconstructed.
inline State muscl_homogeneous(const State& q, const std::vector<double>& partner,
                               const Coeffs& k, double ratio) {
    const int n = static_cast<int>(q.i.size());
    const State bar = upwind_homogeneous(q, partner, k, 0.5 * ratio);
    std::vector<double> si(n), sp(n), dphi_right(n);
    for (int j = 0; j < n; ++j) dphi_right[j] = mod_diff(bar.phi[(j + 1) % n] - bar.phi[j]);
    for (int j = 0; j < n; ++j) {
        const int m = (j - 1 + n) % n;
        const int p = (j + 1) % n;
        si[j] = slope(bar.i[j] - bar.i[m], bar.i[p] - bar.i[j]);
        sp[j] = slope(dphi_right[m], dphi_right[j]);
    }
    auto row_i = [&](double it, double lt, double di, double dl) {
        return k.gamma * k.s * ((3 * it + k.b * lt) * di + 2 * k.b * it * dl);
    };
    auto row_phi = [&](double it, double lt, double di, double dl, double dp) {
        return k.gamma * (k.tr * (di + k.b * dl) + k.s * (it + k.b * lt) * dp);
    };
    State out = q;
    for (int j = 0; j < n; ++j) {
        const int u = k.gamma > 0 ? (j - 1 + n) % n : (j + 1) % n;
        const double l_j = partner.empty() ? 0.0 : partner[j];
        const double l_u = partner.empty() ? 0.0 : partner[u];
        double left_i, right_i, jump_phi, dl;
        if (k.gamma > 0) {
            left_i = bar.i[u] + 0.25 * si[u];   // q^r_{j-1}
            right_i = bar.i[j] - 0.25 * si[j];  // q^l_j
            jump_phi = dphi_right[u] - 0.25 * (sp[j] + sp[u]);
            dl = l_j - l_u;
        } else {
            left_i = bar.i[j] + 0.25 * si[j];   // q^r_j
            right_i = bar.i[u] - 0.25 * si[u];  // q^l_{j+1}
            jump_phi = dphi_right[j] - 0.25 * (sp[u] + sp[j]);
            dl = l_u - l_j;
        }
        const double it = 0.5 * (left_i + right_i);
        const double lt = 0.5 * (l_j + l_u);
        const double jump_i = right_i - left_i;
        const double flux_i = row_i(it, lt, jump_i, dl) + row_i(bar.i[j], l_j, 0.5 * si[j], 0.0);
        const double flux_phi = row_phi(it, lt, jump_i, dl, jump_phi) +
                                row_phi(bar.i[j], l_j, 0.5 * si[j], 0.0, 0.5 * sp[j]);
        out.i[j] = q.i[j] - ratio * flux_i;
        out.phi[j] = q.phi[j] - ratio * flux_phi;
    }
    return out;
}

inline State muscl_step(State q, const std::vector<double>& partner, const Coeffs& k, double dz,
                        double dt) {
    source(q, partner, k, 0.5 * dz);
    State out = muscl_homogeneous(q, partner, k, dz / dt);
    for (auto& v : out.i) v = std::max(v, 0.0);
    source(out, partner, k, 0.5 * dz);
    return out;
}

}  // namespace fiberprop::oracle
