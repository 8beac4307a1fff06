#pragma once

#include <cmath>
#include <string>

#include "doq/errors.hpp"
#include "doq/special_functions.hpp"

namespace doq {

/// Every deterministic H-derived scalar used by the process, pricing and
/// estimation formulas. All fields are plain doubles; derive_constants is the
/// only constructor-of-record.
struct HurstConstants {
    double h;       ///< Hurst index in (0,1)
    double a_h;     ///< field covariance constant (H + H' = 1 case)
    double c_m;     ///< second-moment constant of the martingale M: E[M^2(t)] = c_m t^{2-2H}
    double c_psi;   ///< Psi coefficient: Psi(t) = c_psi t^{2H-1}
    double big_c;   ///< diffusion coefficient C = c_psi sqrt(c_m (2-2H))
    double d_h;     ///< relative L2 error of V from fBm: E[(Z-V)^2] = d_h^2 t^{2H}
    double delta_h; ///< Novikov admissibility factor exp(-1/(2 B^2 c_m)), B = c_psi(2H-1)/C

    /// Girsanov drift constant B = c_psi (2H-1) / C (0 at H = 1/2).
    double novikov_b() const { return h == 0.5 ? 0.0 : c_psi * (2.0 * h - 1.0) / big_c; }
};

inline constexpr double hurst_min = 0.01;
inline constexpr double hurst_max = 0.99;

/// Evaluates all Hurst-dependent constants from h alone.
///
/// H = 1/2 is an exact special case: all Gamma factors collapse to 1 and
/// B = 0 turns delta(H) into an exp(-inf) limit, so the analytic limits
/// {1,1,1,1,0,0} are set directly instead of computed.
inline HurstConstants derive_constants(double h) {
    if (!(h > 0.0 && h < 1.0))
        throw domain_error("derive_constants: h must lie in (0,1), got " + std::to_string(h));
    if (h < hurst_min || h > hurst_max)
        throw domain_error("derive_constants: h = " + std::to_string(h) +
                           " is inside the degenerate clamp band; valid range is [" +
                           std::to_string(hurst_min) + ", " + std::to_string(hurst_max) + "]");

    if (h == 0.5)
        return HurstConstants{0.5, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0};

    const double s = std::sin(pi * h);
    const double a_h = std::sqrt(gamma_fn(2.0 * h + 1.0) * gamma_fn(3.0 - 2.0 * h)) * s * s;
    const double g_low = gamma_fn(1.5 - h);
    const double g_mid = gamma_fn(h + 0.5);
    const double g_top = gamma_fn(3.0 - 2.0 * h);
    const double c_m = a_h * a_h * g_low / (2.0 * h * g_mid * g_top);
    const double c_psi = 2.0 * h * g_top * g_mid / (a_h * g_low);
    const double big_c = c_psi * std::sqrt(c_m * (2.0 - 2.0 * h));

    // d^2 = 1 - a_h^2 / c_m; the Gamma form below is the same quantity with
    // a_h cancelled. Guard the sqrt against -1ulp noise near h = 1/2.
    const double d2 = 1.0 - 2.0 * h * g_mid * g_top / g_low;
    const double d_h = std::sqrt(d2 > 0.0 ? d2 : 0.0);

    const double b = c_psi * (2.0 * h - 1.0) / big_c;
    const double delta_h = std::exp(-1.0 / (2.0 * b * b * c_m));

    return HurstConstants{h, a_h, c_m, c_psi, big_c, d_h, delta_h};
}

} // namespace doq
