#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "doq/errors.hpp"
#include "doq/hurst_constants.hpp"

namespace doq {

enum class EstimationMethod { ErgodicRatio, QVRatio };

inline const char* to_string(EstimationMethod m) {
    return m == EstimationMethod::ErgodicRatio ? "ergodic" : "qv_ratio";
}

struct EstimateResult {
    EstimationMethod method = EstimationMethod::ErgodicRatio;
    std::optional<double> mu_hat; ///< per year; the QV method omits it
    double h_hat = 0.5;           ///< clamped to [hurst_min, hurst_max]
    double sigma_hat = 0.0;
    bool clamped = false;         ///< raw H estimate fell outside the clamp range
    int window_len = 0;           ///< number of prices used
    double dt = 1.0 / 252.0;      ///< observation spacing, years
};

/// y_i = ln(s_i / s_{i-1}); requires positive prices, length >= 2.
inline std::vector<double> log_returns(std::span<const double> prices) {
    if (prices.size() < 2)
        throw domain_error("log_returns: need at least 2 prices");
    std::vector<double> y(prices.size() - 1);
    for (std::size_t i = 0; i + 1 < prices.size(); ++i) {
        if (!(prices[i] > 0.0) || !(prices[i + 1] > 0.0))
            throw domain_error("log_returns: non-positive price at index " + std::to_string(
                prices[i] > 0.0 ? i + 1 : i));
        y[i] = std::log(prices[i + 1] / prices[i]);
    }
    return y;
}

namespace detail {

inline double clamp_h(double raw, bool& clamped) {
    clamped = !(raw >= hurst_min && raw <= hurst_max);
    return std::clamp(raw, hurst_min, hurst_max);
}

inline double log4(double x) { return std::log2(x) / 2.0; }

} // namespace detail

/// Ergodic second-moment ratio estimator (fBm assumption).
///
///   mu_hat = mean(y) / dt
///   SS1 = mean((y_i - mu_hat dt)^2)                  -> sigma^2 dt^{2H}
///   SS2 = mean over floor(n/2) two-step returns
///         (ln(s_{2i}/s_{2i-2}) - mu_hat 2dt)^2       -> sigma^2 (2dt)^{2H}
///   H_hat = log4(SS2/SS1), sigma_hat^2 = SS1 / dt^{2H_hat}
///
/// SS1/SS2 converges to (1/4)^H, so the corrected estimator inverts the
/// ratio; paper_literal = true evaluates log4(SS1/SS2) verbatim instead.
inline EstimateResult estimate_ergodic(std::span<const double> prices, double dt,
                                       bool paper_literal = false) {
    if (prices.size() < 8)
        throw domain_error("estimate_ergodic: need at least 8 prices");
    if (!(dt > 0.0))
        throw domain_error("estimate_ergodic: dt must be > 0");
    const std::vector<double> y = log_returns(prices);
    const std::size_t n = y.size();

    double mean_y = 0.0;
    for (double v : y)
        mean_y += v;
    mean_y /= static_cast<double>(n);
    const double mu_hat = mean_y / dt;

    double ss1 = 0.0;
    for (double v : y) {
        const double c = v - mean_y;
        ss1 += c * c;
    }
    ss1 /= static_cast<double>(n);

    const std::size_t half = n / 2;
    double ss2 = 0.0;
    for (std::size_t i = 1; i <= half; ++i) {
        // two-step return ln(s_{2i}/s_{2i-2}) = y_{2i-1} + y_{2i}
        const double c = y[2 * i - 2] + y[2 * i - 1] - 2.0 * mean_y;
        ss2 += c * c;
    }
    ss2 /= static_cast<double>(half);

    if (ss1 == 0.0 || ss2 == 0.0)
        throw degenerate_input("estimate_ergodic: zero second moment (constant prices?)");

    const double raw_h = paper_literal ? detail::log4(ss1 / ss2) : detail::log4(ss2 / ss1);
    EstimateResult res;
    res.method = EstimationMethod::ErgodicRatio;
    res.mu_hat = mu_hat;
    res.h_hat = detail::clamp_h(raw_h, res.clamped);
    res.sigma_hat = std::sqrt(ss1 / std::pow(dt, 2.0 * res.h_hat));
    res.window_len = static_cast<int>(prices.size());
    res.dt = dt;
    return res;
}

/// Quadratic-variation ratio estimator (DO assumption).
///
///   H_hat = log4( sum_{i<=m} y_i^2 / sum_{i<=floor(m/2)} y_i^2 )
///   sigma_hat^2 = 2 H_hat sum y_i^2 / (C(H_hat)^2 T^{2 H_hat}),  T = m dt
///
/// Both forms are the limit-consistent corrections (the half/full ratio
/// converges to (1/4)^H and the full-window sum to
/// sigma^2 C^2 T^{2H} / (2H)); paper_literal = true evaluates the literal
/// H_hat = log4(half/full) and sigma_hat^2 = 2 sum y^2 / (C H_hat T^{2H_hat}).
inline EstimateResult estimate_qv_ratio(std::span<const double> prices, double dt,
                                        bool paper_literal = false) {
    if (prices.size() < 8)
        throw domain_error("estimate_qv_ratio: need at least 8 prices");
    if (!(dt > 0.0))
        throw domain_error("estimate_qv_ratio: dt must be > 0");
    const std::vector<double> y = log_returns(prices);
    const std::size_t m = y.size();

    double full = 0.0, half = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        full += y[i] * y[i];
        if (i < m / 2)
            half += y[i] * y[i];
    }
    if (half == 0.0 || full == 0.0)
        throw degenerate_input("estimate_qv_ratio: zero quadratic variation (constant prices?)");

    const double raw_h = paper_literal ? detail::log4(half / full) : detail::log4(full / half);
    EstimateResult res;
    res.method = EstimationMethod::QVRatio;
    res.h_hat = detail::clamp_h(raw_h, res.clamped);
    res.window_len = static_cast<int>(prices.size());
    res.dt = dt;

    const double t_span = static_cast<double>(m) * dt;
    const double c = derive_constants(res.h_hat).big_c;
    const double t_pow = std::pow(t_span, 2.0 * res.h_hat);
    const double var = paper_literal ? 2.0 * full / (c * res.h_hat * t_pow)
                                     : 2.0 * res.h_hat * full / (c * c * t_pow);
    if (!(var > 0.0))
        throw numeric_error("estimate_qv_ratio: non-positive variance estimate");
    res.sigma_hat = std::sqrt(var);
    return res;
}

inline EstimateResult estimate(std::span<const double> prices, double dt, EstimationMethod method,
                               bool paper_literal = false) {
    return method == EstimationMethod::ErgodicRatio ? estimate_ergodic(prices, dt, paper_literal)
                                                    : estimate_qv_ratio(prices, dt, paper_literal);
}

/// One estimate per day from index `window` onward, each over exactly the
/// `window` closes strictly before that day.
inline std::vector<EstimateResult> rolling_estimates(std::span<const double> closes, int window,
                                                     EstimationMethod method,
                                                     double dt = 1.0 / 252.0,
                                                     bool paper_literal = false) {
    if (window < 8)
        throw domain_error("rolling_estimates: window must be >= 8");
    if (closes.size() < static_cast<std::size_t>(window))
        throw domain_error("rolling_estimates: series shorter than window");
    std::vector<EstimateResult> out;
    out.reserve(closes.size() - static_cast<std::size_t>(window));
    for (std::size_t d = static_cast<std::size_t>(window); d < closes.size(); ++d)
        out.push_back(estimate(closes.subspan(d - static_cast<std::size_t>(window),
                                              static_cast<std::size_t>(window)),
                               dt, method, paper_literal));
    return out;
}

} // namespace doq
