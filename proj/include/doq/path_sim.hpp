#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "doq/errors.hpp"
#include "doq/fbm.hpp"
#include "doq/grid.hpp"
#include "doq/hurst_constants.hpp"
#include "doq/rng.hpp"

namespace doq {

/// Discretization of the martingale part M.
enum class MScheme {
    Exact,      ///< independent Gaussian increments with the exact law
    Euler,      ///< first-order rule sqrt(c_m(2-2H)) t^{1/2-H} sqrt(dt) X
};

enum class ModelKind { BlackScholes, FractionalBM, DobricOjeda };

inline const char* to_string(ModelKind m) {
    switch (m) {
        case ModelKind::BlackScholes: return "bs";
        case ModelKind::FractionalBM: return "fbm";
        case ModelKind::DobricOjeda: return "do";
    }
    return "?";
}

struct ModelParams {
    double mu = 0.0;    ///< drift, per year
    double sigma = 0.2; ///< volatility
    double h = 0.5;     ///< Hurst index
    double eps = 0.0;   ///< drift cut-on time (years); DO model only
    double s0 = 100.0;  ///< initial price
    double r = 0.0;     ///< risk-free rate, per year
    ModelKind model = ModelKind::BlackScholes;

    void validate() const {
        if (!(sigma > 0.0))
            throw domain_error("ModelParams: sigma must be > 0");
        if (!(s0 > 0.0))
            throw domain_error("ModelParams: s0 must be > 0");
        if (!(eps >= 0.0))
            throw domain_error("ModelParams: eps must be >= 0");
        if (!(h > 0.0 && h < 1.0))
            throw domain_error("ModelParams: h must lie in (0,1)");
    }
};

namespace detail {

// Endpoint used when evaluating t-powers on step i (1-based): left endpoint,
// except the first step, which uses the right endpoint so 0^{1/2-H} and
// 0^{2H-2} never appear.
inline double step_eval_time(const TimeGrid& grid, int i) {
    return (i == 1 && grid.t0 == 0.0) ? grid.time_at(1) : grid.time_at(i - 1);
}

} // namespace detail

/// Simulates the Gaussian martingale M on the grid, M(t0) = 0.
///
/// Exact: increments are independent N(0, c_m(t_i^{2-2H} - t_{i-1}^{2-2H})),
/// which is the process law itself. Euler: the first-order increment
/// rule sqrt(c_m(2-2H)) t^{1/2-H} sqrt(dt) X with t at the step-evaluation
/// endpoint.
inline SamplePath simulate_martingale_path(const TimeGrid& grid, double h, std::uint64_t seed,
                                           MScheme scheme = MScheme::Exact,
                                           std::uint64_t stream = 0) {
    const HurstConstants hc = derive_constants(h);
    GaussianStream rng(seed, stream);
    SamplePath path{grid, std::vector<double>(static_cast<std::size_t>(grid.n_points()), 0.0),
                    ProcessKind::Martingale};
    const double p = 2.0 - 2.0 * h;
    const double dt = grid.dt();
    const double euler_scale = std::sqrt(hc.c_m * p) * std::sqrt(dt);
    double prev_tp = std::pow(grid.t0, p);
    for (int i = 1; i <= grid.n_steps; ++i) {
        double inc;
        if (scheme == MScheme::Exact) {
            const double tp = std::pow(grid.time_at(i), p);
            const double var = hc.c_m * (tp - prev_tp);
            inc = std::sqrt(var > 0.0 ? var : 0.0) * rng.normal();
            prev_tp = tp;
        } else {
            const double ts = detail::step_eval_time(grid, i);
            inc = euler_scale * std::pow(ts, 0.5 - h) * rng.normal();
        }
        path.values[static_cast<std::size_t>(i)] = path.values[i - 1] + inc;
    }
    return path;
}

/// Dobric-Ojeda path V(t) = c_psi t^{2H-1} M(t), pointwise from an M path
/// with the same (seed, stream, scheme). V(0) = 0 (V ~ t^H near 0).
inline SamplePath simulate_do_path(const TimeGrid& grid, double h, std::uint64_t seed,
                                   MScheme scheme = MScheme::Exact, std::uint64_t stream = 0) {
    const HurstConstants hc = derive_constants(h);
    SamplePath path = simulate_martingale_path(grid, h, seed, scheme, stream);
    path.kind = ProcessKind::DobricOjeda;
    for (int i = 0; i <= grid.n_steps; ++i) {
        const double t = grid.time_at(i);
        if (t == 0.0) {
            path.values[static_cast<std::size_t>(i)] = 0.0;
        } else {
            path.values[static_cast<std::size_t>(i)] *= hc.c_psi * std::pow(t, 2.0 * h - 1.0);
        }
    }
    return path;
}

/// Modified Dobric-Ojeda path V^eps by Euler-Maruyama on
///   dV = C t^{H-1/2} dW + c_psi(2H-1) t^{2H-2} M_t 1_{[eps,inf)}(t) dt,
/// coupled to the exact M increments through
///   dW = dM / (sqrt(c_m(2-2H)) t^{1/2-H})
/// so the same Brownian motion drives M and V^eps. For eps >= t_end the path
/// is the pure martingale integral; for eps -> 0 it converges to V.
inline SamplePath simulate_modified_do_path(const TimeGrid& grid, double h, double eps,
                                            std::uint64_t seed, std::uint64_t stream = 0) {
    if (!(eps >= 0.0))
        throw domain_error("simulate_modified_do_path: eps must be >= 0");
    const HurstConstants hc = derive_constants(h);
    GaussianStream rng(seed, stream);
    SamplePath path{grid, std::vector<double>(static_cast<std::size_t>(grid.n_points()), 0.0),
                    ProcessKind::ModifiedDO};
    const double p = 2.0 - 2.0 * h;
    const double w_scale = std::sqrt(hc.c_m * p);
    const double drift_coef = hc.c_psi * (2.0 * h - 1.0);
    const double dt = grid.dt();
    double m_prev = 0.0;
    double prev_tp = std::pow(grid.t0, p);
    for (int i = 1; i <= grid.n_steps; ++i) {
        const double tp = std::pow(grid.time_at(i), p);
        const double var = hc.c_m * (tp - prev_tp);
        const double dm = std::sqrt(var > 0.0 ? var : 0.0) * rng.normal();
        prev_tp = tp;

        const double ts = detail::step_eval_time(grid, i);
        const double dw = dm / (w_scale * std::pow(ts, 0.5 - h));
        double dv = hc.big_c * std::pow(ts, h - 0.5) * dw;
        if (drift_coef != 0.0 && ts >= eps)
            dv += drift_coef * std::pow(ts, 2.0 * h - 2.0) * m_prev * dt;
        path.values[static_cast<std::size_t>(i)] = path.values[i - 1] + dv;
        m_prev += dm;
    }
    return path;
}

/// Geometric stock path for the chosen model. The driving noise X and the
/// variance correction q(t) in S(t) = s0 exp(mu t + sigma X(t) - q(t)) are:
///   BlackScholes: X = V at h = 1/2 (a Brownian motion), q = C^2 sigma^2 t^{2H}/(4H)
///   FractionalBM: X = Z_H,                              q = sigma^2 t^{2H}/2
///   DobricOjeda:  X = V (eps = 0) or V^eps (eps > 0),   q = C^2 sigma^2 t^{2H}/(4H)
/// BS is literally the DO code path at h = 1/2, so BS and DO(h=0.5) paths are
/// bit-identical for the same seed.
inline SamplePath simulate_stock_path(const ModelParams& params, const TimeGrid& grid,
                                      std::uint64_t seed, std::uint64_t stream = 0,
                                      int fbm_max_steps = fbm_default_max_steps) {
    params.validate();
    const double h_eff = params.model == ModelKind::BlackScholes ? 0.5 : params.h;
    SamplePath driving = [&] {
        switch (params.model) {
            case ModelKind::FractionalBM:
                return simulate_fbm_path(grid, h_eff, seed, fbm_max_steps, stream);
            case ModelKind::BlackScholes:
            case ModelKind::DobricOjeda:
            default:
                if (params.model == ModelKind::DobricOjeda && params.eps > 0.0)
                    return simulate_modified_do_path(grid, h_eff, params.eps, seed, stream);
                return simulate_do_path(grid, h_eff, seed, MScheme::Exact, stream);
        }
    }();

    const double th = 2.0 * h_eff;
    double corr_scale; // q(t) = corr_scale * t^{2H}
    if (params.model == ModelKind::FractionalBM) {
        corr_scale = 0.5 * params.sigma * params.sigma;
    } else {
        const HurstConstants hc = derive_constants(h_eff);
        corr_scale = hc.big_c * hc.big_c * params.sigma * params.sigma / (4.0 * h_eff);
    }

    SamplePath path{grid, std::vector<double>(static_cast<std::size_t>(grid.n_points()), 0.0),
                    ProcessKind::Stock};
    for (int i = 0; i <= grid.n_steps; ++i) {
        const double t = grid.time_at(i);
        path.values[static_cast<std::size_t>(i)] =
            params.s0 *
            std::exp(params.mu * t + params.sigma * driving.values[static_cast<std::size_t>(i)] -
                     corr_scale * std::pow(t, th));
    }
    return path;
}

} // namespace doq
