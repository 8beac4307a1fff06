#pragma once

// Shared helpers for the statistical tests: sample moments and synthetic
// series generators. Generators used as estimator oracles live here, not in
// the library, so recovery tests stay independent of the code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doq/fbm.hpp"
#include "doq/grid.hpp"
#include "doq/path_sim.hpp"

namespace testutil {

inline double mean(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x)
        s += v;
    return s / static_cast<double>(x.size());
}

inline double variance(const std::vector<double>& x) {
    const double m = mean(x);
    double s = 0.0;
    for (double v : x)
        s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

inline double std_error_of_mean(const std::vector<double>& x) {
    return std::sqrt(variance(x) / static_cast<double>(x.size()));
}

inline double median(std::vector<double> x) {
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

inline double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = mean(a), mb = mean(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

/// Geometric DO closes (exact V path), n+1 prices with spacing dt.
inline std::vector<double> make_geo_do(int n, double h, double mu, double sigma, double dt,
                                       std::uint64_t seed, std::uint64_t stream = 0) {
    const doq::TimeGrid grid(0.0, n * dt, n);
    doq::ModelParams params;
    params.mu = mu;
    params.sigma = sigma;
    params.h = h;
    params.eps = 0.0;
    params.s0 = 100.0;
    params.model = doq::ModelKind::DobricOjeda;
    return doq::simulate_stock_path(params, grid, seed, stream).values;
}

/// Geometric fBm closes via the Davies-Harte sampler (n must be a power of
/// two), n+1 prices with spacing dt.
inline std::vector<double> make_geo_fbm(int n, double h, double mu, double sigma, double dt,
                                        std::uint64_t seed, std::uint64_t stream = 0) {
    const doq::TimeGrid grid(0.0, n * dt, n);
    const doq::FbmDaviesHarteSampler sampler(grid, h);
    const doq::SamplePath z = sampler.sample(seed, stream);
    std::vector<double> closes(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        const double t = grid.time_at(i);
        closes[static_cast<std::size_t>(i)] =
            100.0 * std::exp(mu * t + sigma * z.values[static_cast<std::size_t>(i)] -
                             0.5 * sigma * sigma * std::pow(t, 2.0 * h));
    }
    return closes;
}

} // namespace testutil
