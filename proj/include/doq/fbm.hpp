#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "doq/errors.hpp"
#include "doq/grid.hpp"
#include "doq/rng.hpp"

namespace doq {

inline constexpr int fbm_default_max_steps = 4096;

/// fBm covariance E[Z(s)Z(t)] = (s^{2H} + t^{2H} - |t-s|^{2H}) / 2.
inline double fbm_covariance(double s, double t, double h) {
    const double th = 2.0 * h;
    return 0.5 * (std::pow(s, th) + std::pow(t, th) - std::pow(std::abs(t - s), th));
}

namespace detail {

// In-place lower Cholesky of a dense symmetric matrix stored row-major.
inline void cholesky_lower(std::vector<double>& a, int n) {
    for (int j = 0; j < n; ++j) {
        double diag = a[static_cast<std::size_t>(j) * n + j];
        for (int k = 0; k < j; ++k) {
            const double v = a[static_cast<std::size_t>(j) * n + k];
            diag -= v * v;
        }
        if (!(diag > 0.0))
            throw not_positive_definite("fBm increment covariance is numerically non-PD at pivot " +
                                        std::to_string(j));
        const double d = std::sqrt(diag);
        a[static_cast<std::size_t>(j) * n + j] = d;
        for (int i = j + 1; i < n; ++i) {
            double v = a[static_cast<std::size_t>(i) * n + j];
            for (int k = 0; k < j; ++k)
                v -= a[static_cast<std::size_t>(i) * n + k] * a[static_cast<std::size_t>(j) * n + k];
            a[static_cast<std::size_t>(i) * n + j] = v / d;
        }
        for (int k = j + 1; k < n; ++k)
            a[static_cast<std::size_t>(j) * n + k] = 0.0;
    }
}

// Iterative radix-2 complex FFT (forward, sign -1). n must be a power of two.
inline void fft_pow2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * pi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace detail

/// Exact fBm sampler: Cholesky factor of the n x n increment covariance,
/// computed once and reused across seeds. O(n^2) memory, O(n^3) setup,
/// so n is capped (default 4096).
class FbmCholeskySampler {
public:
    FbmCholeskySampler(const TimeGrid& grid, double h, int max_steps = fbm_default_max_steps)
        : grid_(grid), h_(h) {
        if (!(h > 0.0 && h < 1.0))
            throw domain_error("fbm: h must lie in (0,1)");
        if (grid.n_steps > max_steps)
            throw domain_error("fbm: n_steps = " + std::to_string(grid.n_steps) +
                               " exceeds the exact-method cap " + std::to_string(max_steps));
        const int n = grid.n_steps;
        chol_.assign(static_cast<std::size_t>(n) * n, 0.0);
        const double th = 2.0 * h;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= i; ++j) {
                const double ti = grid.time_at(i + 1), ti0 = grid.time_at(i);
                const double tj = grid.time_at(j + 1), tj0 = grid.time_at(j);
                const double cov = 0.5 * (std::pow(std::abs(ti - tj0), th) +
                                          std::pow(std::abs(ti0 - tj), th) -
                                          std::pow(std::abs(ti - tj), th) -
                                          std::pow(std::abs(ti0 - tj0), th));
                chol_[static_cast<std::size_t>(i) * n + j] = cov;
                chol_[static_cast<std::size_t>(j) * n + i] = cov;
            }
        }
        detail::cholesky_lower(chol_, n);
    }

    SamplePath sample(std::uint64_t seed, std::uint64_t stream = 0) const {
        const int n = grid_.n_steps;
        GaussianStream rng(seed, stream);
        std::vector<double> z(n);
        for (auto& v : z)
            v = rng.normal();
        SamplePath path{grid_, std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0),
                        ProcessKind::FractionalBM};
        for (int i = 0; i < n; ++i) {
            double inc = 0.0;
            for (int j = 0; j <= i; ++j)
                inc += chol_[static_cast<std::size_t>(i) * n + j] * z[j];
            path.values[static_cast<std::size_t>(i) + 1] = path.values[i] + inc;
        }
        return path;
    }

private:
    TimeGrid grid_;
    double h_;
    std::vector<double> chol_;
};

/// Davies-Harte circulant-embedding sampler: exact in law, O(n log n) per
/// path. Fast path for long grids; needs t0 = 0, n a power of two.
class FbmDaviesHarteSampler {
public:
    FbmDaviesHarteSampler(const TimeGrid& grid, double h) : grid_(grid), h_(h) {
        if (!(h > 0.0 && h < 1.0))
            throw domain_error("fbm: h must lie in (0,1)");
        if (grid.t0 != 0.0)
            throw domain_error("fbm Davies-Harte: grid must start at t0 = 0");
        if (!detail::is_pow2(grid.n_steps))
            throw domain_error("fbm Davies-Harte: n_steps must be a power of two, got " +
                               std::to_string(grid.n_steps));
        const int n = grid.n_steps;
        const std::size_t m = 2 * static_cast<std::size_t>(n);
        const double dt = grid.dt();
        const double scale = std::pow(dt, 2.0 * h);
        auto gamma_k = [&](long k) {
            const double kk = static_cast<double>(k < 0 ? -k : k);
            return 0.5 * scale * (std::pow(kk + 1.0, 2.0 * h) - 2.0 * std::pow(kk, 2.0 * h) +
                                  std::pow(std::abs(kk - 1.0), 2.0 * h));
        };
        std::vector<std::complex<double>> circ(m);
        for (int k = 0; k <= n; ++k)
            circ[static_cast<std::size_t>(k)] = gamma_k(k);
        for (int k = 1; k < n; ++k)
            circ[m - static_cast<std::size_t>(k)] = gamma_k(k);
        detail::fft_pow2(circ);
        sqrt_eig_.resize(m);
        double lam_max = 0.0;
        for (const auto& c : circ)
            lam_max = std::max(lam_max, c.real());
        for (std::size_t k = 0; k < m; ++k) {
            double lam = circ[k].real();
            if (lam < 0.0) {
                if (lam < -1e-9 * lam_max)
                    throw not_positive_definite(
                        "fbm Davies-Harte: circulant embedding has a negative eigenvalue");
                lam = 0.0;
            }
            sqrt_eig_[k] = std::sqrt(lam);
        }
    }

    SamplePath sample(std::uint64_t seed, std::uint64_t stream = 0) const {
        const int n = grid_.n_steps;
        const std::size_t m = 2 * static_cast<std::size_t>(n);
        GaussianStream rng(seed, stream);
        std::vector<std::complex<double>> a(m);
        const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
        const double half = inv_sqrt_m / std::sqrt(2.0);
        a[0] = sqrt_eig_[0] * rng.normal() * inv_sqrt_m;
        a[static_cast<std::size_t>(n)] = sqrt_eig_[static_cast<std::size_t>(n)] * rng.normal() * inv_sqrt_m;
        for (std::size_t k = 1; k < static_cast<std::size_t>(n); ++k) {
            const double u = rng.normal();
            const double w = rng.normal();
            a[k] = std::complex<double>(u, w) * (sqrt_eig_[k] * half);
            a[m - k] = std::conj(a[k]);
        }
        detail::fft_pow2(a);
        SamplePath path{grid_, std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0),
                        ProcessKind::FractionalBM};
        for (int i = 0; i < n; ++i)
            path.values[static_cast<std::size_t>(i) + 1] =
                path.values[i] + a[static_cast<std::size_t>(i)].real();
        return path;
    }

private:
    TimeGrid grid_;
    double h_;
    std::vector<double> sqrt_eig_;
};

/// One-shot exact fBm path (Cholesky route, capped n). Z(0) = 0.
inline SamplePath simulate_fbm_path(const TimeGrid& grid, double h, std::uint64_t seed,
                                    int max_steps = fbm_default_max_steps,
                                    std::uint64_t stream = 0) {
    return FbmCholeskySampler(grid, h, max_steps).sample(seed, stream);
}

} // namespace doq
