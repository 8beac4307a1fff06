#include <doctest.h>

#include <cmath>
#include <vector>

#include "doq/hurst_constants.hpp"
#include "doq/path_sim.hpp"
#include "test_util.hpp"

using namespace doq;
using testutil::mean;
using testutil::std_error_of_mean;

namespace {

constexpr std::uint64_t kSeed = 20240901;

// mean of f(path) over streams 0..n-1
template <class F>
std::vector<double> collect(int n_paths, F&& f) {
    std::vector<double> out(static_cast<std::size_t>(n_paths));
    for (int i = 0; i < n_paths; ++i)
        out[static_cast<std::size_t>(i)] = f(static_cast<std::uint64_t>(i));
    return out;
}

} // namespace

TEST_SUITE("path_sim") {

TEST_CASE("single-step M at h = 1/2 is a standard normal increment") {
    const TimeGrid grid(0.0, 1.0, 1);
    auto sq = collect(100000, [&](std::uint64_t s) {
        const auto p = simulate_martingale_path(grid, 0.5, kSeed, MScheme::Exact, s);
        return p.back() * p.back();
    });
    CHECK(std::abs(mean(sq) - 1.0) < 3.0 * std_error_of_mean(sq));
}

TEST_CASE("E[M^2(1)] matches c_m at h = 0.7") {
    const TimeGrid grid(0.0, 1.0, 256);
    auto sq = collect(10000, [&](std::uint64_t s) {
        const auto p = simulate_martingale_path(grid, 0.7, kSeed, MScheme::Exact, s);
        return p.back() * p.back();
    });
    const double target = derive_constants(0.7).c_m;
    CHECK(std::abs(mean(sq) - target) < 3.0 * std_error_of_mean(sq));
}

TEST_CASE("E[M(0.5) M(1.0)] = c_m (s ^ t)^{2-2H} at h = 0.7") {
    const TimeGrid grid(0.0, 1.0, 256);
    auto prod = collect(10000, [&](std::uint64_t s) {
        const auto p = simulate_martingale_path(grid, 0.7, kSeed, MScheme::Exact, s);
        return p.values[128] * p.values[256];
    });
    CHECK(std::abs(mean(prod) - 0.317966618142582417) < 3.0 * std_error_of_mean(prod));
}

TEST_CASE("M has independent increments") {
    const TimeGrid grid(0.0, 1.0, 256);
    std::vector<double> a, b;
    a.reserve(10000);
    b.reserve(10000);
    for (int i = 0; i < 10000; ++i) {
        const auto p =
            simulate_martingale_path(grid, 0.7, kSeed, MScheme::Exact, static_cast<std::uint64_t>(i));
        a.push_back(p.values[128] - p.values[64]);   // (0.25, 0.5]
        b.push_back(p.values[256] - p.values[192]);  // (0.75, 1]
    }
    CHECK(std::abs(testutil::correlation(a, b)) < 3.0 / std::sqrt(10000.0));
}

TEST_CASE("Euler scheme reproduces the exact second moment") {
    // at h = 1/2 the rule is exact; at h = 0.7 use a fine grid so the
    // first-order bias is far below the Monte Carlo band
    for (double h : {0.5, 0.7}) {
        const int n = h == 0.5 ? 64 : 4096;
        const TimeGrid grid(0.0, 1.0, n);
        auto sq = collect(4000, [&](std::uint64_t s) {
            const auto p = simulate_martingale_path(grid, h, kSeed, MScheme::Euler, s);
            return p.back() * p.back();
        });
        const double target = derive_constants(h).c_m;
        CHECK(std::abs(mean(sq) - target) < 3.0 * std_error_of_mean(sq) + 0.01 * target);
    }
}

TEST_CASE("V at h = 1/2 is bit-identical to M") {
    const TimeGrid grid(0.0, 1.0, 128);
    const auto m = simulate_martingale_path(grid, 0.5, kSeed, MScheme::Exact, 3);
    const auto v = simulate_do_path(grid, 0.5, kSeed, MScheme::Exact, 3);
    CHECK(v.values == m.values);
}

TEST_CASE("V moments at h = 0.7: E[V(1)] = 0, E[V^2(1)] = c_psi^2 c_m") {
    const TimeGrid grid(0.0, 1.0, 256);
    std::vector<double> v1, v2;
    for (int i = 0; i < 10000; ++i) {
        const auto p = simulate_do_path(grid, 0.7, kSeed, MScheme::Exact, static_cast<std::uint64_t>(i));
        v1.push_back(p.back());
        v2.push_back(p.back() * p.back());
    }
    CHECK(std::abs(mean(v1)) < 3.0 * std_error_of_mean(v1));
    CHECK(std::abs(mean(v2) - 0.986538134921288106) < 3.0 * std_error_of_mean(v2));
}

TEST_CASE("V^eps with eps >= t_end is the pure martingale integral") {
    // Prop-3.3 style second moment, t <= eps branch: C^2 t^{2H} / 2H
    const TimeGrid grid(0.0, 1.0, 2048);
    auto sq = collect(5000, [&](std::uint64_t s) {
        const auto p = simulate_modified_do_path(grid, 0.7, 2.0, kSeed, s);
        return p.back() * p.back();
    });
    CHECK(std::abs(mean(sq) - 0.422802057823409188) < 3.0 * std_error_of_mean(sq));
}

TEST_CASE("V^eps at h = 1/2 is a Brownian motion for any eps") {
    for (double eps : {0.0, 0.3}) {
        const TimeGrid grid(0.0, 1.0, 512);
        auto sq = collect(5000, [&](std::uint64_t s) {
            const auto p = simulate_modified_do_path(grid, 0.5, eps, kSeed, s);
            return p.back() * p.back();
        });
        CHECK(std::abs(mean(sq) - 1.0) < 3.0 * std_error_of_mean(sq));
    }
}

TEST_CASE("V^eps second moment, t > eps branch (h = 0.7, eps = 0.1, t = 1)") {
    const TimeGrid grid(0.0, 1.0, 4096);
    auto sq = collect(5000, [&](std::uint64_t s) {
        const auto p = simulate_modified_do_path(grid, 0.7, 0.1, kSeed, s);
        return p.back() * p.back();
    });
    CHECK(std::abs(mean(sq) - 0.916592179111279648) < 3.0 * std_error_of_mean(sq));
}

TEST_CASE("V^eps second moment with negatively-signed drift (h = 0.4, eps = 0.1)") {
    const TimeGrid grid(0.0, 1.0, 4096);
    auto sq = collect(5000, [&](std::uint64_t s) {
        const auto p = simulate_modified_do_path(grid, 0.4, 0.1, kSeed, s);
        return p.back() * p.back();
    });
    CHECK(std::abs(mean(sq) - 1.04539804231806305) < 3.0 * std_error_of_mean(sq));
}

TEST_CASE("coupled V^eps converges to V as eps decreases") {
    const TimeGrid grid(0.0, 1.0, 2048);
    const double eps_list[] = {0.4, 0.2, 0.1, 0.05};
    double prev = 1e300;
    for (double eps : eps_list) {
        double acc = 0.0;
        for (int s = 0; s < 20; ++s) {
            const auto veps =
                simulate_modified_do_path(grid, 0.7, eps, kSeed, static_cast<std::uint64_t>(s));
            const auto v =
                simulate_do_path(grid, 0.7, kSeed, MScheme::Exact, static_cast<std::uint64_t>(s));
            double sup = 0.0;
            for (std::size_t i = 0; i < veps.values.size(); ++i)
                sup = std::max(sup, std::abs(veps.values[i] - v.values[i]));
            acc += sup;
        }
        acc /= 20.0;
        CHECK(acc < prev);
        prev = acc;
    }
}

TEST_CASE("determinism: same key gives bit-identical paths, new key differs") {
    const TimeGrid grid(0.0, 1.0, 64);
    const auto a = simulate_do_path(grid, 0.7, 99, MScheme::Exact, 5);
    const auto b = simulate_do_path(grid, 0.7, 99, MScheme::Exact, 5);
    const auto c = simulate_do_path(grid, 0.7, 99, MScheme::Exact, 6);
    const auto d = simulate_do_path(grid, 0.7, 100, MScheme::Exact, 5);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    CHECK(a.values != d.values);
}

TEST_CASE("stock paths: DO at h = 1/2 is bit-identical to Black-Scholes") {
    const TimeGrid grid(0.0, 1.0, 256);
    ModelParams bs;
    bs.mu = 0.07;
    bs.sigma = 0.25;
    bs.s0 = 80.0;
    bs.model = ModelKind::BlackScholes;
    ModelParams dojd = bs;
    dojd.model = ModelKind::DobricOjeda;
    dojd.h = 0.5;
    for (std::uint64_t s : {0ull, 1ull, 2ull}) {
        const auto p_bs = simulate_stock_path(bs, grid, kSeed, s);
        const auto p_do = simulate_stock_path(dojd, grid, kSeed, s);
        CHECK(p_bs.values == p_do.values);
    }
}

TEST_CASE("discounted DO stock is a martingale in the risk-neutral form") {
    // mu = r and eps >= t_end (drift off: the Q^eps dynamics)
    const TimeGrid grid(0.0, 1.0, 512);
    ModelParams params;
    params.mu = 0.05;
    params.r = 0.05;
    params.sigma = 0.2;
    params.h = 0.7;
    params.eps = 2.0;
    params.s0 = 100.0;
    params.model = ModelKind::DobricOjeda;
    auto disc = collect(10000, [&](std::uint64_t s) {
        const auto p = simulate_stock_path(params, grid, kSeed, s);
        return std::exp(-params.r * 1.0) * p.back();
    });
    CHECK(std::abs(mean(disc) - 100.0) < 3.0 * std_error_of_mean(disc));
}

TEST_CASE("fBm stock log-mean matches mu t - sigma^2 t^{2H} / 2") {
    const TimeGrid grid(0.0, 1.0, 64);
    ModelParams params;
    params.mu = 0.05;
    params.sigma = 0.2;
    params.h = 0.7;
    params.s0 = 100.0;
    params.model = ModelKind::FractionalBM;
    auto logret = collect(10000, [&](std::uint64_t s) {
        const auto p = simulate_stock_path(params, grid, kSeed, s);
        return std::log(p.back() / 100.0);
    });
    const double target = 0.05 - 0.5 * 0.04;
    CHECK(std::abs(mean(logret) - target) < 3.0 * std_error_of_mean(logret));
}

TEST_CASE("validation errors") {
    CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 0), domain_error);
    CHECK_THROWS_AS(TimeGrid(1.0, 0.5, 16), domain_error);
    CHECK_THROWS_AS(TimeGrid(-0.1, 1.0, 16), domain_error);
    const TimeGrid grid(0.0, 1.0, 16);
    CHECK_THROWS_AS(simulate_martingale_path(grid, 1.2, kSeed), domain_error);
    CHECK_THROWS_AS(simulate_modified_do_path(grid, 0.7, -0.1, kSeed), domain_error);
    ModelParams bad;
    bad.sigma = -1.0;
    CHECK_THROWS_AS(simulate_stock_path(bad, grid, kSeed), domain_error);
}

} // TEST_SUITE
