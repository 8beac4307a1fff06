#include <doctest.h>

#include <cmath>
#include <vector>

#include "doq/fbm.hpp"
#include "test_util.hpp"

using namespace doq;
using testutil::mean;
using testutil::std_error_of_mean;

namespace {
constexpr std::uint64_t kSeed = 777001;
}

TEST_SUITE("fbm") {

TEST_CASE("h = 1/2: increments are uncorrelated with variance dt") {
    const TimeGrid grid(0.0, 1.0, 64);
    const FbmCholeskySampler sampler(grid, 0.5);
    std::vector<double> lag0, lag1, sq;
    for (int s = 0; s < 2000; ++s) {
        const auto p = sampler.sample(kSeed, static_cast<std::uint64_t>(s));
        for (int i = 1; i <= 63; ++i) {
            const double da = p.values[static_cast<std::size_t>(i)] - p.values[static_cast<std::size_t>(i - 1)];
            const double db = p.values[static_cast<std::size_t>(i + 1)] - p.values[static_cast<std::size_t>(i)];
            lag0.push_back(da);
            lag1.push_back(db);
            sq.push_back(da * da);
        }
    }
    CHECK(std::abs(testutil::correlation(lag0, lag1)) < 0.01);
    CHECK(std::abs(mean(sq) - 1.0 / 64.0) < 3.0 * std_error_of_mean(sq));
}

TEST_CASE("covariance golden: E[Z(0.25) Z(0.75)] at h = 0.7") {
    const TimeGrid grid(0.0, 1.0, 4);
    const FbmCholeskySampler sampler(grid, 0.7);
    std::vector<double> xs;
    xs.reserve(20000);
    for (int s = 0; s < 20000; ++s) {
        const auto p = sampler.sample(kSeed, static_cast<std::uint64_t>(s));
        xs.push_back(p.values[1] * p.values[3]);
    }
    CHECK(std::abs(mean(xs) - 0.216567037242140557) < 3.0 * std_error_of_mean(xs));
}

TEST_CASE("h = 0.7 increments are positively correlated") {
    const TimeGrid grid(0.0, 1.0, 64);
    const FbmCholeskySampler sampler(grid, 0.7);
    std::vector<double> a, b;
    for (int s = 0; s < 2000; ++s) {
        const auto p = sampler.sample(kSeed, static_cast<std::uint64_t>(s));
        for (int i = 1; i <= 63; ++i) {
            a.push_back(p.values[static_cast<std::size_t>(i)] - p.values[static_cast<std::size_t>(i - 1)]);
            b.push_back(p.values[static_cast<std::size_t>(i + 1)] - p.values[static_cast<std::size_t>(i)]);
        }
    }
    // theory: 2^{2H-1} - 1 = 0.32 at H = 0.7
    CHECK(testutil::correlation(a, b) > 0.1);
}

TEST_CASE("empirical covariance matrix matches the closed form on an 8-point grid") {
    const int n = 8;
    const TimeGrid grid(0.0, 1.0, n);
    const double h = 0.65;
    const FbmCholeskySampler sampler(grid, h);
    const int n_paths = 100000;
    std::vector<double> sum(static_cast<std::size_t>(n * n), 0.0);
    std::vector<double> sumsq(static_cast<std::size_t>(n * n), 0.0);
    for (int s = 0; s < n_paths; ++s) {
        const auto p = sampler.sample(kSeed, static_cast<std::uint64_t>(s));
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) {
                const double prod =
                    p.values[static_cast<std::size_t>(i)] * p.values[static_cast<std::size_t>(j)];
                sum[static_cast<std::size_t>((i - 1) * n + (j - 1))] += prod;
                sumsq[static_cast<std::size_t>((i - 1) * n + (j - 1))] += prod * prod;
            }
    }
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const std::size_t k = static_cast<std::size_t>((i - 1) * n + (j - 1));
            const double m = sum[k] / n_paths;
            const double var = sumsq[k] / n_paths - m * m;
            const double se = std::sqrt(var / n_paths);
            const double target = fbm_covariance(grid.time_at(i), grid.time_at(j), h);
            CHECK(std::abs(m - target) < 3.0 * se);
        }
    }
}

TEST_CASE("exact-method step cap") {
    CHECK_THROWS_AS(simulate_fbm_path(TimeGrid(0.0, 1.0, 8192), 0.7, kSeed), domain_error);
    CHECK_THROWS_AS(FbmCholeskySampler(TimeGrid(0.0, 1.0, 100), 0.7, 50), domain_error);
}

TEST_CASE("Davies-Harte preconditions") {
    CHECK_THROWS_AS(FbmDaviesHarteSampler(TimeGrid(0.0, 1.0, 100), 0.7), domain_error);
    CHECK_THROWS_AS(FbmDaviesHarteSampler(TimeGrid(0.5, 1.0, 64), 0.7), domain_error);
    CHECK_THROWS_AS(FbmDaviesHarteSampler(TimeGrid(0.0, 1.0, 64), 1.3), domain_error);
}

TEST_CASE("Davies-Harte matches the fBm law") {
    const TimeGrid grid(0.0, 1.0, 256);
    const FbmDaviesHarteSampler sampler(grid, 0.7);
    std::vector<double> var1, cov_half;
    for (int s = 0; s < 4000; ++s) {
        const auto p = sampler.sample(kSeed, static_cast<std::uint64_t>(s));
        var1.push_back(p.back() * p.back());
        cov_half.push_back(p.values[128] * p.back());
    }
    CHECK(std::abs(mean(var1) - 1.0) < 3.0 * std_error_of_mean(var1));
    // E[Z(1/2) Z(1)] = (0.5^{2H} + 1 - 0.5^{2H}) / 2 = 1/2 for every H
    CHECK(std::abs(mean(cov_half) - 0.5) < 3.0 * std_error_of_mean(cov_half));
}

TEST_CASE("Davies-Harte handles anti-persistent H") {
    const TimeGrid grid(0.0, 1.0, 256);
    const FbmDaviesHarteSampler sampler(grid, 0.2);
    std::vector<double> var1, a, b;
    for (int s = 0; s < 4000; ++s) {
        const auto p = sampler.sample(kSeed, static_cast<std::uint64_t>(s));
        var1.push_back(p.back() * p.back());
        a.push_back(p.values[64] - p.values[0]);
        b.push_back(p.values[128] - p.values[64]);
    }
    CHECK(std::abs(mean(var1) - 1.0) < 3.0 * std_error_of_mean(var1));
    // H < 1/2: increments negatively correlated (2^{2H-1} - 1 = -0.24)
    CHECK(testutil::correlation(a, b) < -0.1);
}

TEST_CASE("Davies-Harte and Cholesky sample the same law") {
    const TimeGrid grid(0.0, 1.0, 64);
    const FbmDaviesHarteSampler dh(grid, 0.8);
    const FbmCholeskySampler ch(grid, 0.8);
    std::vector<double> a, b;
    for (int s = 0; s < 4000; ++s) {
        a.push_back(dh.sample(kSeed, static_cast<std::uint64_t>(s)).back());
        b.push_back(ch.sample(kSeed + 1, static_cast<std::uint64_t>(s)).back());
    }
    const double va = testutil::variance(a), vb = testutil::variance(b);
    CHECK(std::abs(va - 1.0) < 0.07); // 3 * sqrt(2/4000) ~ 0.067
    CHECK(std::abs(vb - 1.0) < 0.07);
    CHECK(std::abs(mean(a)) < 3.0 * std_error_of_mean(a));
    CHECK(std::abs(mean(b)) < 3.0 * std_error_of_mean(b));
}

} // TEST_SUITE
