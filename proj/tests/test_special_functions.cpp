#include <doctest.h>

#include <cmath>

#include "doq/rng.hpp"
#include "doq/special_functions.hpp"

using doq::gamma_fn;
using doq::norm_cdf;

TEST_SUITE("special_functions") {

TEST_CASE("gamma at integer and half-integer points") {
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gamma_fn(4.0) == doctest::Approx(6.0).epsilon(1e-13));
    CHECK(gamma_fn(0.5) == doctest::Approx(1.7724538509055160273).epsilon(1e-13));
}

TEST_CASE("gamma matches high-precision reference values on (0, 10]") {
    // references computed with 40-digit arithmetic
    const struct { double x, g; } ref[] = {
        {0.1, 9.51350769866873184},
        {0.51, 1.73841506846386401},
        {1.49, 0.885945131572707447},
        {2.5, 1.32934038817913702},
        {4.9, 20.6673859618578483},
        {7.3, 1271.42363366390927},
        {9.99, 354802.017019830927},
    };
    for (const auto& r : ref)
        CHECK(gamma_fn(r.x) == doctest::Approx(r.g).epsilon(1e-12));
}

TEST_CASE("gamma recurrence x*Gamma(x) = Gamma(x+1)") {
    doq::GaussianStream rng(7, 0);
    for (int i = 0; i < 200; ++i) {
        const double x = 0.05 + 8.9 * rng.uniform();
        CHECK(x * gamma_fn(x) == doctest::Approx(gamma_fn(x + 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("gamma duplication formula") {
    // Gamma(2x) = 2^{2x-1} Gamma(x) Gamma(x+1/2) / sqrt(pi)
    doq::GaussianStream rng(11, 0);
    for (int i = 0; i < 200; ++i) {
        const double x = 0.05 + 4.9 * rng.uniform();
        const double lhs = gamma_fn(2.0 * x);
        const double rhs = std::pow(2.0, 2.0 * x - 1.0) * gamma_fn(x) * gamma_fn(x + 0.5) /
                           std::sqrt(doq::pi);
        CHECK(lhs == doctest::Approx(rhs).epsilon(5e-12));
    }
}

TEST_CASE("gamma rejects non-positive arguments") {
    CHECK_THROWS_AS(gamma_fn(0.0), doq::domain_error);
    CHECK_THROWS_AS(gamma_fn(-1.5), doq::domain_error);
}

TEST_CASE("normal cdf") {
    CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(norm_cdf(1.0) == doctest::Approx(0.8413447460685429486).epsilon(1e-13));
    CHECK(norm_cdf(-1.0) == doctest::Approx(1.0 - 0.8413447460685429486).epsilon(1e-12));
    CHECK(norm_cdf(1.959963984540054235) == doctest::Approx(0.975).epsilon(1e-13));
    for (double x : {-3.7, -1.1, 0.3, 2.9})
        CHECK(norm_cdf(x) + norm_cdf(-x) == doctest::Approx(1.0).epsilon(1e-14));
}

} // TEST_SUITE
