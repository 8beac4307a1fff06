#pragma once

#include <cmath>
#include <cstdint>

#include "doq/special_functions.hpp"

namespace doq {

namespace detail {

inline constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Counter-based Gaussian stream keyed by (seed, stream). Two streams with
/// the same seed are statistically independent, and a given key always
/// produces the same sequence regardless of how many other streams are drawn
/// from concurrently. Normals come from Box-Muller over splitmix64 uniforms,
/// so the output is identical across platforms and thread schedules.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(detail::mix64(detail::mix64(seed ^ 0x5851f42d4c957f2dULL) +
                               detail::golden_gamma * (stream + 1))) {}

    std::uint64_t next_u64() {
        state_ += detail::golden_gamma;
        return detail::mix64(state_);
    }

    /// Uniform draw in (0, 1].
    double uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal draw.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace doq
