#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "doq/csv.hpp"
#include "doq/errors.hpp"
#include "doq/grid.hpp"
#include "doq/hurst_constants.hpp"
#include "doq/parallel.hpp"
#include "doq/path_sim.hpp"

namespace doq {

/// Sum of squared increments along the path's own grid.
inline double sample_qv(const SamplePath& path) {
    if (path.values.size() < 2)
        throw domain_error("sample_qv: path needs at least 2 points");
    double qv = 0.0;
    for (std::size_t i = 1; i < path.values.size(); ++i) {
        const double d = path.values[i] - path.values[i - 1];
        qv += d * d;
    }
    return qv;
}

/// Closed-form quadratic variation of V over [t0, t_end]:
/// C^2 (t_end^{2H} - t0^{2H}) / (2H). Same for V^eps (drift does not
/// contribute).
inline double theoretical_qv_do(double h, double t0, double t_end) {
    if (!(t0 >= 0.0 && t_end > t0))
        throw domain_error("theoretical_qv_do: need 0 <= t0 < t_end");
    const HurstConstants hc = derive_constants(h);
    const double th = 2.0 * h;
    return hc.big_c * hc.big_c * (std::pow(t_end, th) - std::pow(t0, th)) / th;
}

struct QVReport {
    std::vector<long long> n_values;    ///< the n in m = floor(n^{1+delta})
    std::vector<double> qv_estimates;   ///< seed-mean sample QV per n
    std::vector<double> l2_errors;      ///< sqrt(mean over seeds of (QV - target)^2)
    double target = 0.0;                ///< closed-form QV of the window
    double sampling_exponent = 0.0;     ///< 1 + delta
    double loglog_slope = 0.0;          ///< fitted slope of ln(l2_error) vs ln(n)

    void write_csv(std::ostream& os) const {
        os << "n,qv_mean,qv_target,l2_error\n";
        for (std::size_t i = 0; i < n_values.size(); ++i)
            os << n_values[i] << ',' << fmt17(qv_estimates[i]) << ',' << fmt17(target) << ','
               << fmt17(l2_errors[i]) << '\n';
    }

    void write_csv(const std::string& file) const {
        std::ofstream os(file);
        if (!os)
            throw domain_error("cannot open for writing: " + file);
        write_csv(os);
    }
};

/// Convergence harness for the windowed QV of V: for each n simulates DO
/// paths on [0, t_end] with m = floor(n^{1+delta}) steps and sums squared
/// increments over (t0, t_end]. The window start index is ceil(t0 m / t_end)
/// when it is not an integer.
inline QVReport qv_convergence_harness(double h, double t0, double t_end,
                                       const std::vector<long long>& n_list, double delta,
                                       int n_seeds, std::uint64_t seed = 42,
                                       long long max_steps = 1LL << 20) {
    if (!(delta > 0.0))
        throw domain_error("qv_convergence_harness: delta must be > 0");
    if (n_list.empty())
        throw domain_error("qv_convergence_harness: empty n list");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1])
            throw domain_error("qv_convergence_harness: n list must be increasing");
    if (n_seeds < 1)
        throw domain_error("qv_convergence_harness: n_seeds must be >= 1");

    QVReport report;
    report.sampling_exponent = 1.0 + delta;
    report.target = theoretical_qv_do(h, t0, t_end);

    for (long long n : n_list) {
        const auto m = static_cast<long long>(std::floor(std::pow(static_cast<double>(n), 1.0 + delta)));
        if (m < 1)
            throw domain_error("qv_convergence_harness: n too small");
        if (m > max_steps)
            throw domain_error("qv_convergence_harness: floor(n^{1+delta}) = " + std::to_string(m) +
                               " exceeds the step cap " + std::to_string(max_steps));
        const TimeGrid grid(0.0, t_end, static_cast<int>(m));
        const auto i0 = static_cast<long long>(std::ceil(t0 * static_cast<double>(m) / t_end));

        std::vector<double> qvs(static_cast<std::size_t>(n_seeds));
        parallel_for(static_cast<std::size_t>(n_seeds), [&](std::size_t s) {
            const SamplePath path = simulate_do_path(grid, h, seed, MScheme::Exact, s);
            double qv = 0.0;
            for (long long i = i0 + 1; i <= m; ++i) {
                const double d = path.values[static_cast<std::size_t>(i)] -
                                 path.values[static_cast<std::size_t>(i - 1)];
                qv += d * d;
            }
            qvs[s] = qv;
        });

        double mean = 0.0, mse = 0.0;
        for (double qv : qvs) {
            mean += qv;
            const double e = qv - report.target;
            mse += e * e;
        }
        mean /= n_seeds;
        mse /= n_seeds;
        report.n_values.push_back(n);
        report.qv_estimates.push_back(mean);
        report.l2_errors.push_back(std::sqrt(mse));
    }

    // least-squares slope of ln(error) against ln(n)
    if (report.n_values.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (std::size_t i = 0; i < report.n_values.size(); ++i) {
            if (report.l2_errors[i] <= 0.0)
                continue;
            const double x = std::log(static_cast<double>(report.n_values[i]));
            const double y = std::log(report.l2_errors[i]);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++cnt;
        }
        if (cnt >= 2)
            report.loglog_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    }
    return report;
}

} // namespace doq
