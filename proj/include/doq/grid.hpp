#pragma once

#include <string>
#include <vector>

#include "doq/errors.hpp"

namespace doq {

/// Uniform partition of [t0, t_end] into n_steps intervals (model time, years).
struct TimeGrid {
    double t0;
    double t_end;
    int n_steps;

    TimeGrid(double start, double end, int steps) : t0(start), t_end(end), n_steps(steps) {
        if (!(t0 >= 0.0))
            throw domain_error("TimeGrid: t0 must be >= 0");
        if (!(t_end > t0))
            throw domain_error("TimeGrid: t_end must exceed t0");
        if (steps < 1)
            throw domain_error("TimeGrid: n_steps must be >= 1");
    }

    double dt() const { return (t_end - t0) / n_steps; }
    int n_points() const { return n_steps + 1; }
    double time_at(int i) const { return i == n_steps ? t_end : t0 + i * dt(); }

    bool operator==(const TimeGrid&) const = default;
};

enum class ProcessKind {
    Martingale,      // M
    DobricOjeda,     // V
    ModifiedDO,      // V^eps
    FractionalBM,    // Z_H
    BrownianMotion,  // W
    Stock,           // S
};

inline const char* to_string(ProcessKind k) {
    switch (k) {
        case ProcessKind::Martingale: return "M";
        case ProcessKind::DobricOjeda: return "V";
        case ProcessKind::ModifiedDO: return "V_eps";
        case ProcessKind::FractionalBM: return "fBm";
        case ProcessKind::BrownianMotion: return "BM";
        case ProcessKind::Stock: return "stock";
    }
    return "?";
}

/// A real-valued path sampled on a TimeGrid; values[0] is the start value
/// (0 for every driftless process, s0 for stock paths).
struct SamplePath {
    TimeGrid grid;
    std::vector<double> values; // length grid.n_points()
    ProcessKind kind;

    double front() const { return values.front(); }
    double back() const { return values.back(); }
};

} // namespace doq
