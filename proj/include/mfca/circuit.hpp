#pragma once

// Behavioral model of the three-transistor equivalent cell: a lower-threshold
// stage and an upper-threshold stage whose collectors are tied together, which
// makes the output the AND of "above v_low" and "below v_high".

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ca.hpp"
#include "lattice.hpp"
#include "transfer.hpp"

namespace mfca {

struct CircuitCellParams {
    double v_low = 2.0;
    double v_high = 7.0;
    double v_out_high = 1.0;
    double v_out_low = 0.0;
    double delay_d = 1e-3;

    void validate() const
    {
        for (double v : {v_low, v_high, v_out_high, v_out_low, delay_d})
            detail::require_finite(v, "CircuitCellParams field");
        if (!(v_low < v_high))
            throw std::invalid_argument("CircuitCellParams: v_low must be below v_high");
        if (!(v_out_low < v_out_high))
            throw std::invalid_argument("CircuitCellParams: v_out_low must be below v_out_high");
        if (!(delay_d > 0.0))
            throw std::invalid_argument("CircuitCellParams: delay_d must be positive");
    }

    BandParams as_band() const { return {v_low, v_high, v_out_low, v_out_high}; }
};

inline double window_comparator(double v_in, const CircuitCellParams& p)
{
    detail::require_finite(v_in, "window_comparator input");
    const bool above_low = v_in > p.v_low;   // Q1-Q2 stage
    const bool below_high = v_in < p.v_high; // Q3 stage
    return (above_low && below_high) ? p.v_out_high : p.v_out_low;
}

struct SweepTrace {
    std::vector<double> times;
    std::vector<double> inputs;
    std::vector<double> outputs;
};

/// Drives the comparator with offset + amplitude * sin(2 pi freq t) on
/// t = 0, dt, ..., t_end.
inline SweepTrace sinusoid_sweep(double amplitude, double offset, double freq, double t_end,
                                 double dt, const CircuitCellParams& p)
{
    p.validate();
    for (double v : {amplitude, offset, freq, t_end, dt})
        detail::require_finite(v, "sinusoid_sweep argument");
    if (!(amplitude > 0.0) || !(dt > 0.0) || !(t_end > 0.0) || !(freq > 0.0))
        throw std::invalid_argument("sinusoid_sweep: amplitude, freq, dt and t_end must be positive");
    const double steps = t_end / dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * steps)
        throw std::invalid_argument("sinusoid_sweep: dt must divide t_end");
    const auto n = static_cast<std::size_t>(std::llround(steps));

    SweepTrace trace;
    trace.times.reserve(n + 1);
    trace.inputs.reserve(n + 1);
    trace.outputs.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double v = offset + amplitude * std::sin(2.0 * std::numbers::pi * freq * t);
        trace.times.push_back(t);
        trace.inputs.push_back(v);
        trace.outputs.push_back(window_comparator(v, p));
    }
    return trace;
}

/// Row-major circuit label X1..X9 of a 3x3 grid position.
inline int circuit_label(int row, int col) { return row * 3 + col + 1; }

struct BlinkerReport {
    std::vector<Grid> sampled;
    std::vector<Grid> oracle;
    std::vector<double> sample_times;
    bool center_constant = false;  // X5 high at every sample
    bool antiphase_x2_x4 = false;  // X2 and X4 alternate, never both high
    bool matches_oracle = false;
    std::optional<Periodicity> period;

    bool ok() const
    {
        return center_constant && antiphase_x2_x4 && matches_oracle && period &&
               period->period == 2;
    }
};

struct BlinkerDemo {
    LatticeConfig config;
    Trace trace;
    BlinkerReport report;
};

/// 3x3 lattice of circuit cells with the game-of-life plan on the comparator
/// window, initialized with X4, X5, X6 high and sampled once per delay.
inline BlinkerDemo blinker_demo(const CircuitCellParams& p, std::size_t n_samples = 10)
{
    p.validate();
    if (n_samples < 2)
        throw std::invalid_argument("blinker_demo: need at least two samples");
    const CellDynamics dyn{p.delay_d, p.delay_d / 10.0, p.delay_d / 200.0};
    auto cfg = make_lattice_config(3, 3, Boundary::FixedDead, OuterTotalisticRule::game_of_life(), dyn,
                                   p.v_low, p.v_high, p.v_out_low, p.v_out_high);

    Grid initial(3, 3, Boundary::FixedDead);
    for (int c = 0; c < 3; ++c)
        initial.set(1, c, 1);

    const std::size_t steps = n_samples - 1;
    Trace trace = simulate(cfg, initial, horizon_for_steps(cfg, steps));

    BlinkerReport rep;
    rep.sampled = sample(trace, cfg, steps);
    rep.oracle = run(initial, cfg.rule, steps);
    for (std::size_t n = 0; n <= steps; ++n)
        rep.sample_times.push_back(trace.times()[sample_index(cfg, n)]);

    rep.center_constant = true;
    rep.antiphase_x2_x4 = true;
    for (std::size_t n = 0; n < rep.sampled.size(); ++n) {
        const auto& g = rep.sampled[n];
        const bool x2 = g.at(0, 1) == 1;
        const bool x4 = g.at(1, 0) == 1;
        rep.center_constant = rep.center_constant && g.at(1, 1) == 1;
        rep.antiphase_x2_x4 = rep.antiphase_x2_x4 && x2 != x4;
        if (n > 0) {
            const auto& prev = rep.sampled[n - 1];
            rep.antiphase_x2_x4 = rep.antiphase_x2_x4 && (prev.at(1, 0) == 1) != x4;
        }
    }
    rep.matches_oracle = equivalence_report(rep.sampled, rep.oracle).equal;
    rep.period = detect_period(rep.sampled);
    return {std::move(cfg), std::move(trace), std::move(rep)};
}

} // namespace mfca
