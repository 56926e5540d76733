#pragma once

// Continuous-time lattice of band-transfer cells. Each cell's output relaxes
// with a first-order lag toward a delayed copy of its band response:
//
//     dy/dt = (target(t) - y) / tau
//
// f is band membership of v_in, which aggregates the eight neighbor outputs
// plus w_self times the cell's own. Two delay elements are available:
//
//   Latched    target(t) = f(v_in(n delay_d)) for t in [n delay_d, (n+1) delay_d),
//              the initial grid during the first window. The response is read
//              once per window, after the outputs have settled.
//   Transport  target(t) = f(v_in(t - delay_d)), a pure time shift.
//
// With delay_d >= 10 tau every output settles well inside one window, and the
// latched lattice sampled once per window reproduces the synchronous
// automaton. The transport line also replays the short band crossings that
// occur while neighbor outputs are still moving (a dead cell whose outer sum
// goes from 2 to 4 passes through 3 on the way); those pulses arrive one delay
// later and, on most random grids, eventually reach the sampling instant.

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ca.hpp"
#include "synth.hpp"
#include "transfer.hpp"

namespace mfca {

enum class DelayElement { Latched, Transport };

inline std::string to_string(DelayElement e)
{
    return e == DelayElement::Latched ? "latched" : "transport";
}

inline DelayElement parse_delay_element(std::string_view s)
{
    if (s == "latched")
        return DelayElement::Latched;
    if (s == "transport")
        return DelayElement::Transport;
    throw std::invalid_argument("unknown delay element '" + std::string(s) +
                                "' (expected latched or transport)");
}

struct CellDynamics {
    double delay_d = 1e-3;
    double tau = 1e-4;
    double dt = 5e-6;
    DelayElement element = DelayElement::Latched;

    /// 1 ms delay of the electronic cell, tau = delay/10.
    static CellDynamics circuit_1ms() { return {1e-3, 1e-4, 5e-6, DelayElement::Latched}; }
    /// tau = 80 s puts 95% settling (3 tau) at 240 s; delay 10 tau.
    static CellDynamics mfc_4min() { return {800.0, 80.0, 4.0, DelayElement::Latched}; }

    std::size_t delay_steps() const { return static_cast<std::size_t>(std::llround(delay_d / dt)); }

    void validate() const
    {
        if (!std::isfinite(delay_d) || !std::isfinite(tau) || !std::isfinite(dt) || !(dt > 0.0) ||
            !(tau > 0.0))
            throw std::invalid_argument("CellDynamics: dt and tau must be positive and finite");
        // Relative slack absorbs the rounding of values such as tau / 20.
        constexpr double slack = 1e-9;
        if (dt > tau / 20.0 * (1.0 + slack))
            throw std::invalid_argument("CellDynamics: requires dt <= tau/20");
        if (delay_d < 10.0 * tau * (1.0 - slack))
            throw std::invalid_argument("CellDynamics: requires delay_d >= 10 tau");
        const double steps = delay_d / dt;
        if (std::abs(steps - std::round(steps)) > slack * steps || std::round(steps) < 1.0)
            throw std::invalid_argument("CellDynamics: delay_d must be an integer multiple of dt");
    }
};

struct LatticeConfig {
    int width = 3;
    int height = 3;
    Boundary boundary = Boundary::FixedDead;
    OuterTotalisticRule rule = OuterTotalisticRule::game_of_life();
    BandPlan plan;
    AffineCalibration calibration;
    std::vector<BandParams> band_params;
    CellDynamics dynamics;
    double p_low = 0.0;
    double p_high = 1.0;

    void validate() const
    {
        if (width <= 0 || height <= 0)
            throw std::invalid_argument("LatticeConfig: dimensions must be positive");
        dynamics.validate();
        if (!(calibration.gain_a > 0.0))
            throw std::invalid_argument("LatticeConfig: calibration gain must be positive");
        const auto report = verify(plan, rule);
        if (!report.ok)
            throw std::invalid_argument("LatticeConfig: plan does not realize rule " +
                                        to_string(rule));
        if (band_params.size() != plan.bands.size())
            throw std::invalid_argument("LatticeConfig: one BandParams per plan band required");
        if (!(p_low < p_high))
            throw std::invalid_argument("LatticeConfig: p_low must be below p_high");
        for (const auto& b : band_params) {
            b.validate();
            if (b.p_low != p_low || b.p_high != p_high)
                throw std::invalid_argument("LatticeConfig: bands must share output levels");
        }
    }
};

/// Builds a config whose first band sits on [v_low, v_high] volts.
inline LatticeConfig make_lattice_config(int width, int height, Boundary boundary,
                                         const OuterTotalisticRule& rule,
                                         const CellDynamics& dynamics, double v_low = 2.0,
                                         double v_high = 7.0, double p_low = 0.0,
                                         double p_high = 1.0)
{
    auto plan = synthesize(rule);
    if (!plan)
        throw std::invalid_argument("rule " + to_string(rule) + " has no band realization");
    LatticeConfig cfg;
    cfg.width = width;
    cfg.height = height;
    cfg.boundary = boundary;
    cfg.rule = rule;
    cfg.plan = *plan;
    cfg.p_low = p_low;
    cfg.p_high = p_high;
    if (!cfg.plan.bands.empty()) {
        auto volts = plan_to_volts(cfg.plan, v_low, v_high, p_low, p_high);
        cfg.calibration = volts.calibration;
        cfg.band_params = std::move(volts.bands);
    }
    cfg.dynamics = dynamics;
    cfg.validate();
    return cfg;
}

/// Uniformly sampled per-cell outputs; row k holds all cells at time k*dt.
class Trace {
public:
    Trace(int width, int height, double dt) : width_(width), height_(height), dt_(dt) {}

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    double dt() const noexcept { return dt_; }
    std::size_t cells() const noexcept { return static_cast<std::size_t>(width_) * height_; }
    std::size_t samples() const noexcept { return times_.size(); }
    const std::vector<double>& times() const noexcept { return times_; }

    double at(std::size_t k, int row, int col) const
    {
        return values_.at(k * cells() + static_cast<std::size_t>(row) * width_ +
                          static_cast<std::size_t>(col));
    }

    const double* row(std::size_t k) const { return values_.data() + k * cells(); }

    void push(double time, const std::vector<double>& outputs)
    {
        if (outputs.size() != cells())
            throw std::invalid_argument("Trace: output row size mismatch");
        times_.push_back(time);
        values_.insert(values_.end(), outputs.begin(), outputs.end());
    }

private:
    int width_;
    int height_;
    double dt_;
    std::vector<double> times_;
    std::vector<double> values_;
};

/// Union-of-bands response at input bias v.
inline double band_response(double v_in, const LatticeConfig& config)
{
    for (const auto& b : config.band_params)
        if (band_transfer(v_in, b) == b.p_high)
            return b.p_high;
    return config.p_low;
}

namespace detail {

inline int wrap(int i, int n) { return (i % n + n) % n; }

/// Band responses of every cell given the current outputs.
inline void lattice_responses(const LatticeConfig& cfg, const std::vector<double>& y,
                              std::vector<double>& out)
{
    const int h = cfg.height;
    const int w = cfg.width;
    const double lo = cfg.p_low;
    const double span = cfg.p_high - lo;
    const bool torus = cfg.boundary == Boundary::Toroidal;
    auto norm = [&](int r, int c) {
        return (y[static_cast<std::size_t>(r) * w + static_cast<std::size_t>(c)] - lo) / span;
    };
    std::array<double, 8> neighbors{};
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            std::size_t n = 0;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0)
                        continue;
                    int rr = r + dr;
                    int cc = c + dc;
                    if (torus)
                        neighbors[n++] = norm(wrap(rr, h), wrap(cc, w));
                    else
                        neighbors[n++] = (rr < 0 || rr >= h || cc < 0 || cc >= w) ? 0.0 : norm(rr, cc);
                }
            }
            const double v_in =
                aggregate_input(neighbors, norm(r, c), cfg.plan.w_self, cfg.calibration);
            out[static_cast<std::size_t>(r) * w + static_cast<std::size_t>(c)] =
                band_response(v_in, cfg);
        }
    }
}

} // namespace detail

/// Explicit fixed-step integration from t = 0 to t_end. The delayed response
/// history on [-delay_d, 0) holds the initial grid's levels.
inline Trace simulate(const LatticeConfig& config, const Grid& initial, double t_end)
{
    config.validate();
    if (!(t_end > 0.0) || !std::isfinite(t_end))
        throw std::invalid_argument("simulate: t_end must be positive");
    if (initial.width() != config.width || initial.height() != config.height)
        throw std::invalid_argument("simulate: initial grid does not match lattice dimensions");

    const auto& dyn = config.dynamics;
    const std::size_t n_cells = initial.size();
    const std::size_t delay = dyn.delay_steps();
    const auto total_steps = static_cast<std::size_t>(std::llround(t_end / dyn.dt));
    const double alpha = dyn.dt / dyn.tau;
    const double lo = config.p_low;
    const double hi = config.p_high;

    std::vector<double> y(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i)
        y[i] = initial.cells()[i] ? hi : lo;

    Trace trace(config.width, config.height, dyn.dt);
    std::vector<double> response(n_cells);
    trace.push(0.0, y);

    if (dyn.element == DelayElement::Latched) {
        std::vector<double> held = y;
        for (std::size_t k = 0; k < total_steps; ++k) {
            if (k > 0 && k % delay == 0)
                detail::lattice_responses(config, y, held);
            for (std::size_t i = 0; i < n_cells; ++i)
                y[i] += alpha * (held[i] - y[i]);
            trace.push(static_cast<double>(k + 1) * dyn.dt, y);
        }
        return trace;
    }

    // history[slot * n_cells + i]: response computed delay steps ago.
    std::vector<double> history(delay * n_cells);
    for (std::size_t s = 0; s < delay; ++s)
        for (std::size_t i = 0; i < n_cells; ++i)
            history[s * n_cells + i] = y[i];

    for (std::size_t k = 0; k < total_steps; ++k) {
        const std::size_t slot = k % delay;
        double* delayed = history.data() + slot * n_cells;
        detail::lattice_responses(config, y, response);
        for (std::size_t i = 0; i < n_cells; ++i) {
            const double target = delayed[i];
            delayed[i] = response[i];
            y[i] += alpha * (target - y[i]);
        }
        trace.push(static_cast<double>(k + 1) * dyn.dt, y);
    }
    return trace;
}

/// Sample index of the instant 0.9 delay windows into window n.
inline std::size_t sample_index(const LatticeConfig& config, std::size_t n)
{
    const double t = (static_cast<double>(n) + 0.9) * config.dynamics.delay_d;
    return static_cast<std::size_t>(std::llround(t / config.dynamics.dt));
}

/// Grids 0..n_steps obtained by thresholding outputs at mid-level at
/// t = (n + 0.9) delay_d.
inline std::vector<Grid> sample(const Trace& trace, const LatticeConfig& config, std::size_t n_steps)
{
    if (trace.width() != config.width || trace.height() != config.height)
        throw std::invalid_argument("sample: trace does not match lattice dimensions");
    if (sample_index(config, n_steps) >= trace.samples())
        throw std::out_of_range("sample: trace too short for " + std::to_string(n_steps) + " steps");
    const double mid = (config.p_low + config.p_high) / 2.0;
    std::vector<Grid> grids;
    grids.reserve(n_steps + 1);
    for (std::size_t n = 0; n <= n_steps; ++n) {
        const std::size_t k = sample_index(config, n);
        Grid g(config.width, config.height, config.boundary);
        for (int r = 0; r < config.height; ++r)
            for (int c = 0; c < config.width; ++c)
                g.set(r, c, trace.at(k, r, c) > mid ? 1 : 0);
        grids.push_back(std::move(g));
    }
    return grids;
}

/// Simulated time needed to sample n_steps windows.
inline double horizon_for_steps(const LatticeConfig& config, std::size_t n_steps)
{
    return static_cast<double>(n_steps + 1) * config.dynamics.delay_d;
}

struct Cell {
    int row;
    int col;
    friend bool operator==(const Cell&, const Cell&) = default;
};

struct Divergence {
    std::size_t step;
    std::vector<Cell> cells;
};

struct EquivalenceReport {
    bool equal = true;
    std::optional<Divergence> first_divergence;
};

inline EquivalenceReport equivalence_report(const std::vector<Grid>& sampled,
                                            const std::vector<Grid>& oracle)
{
    if (sampled.size() != oracle.size())
        throw std::invalid_argument("equivalence_report: sequences differ in length");
    EquivalenceReport report;
    for (std::size_t s = 0; s < sampled.size(); ++s) {
        const auto& a = sampled[s];
        const auto& b = oracle[s];
        if (a.width() != b.width() || a.height() != b.height())
            throw std::invalid_argument("equivalence_report: grid shapes differ at step " +
                                        std::to_string(s));
        if (a == b)
            continue;
        Divergence d{s, {}};
        for (int r = 0; r < a.height(); ++r)
            for (int c = 0; c < a.width(); ++c)
                if (a.at(r, c) != b.at(r, c))
                    d.cells.push_back({r, c});
        report.equal = false;
        report.first_divergence = std::move(d);
        return report;
    }
    return report;
}

/// Largest |y - level(oracle)| over all cells and sampling instants, as a
/// fraction of the output swing.
inline double max_sampling_deviation(const Trace& trace, const LatticeConfig& config,
                                     const std::vector<Grid>& oracle)
{
    const double lo = config.p_low;
    const double span = config.p_high - lo;
    double worst = 0.0;
    for (std::size_t n = 0; n < oracle.size(); ++n) {
        const std::size_t k = sample_index(config, n);
        if (k >= trace.samples())
            throw std::out_of_range("max_sampling_deviation: trace too short");
        for (int r = 0; r < config.height; ++r)
            for (int c = 0; c < config.width; ++c) {
                const double target = oracle[n].at(r, c) ? 1.0 : 0.0;
                worst = std::max(worst, std::abs((trace.at(k, r, c) - lo) / span - target));
            }
    }
    return worst;
}

} // namespace mfca
