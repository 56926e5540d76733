#pragma once

// Single-cell transfer models: the three-region window map from input bias to
// output power, the two-MFC cascade that realizes it, and the affine map from
// neighbor counts to input volts.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

namespace mfca {

namespace detail {

inline void require_finite(double v, const char* what)
{
    if (!std::isfinite(v))
        throw std::invalid_argument(std::string(what) + " must be finite");
}

} // namespace detail

/// Window thresholds and output levels of one cell.
struct BandParams {
    double v_thr_low = 0.0;
    double v_thr_high = 1.0;
    double p_low = 0.0;
    double p_high = 1.0;

    void validate() const
    {
        detail::require_finite(v_thr_low, "v_thr_low");
        detail::require_finite(v_thr_high, "v_thr_high");
        detail::require_finite(p_low, "p_low");
        detail::require_finite(p_high, "p_high");
        if (!(v_thr_low < v_thr_high))
            throw std::invalid_argument("BandParams: v_thr_low must be below v_thr_high");
        if (!(p_low < p_high))
            throw std::invalid_argument("BandParams: p_low must be below p_high");
    }

    friend bool operator==(const BandParams&, const BandParams&) = default;
};

/// p_high strictly inside (v_thr_low, v_thr_high), p_low elsewhere including
/// both thresholds.
inline double band_transfer(double v_in, const BandParams& p)
{
    detail::require_finite(v_in, "band_transfer input");
    return (p.v_thr_low < v_in && v_in < p.v_thr_high) ? p.p_high : p.p_low;
}

/// Physical parameters of a primary/secondary MFC duet. The secondary sits
/// upstream on the fuel line and feeds the primary with its effluent; both
/// third electrodes hang off the cell input through r1 (secondary) and r2
/// (primary).
struct DuetParams {
    double r1 = 2000.0;
    double r2 = 1000.0;
    double v_act = 0.5;
    double s_in = 1.0;
    double s_min = 0.1;
    double tau = 80.0;

    void validate() const
    {
        for (double v : {r1, r2, v_act, s_in, s_min, tau})
            detail::require_finite(v, "DuetParams field");
        if (!(r2 > 0.0) || !(r1 > r2))
            throw std::invalid_argument("DuetParams: requires r1 > r2 > 0");
        if (!(s_min > 0.0))
            throw std::invalid_argument("DuetParams: s_min must be positive");
        if (s_in < 0.0)
            throw std::invalid_argument("DuetParams: s_in must be non-negative");
        if (!(tau > 0.0))
            throw std::invalid_argument("DuetParams: tau must be positive");
    }
};

struct DuetOutput {
    double power;
    double s_effluent;
};

/// Region logic of the cascade. A high input activates the secondary, which
/// consumes the limited substrate entirely and starves the primary. An
/// intermediate input biases only the primary, which produces power if its
/// influent carries at least s_min. A low input activates neither.
inline DuetOutput duet_output(double v_in, const DuetParams& d, const BandParams& band)
{
    d.validate();
    band.validate();
    detail::require_finite(v_in, "duet_output input");
    const bool secondary_active = v_in >= band.v_thr_high;
    const bool primary_biased = v_in > band.v_thr_low;
    if (secondary_active) {
        const double depletion = d.s_in;
        return {band.p_low, std::max(0.0, d.s_in - depletion)};
    }
    if (primary_biased)
        return {d.s_in >= d.s_min ? band.p_high : band.p_low, d.s_in};
    return {band.p_low, d.s_in};
}

/// v = gain_a * count + offset_b.
struct AffineCalibration {
    double gain_a = 1.0;
    double offset_b = 0.0;

    double to_volts(double count) const { return gain_a * count + offset_b; }
    double to_count(double volts) const { return (volts - offset_b) / gain_a; }

    friend bool operator==(const AffineCalibration&, const AffineCalibration&) = default;
};

inline AffineCalibration calibrate_affine(double low_count, double high_count, double v_low,
                                          double v_high)
{
    for (double v : {low_count, high_count, v_low, v_high})
        detail::require_finite(v, "calibration endpoint");
    if (!(low_count < high_count) || !(v_low < v_high))
        throw std::invalid_argument("calibrate_affine: band endpoints must be strictly increasing");
    const double a = (v_high - v_low) / (high_count - low_count);
    return {a, v_low - a * low_count};
}

/// Input bias seen by a cell: the calibrated sum of its eight neighbors'
/// normalized outputs plus w_self times its own.
inline double aggregate_input(std::span<const double, 8> neighbor_outputs, double self_output,
                              double w_self, const AffineCalibration& cal)
{
    double total = 0.0;
    for (double y : neighbor_outputs) {
        detail::require_finite(y, "neighbor output");
        total += y;
    }
    detail::require_finite(self_output, "self output");
    detail::require_finite(w_self, "w_self");
    return cal.to_volts(total + w_self * self_output);
}

} // namespace mfca
