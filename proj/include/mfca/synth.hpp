#pragma once

// Compiles an outer-totalistic rule into count-space windows for band-transfer
// cells, and checks plans exhaustively against the rule.
//
// A cell's aggregated input, in count units, is its total
//     outer + w_self * self
// With w_self = 0 the totals of dead and live cells coincide, so the rule must
// treat both states alike at every count. With w_self = 0.5 live totals sit on
// half-integers between the dead ones, and any rule becomes a set of disjoint
// windows over the interleaved totals.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ca.hpp"
#include "transfer.hpp"

namespace mfca {

struct Band {
    double lo;
    double hi;

    bool contains(double total) const noexcept { return lo < total && total < hi; }
    friend bool operator==(const Band&, const Band&) = default;
};

struct BandPlan {
    double w_self = 0.0;
    std::vector<Band> bands;

    std::size_t cost() const noexcept { return bands.size(); }

    bool accepts(double total) const noexcept
    {
        return std::any_of(bands.begin(), bands.end(),
                           [&](const Band& b) { return b.contains(total); });
    }

    void validate() const
    {
        if (w_self != 0.0 && w_self != 0.5)
            throw std::invalid_argument("BandPlan: w_self must be 0 or 0.5");
        for (std::size_t i = 0; i < bands.size(); ++i) {
            if (!(bands[i].lo < bands[i].hi))
                throw std::invalid_argument("BandPlan: band lo must be below hi");
            if (i > 0 && !(bands[i - 1].hi <= bands[i].lo))
                throw std::invalid_argument("BandPlan: bands must be sorted and disjoint");
        }
    }

    friend bool operator==(const BandPlan&, const BandPlan&) = default;
};

inline double cell_total(int self, int outer, double w_self)
{
    return outer + w_self * self;
}

/// Sorted distinct totals reachable for the given self weight.
inline std::vector<double> achievable_totals(double w_self)
{
    std::vector<double> totals;
    for (int self = 0; self <= 1; ++self)
        for (int outer = 0; outer <= 8; ++outer)
            totals.push_back(cell_total(self, outer, w_self));
    std::sort(totals.begin(), totals.end());
    totals.erase(std::unique(totals.begin(), totals.end()), totals.end());
    return totals;
}

namespace detail {

/// Minimal plan for one weight, or nullopt when some total must be both
/// accepted and rejected.
inline std::optional<BandPlan> synthesize_for_weight(const OuterTotalisticRule& rule, double w_self)
{
    const auto totals = achievable_totals(w_self);
    // -1 unknown, 0 reject, 1 accept
    std::vector<int> verdict(totals.size(), -1);
    for (int self = 0; self <= 1; ++self) {
        for (int outer = 0; outer <= 8; ++outer) {
            const double t = cell_total(self, outer, w_self);
            const auto idx = static_cast<std::size_t>(
                std::lower_bound(totals.begin(), totals.end(), t) - totals.begin());
            const int want = rule.next(static_cast<std::uint8_t>(self), outer);
            if (verdict[idx] != -1 && verdict[idx] != want)
                return std::nullopt;
            verdict[idx] = want;
        }
    }

    // Runs of accepted totals become bands; endpoints sit halfway to the
    // neighboring achievable total, or half a spacing beyond the extremes.
    const double spacing = totals[1] - totals[0];
    auto below = [&](std::size_t i) {
        return i == 0 ? totals[0] - spacing / 2 : (totals[i - 1] + totals[i]) / 2;
    };
    auto above = [&](std::size_t i) {
        return i + 1 == totals.size() ? totals[i] + spacing / 2 : (totals[i] + totals[i + 1]) / 2;
    };

    BandPlan plan;
    plan.w_self = w_self;
    for (std::size_t i = 0; i < totals.size();) {
        if (verdict[i] != 1) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < totals.size() && verdict[j + 1] == 1)
            ++j;
        plan.bands.push_back({below(i), above(j)});
        i = j + 1;
    }
    return plan;
}

} // namespace detail

/// Minimal-cost plan over w_self in {0, 0.5}; ties go to w_self = 0.
/// Returns nullopt when neither weight can separate the rule.
inline std::optional<BandPlan> synthesize(const OuterTotalisticRule& rule)
{
    auto plain = detail::synthesize_for_weight(rule, 0.0);
    auto half = detail::synthesize_for_weight(rule, 0.5);
    if (plain && half)
        return half->cost() < plain->cost() ? half : plain;
    return plain ? plain : half;
}

struct Mismatch {
    int self_state;
    int outer_count;
    friend bool operator==(const Mismatch&, const Mismatch&) = default;
};

struct VerifyReport {
    bool ok = true;
    std::vector<Mismatch> mismatches;
    std::size_t checked = 0;
};

/// Checks all 18 (self, outer) pairs.
inline VerifyReport verify(const BandPlan& plan, const OuterTotalisticRule& rule)
{
    plan.validate();
    VerifyReport report;
    for (int self = 0; self <= 1; ++self) {
        for (int outer = 0; outer <= 8; ++outer) {
            ++report.checked;
            const bool got = plan.accepts(cell_total(self, outer, plan.w_self));
            const bool want = rule.next(static_cast<std::uint8_t>(self), outer) == 1;
            if (got != want)
                report.mismatches.push_back({self, outer});
        }
    }
    report.ok = report.mismatches.empty();
    return report;
}

struct VoltPlan {
    std::vector<BandParams> bands;
    AffineCalibration calibration;
};

/// Calibrates the first band onto [v_low, v_high] and maps the remaining bands
/// through the same affine transform.
inline VoltPlan plan_to_volts(const BandPlan& plan, double v_low, double v_high, double p_low = 0.0,
                              double p_high = 1.0)
{
    plan.validate();
    if (plan.bands.empty())
        throw std::invalid_argument("plan_to_volts: plan has no bands");
    VoltPlan out;
    out.calibration = calibrate_affine(plan.bands.front().lo, plan.bands.front().hi, v_low, v_high);
    for (const auto& b : plan.bands) {
        BandParams p{out.calibration.to_volts(b.lo), out.calibration.to_volts(b.hi), p_low, p_high};
        p.validate();
        out.bands.push_back(p);
    }
    // The first band lands exactly on the requested window.
    out.bands.front().v_thr_low = v_low;
    out.bands.front().v_thr_high = v_high;
    return out;
}

} // namespace mfca
