#include <mfca/synth.hpp>

#include <gtest/gtest.h>

#include <random>
#include <vector>

namespace mfca {
namespace {

const auto kLife = OuterTotalisticRule::game_of_life();

/// Candidate endpoints for weight w: every midpoint between consecutive
/// multiples of the total spacing, including the margins below 0 and above the
/// largest total.
std::vector<double> candidate_endpoints(double w)
{
    const double spacing = w == 0.0 ? 1.0 : 0.5;
    std::vector<double> out;
    for (double t = -spacing / 2; t <= 9.0 + spacing; t += spacing)
        out.push_back(t);
    return out;
}

/// Literal 18-pair check of a single-band plan.
bool single_band_realizes(double w, double lo, double hi, const OuterTotalisticRule& rule)
{
    for (int self = 0; self <= 1; ++self)
        for (int outer = 0; outer <= 8; ++outer) {
            const double total = outer + w * self;
            const bool alive = self ? rule.survival.test(outer) : rule.birth.test(outer);
            if ((lo < total && total < hi) != alive)
                return false;
        }
    return true;
}

std::vector<Band> brute_force_single_bands(double w, const OuterTotalisticRule& rule)
{
    std::vector<Band> found;
    const auto ends = candidate_endpoints(w);
    for (double lo : ends)
        for (double hi : ends)
            if (lo < hi && single_band_realizes(w, lo, hi, rule))
                found.push_back({lo, hi});
    return found;
}

TEST(SynthesizeTest, GameOfLife)
{
    auto plan = synthesize(kLife);
    ASSERT_TRUE(plan);
    EXPECT_EQ(plan->w_self, 0.5);
    ASSERT_EQ(plan->bands.size(), 1u);
    EXPECT_EQ(plan->bands[0], (Band{2.25, 3.75}));
    EXPECT_EQ(plan->cost(), 1u);

    // Independent search finds the same band and nothing else.
    auto brute = brute_force_single_bands(0.5, kLife);
    ASSERT_EQ(brute.size(), 1u);
    EXPECT_EQ(brute[0], (Band{2.25, 3.75}));
}

TEST(SynthesizeTest, GameOfLifeHasNoUnweightedSingleBand)
{
    EXPECT_TRUE(brute_force_single_bands(0.0, kLife).empty());
    // Every unweighted candidate band reports a mismatch.
    const auto ends = candidate_endpoints(0.0);
    for (double lo : ends) {
        for (double hi : ends) {
            if (lo < hi) {
                EXPECT_FALSE(verify(BandPlan{0.0, {{lo, hi}}}, kLife).ok);
            }
        }
    }
}

TEST(SynthesizeTest, BirthThreeSurviveThree)
{
    auto rule = parse_rule("B3/S3");
    auto plan = synthesize(rule);
    ASSERT_TRUE(plan);
    EXPECT_EQ(plan->w_self, 0.0);
    ASSERT_EQ(plan->bands.size(), 1u);
    EXPECT_EQ(plan->bands[0], (Band{2.5, 3.5}));
    auto brute = brute_force_single_bands(0.0, rule);
    ASSERT_EQ(brute.size(), 1u);
    EXPECT_EQ(brute[0], plan->bands[0]);
}

TEST(SynthesizeTest, AlwaysDie)
{
    auto plan = synthesize(parse_rule("B/S"));
    ASSERT_TRUE(plan);
    EXPECT_EQ(plan->w_self, 0.0);
    EXPECT_TRUE(plan->bands.empty());
    EXPECT_EQ(plan->cost(), 0u);
}

TEST(SynthesizeTest, HighLifeNeedsTwoBands)
{
    auto plan = synthesize(parse_rule("B36/S23"));
    ASSERT_TRUE(plan);
    EXPECT_EQ(plan->w_self, 0.5);
    ASSERT_EQ(plan->bands.size(), 2u);
    EXPECT_EQ(plan->bands[0], (Band{2.25, 3.75}));
    EXPECT_EQ(plan->bands[1], (Band{5.75, 6.25}));
}

TEST(SynthesizeTest, EdgeBandsExtendHalfASpacing)
{
    // Everything always lives: one band over all totals.
    auto plan = synthesize(parse_rule("B012345678/S012345678"));
    ASSERT_TRUE(plan);
    EXPECT_EQ(plan->w_self, 0.0);
    ASSERT_EQ(plan->bands.size(), 1u);
    EXPECT_EQ(plan->bands[0], (Band{-0.5, 8.5}));
}

TEST(VerifyTest, Examples)
{
    auto ok = verify(BandPlan{0.5, {{2.25, 3.75}}}, kLife);
    EXPECT_TRUE(ok.ok);
    EXPECT_TRUE(ok.mismatches.empty());
    EXPECT_EQ(ok.checked, 18u);

    auto bad = verify(BandPlan{0.0, {{2.5, 3.5}}}, kLife);
    EXPECT_FALSE(bad.ok);
    EXPECT_NE(std::find(bad.mismatches.begin(), bad.mismatches.end(), Mismatch{1, 2}),
              bad.mismatches.end());
    EXPECT_EQ(bad.mismatches.size(), 1u);

    EXPECT_TRUE(verify(BandPlan{}, parse_rule("B/S")).ok);
}

TEST(VerifyTest, RejectsMalformedPlans)
{
    EXPECT_THROW(verify(BandPlan{0.25, {}}, kLife), std::invalid_argument);
    EXPECT_THROW(verify(BandPlan{0.0, {{3.0, 2.0}}}, kLife), std::invalid_argument);
    EXPECT_THROW(verify(BandPlan{0.0, {{2.0, 4.0}, {3.0, 5.0}}}, kLife), std::invalid_argument);
}

OuterTotalisticRule random_rule(std::mt19937_64& rng)
{
    std::uniform_int_distribution<unsigned> bits(0, 511);
    return {std::bitset<9>(bits(rng)), std::bitset<9>(bits(rng))};
}

TEST(SynthesizeProperty, SoundAndEndpointSafeForAllRules)
{
    // Exhaustive over all 2^18 rules would be slow-ish in debug; a seeded
    // sample of 5000 plus every rule with survival == birth.
    std::mt19937_64 rng(2024);
    std::vector<OuterTotalisticRule> rules;
    for (int i = 0; i < 5000; ++i)
        rules.push_back(random_rule(rng));
    for (unsigned b = 0; b < 512; ++b)
        rules.push_back({std::bitset<9>(b), std::bitset<9>(b)});

    for (const auto& rule : rules) {
        auto plan = synthesize(rule);
        ASSERT_TRUE(plan) << to_string(rule);
        ASSERT_TRUE(verify(*plan, rule).ok) << to_string(rule);
        ASSERT_NO_THROW(plan->validate());
        const double margin = plan->w_self == 0.5 ? 0.25 : 0.5;
        for (double t : achievable_totals(plan->w_self))
            for (const auto& b : plan->bands) {
                EXPECT_GE(std::abs(t - b.lo), margin - 1e-12);
                EXPECT_GE(std::abs(t - b.hi), margin - 1e-12);
            }
        // Unweighted plans are chosen exactly when dead and live cells agree.
        EXPECT_EQ(plan->w_self == 0.0, rule.birth == rule.survival) << to_string(rule);
    }
}

TEST(SynthesizeProperty, CostIsMinimalAmongSingleBandPlans)
{
    std::mt19937_64 rng(99);
    for (int i = 0; i < 2000; ++i) {
        auto rule = random_rule(rng);
        auto plan = synthesize(rule);
        ASSERT_TRUE(plan);
        const bool any_single = !brute_force_single_bands(0.0, rule).empty() ||
                                !brute_force_single_bands(0.5, rule).empty();
        if (any_single) {
            EXPECT_LE(plan->cost(), 1u) << to_string(rule);
        } else {
            EXPECT_NE(plan->cost(), 1u) << to_string(rule);
        }
    }
}

TEST(SynthesizeTest, LifeBandCenteredOnThreeOfEight)
{
    auto plan = synthesize(kLife);
    ASSERT_TRUE(plan);
    const auto& b = plan->bands[0];
    EXPECT_DOUBLE_EQ((b.lo + b.hi) / 2.0, 3.0 / 8.0 * 8.0);
}

TEST(PlanToVoltsTest, Examples)
{
    auto gol = plan_to_volts(BandPlan{0.5, {{2.25, 3.75}}}, 2.0, 7.0);
    ASSERT_EQ(gol.bands.size(), 1u);
    EXPECT_EQ(gol.bands[0].v_thr_low, 2.0);
    EXPECT_EQ(gol.bands[0].v_thr_high, 7.0);
    EXPECT_NEAR(gol.calibration.gain_a, 10.0 / 3.0, 1e-12);
    EXPECT_NEAR(gol.calibration.offset_b, -5.5, 1e-12);

    auto id = plan_to_volts(BandPlan{0.0, {{0.0, 1.0}}}, 0.0, 1.0);
    EXPECT_EQ(id.calibration.gain_a, 1.0);
    EXPECT_EQ(id.calibration.offset_b, 0.0);

    auto two = plan_to_volts(BandPlan{0.5, {{2.25, 3.75}, {5.75, 6.25}}}, 2.0, 7.0);
    ASSERT_EQ(two.bands.size(), 2u);
    EXPECT_NEAR(two.bands[1].v_thr_low, 10.0 / 3.0 * 5.75 - 5.5, 1e-12);
    EXPECT_NEAR(two.bands[1].v_thr_low, 13.666666666666666, 1e-9);
    EXPECT_NEAR(two.bands[1].v_thr_high, 15.333333333333334, 1e-9);
}

TEST(PlanToVoltsTest, EmptyPlanThrows)
{
    EXPECT_THROW(plan_to_volts(BandPlan{}, 2.0, 7.0), std::invalid_argument);
}

} // namespace
} // namespace mfca
