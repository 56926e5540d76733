#include <mfca/ca.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

namespace mfca {
namespace {

Grid from_rows(std::initializer_list<const char*> rows, Boundary b = Boundary::FixedDead)
{
    const int h = static_cast<int>(rows.size());
    const int w = static_cast<int>(std::char_traits<char>::length(*rows.begin()));
    Grid g(w, h, b);
    int r = 0;
    for (const char* row : rows) {
        for (int c = 0; c < w; ++c)
            g.set(r, c, row[c] == 'O' ? 1 : 0);
        ++r;
    }
    return g;
}

const auto kLife = OuterTotalisticRule::game_of_life();

TEST(GridTest, RejectsBadDimensionsAndStates)
{
    EXPECT_THROW(Grid(0, 3), std::invalid_argument);
    EXPECT_THROW(Grid(3, -1), std::invalid_argument);
    Grid g(2, 2);
    EXPECT_THROW(g.set(0, 0, 2), std::invalid_argument);
    EXPECT_THROW(g.at(2, 0), std::out_of_range);
    EXPECT_EQ(g.size(), 4u);
}

TEST(OuterSumTest, Examples)
{
    EXPECT_EQ(outer_sum(Grid(3, 3), 1, 1), 0);
    EXPECT_EQ(outer_sum(from_rows({"OOO", "OOO", "OOO"}), 1, 1), 8);
    EXPECT_EQ(outer_sum(from_rows({"...", "OOO", "..."}), 1, 1), 2);
}

TEST(OuterSumTest, OutOfRangeIsAnError)
{
    Grid g(3, 3);
    EXPECT_THROW(outer_sum(g, 3, 0), std::out_of_range);
    EXPECT_THROW(outer_sum(g, 0, -1), std::out_of_range);
}

TEST(OuterSumTest, FixedDeadCorner)
{
    EXPECT_EQ(outer_sum(from_rows({"OOO", "OOO", "OOO"}), 0, 0), 3);
}

TEST(OuterSumTest, ToroidalWrap)
{
    // On a 3x3 torus every other cell is a neighbor exactly once.
    auto g = from_rows({"O..", "...", "..."}, Boundary::Toroidal);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            EXPECT_EQ(outer_sum(g, r, c), (r == 0 && c == 0) ? 0 : 1) << r << "," << c;

    // A 1x1 torus sees its only cell in all eight neighbor slots.
    Grid single(1, 1, Boundary::Toroidal);
    single.set(0, 0, 1);
    EXPECT_EQ(outer_sum(single, 0, 0), 8);

    EXPECT_EQ(outer_sum(from_rows({"OOO", "OOO", "OOO"}, Boundary::Toroidal), 0, 0), 8);
}

TEST(RuleTest, ParseAndFormat)
{
    EXPECT_EQ(parse_rule("B3/S23"), kLife);
    EXPECT_EQ(parse_rule("s23/b3"), kLife);
    auto empty = parse_rule("B/S");
    EXPECT_TRUE(empty.birth.none());
    EXPECT_TRUE(empty.survival.none());
    EXPECT_EQ(to_string(parse_rule("B36/S23")), "B36/S23");
    EXPECT_THROW(parse_rule("B9/S23"), std::invalid_argument);
    EXPECT_THROW(parse_rule("B3S23"), std::invalid_argument);
    EXPECT_THROW(parse_rule("B3/B23"), std::invalid_argument);
}

TEST(StepTest, DeadCellWithThreeNeighborsIsBorn)
{
    auto g = from_rows({"O.O", "...", ".O."});
    EXPECT_EQ(step(g, kLife).at(1, 1), 1);
}

TEST(StepTest, AllDeadStaysDead)
{
    Grid g(5, 4);
    EXPECT_EQ(step(g, kLife), g);
}

TEST(StepTest, HorizontalBlinkerTurnsVertical)
{
    auto h = from_rows({"...", "OOO", "..."});
    auto v = from_rows({".O.", ".O.", ".O."});
    auto next = step(h, kLife);
    EXPECT_EQ(next, v);
    EXPECT_EQ(h, from_rows({"...", "OOO", "..."})); // input untouched
}

TEST(StepTest, MatchesCaseAnalysisOnAllPatches)
{
    for (unsigned patch = 0; patch < 512; ++patch) {
        Grid g(3, 3);
        for (int k = 0; k < 9; ++k)
            g.set(k / 3, k % 3, (patch >> k) & 1u);
        ASSERT_EQ(step(g, kLife).at(1, 1), oracle::life_case_analysis(patch)) << "patch " << patch;
    }
}

TEST(StepTest, BlockIsStill)
{
    for (int n : {4, 5, 8}) {
        Grid g(n, n);
        g.set(1, 1, 1);
        g.set(1, 2, 1);
        g.set(2, 1, 1);
        g.set(2, 2, 1);
        EXPECT_EQ(step(g, kLife), g) << n;
    }
}

TEST(StepTest, ThreadCountDoesNotChangeResult)
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        auto b = trial % 2 ? Boundary::Toroidal : Boundary::FixedDead;
        auto g = oracle::random_grid(rng, 23, 17, b);
        const auto reference = step(g, kLife, 1);
        for (unsigned threads : {2u, 3u, 8u, 64u})
            EXPECT_EQ(step(g, kLife, threads), reference);
    }
}

TEST(StepTest, MatchesBruteForceOnRandomGrids)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const bool torus = trial % 2 == 0;
        auto g = oracle::random_grid(rng, 3 + trial % 13, 4 + trial % 7,
                                     torus ? Boundary::Toroidal : Boundary::FixedDead);
        auto plain = oracle::to_plain(g);
        for (int s = 0; s < 5; ++s) {
            g = step(g, kLife);
            plain = oracle::brute_force_life(plain, torus);
            ASSERT_EQ(oracle::to_plain(g), plain) << "trial " << trial << " step " << s;
        }
    }
}

TEST(StepTest, GeneralRuleUsesBirthAndSurvivalSets)
{
    const auto seeds = parse_rule("B2/S");
    auto g = from_rows({".....", ".O.O.", "....."});
    auto next = step(g, seeds);
    EXPECT_EQ(next, from_rows({"..O..", "..O..", "..O.."}));
}

TEST(RunTest, ZeroStepsReturnsInput)
{
    auto g = from_rows({"O.", ".O"});
    auto seq = run(g, kLife, 0);
    ASSERT_EQ(seq.size(), 1u);
    EXPECT_EQ(seq[0], g);
}

TEST(RunTest, BlinkerReturnsAfterTwoSteps)
{
    auto g = from_rows({"...", "OOO", "..."});
    auto seq = run(g, kLife, 2);
    ASSERT_EQ(seq.size(), 3u);
    EXPECT_EQ(seq[2], seq[0]);
    EXPECT_EQ(seq[1], step(g, kLife));
}

TEST(RunTest, GliderTranslatesDiagonally)
{
    Grid g(16, 16, Boundary::Toroidal);
    g.set(0, 1, 1);
    g.set(1, 2, 1);
    g.set(2, 0, 1);
    g.set(2, 1, 1);
    g.set(2, 2, 1);
    auto seq = run(g, kLife, 4);
    EXPECT_EQ(seq[4], translate(g, 1, 1));

    auto plain = oracle::to_plain(g);
    for (int s = 0; s < 4; ++s)
        plain = oracle::brute_force_life(plain, true);
    EXPECT_EQ(oracle::to_plain(seq[4]), plain);
}

TEST(RunTest, GliderWrapsAroundTorus)
{
    Grid g(8, 8, Boundary::Toroidal);
    g.set(0, 1, 1);
    g.set(1, 2, 1);
    g.set(2, 0, 1);
    g.set(2, 1, 1);
    g.set(2, 2, 1);
    // 8 translations of (+1, +1) bring it home.
    EXPECT_EQ(run(g, kLife, 32).back(), g);
}

TEST(DetectPeriodTest, Examples)
{
    auto blinker = run(from_rows({"...", "OOO", "..."}), kLife, 4);
    EXPECT_EQ(detect_period(blinker), (Periodicity{0, 2}));

    std::vector<Grid> dead(4, Grid(3, 3));
    EXPECT_EQ(detect_period(dead), (Periodicity{0, 1}));

    std::vector<Grid> growing;
    Grid g(4, 1);
    growing.push_back(g);
    for (int c = 0; c < 4; ++c) {
        g.set(0, c, 1);
        growing.push_back(g);
    }
    EXPECT_FALSE(detect_period(growing).has_value());
    EXPECT_FALSE(detect_period({Grid(2, 2)}).has_value());
}

TEST(DetectPeriodTest, TransientBeforeCycle)
{
    // A lone cell dies, then the grid stays empty.
    Grid g(5, 5);
    g.set(2, 2, 1);
    EXPECT_EQ(detect_period(run(g, kLife, 4)), (Periodicity{1, 1}));
}

} // namespace
} // namespace mfca
