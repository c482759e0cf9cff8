#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "psmatch/caliper.hpp"
#include "psmatch/errors.hpp"
#include "psmatch/match_result.hpp"
#include "psmatch/score_set.hpp"
#include "support.hpp"

using namespace psmatch;
using psmatch::testing::uniform;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("prepare_score_set handles empty groups") {
    const ScoreSet s = prepare_score_set({}, {});
    CHECK(s.treated_count() == 0);
    CHECK(s.control_count() == 0);
    CHECK(s.treated_perm.empty());
}

TEST_CASE("prepare_score_set sorts two elements and records the permutation") {
    const std::vector<double> treated{0.3, 0.1};
    const std::vector<double> control{0.2};
    const ScoreSet s = prepare_score_set(treated, control);
    CHECK(s.treated_scores == std::vector<double>{0.1, 0.3});
    CHECK(s.treated_perm == std::vector<std::size_t>{1, 0});
    CHECK(s.control_scores == std::vector<double>{0.2});
}

TEST_CASE("prepare_score_set keeps input order among ties") {
    const std::vector<double> treated{0.5, 0.2, 0.5, 0.2, 0.5};
    const ScoreSet s = prepare_score_set(treated, {});
    CHECK(s.treated_perm == std::vector<std::size_t>{1, 3, 0, 2, 4});
}

TEST_CASE("prepare_score_set rejects non-finite scores naming the row") {
    const std::vector<double> bad{0.1, std::nan(""), 0.3};
    CHECK_THROWS_WITH_AS(prepare_score_set(bad, {}), doctest::Contains("treated score at row 1"), InvalidInput);
    const std::vector<double> inf{kInf};
    CHECK_THROWS_WITH_AS(prepare_score_set({}, inf), doctest::Contains("control score at row 0"), InvalidInput);
}

TEST_CASE("permutation maps reproduce the sorted arrays for random inputs") {
    rng::Engine e(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto k = psmatch::testing::uniform_int(e, 0, 30);
        const auto l = psmatch::testing::uniform_int(e, 0, 30);
        const auto inst = psmatch::testing::grid_instance(e, k, l, 10);
        const ScoreSet s = psmatch::testing::scores_of(inst);

        // Reference: sort (score, row) pairs, which is stable by construction.
        std::vector<std::pair<double, std::size_t>> ref;
        for (std::size_t r = 0; r < k; ++r) ref.emplace_back(inst.treated[r], r);
        std::sort(ref.begin(), ref.end());
        for (std::size_t p = 0; p < k; ++p) {
            REQUIRE(s.treated_scores[p] == inst.treated[s.treated_perm[p]]);
            REQUIRE(s.treated_perm[p] == ref[p].second);
        }
        for (std::size_t p = 0; p < l; ++p) REQUIRE(s.control_scores[p] == inst.control[s.control_perm[p]]);
        REQUIRE(std::is_sorted(s.control_scores.begin(), s.control_scores.end()));
        auto perm = s.control_perm;
        std::sort(perm.begin(), perm.end());
        std::vector<std::size_t> iota(l);
        std::iota(iota.begin(), iota.end(), std::size_t{0});
        REQUIRE(perm == iota);
    }
}

TEST_CASE("processing orders") {
    const std::vector<double> treated{0.3, 0.1, 0.2};
    const ScoreSet s = prepare_score_set(treated, {});
    CHECK(treated_processing_order(s, ProcessingOrder::sorted()) == std::vector<std::size_t>{0, 1, 2});
    // Rows 0, 1, 2 sit at sorted positions 2, 0, 1.
    CHECK(treated_processing_order(s, ProcessingOrder::as_given()) == std::vector<std::size_t>{2, 0, 1});
    auto shuffled = treated_processing_order(s, ProcessingOrder::random(5));
    CHECK(shuffled == treated_processing_order(s, ProcessingOrder::random(5)));
    std::sort(shuffled.begin(), shuffled.end());
    CHECK(shuffled == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("random processing order is uniform over permutations") {
    const std::vector<double> treated{0.1, 0.2, 0.3};
    const ScoreSet s = prepare_score_set(treated, {});
    std::map<std::vector<std::size_t>, int> counts;
    for (std::uint64_t seed = 0; seed < 6000; ++seed) ++counts[treated_processing_order(s, ProcessingOrder::random(seed))];
    CHECK(counts.size() == 6);
    for (const auto& [perm, n] : counts) CHECK(std::abs(n - 1000) < 150);
}

TEST_CASE("eval_caliper examples") {
    CHECK(CaliperSpec::constant(0.02)(0.3, 0.9) == 0.02);
    CHECK(CaliperSpec::constant(0.02)(-5.0, 7.0) == 0.02);

    const auto step = CaliperSpec::step_sum({{-kInf, 0.01}, {0.5, 0.1}}, {{-kInf, 0.0}});
    CHECK(step(0.6, 0.3) == 0.1);
    CHECK(step(0.5, 0.3) == 0.1);  // right-open: the threshold belongs to the upper step
    CHECK(step(0.49, 0.3) == 0.01);

    // g(x) = 0.01 + 0.5 x on [0, 1]: g(0.2) = 0.11.
    const auto lin = CaliperSpec::separable({{0.0, 0.01}, {1.0, 0.51}}, {{0.0, 0.0}});
    CHECK(lin(0.2, 0.7) == doctest::Approx(0.11).epsilon(1e-15));
}

TEST_CASE("tables clamp outside their range") {
    const auto step = CaliperSpec::step_sum({{0.2, 0.05}, {0.5, 0.1}}, {{0.0, 0.01}});
    CHECK(step(0.1, -3.0) == doctest::Approx(0.06));
    const auto lin = CaliperSpec::separable({{0.0, 0.01}, {1.0, 0.51}}, {{0.0, 0.0}});
    CHECK(lin(-1.0, 0.0) == 0.01);
    CHECK(lin(2.0, 0.0) == 0.51);
}

TEST_CASE("caliper factories reject structural violations") {
    CHECK_THROWS_AS(CaliperSpec::constant(-0.01), InvalidCaliper);
    CHECK_THROWS_WITH_AS(CaliperSpec::separable({{0.0, 0.0}, {0.1, 0.2}}, {{0.0, 0.0}}),
                         doctest::Contains("g piece 0"), InvalidCaliper);
    CHECK_THROWS_WITH_AS(CaliperSpec::separable({{0.0, 0.0}}, {{0.0, 0.1}, {1.0, 0.2}, {1.1, 0.0}}),
                         doctest::Contains("h piece 1"), InvalidCaliper);
    CHECK_THROWS_WITH_AS(CaliperSpec::step_sum({{-kInf, 0.1}, {0.5, 0.05}}, {{-kInf, 0.0}}),
                         doctest::Contains("f piece 1 decreases"), InvalidCaliper);
    CHECK_THROWS_AS(CaliperSpec::step_sum({{-kInf, -0.1}}, {{-kInf, 0.0}}), InvalidCaliper);
    CHECK_THROWS_AS(CaliperSpec::step_sum({{0.5, 0.1}, {0.5, 0.2}}, {{-kInf, 0.0}}), InvalidCaliper);
    CHECK_THROWS_AS(CaliperSpec::separable({}, {{0.0, 0.0}}), InvalidCaliper);
}

TEST_CASE("validate_caliper certifies the families") {
    const std::vector<double> x{0.1, 0.4}, y{0.2, 0.9};
    const ScoreSet s = prepare_score_set(x, y);

    const auto step = validate_caliper(CaliperSpec::step_sum({{-kInf, 0.0}, {0.3, 0.1}}, {{-kInf, 0.02}}), s);
    CHECK(step.piecewise_certified);
    CHECK_FALSE(step.lipschitz_certified);
    CHECK(step.min_on_data == doctest::Approx(0.02));

    const auto lin = validate_caliper(CaliperSpec::separable({{0.0, 0.1}, {1.0, 0.6}}, {{0.0, 0.0}}), s);
    CHECK(lin.lipschitz_certified);
    CHECK(lin.max_abs_slope == doctest::Approx(0.5));

    const auto custom = validate_caliper(CaliperSpec::unchecked([](double, double) { return 1.0; }), s);
    CHECK_FALSE(custom.lipschitz_certified);
    CHECK_FALSE(custom.data_checked);
}

TEST_CASE("validate_caliper rejects a caliper negative at a data pair") {
    // g(x) = -x on [0, 1] (slope -1), h = 0.3: negative once x > 0.3.
    const auto spec = CaliperSpec::separable({{0.0, 0.0}, {1.0, -1.0}}, {{0.0, 0.3}});
    const std::vector<double> fine{0.1, 0.2}, bad{0.1, 0.8}, y{0.5};
    CHECK_NOTHROW(validate_caliper(spec, prepare_score_set(fine, y)));
    CHECK_THROWS_WITH_AS(validate_caliper(spec, prepare_score_set(bad, y)), doctest::Contains("treated row 1"),
                         InvalidCaliper);
}

TEST_CASE("separable calipers are unit-Lipschitz in each argument") {
    rng::Engine e(3);
    for (int trial = 0; trial < 200; ++trial) {
        const CaliperSpec spec = psmatch::testing::random_separable(e);
        for (int k = 0; k < 50; ++k) {
            const double x = uniform(e, -0.5, 1.5), y = uniform(e, -0.5, 1.5), t = uniform(e, -0.5, 0.5);
            REQUIRE(std::abs(spec(x, y) - spec(x + t, y)) <= std::abs(t) + 1e-12);
            REQUIRE(std::abs(spec(x, y) - spec(x, y + t)) <= std::abs(t) + 1e-12);
        }
    }
}

TEST_CASE("step-sum calipers are Lipschitz-nondecreasing") {
    rng::Engine e(4);
    for (int trial = 0; trial < 200; ++trial) {
        const CaliperSpec spec = psmatch::testing::random_two_step(e);
        for (int k = 0; k < 50; ++k) {
            const double x = uniform(e, -0.5, 1.5), y = uniform(e, -0.5, 1.5), t = uniform(e, 0.0, 0.5);
            REQUIRE(spec(x, y + t) >= spec(x, y) - t);
            REQUIRE(spec(x + t, y) >= spec(x, y) - t);
        }
    }
}

TEST_CASE("step-sum cut points follow the thresholds") {
    const auto spec = CaliperSpec::step_sum({{-kInf, 0.01}, {0.5, 0.1}}, {{0.2, 0.0}, {0.4, 0.0}, {0.7, 0.3}});
    CHECK(std::vector<double>(spec.treated_cuts().begin(), spec.treated_cuts().end()) ==
          std::vector<double>{-kInf, 0.5, kInf});
    CHECK(std::vector<double>(spec.control_cuts().begin(), spec.control_cuts().end()) ==
          std::vector<double>{-kInf, 0.4, 0.7, kInf});
}

TEST_CASE("find_violation reports malformed matchings") {
    const std::vector<double> x{0.1, 0.2}, y{0.1, 0.5};
    const ScoreSet s = prepare_score_set(x, y);
    const auto c = CaliperSpec::constant(0.05);
    MatchResult ok;
    ok.add(s, 0, 0);
    CHECK(find_violation(ok, s, c).empty());

    MatchResult wide = ok;
    wide.add(s, 1, 1);
    CHECK(find_violation(wide, s, c).find("breaks the caliper") != std::string::npos);

    MatchResult repeat = ok;
    repeat.add(s, 1, 0);
    CHECK(find_violation(repeat, s, CaliperSpec::constant(1.0)).find("control 0 is used twice") != std::string::npos);
}
