#include <doctest.h>

#include <cmath>
#include <functional>

#include "psmatch/errors.hpp"
#include "psmatch/maximal.hpp"
#include "psmatch/oracle.hpp"
#include "support.hpp"

using namespace psmatch;
namespace t = psmatch::testing;

namespace {

// Exhaustive search over every matching of a tiny feasibility graph.
std::size_t exhaustive_max(const oracle::FeasibilityGraph& g) {
    std::vector<char> used(g.control_count, 0);
    std::function<std::size_t(std::size_t)> best = [&](std::size_t i) -> std::size_t {
        if (i == g.treated_count()) return 0;
        std::size_t top = best(i + 1);
        for (std::size_t j : g.adjacency[i]) {
            if (used[j]) continue;
            used[j] = 1;
            top = std::max(top, 1 + best(i + 1));
            used[j] = 0;
        }
        return top;
    };
    return best(0);
}

void check_non_crossing(const MatchResult& r) {
    for (std::size_t m = 1; m < r.pairs.size(); ++m) {
        REQUIRE(r.pairs[m - 1].treated < r.pairs[m].treated);
        REQUIRE(r.pairs[m - 1].control < r.pairs[m].control);
    }
}

}  // namespace

TEST_CASE("maximal_matching with an empty group") {
    const std::vector<double> y{1.0};
    const auto r = maximal_matching(prepare_score_set({}, y), CaliperSpec::constant(5.0));
    CHECK(r.pair_count() == 0);
    CHECK(r.loop_iterations == 0);
}

TEST_CASE("maximal_matching pairs an exact tie under a zero caliper") {
    const std::vector<double> x{0.5}, y{0.5};
    const auto r = maximal_matching(prepare_score_set(x, y), CaliperSpec::constant(0.0));
    REQUIRE(r.pair_count() == 1);
    CHECK(r.pairs[0] == MatchedPair{0, 0});
    CHECK(r.distances[0] == 0.0);
}

TEST_CASE("maximal_matching on the three-by-two example agrees with exhaustive search") {
    const std::vector<double> x{0.0, 0.1, 0.2}, y{0.05, 0.25};
    const ScoreSet s = prepare_score_set(x, y);
    const auto c = CaliperSpec::constant(0.06);
    const auto r = maximal_matching(s, c);
    CHECK(r.pairs == std::vector<MatchedPair>{{0, 0}, {2, 1}});
    CHECK(exhaustive_max(oracle::feasibility_graph(s, c)) == 2);
    CHECK(r.loop_iterations <= 5);
}

TEST_CASE("maximal_matching with all-identical scores matches min(K, L)") {
    const std::vector<double> x(7, 0.3), y(4, 0.3);
    const auto r = maximal_matching(prepare_score_set(x, y), CaliperSpec::constant(0.0));
    CHECK(r.pair_count() == 4);
}

TEST_CASE("maximal_matching rejects step-sum calipers") {
    const auto step = CaliperSpec::step_sum({{0.0, 0.1}}, {{0.0, 0.0}});
    CHECK_THROWS_AS(maximal_matching(prepare_score_set({}, {}), step), InvalidCaliper);
    CHECK_THROWS_AS(maximal_matching_multi(prepare_score_set({}, {}), step, 2), InvalidCaliper);
}

TEST_CASE("maximal_matching is maximal, non-crossing and linear on random instances") {
    rng::Engine e(101);
    for (int trial = 0; trial < 400; ++trial) {
        const auto inst = t::grid_instance(e, t::uniform_int(e, 0, 12), t::uniform_int(e, 0, 12), 50);
        const ScoreSet s = t::scores_of(inst);
        const CaliperSpec c = trial % 2 ? CaliperSpec::constant(t::uniform(e, 0.0, 0.2)) : t::random_separable(e);
        const auto r = maximal_matching(s, c);
        REQUIRE(r.pair_count() == oracle::max_matching(oracle::feasibility_graph(s, c)));
        REQUIRE(find_violation(r, s, c).empty());
        REQUIRE(r.loop_iterations <= s.treated_count() + s.control_count());
        check_non_crossing(r);
    }
}

TEST_CASE("pair count is monotone in a constant caliper") {
    rng::Engine e(102);
    for (int trial = 0; trial < 200; ++trial) {
        const ScoreSet s = t::scores_of(t::uniform_instance(e, t::uniform_int(e, 0, 40), t::uniform_int(e, 0, 40)));
        double c1 = t::uniform(e, 0.0, 0.3), c2 = t::uniform(e, 0.0, 0.3);
        if (c1 > c2) std::swap(c1, c2);
        REQUIRE(maximal_matching(s, CaliperSpec::constant(c1)).pair_count() <=
                maximal_matching(s, CaliperSpec::constant(c2)).pair_count());
    }
}

TEST_CASE("1-to-n examples") {
    const auto c = CaliperSpec::constant(0.05);
    {
        const std::vector<double> x{0.0}, y{0.01, 0.02, 0.03};
        const ScoreSet s = prepare_score_set(x, y);
        const auto r = maximal_matching_multi(s, c, 2);
        CHECK(r.pairs == std::vector<MatchedPair>{{0, 0}, {0, 1}});
        CHECK(r.controls_per_treated == std::vector<std::size_t>{2});
        CHECK(oracle::b_matching(oracle::feasibility_graph(s, c), 2) == 2);
    }
    {
        const std::vector<double> x{0.0, 1.0}, y{0.01, 0.02};
        const ScoreSet s = prepare_score_set(x, y);
        const auto r = maximal_matching_multi(s, c, 3);
        CHECK(r.pairs == std::vector<MatchedPair>{{0, 0}, {0, 1}});
        CHECK(r.controls_per_treated == std::vector<std::size_t>{2, 0});
        CHECK(oracle::b_matching(oracle::feasibility_graph(s, c), 3) == 2);
    }
    CHECK_THROWS_AS(maximal_matching_multi(prepare_score_set({}, {}), c, 0), InvalidInput);
}

TEST_CASE("1-to-1 multi matching equals maximal_matching") {
    rng::Engine e(103);
    for (int trial = 0; trial < 300; ++trial) {
        const ScoreSet s = t::scores_of(t::grid_instance(e, t::uniform_int(e, 0, 20), t::uniform_int(e, 0, 20), 30));
        const auto c = CaliperSpec::constant(t::uniform(e, 0.0, 0.2));
        const auto a = maximal_matching(s, c);
        const auto b = maximal_matching_multi(s, c, 1);
        REQUIRE(a.pairs == b.pairs);
        REQUIRE(a.loop_iterations == b.loop_iterations);
    }
}

TEST_CASE("1-to-n matching is maximal against the replicated oracle") {
    rng::Engine e(104);
    for (int trial = 0; trial < 300; ++trial) {
        const ScoreSet s = t::scores_of(t::grid_instance(e, t::uniform_int(e, 0, 10), t::uniform_int(e, 0, 12), 40));
        const auto c = CaliperSpec::constant(t::uniform(e, 0.0, 0.25));
        const std::size_t n = t::uniform_int(e, 1, 4);
        const auto r = maximal_matching_multi(s, c, n);
        REQUIRE(r.pair_count() == oracle::b_matching(oracle::feasibility_graph(s, c), n));
        REQUIRE(find_violation(r, s, c, n).empty());
        REQUIRE(r.loop_iterations <= s.treated_count() + s.control_count());
        std::size_t total = 0;
        for (std::size_t d : r.controls_per_treated) total += d;
        REQUIRE(total == r.pair_count());
    }
}

TEST_CASE("min caliper search on a closed-form instance") {
    const std::vector<double> x{0.0, 1.0}, y{0.5, 0.5};
    const auto r = min_caliper_search(prepare_score_set(x, y), 0.5, 40);
    CHECK(r.target_pairs == 1);
    CHECK(r.achieved_pairs >= 1);
    CHECK(std::abs(r.caliper - 0.5) <= std::ldexp(1.0, -20));
}

TEST_CASE("min caliper search returns zero when ties already suffice") {
    const std::vector<double> x{0.2, 0.7}, y{0.2, 0.7};
    const auto r = min_caliper_search(prepare_score_set(x, y), 1.0, 20);
    CHECK(r.caliper == 0.0);
    CHECK(r.achieved_pairs == 2);
}

TEST_CASE("min caliper search rejects impossible fractions") {
    const std::vector<double> x{0.1}, y{0.2};
    const ScoreSet s = prepare_score_set(x, y);
    CHECK_THROWS_AS(min_caliper_search(s, 1.5, 20), Infeasible);
    CHECK_THROWS_AS(min_caliper_search(s, 0.0, 20), InvalidInput);
    CHECK_THROWS_AS(min_caliper_search(s, -0.3, 20), InvalidInput);
}

TEST_CASE("min caliper search brackets the true threshold") {
    rng::Engine e(105);
    for (int trial = 0; trial < 200; ++trial) {
        const ScoreSet s = t::scores_of(t::uniform_instance(e, t::uniform_int(e, 1, 40), t::uniform_int(e, 1, 40)));
        const double q = t::uniform(e, 0.05, 1.0);
        const unsigned iters = 30;
        const auto r = min_caliper_search(s, q, iters);
        const auto pairs_at = [&](double c) { return maximal_matching(s, CaliperSpec::constant(c)).pair_count(); };
        REQUIRE(pairs_at(r.caliper) >= r.target_pairs);
        REQUIRE(r.achieved_pairs == pairs_at(r.caliper));
        if (r.caliper > 0) {
            REQUIRE(pairs_at(r.lower) < r.target_pairs);
            REQUIRE(pairs_at(r.caliper - r.bracket_width) < r.target_pairs);
            const double lo = std::min(s.treated_scores.front(), s.control_scores.front());
            const double hi = std::max(s.treated_scores.back(), s.control_scores.back());
            REQUIRE(r.bracket_width == std::ldexp(hi - lo, -static_cast<int>(iters)));
            // The end points themselves carry midpoint rounding.
            REQUIRE(std::abs((r.caliper - r.lower) - r.bracket_width) <= 1e-15 * r.caliper);
        }
    }
}
