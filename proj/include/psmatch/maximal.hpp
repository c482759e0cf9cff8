#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "psmatch/caliper.hpp"
#include "psmatch/match_result.hpp"
#include "psmatch/score_set.hpp"

namespace psmatch {

/// Maximum-cardinality one-to-one matching under a unit-Lipschitz caliper.
///
/// Single merge-style pass over the sorted groups: a feasible front pair is
/// taken, otherwise the smaller front score is dropped (the control when the
/// fronts tie). Pairs come out non-crossing, and loop_iterations <= K + L.
///
/// Accepts Constant, SeparableLipschitz and Unchecked calipers; StepSum throws
/// InvalidCaliper (use maximal_matching_piecewise).
MatchResult maximal_matching(const ScoreSet& scores, const CaliperSpec& caliper);

/// 1-to-n variant: each treated takes up to `max_controls` controls, each
/// control is used once, and the number of matched controls is maximal.
/// controls_per_treated is filled. With max_controls == 1 the result equals
/// maximal_matching.
MatchResult maximal_matching_multi(const ScoreSet& scores, const CaliperSpec& caliper, std::size_t max_controls);

/// Positions of the interval boundaries within the sorted groups.
///
/// Treated interval u covers sorted positions [treated_bounds[u],
/// treated_bounds[u+1]); all its scores lie in one cut interval [a_k, a_{k+1}).
/// Cut intervals holding no scores are dropped, so every interval is
/// non-empty; an empty group has the single bound {0}.
struct IntervalIndex {
    std::vector<std::size_t> treated_bounds;
    std::vector<std::size_t> control_bounds;

    std::size_t treated_intervals() const noexcept { return treated_bounds.size() - 1; }
    std::size_t control_intervals() const noexcept { return control_bounds.size() - 1; }
};

/// Linear pass locating the cut intervals of a StepSum caliper.
IntervalIndex build_interval_index(const ScoreSet& scores, const CaliperSpec& caliper);

/// Same with explicit cut lists, which must be strictly increasing and cover
/// every score on the right-open convention; otherwise InvalidInput names the
/// uncovered score.
IntervalIndex build_interval_index(const ScoreSet& scores, std::span<const double> treated_cuts,
                                   std::span<const double> control_cuts);

/// Maximum-cardinality one-to-one matching under a StepSum caliper.
///
/// Keeps a cursor per interval on each side. The smaller of the two front
/// scores is offered to the first unused object of every later interval of
/// the other group; the first feasible one is taken, otherwise the front
/// object is discarded. loop_iterations <= K + L and scan_steps counts the
/// interval probes, bounded by (U + V) per iteration.
MatchResult maximal_matching_piecewise(const ScoreSet& scores, const CaliperSpec& caliper);

struct CaliperSearchResult {
    // Smallest constant caliper found that reaches the target; upper end of
    // the final bracket.
    double caliper = 0.0;
    // Lower end of the final bracket; fails to reach the target unless the
    // search returned 0 straight away.
    double lower = 0.0;
    // (max score - min score) * 2^-iterations, or 0 when c = 0 suffices.
    double bracket_width = 0.0;
    std::size_t target_pairs = 0;
    std::size_t achieved_pairs = 0;
};

/// Bisection for the minimal constant caliper under which maximal_matching
/// pairs at least ceil(fraction * min(K, L)) objects.
///
/// The bracket starts at [0, max score - min score]. If c = 0 already
/// suffices the result is 0. Each of `iterations` steps halves the bracket.
/// fraction must lie in (0, 1]; a fraction above 1 asks for more pairs than
/// can exist and throws Infeasible.
CaliperSearchResult min_caliper_search(const ScoreSet& scores, double fraction, unsigned iterations);

}  // namespace psmatch
