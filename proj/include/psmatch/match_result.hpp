#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "psmatch/caliper.hpp"
#include "psmatch/score_set.hpp"

namespace psmatch {

/// Positions into the sorted arrays of a ScoreSet.
struct MatchedPair {
    std::size_t treated;
    std::size_t control;

    friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
    friend auto operator<=>(const MatchedPair&, const MatchedPair&) = default;
};

struct MatchResult {
    std::vector<MatchedPair> pairs;
    // |X - Y| for each pair, aligned with `pairs`.
    std::vector<double> distances;
    // Controls received by each treated position; filled by 1-to-n matching only.
    std::vector<std::size_t> controls_per_treated;
    // Outer-loop iterations of the matcher.
    std::uint64_t loop_iterations = 0;
    // Inner interval probes (piecewise matcher) or tree nodes visited (tree GNNM).
    std::uint64_t scan_steps = 0;

    std::size_t pair_count() const noexcept { return pairs.size(); }

    void add(const ScoreSet& scores, std::size_t treated, std::size_t control);

    double total_distance() const;
    double max_distance() const;
    double mean_distance() const;
};

/// Pairs sorted lexicographically; for set comparisons across matchers.
std::vector<MatchedPair> sorted_pairs(const MatchResult& result);

/// Checks that no control repeats, no treated exceeds `treated_multiplicity`,
/// indices are in range, and every pair satisfies `caliper`. Returns an empty
/// string when valid, otherwise a description of the first problem.
std::string find_violation(const MatchResult& result, const ScoreSet& scores, const CaliperSpec& caliper,
                           std::size_t treated_multiplicity = 1);

}  // namespace psmatch
