#pragma once

#include "psmatch/caliper.hpp"
#include "psmatch/match_result.hpp"
#include "psmatch/score_set.hpp"

namespace psmatch {

// Greedy nearest-neighbor matching without replacement (GNNM).
//
// Treated objects are processed one at a time. Each looks up its nearest
// unmatched control and is paired with it when that control satisfies the
// caliper; there is no fallback to the second-nearest control.
//
// Nearest-neighbor ties go to the control below the treated score (the
// smaller score). Among equally distant controls on the same side, the one
// adjacent to the treated score in sorted order wins, i.e. the largest
// position below or the smallest position at-or-above.

/// Treated objects in sorted order against a doubly linked list of controls.
/// O(K + L) total work.
MatchResult gnnm_sorted(const ScoreSet& scores, const CaliperSpec& caliper);

/// Treated objects in the given order against a ControlTree. O(N log N).
/// scan_steps accumulates the number of tree search steps.
MatchResult gnnm_tree(const ScoreSet& scores, const CaliperSpec& caliper, const ProcessingOrder& order);

/// Pairs sorted treated i with sorted control i. Requires K == L.
/// Minimizes sum phi(X - Y) for every convex nonnegative phi, and the
/// maximum within-pair distance, over all complete matchings.
MatchResult optimal_complete_matching(const ScoreSet& scores);

/// Pairs sorted treated i with sorted control K-1-i. Requires K == L.
/// Maximizes sum phi(X - Y) for every convex nonnegative phi.
MatchResult anti_optimal_complete_matching(const ScoreSet& scores);

/// Re-pairs the matched objects of `result` by rank: the j-th smallest
/// matched treated with the j-th smallest matched control.
///
/// For a unit-Lipschitz caliper the new pairs satisfy the caliper whenever
/// the old ones did, and neither the total nor the maximum distance grows.
/// Rejects StepSum calipers (rank pairing can break them) and malformed
/// input: repeated indices or pairs outside the caliper.
MatchResult rematch_sorted(const MatchResult& result, const ScoreSet& scores, const CaliperSpec& caliper);

}  // namespace psmatch
