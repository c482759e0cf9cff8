#pragma once

#include <cstddef>
#include <vector>

#include "psmatch/caliper.hpp"
#include "psmatch/match_result.hpp"
#include "psmatch/score_set.hpp"

// Brute-force reference implementations. Slow on purpose and independent of
// the production matchers; the size guards are hard errors.
namespace psmatch::oracle {

inline constexpr std::size_t kMaxGraphProduct = 10'000;
inline constexpr std::size_t kMaxCompleteSize = 7;

/// adjacency[i] lists every control j with |X_i - Y_j| <= c(X_i, Y_j).
struct FeasibilityGraph {
    std::size_t control_count = 0;
    std::vector<std::vector<std::size_t>> adjacency;

    std::size_t treated_count() const noexcept { return adjacency.size(); }
};

FeasibilityGraph feasibility_graph(const ScoreSet& scores, const CaliperSpec& caliper);

/// Maximum bipartite matching size via augmenting paths (Kuhn).
std::size_t max_matching(const FeasibilityGraph& graph);

/// Same on the graph with each treated vertex replicated `copies` times.
std::size_t b_matching(const FeasibilityGraph& graph, std::size_t copies);

/// Capacitated max-flow formulation of the 1-to-n problem (source -> treated
/// with capacity `copies`, unit edges elsewhere), solved by BFS augmentation.
std::size_t b_matching_flow(const FeasibilityGraph& graph, std::size_t copies);

/// Quadratic-time GNNM with the library's tie rule.
MatchResult gnnm_naive(const ScoreSet& scores, const CaliperSpec& caliper, const ProcessingOrder& order);

struct CompleteOptimum {
    double cost = 0.0;
    // permutation[i] is the control matched to sorted treated i.
    std::vector<std::size_t> permutation;
};

/// sum_i |X_i - Y_perm(i)|^p, summed over i in increasing order.
double complete_cost(const ScoreSet& scores, const std::vector<std::size_t>& permutation, double exponent);

/// max_i |X_i - Y_perm(i)|.
double complete_max_distance(const ScoreSet& scores, const std::vector<std::size_t>& permutation);

/// Enumerates all K! complete matchings. Requires K == L <= kMaxCompleteSize and p >= 1.
CompleteOptimum min_cost_complete(const ScoreSet& scores, double exponent);
CompleteOptimum max_cost_complete(const ScoreSet& scores, double exponent);
/// Smallest achievable maximum within-pair distance.
double min_bottleneck_complete(const ScoreSet& scores);

}  // namespace psmatch::oracle
