#include "psmatch/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "psmatch/errors.hpp"

namespace psmatch::oracle {
namespace {

void guard(std::size_t treated, std::size_t control) {
    if (treated != 0 && control > kMaxGraphProduct / treated) {
        throw InvalidInput("oracle size guard: " + std::to_string(treated) + " x " + std::to_string(control) +
                           " exceeds " + std::to_string(kMaxGraphProduct));
    }
}

bool augment(const std::vector<std::vector<std::size_t>>& adjacency, std::size_t u, std::vector<char>& seen,
             std::vector<std::size_t>& owner) {
    for (std::size_t v : adjacency[u]) {
        if (seen[v]) continue;
        seen[v] = 1;
        if (owner[v] == SIZE_MAX || augment(adjacency, owner[v], seen, owner)) {
            owner[v] = u;
            return true;
        }
    }
    return false;
}

std::size_t kuhn(const std::vector<std::vector<std::size_t>>& adjacency, std::size_t right_count) {
    std::vector<std::size_t> owner(right_count, SIZE_MAX);
    std::size_t size = 0;
    for (std::size_t u = 0; u < adjacency.size(); ++u) {
        std::vector<char> seen(right_count, 0);
        size += augment(adjacency, u, seen, owner);
    }
    return size;
}

double power(double base, double exponent) {
    // Integer exponents by repeated multiplication so dyadic inputs stay exact.
    if (exponent == std::floor(exponent) && exponent <= 16) {
        double out = 1.0;
        for (int e = 0; e < static_cast<int>(exponent); ++e) out *= base;
        return out;
    }
    return std::pow(base, exponent);
}

void check_complete(const ScoreSet& scores, double exponent) {
    if (scores.treated_count() != scores.control_count()) throw InvalidInput("complete oracle needs K == L");
    if (scores.treated_count() > kMaxCompleteSize) throw InvalidInput("complete oracle size guard exceeded");
    if (!(exponent >= 1)) throw InvalidInput("cost exponent must be at least 1");
}

template <typename Better>
CompleteOptimum enumerate(const ScoreSet& scores, double exponent, Better better) {
    check_complete(scores, exponent);
    std::vector<std::size_t> perm(scores.treated_count());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    CompleteOptimum best{complete_cost(scores, perm, exponent), perm};
    while (std::next_permutation(perm.begin(), perm.end())) {
        const double cost = complete_cost(scores, perm, exponent);
        if (better(cost, best.cost)) best = {cost, perm};
    }
    return best;
}

}  // namespace

FeasibilityGraph feasibility_graph(const ScoreSet& scores, const CaliperSpec& caliper) {
    FeasibilityGraph graph;
    graph.control_count = scores.control_count();
    graph.adjacency.resize(scores.treated_count());
    for (std::size_t i = 0; i < scores.treated_count(); ++i) {
        const double x = scores.treated_scores[i];
        for (std::size_t j = 0; j < scores.control_count(); ++j) {
            const double y = scores.control_scores[j];
            if (std::abs(x - y) <= caliper(x, y)) graph.adjacency[i].push_back(j);
        }
    }
    return graph;
}

std::size_t max_matching(const FeasibilityGraph& graph) {
    guard(graph.treated_count(), graph.control_count);
    return kuhn(graph.adjacency, graph.control_count);
}

std::size_t b_matching(const FeasibilityGraph& graph, std::size_t copies) {
    if (copies == 0) throw InvalidInput("copies must be positive");
    guard(graph.treated_count() * copies, graph.control_count);
    std::vector<std::vector<std::size_t>> replicated;
    replicated.reserve(graph.treated_count() * copies);
    for (const auto& row : graph.adjacency) {
        for (std::size_t c = 0; c < copies; ++c) replicated.push_back(row);
    }
    return kuhn(replicated, graph.control_count);
}

std::size_t b_matching_flow(const FeasibilityGraph& graph, std::size_t copies) {
    if (copies == 0) throw InvalidInput("copies must be positive");
    guard(graph.treated_count() * copies, graph.control_count);

    // Vertices: source, treated..., control..., sink. Dense residual capacities.
    const std::size_t k = graph.treated_count(), l = graph.control_count;
    const std::size_t n = k + l + 2, source = 0, sink = n - 1;
    std::vector<std::vector<long>> cap(n, std::vector<long>(n, 0));
    for (std::size_t i = 0; i < k; ++i) {
        cap[source][1 + i] = static_cast<long>(copies);
        for (std::size_t j : graph.adjacency[i]) cap[1 + i][1 + k + j] = 1;
    }
    for (std::size_t j = 0; j < l; ++j) cap[1 + k + j][sink] = 1;

    std::size_t flow = 0;
    for (;;) {
        std::vector<std::size_t> from(n, SIZE_MAX);
        from[source] = source;
        std::deque<std::size_t> queue{source};
        while (!queue.empty() && from[sink] == SIZE_MAX) {
            const std::size_t u = queue.front();
            queue.pop_front();
            for (std::size_t v = 0; v < n; ++v) {
                if (cap[u][v] > 0 && from[v] == SIZE_MAX) {
                    from[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if (from[sink] == SIZE_MAX) return flow;
        for (std::size_t v = sink; v != source; v = from[v]) {
            --cap[from[v]][v];
            ++cap[v][from[v]];
        }
        ++flow;
    }
}

MatchResult gnnm_naive(const ScoreSet& scores, const CaliperSpec& caliper, const ProcessingOrder& order) {
    const auto& x = scores.treated_scores;
    const auto& y = scores.control_scores;
    std::vector<char> used(y.size(), 0);
    MatchResult result;
    for (std::size_t i : treated_processing_order(scores, order)) {
        ++result.loop_iterations;
        // Key: distance, then below-side first, then adjacency to x in sorted order.
        std::size_t best = SIZE_MAX;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(x[i] - y[j]);
            const bool j_below = y[j] < x[i];
            bool take = false;
            if (best == SIZE_MAX || d < best_d) {
                take = true;
            } else if (d == best_d) {
                const bool best_below = y[best] < x[i];
                if (j_below != best_below) {
                    take = j_below;
                } else {
                    take = j_below ? j > best : j < best;
                }
            }
            if (take) {
                best = j;
                best_d = d;
            }
        }
        if (best == SIZE_MAX) break;
        if (best_d <= caliper(x[i], y[best])) {
            used[best] = 1;
            result.add(scores, i, best);
        }
    }
    return result;
}

double complete_cost(const ScoreSet& scores, const std::vector<std::size_t>& permutation, double exponent) {
    double cost = 0.0;
    for (std::size_t i = 0; i < permutation.size(); ++i) {
        cost += power(std::abs(scores.treated_scores[i] - scores.control_scores[permutation[i]]), exponent);
    }
    return cost;
}

double complete_max_distance(const ScoreSet& scores, const std::vector<std::size_t>& permutation) {
    double worst = 0.0;
    for (std::size_t i = 0; i < permutation.size(); ++i) {
        worst = std::max(worst, std::abs(scores.treated_scores[i] - scores.control_scores[permutation[i]]));
    }
    return worst;
}

CompleteOptimum min_cost_complete(const ScoreSet& scores, double exponent) {
    return enumerate(scores, exponent, [](double a, double b) { return a < b; });
}

CompleteOptimum max_cost_complete(const ScoreSet& scores, double exponent) {
    return enumerate(scores, exponent, [](double a, double b) { return a > b; });
}

double min_bottleneck_complete(const ScoreSet& scores) {
    check_complete(scores, 1.0);
    std::vector<std::size_t> perm(scores.treated_count());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = complete_max_distance(scores, perm);
    while (std::next_permutation(perm.begin(), perm.end())) {
        best = std::min(best, complete_max_distance(scores, perm));
    }
    return best;
}

}  // namespace psmatch::oracle
