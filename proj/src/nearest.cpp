#include "psmatch/nearest.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "psmatch/control_tree.hpp"
#include "psmatch/errors.hpp"

namespace psmatch {

MatchResult gnnm_sorted(const ScoreSet& scores, const CaliperSpec& caliper) {
    const auto& x = scores.treated_scores;
    const auto& y = scores.control_scores;
    const std::size_t l = y.size();

    // Doubly linked list over controls: cell c + 1 holds control c, cell 0
    // and cell l + 1 are the head and tail sentinels. Only the left links are
    // read once a cell is unlinked, so removal patches both neighbours.
    const std::size_t head = 0, tail = l + 1;
    std::vector<std::size_t> prev(l + 2), next(l + 2);
    for (std::size_t c = 0; c < l + 2; ++c) {
        prev[c] = c == 0 ? head : c - 1;
        next[c] = c + 1 == l + 2 ? tail : c + 1;
    }
    auto score = [&](std::size_t cell) { return y[cell - 1]; };

    MatchResult result;
    std::size_t cursor = next[head];  // first live cell with score >= current treated score
    for (std::size_t i = 0; i < x.size(); ++i) {
        ++result.loop_iterations;
        while (cursor != tail && score(cursor) < x[i]) {
            cursor = next[cursor];
            ++result.scan_steps;
        }
        const std::size_t below = prev[cursor];
        const bool has_below = below != head;
        const bool has_above = cursor != tail;
        if (!has_below && !has_above) break;

        std::size_t pick;
        if (has_below && (!has_above || std::abs(x[i] - score(below)) <= std::abs(x[i] - score(cursor)))) {
            pick = below;
        } else {
            pick = cursor;
        }
        if (!within_caliper(caliper, x[i], score(pick))) continue;

        result.add(scores, i, pick - 1);
        next[prev[pick]] = next[pick];
        prev[next[pick]] = prev[pick];
        if (pick == cursor) cursor = next[pick];
    }
    return result;
}

MatchResult gnnm_tree(const ScoreSet& scores, const CaliperSpec& caliper, const ProcessingOrder& order) {
    const auto& x = scores.treated_scores;
    const auto& y = scores.control_scores;
    ControlTree tree(y);

    MatchResult result;
    for (std::size_t i : treated_processing_order(scores, order)) {
        ++result.loop_iterations;
        if (tree.size() == 0) break;
        const auto near = tree.neighbors(x[i]);
        result.scan_steps += near.steps;

        std::int32_t pick = near.above;
        if (near.below != ControlTree::kNone &&
            (near.above == ControlTree::kNone || std::abs(x[i] - y[near.below]) <= std::abs(x[i] - y[near.above]))) {
            pick = near.below;
        }
        const auto control = static_cast<std::size_t>(pick);
        if (!within_caliper(caliper, x[i], y[control])) continue;
        result.add(scores, i, control);
        tree.remove(control);
    }
    return result;
}

namespace {

void require_equal_sizes(const ScoreSet& scores) {
    if (scores.treated_count() != scores.control_count()) {
        throw InvalidInput("complete matching requires equal group sizes, got " +
                           std::to_string(scores.treated_count()) + " treated and " +
                           std::to_string(scores.control_count()) + " controls");
    }
}

}  // namespace

MatchResult optimal_complete_matching(const ScoreSet& scores) {
    require_equal_sizes(scores);
    MatchResult result;
    for (std::size_t i = 0; i < scores.treated_count(); ++i) result.add(scores, i, i);
    result.loop_iterations = scores.treated_count();
    return result;
}

MatchResult anti_optimal_complete_matching(const ScoreSet& scores) {
    require_equal_sizes(scores);
    const std::size_t k = scores.treated_count();
    MatchResult result;
    for (std::size_t i = 0; i < k; ++i) result.add(scores, i, k - 1 - i);
    result.loop_iterations = k;
    return result;
}

MatchResult rematch_sorted(const MatchResult& input, const ScoreSet& scores, const CaliperSpec& caliper) {
    if (caliper.kind() == CaliperSpec::Kind::StepSum) {
        throw InvalidCaliper("rank rematching needs a unit-Lipschitz caliper");
    }
    if (const std::string problem = find_violation(input, scores, caliper); !problem.empty()) {
        throw InvalidInput("cannot rematch a malformed matching: " + problem);
    }

    // Sorted positions are in score order, so ranking by position ranks by score.
    std::vector<std::size_t> treated, control;
    treated.reserve(input.pairs.size());
    control.reserve(input.pairs.size());
    for (const auto& p : input.pairs) {
        treated.push_back(p.treated);
        control.push_back(p.control);
    }
    std::sort(treated.begin(), treated.end());
    std::sort(control.begin(), control.end());

    MatchResult result;
    result.loop_iterations = treated.size();
    for (std::size_t m = 0; m < treated.size(); ++m) {
        result.add(scores, treated[m], control[m]);
        if (!within_caliper(caliper, scores.treated_scores[treated[m]], scores.control_scores[control[m]])) {
            // Only reachable for Unchecked calipers that are not unit-Lipschitz.
            throw InvalidCaliper("rank rematching broke the caliper; it is not unit-Lipschitz");
        }
    }
    return result;
}

}  // namespace psmatch
