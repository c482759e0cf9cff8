#include "psmatch/match_result.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace psmatch {

void MatchResult::add(const ScoreSet& scores, std::size_t treated, std::size_t control) {
    pairs.push_back({treated, control});
    distances.push_back(std::abs(scores.treated_scores[treated] - scores.control_scores[control]));
}

double MatchResult::total_distance() const {
    double sum = 0.0;
    for (double d : distances) sum += d;
    return sum;
}

double MatchResult::max_distance() const {
    double worst = 0.0;
    for (double d : distances) worst = std::max(worst, d);
    return worst;
}

double MatchResult::mean_distance() const {
    return distances.empty() ? 0.0 : total_distance() / static_cast<double>(distances.size());
}

std::vector<MatchedPair> sorted_pairs(const MatchResult& result) {
    std::vector<MatchedPair> out = result.pairs;
    std::sort(out.begin(), out.end());
    return out;
}

std::string find_violation(const MatchResult& result, const ScoreSet& scores, const CaliperSpec& caliper,
                           std::size_t treated_multiplicity) {
    std::ostringstream msg;
    if (result.distances.size() != result.pairs.size()) return "distances are not aligned with pairs";
    std::vector<std::size_t> treated_use(scores.treated_count(), 0);
    std::vector<bool> control_used(scores.control_count(), false);
    for (std::size_t m = 0; m < result.pairs.size(); ++m) {
        const auto [i, j] = result.pairs[m];
        if (i >= scores.treated_count() || j >= scores.control_count()) {
            msg << "pair " << m << " is out of range";
            return msg.str();
        }
        if (++treated_use[i] > treated_multiplicity) {
            msg << "treated " << i << " is used more than " << treated_multiplicity << " time(s)";
            return msg.str();
        }
        if (control_used[j]) {
            msg << "control " << j << " is used twice";
            return msg.str();
        }
        control_used[j] = true;
        const double x = scores.treated_scores[i];
        const double y = scores.control_scores[j];
        if (!within_caliper(caliper, x, y)) {
            msg << "pair (" << i << ", " << j << ") with scores " << x << ", " << y << " breaks the caliper";
            return msg.str();
        }
    }
    return {};
}

}  // namespace psmatch
