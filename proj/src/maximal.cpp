#include "psmatch/maximal.hpp"

#include <algorithm>
#include <cmath>

#include "psmatch/errors.hpp"

namespace psmatch {
namespace {

void require_lipschitz(const CaliperSpec& caliper, const char* who) {
    if (caliper.kind() == CaliperSpec::Kind::StepSum) {
        throw InvalidCaliper(std::string(who) +
                             " needs a unit-Lipschitz caliper; step-sum calipers go to the piecewise matcher");
    }
}

}  // namespace

MatchResult maximal_matching(const ScoreSet& scores, const CaliperSpec& caliper) {
    require_lipschitz(caliper, "maximal_matching");
    const auto& x = scores.treated_scores;
    const auto& y = scores.control_scores;
    const std::size_t k = x.size(), l = y.size();

    MatchResult result;
    result.pairs.reserve(std::min(k, l));
    result.distances.reserve(std::min(k, l));

    std::size_t i = 0, j = 0;
    while (i < k && j < l) {
        ++result.loop_iterations;
        if (within_caliper(caliper, x[i], y[j])) {
            result.add(scores, i, j);
            ++i;
            ++j;
        } else if (x[i] < y[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return result;
}

MatchResult maximal_matching_multi(const ScoreSet& scores, const CaliperSpec& caliper, std::size_t max_controls) {
    require_lipschitz(caliper, "maximal_matching_multi");
    if (max_controls == 0) throw InvalidInput("1-to-n matching needs n >= 1");
    const auto& x = scores.treated_scores;
    const auto& y = scores.control_scores;
    const std::size_t k = x.size(), l = y.size();

    MatchResult result;
    result.controls_per_treated.assign(k, 0);

    std::size_t i = 0, j = 0, taken = 0;
    while (i < k && j < l) {
        ++result.loop_iterations;
        if (within_caliper(caliper, x[i], y[j])) {
            result.add(scores, i, j);
            result.controls_per_treated[i] = ++taken;
            if (taken == max_controls) {
                taken = 0;
                ++i;
            }
            ++j;
        } else if (x[i] < y[j]) {
            taken = 0;
            ++i;
        } else {
            ++j;
        }
    }
    return result;
}

CaliperSearchResult min_caliper_search(const ScoreSet& scores, double fraction, unsigned iterations) {
    if (!(fraction > 0)) throw InvalidInput("target fraction must be positive");
    const std::size_t most = std::min(scores.treated_count(), scores.control_count());

    // Round up, forgiving the representation error of products such as 0.3 * 10.
    const double wanted = fraction * static_cast<double>(most);
    const double target = std::ceil(wanted - 1e-9 * std::max(1.0, wanted));

    CaliperSearchResult out;
    if (target > static_cast<double>(most)) {
        throw Infeasible("target of " + std::to_string(static_cast<long long>(target)) + " pairs exceeds the " +
                         std::to_string(most) + " pairs any matching can reach");
    }
    out.target_pairs = static_cast<std::size_t>(target);

    auto pairs_at = [&](double c) { return maximal_matching(scores, CaliperSpec::constant(c)).pair_count(); };

    out.achieved_pairs = pairs_at(0.0);
    if (out.achieved_pairs >= out.target_pairs) return out;

    const double lowest = std::min(scores.treated_scores.front(), scores.control_scores.front());
    const double highest = std::max(scores.treated_scores.back(), scores.control_scores.back());
    double lo = 0.0, hi = highest - lowest;
    std::size_t hi_pairs = pairs_at(hi);
    if (hi_pairs < out.target_pairs) {
        throw Infeasible("target of " + std::to_string(out.target_pairs) + " pairs is not reached even at caliper " +
                         std::to_string(hi));
    }
    // Halving the width is exact, so the reported width is exactly
    // range * 2^-iterations; hi - lo would pick up midpoint rounding.
    double width = hi;
    for (unsigned step = 0; step < iterations; ++step) {
        width /= 2;
        const double mid = lo + width;
        const std::size_t got = pairs_at(mid);
        if (got >= out.target_pairs) {
            hi = mid;
            hi_pairs = got;
        } else {
            lo = mid;
        }
    }
    out.caliper = hi;
    out.lower = lo;
    out.bracket_width = width;
    out.achieved_pairs = hi_pairs;
    return out;
}

}  // namespace psmatch
