#include <sstream>

#include "psmatch/errors.hpp"
#include "psmatch/maximal.hpp"

namespace psmatch {
namespace {

std::vector<std::size_t> locate_bounds(const std::vector<double>& sorted, const std::vector<std::size_t>& perm,
                                       std::span<const double> cuts, const char* group) {
    if (cuts.size() < 2) throw InvalidInput(std::string(group) + " cut list needs at least two points");
    for (std::size_t u = 0; u + 1 < cuts.size(); ++u) {
        if (!(cuts[u] < cuts[u + 1])) {
            throw InvalidInput(std::string(group) + " cut list is not strictly increasing at " + std::to_string(u + 1));
        }
    }
    std::vector<std::size_t> bounds{0};
    std::size_t cell = 0;
    for (std::size_t p = 0; p < sorted.size(); ++p) {
        const double s = sorted[p];
        if (s < cuts.front() || s >= cuts.back()) {
            std::ostringstream msg;
            msg << group << " score " << s << " at row " << perm[p] << " lies outside the cut range ["
                << cuts.front() << ", " << cuts.back() << ")";
            throw InvalidInput(msg.str());
        }
        const std::size_t before = cell;
        while (s >= cuts[cell + 1]) ++cell;
        if (p > 0 && cell != before) bounds.push_back(p);
    }
    if (!sorted.empty()) bounds.push_back(sorted.size());
    return bounds;
}

// One side of the matcher: interval bounds, per-interval cursors, and the
// front interval. `cursor[front]` is always the front position; a trailing
// sentinel cursor equal to the group size marks exhaustion.
class Side {
public:
    explicit Side(const std::vector<std::size_t>& bounds) : bounds_(bounds), cursor_(bounds) {}

    std::size_t intervals() const { return bounds_.size() - 1; }
    std::size_t front() const { return cursor_[front_]; }
    std::size_t front_interval() const { return front_; }
    bool open(std::size_t u) const { return cursor_[u] < bounds_[u + 1]; }
    std::size_t cursor(std::size_t u) const { return cursor_[u]; }

    // Consumes the front object and moves to the first interval that still
    // has unused objects.
    void advance_front() {
        ++cursor_[front_];
        if (cursor_[front_] == bounds_[front_ + 1]) {
            std::size_t next = front_ + 1;
            while (next < intervals() && cursor_[next] == bounds_[next + 1]) ++next;
            front_ = next;
        }
    }

    // Consumes object `u`'s cursor; advances the front when u is the front.
    void consume(std::size_t u) {
        if (u == front_) {
            advance_front();
        } else {
            ++cursor_[u];
        }
    }

private:
    const std::vector<std::size_t>& bounds_;
    std::vector<std::size_t> cursor_;
    std::size_t front_ = 0;
};

}  // namespace

IntervalIndex build_interval_index(const ScoreSet& scores, std::span<const double> treated_cuts,
                                   std::span<const double> control_cuts) {
    IntervalIndex index;
    index.treated_bounds = locate_bounds(scores.treated_scores, scores.treated_perm, treated_cuts, "treated");
    index.control_bounds = locate_bounds(scores.control_scores, scores.control_perm, control_cuts, "control");
    return index;
}

IntervalIndex build_interval_index(const ScoreSet& scores, const CaliperSpec& caliper) {
    if (!caliper.piecewise_certified()) {
        throw InvalidCaliper("interval index needs a step-sum caliper");
    }
    return build_interval_index(scores, caliper.treated_cuts(), caliper.control_cuts());
}

MatchResult maximal_matching_piecewise(const ScoreSet& scores, const CaliperSpec& caliper) {
    if (!caliper.piecewise_certified()) {
        throw InvalidCaliper("maximal_matching_piecewise needs a step-sum caliper");
    }
    const IntervalIndex index = build_interval_index(scores, caliper);
    const auto& x = scores.treated_scores;
    const auto& y = scores.control_scores;
    const std::size_t k = x.size(), l = y.size();

    Side treated(index.treated_bounds);
    Side control(index.control_bounds);

    MatchResult result;
    while (treated.front() < k && control.front() < l) {
        ++result.loop_iterations;
        const std::size_t i = treated.front();
        const std::size_t j = control.front();
        bool matched = false;
        if (x[i] < y[j]) {
            // Offer X_i to the first unused control of each remaining interval.
            for (std::size_t v = control.front_interval(); v < control.intervals(); ++v) {
                ++result.scan_steps;
                if (control.open(v) && within_caliper(caliper, x[i], y[control.cursor(v)])) {
                    result.add(scores, i, control.cursor(v));
                    treated.advance_front();
                    control.consume(v);
                    matched = true;
                    break;
                }
            }
            if (!matched) treated.advance_front();
        } else {
            for (std::size_t u = treated.front_interval(); u < treated.intervals(); ++u) {
                ++result.scan_steps;
                if (treated.open(u) && within_caliper(caliper, x[treated.cursor(u)], y[j])) {
                    result.add(scores, treated.cursor(u), j);
                    control.advance_front();
                    treated.consume(u);
                    matched = true;
                    break;
                }
            }
            if (!matched) control.advance_front();
        }
    }
    return result;
}

}  // namespace psmatch
