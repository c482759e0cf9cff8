#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "psmatch/score_set.hpp"

namespace psmatch {

/// Knot of a piecewise-linear function: value at abscissa `x`.
struct Knot {
    double x;
    double value;
};

/// Right-open step: the function equals `value` on [threshold, next threshold).
struct Step {
    double threshold;
    double value;
};

/// Variable-width caliper c(x, y), where x is a treated score and y a control score.
///
/// Three families are certified by construction:
///   - Constant:           c(x, y) = w, w >= 0.
///   - SeparableLipschitz: c(x, y) = g(x) + h(y), g and h piecewise linear with
///                         every slope in [-1, 1]. Outside the knot range each
///                         function stays at its end value.
///   - StepSum:            c(x, y) = f(x) + s(y), f and s nondecreasing,
///                         nonnegative step functions. Below the first
///                         threshold a table takes its first value.
///
/// The first two satisfy |c(x,y) - c(x+t,y)| <= |t| and the same in y, which is
/// what the linear-scan matchers need. StepSum only satisfies the weaker
/// piecewise conditions and is routed to the interval-aware matcher.
///
/// Unchecked wraps an arbitrary callable; nothing is verified and any
/// optimality claim becomes the caller's responsibility.
///
/// Factories throw InvalidCaliper naming the offending piece.
class CaliperSpec {
public:
    enum class Kind { Constant, SeparableLipschitz, StepSum, Unchecked };

    static CaliperSpec constant(double width);
    static CaliperSpec separable(std::vector<Knot> g, std::vector<Knot> h);
    static CaliperSpec step_sum(std::vector<Step> f, std::vector<Step> s);
    static CaliperSpec unchecked(std::function<double(double, double)> fn);

    double operator()(double treated_score, double control_score) const;

    Kind kind() const noexcept { return kind_; }
    double constant_value() const noexcept { return constant_; }
    std::span<const Knot> g_knots() const noexcept { return g_; }
    std::span<const Knot> h_knots() const noexcept { return h_; }
    std::span<const Step> f_steps() const noexcept { return f_; }
    std::span<const Step> s_steps() const noexcept { return s_; }

    /// Interval cut points over treated (a) and control (b) scores for
    /// StepSum calipers: -inf, each interior threshold, +inf. Empty otherwise.
    std::span<const double> treated_cuts() const noexcept { return a_cuts_; }
    std::span<const double> control_cuts() const noexcept { return b_cuts_; }

    /// Satisfies the unit-Lipschitz conditions (Constant, SeparableLipschitz).
    bool lipschitz_certified() const noexcept {
        return kind_ == Kind::Constant || kind_ == Kind::SeparableLipschitz;
    }
    /// Satisfies the piecewise conditions with known cut points (StepSum).
    bool piecewise_certified() const noexcept { return kind_ == Kind::StepSum; }

    /// Separable part in the treated argument, g(x) or f(x).
    double treated_part(double x) const;
    /// Separable part in the control argument, h(y) or s(y).
    double control_part(double y) const;

private:
    CaliperSpec() = default;

    Kind kind_ = Kind::Constant;
    double constant_ = 0.0;
    std::vector<Knot> g_, h_;
    std::vector<Step> f_, s_;
    std::vector<double> a_cuts_, b_cuts_;
    std::function<double(double, double)> fn_;
};

const char* to_string(CaliperSpec::Kind kind);

struct CaliperReport {
    CaliperSpec::Kind kind;
    bool lipschitz_certified = false;
    bool piecewise_certified = false;
    // False only for Unchecked calipers, which are not sampled.
    bool data_checked = false;
    // Smallest c(X_i, Y_j) over all data pairs when data_checked.
    double min_on_data = 0.0;
    // Largest |slope| over all linear pieces (SeparableLipschitz only).
    double max_abs_slope = 0.0;
};

/// Re-checks the structural conditions of `spec` and verifies c(X_i, Y_j) >= 0
/// for every treated/control pair of `scores` (in O(K + L) for the separable
/// families). Throws InvalidCaliper naming the violating piece or pair.
CaliperReport validate_caliper(const CaliperSpec& spec, const ScoreSet& scores);

/// |x - y| <= c(x, y), compared exactly.
inline bool within_caliper(const CaliperSpec& spec, double treated_score, double control_score) {
    const double d = treated_score - control_score;
    return (d < 0 ? -d : d) <= spec(treated_score, control_score);
}

}  // namespace psmatch
