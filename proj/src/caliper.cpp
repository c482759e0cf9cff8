#include "psmatch/caliper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "psmatch/errors.hpp"

namespace psmatch {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string piece_name(const char* table, std::size_t index) {
    return std::string(table) + " piece " + std::to_string(index);
}

// Returns the largest |slope|; throws on a slope above 1.
double check_knots(const std::vector<Knot>& knots, const char* table) {
    if (knots.empty()) throw InvalidCaliper(std::string(table) + " has no knots");
    for (std::size_t k = 0; k < knots.size(); ++k) {
        if (!std::isfinite(knots[k].x) || !std::isfinite(knots[k].value)) {
            throw InvalidCaliper(std::string(table) + " knot " + std::to_string(k) + " is not finite");
        }
    }
    double max_slope = 0.0;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const double dx = knots[k + 1].x - knots[k].x;
        if (!(dx > 0)) {
            throw InvalidCaliper(std::string(table) + " knots are not strictly increasing at knot " +
                                 std::to_string(k + 1));
        }
        const double slope = std::abs(knots[k + 1].value - knots[k].value) / dx;
        if (slope > 1.0) {
            std::ostringstream msg;
            msg << piece_name(table, k) << " [" << knots[k].x << ", " << knots[k + 1].x << "] has slope " << slope
                << " with magnitude above 1";
            throw InvalidCaliper(msg.str());
        }
        max_slope = std::max(max_slope, slope);
    }
    return max_slope;
}

void check_steps(const std::vector<Step>& steps, const char* table) {
    if (steps.empty()) throw InvalidCaliper(std::string(table) + " has no steps");
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const Step& step = steps[k];
        if (std::isnan(step.threshold) || step.threshold == kInf || (k > 0 && !std::isfinite(step.threshold))) {
            throw InvalidCaliper(piece_name(table, k) + " has an invalid threshold");
        }
        if (!std::isfinite(step.value)) throw InvalidCaliper(piece_name(table, k) + " value is not finite");
        if (step.value < 0) throw InvalidCaliper(piece_name(table, k) + " value is negative");
        if (k > 0) {
            if (!(step.threshold > steps[k - 1].threshold)) {
                throw InvalidCaliper(piece_name(table, k) + " threshold is not above the previous one");
            }
            if (step.value < steps[k - 1].value) {
                throw InvalidCaliper(piece_name(table, k) + " decreases the step function");
            }
        }
    }
}

double eval_linear(const std::vector<Knot>& knots, double x) {
    if (x <= knots.front().x) return knots.front().value;
    if (x >= knots.back().x) return knots.back().value;
    const auto hi = std::upper_bound(knots.begin(), knots.end(), x, [](double v, const Knot& k) { return v < k.x; });
    const auto lo = hi - 1;
    return lo->value + (hi->value - lo->value) * (x - lo->x) / (hi->x - lo->x);
}

double eval_steps(const std::vector<Step>& steps, double x) {
    const auto it =
        std::upper_bound(steps.begin(), steps.end(), x, [](double v, const Step& s) { return v < s.threshold; });
    return it == steps.begin() ? steps.front().value : (it - 1)->value;
}

std::vector<double> cuts_from(const std::vector<Step>& steps) {
    std::vector<double> cuts{-kInf};
    for (std::size_t k = 1; k < steps.size(); ++k) cuts.push_back(steps[k].threshold);
    cuts.push_back(kInf);
    return cuts;
}

}  // namespace

CaliperSpec CaliperSpec::constant(double width) {
    if (std::isnan(width) || width < 0) {
        throw InvalidCaliper("constant caliper must be nonnegative, got " + std::to_string(width));
    }
    CaliperSpec spec;
    spec.kind_ = Kind::Constant;
    spec.constant_ = width;
    return spec;
}

CaliperSpec CaliperSpec::separable(std::vector<Knot> g, std::vector<Knot> h) {
    check_knots(g, "g");
    check_knots(h, "h");
    CaliperSpec spec;
    spec.kind_ = Kind::SeparableLipschitz;
    spec.g_ = std::move(g);
    spec.h_ = std::move(h);
    return spec;
}

CaliperSpec CaliperSpec::step_sum(std::vector<Step> f, std::vector<Step> s) {
    check_steps(f, "f");
    check_steps(s, "s");
    CaliperSpec spec;
    spec.kind_ = Kind::StepSum;
    spec.a_cuts_ = cuts_from(f);
    spec.b_cuts_ = cuts_from(s);
    spec.f_ = std::move(f);
    spec.s_ = std::move(s);
    return spec;
}

CaliperSpec CaliperSpec::unchecked(std::function<double(double, double)> fn) {
    if (!fn) throw InvalidCaliper("unchecked caliper needs a callable");
    CaliperSpec spec;
    spec.kind_ = Kind::Unchecked;
    spec.fn_ = std::move(fn);
    return spec;
}

double CaliperSpec::treated_part(double x) const {
    switch (kind_) {
        case Kind::SeparableLipschitz: return eval_linear(g_, x);
        case Kind::StepSum: return eval_steps(f_, x);
        default: return 0.0;
    }
}

double CaliperSpec::control_part(double y) const {
    switch (kind_) {
        case Kind::SeparableLipschitz: return eval_linear(h_, y);
        case Kind::StepSum: return eval_steps(s_, y);
        default: return 0.0;
    }
}

double CaliperSpec::operator()(double x, double y) const {
    switch (kind_) {
        case Kind::Constant: return constant_;
        case Kind::SeparableLipschitz:
        case Kind::StepSum: return treated_part(x) + control_part(y);
        case Kind::Unchecked: return fn_(x, y);
    }
    return 0.0;
}

const char* to_string(CaliperSpec::Kind kind) {
    switch (kind) {
        case CaliperSpec::Kind::Constant: return "constant";
        case CaliperSpec::Kind::SeparableLipschitz: return "separable-lipschitz";
        case CaliperSpec::Kind::StepSum: return "step-sum";
        case CaliperSpec::Kind::Unchecked: return "unchecked";
    }
    return "?";
}

CaliperReport validate_caliper(const CaliperSpec& spec, const ScoreSet& scores) {
    CaliperReport report;
    report.kind = spec.kind();
    report.lipschitz_certified = spec.lipschitz_certified();
    report.piecewise_certified = spec.piecewise_certified();

    switch (spec.kind()) {
        case CaliperSpec::Kind::Constant:
            if (std::isnan(spec.constant_value()) || spec.constant_value() < 0) {
                throw InvalidCaliper("constant caliper is negative");
            }
            break;
        case CaliperSpec::Kind::SeparableLipschitz: {
            std::vector<Knot> g(spec.g_knots().begin(), spec.g_knots().end());
            std::vector<Knot> h(spec.h_knots().begin(), spec.h_knots().end());
            report.max_abs_slope = std::max(check_knots(g, "g"), check_knots(h, "h"));
            break;
        }
        case CaliperSpec::Kind::StepSum:
            check_steps({spec.f_steps().begin(), spec.f_steps().end()}, "f");
            check_steps({spec.s_steps().begin(), spec.s_steps().end()}, "s");
            break;
        case CaliperSpec::Kind::Unchecked:
            return report;
    }

    if (scores.treated_count() == 0 || scores.control_count() == 0) {
        report.data_checked = true;
        return report;
    }

    // Every family here is separable, so the minimum over all data pairs is
    // the sum of the per-group minima.
    std::size_t arg_x = 0, arg_y = 0;
    double min_x = kInf, min_y = kInf;
    for (std::size_t i = 0; i < scores.treated_count(); ++i) {
        const double v = spec.treated_part(scores.treated_scores[i]);
        if (v < min_x) min_x = v, arg_x = i;
    }
    for (std::size_t j = 0; j < scores.control_count(); ++j) {
        const double v = spec.control_part(scores.control_scores[j]);
        if (v < min_y) min_y = v, arg_y = j;
    }
    const double x = scores.treated_scores[arg_x];
    const double y = scores.control_scores[arg_y];
    report.min_on_data = spec(x, y);
    report.data_checked = true;
    if (report.min_on_data < 0) {
        std::ostringstream msg;
        msg << "caliper is negative (" << report.min_on_data << ") at treated row " << scores.treated_perm[arg_x]
            << " (score " << x << ") and control row " << scores.control_perm[arg_y] << " (score " << y << ")";
        throw InvalidCaliper(msg.str());
    }
    return report;
}

}  // namespace psmatch
