#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "psmatch/caliper.hpp"
#include "psmatch/random.hpp"
#include "psmatch/score_set.hpp"

namespace psmatch::testing {

struct Instance {
    std::vector<double> treated;
    std::vector<double> control;
};

inline double uniform(rng::Engine& e, double lo, double hi) { return lo + (hi - lo) * rng::uniform_open01(e); }

inline std::size_t uniform_int(rng::Engine& e, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng::uniform_below(e, hi - lo + 1));
}

// Scores on {0, 1/steps, ..., 1}; a coarse grid produces plenty of ties.
inline double grid_score(rng::Engine& e, std::size_t steps) {
    return static_cast<double>(rng::uniform_below(e, steps + 1)) / static_cast<double>(steps);
}

inline Instance grid_instance(rng::Engine& e, std::size_t k, std::size_t l, std::size_t steps) {
    Instance out;
    for (std::size_t i = 0; i < k; ++i) out.treated.push_back(grid_score(e, steps));
    for (std::size_t j = 0; j < l; ++j) out.control.push_back(grid_score(e, steps));
    return out;
}

inline Instance uniform_instance(rng::Engine& e, std::size_t k, std::size_t l) {
    Instance out;
    for (std::size_t i = 0; i < k; ++i) out.treated.push_back(rng::uniform_open01(e));
    for (std::size_t j = 0; j < l; ++j) out.control.push_back(rng::uniform_open01(e));
    return out;
}

inline ScoreSet scores_of(const Instance& instance) { return prepare_score_set(instance.treated, instance.control); }

// f(x) = v1 below t, v2 >= v1 from t on; the same shape for s.
inline CaliperSpec random_two_step(rng::Engine& e) {
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    auto table = [&] {
        const double low = uniform(e, 0.0, 0.15);
        const double high = low + uniform(e, 0.0, 0.15);
        return std::vector<Step>{{kNegInf, low}, {uniform(e, 0.0, 1.0), high}};
    };
    auto f = table();
    auto s = table();
    return CaliperSpec::step_sum(std::move(f), std::move(s));
}

// Piecewise-linear g and h with slopes in [-1, 1] and values kept >= 0.02.
inline CaliperSpec random_separable(rng::Engine& e) {
    auto table = [&] {
        std::vector<Knot> knots;
        double x = uniform(e, -0.2, 0.1);
        double v = uniform(e, 0.02, 0.1);
        const std::size_t pieces = uniform_int(e, 0, 4);
        knots.push_back({x, v});
        for (std::size_t p = 0; p < pieces; ++p) {
            const double dx = uniform(e, 0.05, 0.5);
            const double slope = uniform(e, -0.99, 0.99);
            x += dx;
            v = std::max(0.02, v + slope * dx);
            knots.push_back({x, v});
        }
        return knots;
    };
    auto g = table();
    auto h = table();
    return CaliperSpec::separable(std::move(g), std::move(h));
}

}  // namespace psmatch::testing
