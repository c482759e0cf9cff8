#include "psmatch/score_set.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "psmatch/errors.hpp"
#include "psmatch/random.hpp"

namespace psmatch {
namespace {

void sort_group(std::span<const double> input, const char* group, std::vector<double>& sorted,
                std::vector<std::size_t>& perm) {
    for (std::size_t row = 0; row < input.size(); ++row) {
        if (!std::isfinite(input[row])) {
            throw InvalidInput(std::string("non-finite ") + group + " score at row " + std::to_string(row));
        }
    }
    perm.resize(input.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return input[a] < input[b]; });
    sorted.resize(input.size());
    for (std::size_t k = 0; k < perm.size(); ++k) sorted[k] = input[perm[k]];
}

}  // namespace

ScoreSet prepare_score_set(std::span<const double> treated, std::span<const double> control) {
    ScoreSet set;
    sort_group(treated, "treated", set.treated_scores, set.treated_perm);
    sort_group(control, "control", set.control_scores, set.control_perm);
    return set;
}

std::vector<std::size_t> treated_processing_order(const ScoreSet& scores, const ProcessingOrder& order) {
    const std::size_t k = scores.treated_count();
    std::vector<std::size_t> sequence(k);
    switch (order.kind) {
        case ProcessingOrder::Kind::Sorted:
            std::iota(sequence.begin(), sequence.end(), std::size_t{0});
            break;
        case ProcessingOrder::Kind::AsGiven:
            // Invert the sort permutation: original row r sits at sorted position p.
            for (std::size_t p = 0; p < k; ++p) sequence[scores.treated_perm[p]] = p;
            break;
        case ProcessingOrder::Kind::Random: {
            std::iota(sequence.begin(), sequence.end(), std::size_t{0});
            rng::Engine engine(order.seed);
            for (std::size_t i = k; i > 1; --i) {
                std::swap(sequence[i - 1], sequence[rng::uniform_below(engine, i)]);
            }
            break;
        }
    }
    return sequence;
}

}  // namespace psmatch
