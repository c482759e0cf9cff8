#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace psmatch {

/// Treated and control scores sorted ascending, with maps back to input rows.
///
/// `treated_scores[k] == input_treated[treated_perm[k]]` for every k, and the
/// same for controls. Sorting is stable, so tied scores keep their input order.
/// Every algorithm in the library addresses objects by their position in the
/// sorted arrays.
struct ScoreSet {
    std::vector<double> treated_scores;
    std::vector<double> control_scores;
    std::vector<std::size_t> treated_perm;
    std::vector<std::size_t> control_perm;

    std::size_t treated_count() const noexcept { return treated_scores.size(); }
    std::size_t control_count() const noexcept { return control_scores.size(); }
};

/// Sorts both groups. Throws InvalidInput naming the first non-finite row.
ScoreSet prepare_score_set(std::span<const double> treated, std::span<const double> control);

/// Order in which treated objects are fed to greedy nearest-neighbor matching.
struct ProcessingOrder {
    enum class Kind { AsGiven, Sorted, Random };

    Kind kind = Kind::Sorted;
    std::uint64_t seed = 0;

    static ProcessingOrder as_given() { return {Kind::AsGiven, 0}; }
    static ProcessingOrder sorted() { return {Kind::Sorted, 0}; }
    static ProcessingOrder random(std::uint64_t seed) { return {Kind::Random, seed}; }
};

/// Sorted treated positions in processing order.
///
/// AsGiven replays the original input row order; Random is a uniform
/// Fisher-Yates shuffle of the sorted order driven by mt19937_64(seed).
std::vector<std::size_t> treated_processing_order(const ScoreSet& scores, const ProcessingOrder& order);

}  // namespace psmatch
