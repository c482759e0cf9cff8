#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace psmatch {

/// Balanced binary search tree over sorted control scores, built once and
/// only shrunk afterwards.
///
/// Matched controls are removed lazily: a node with two children turns void
/// and stays as a routing key; a node with fewer children is spliced out.
/// A void node that drops to one child is spliced out as well, so void nodes
/// always have exactly two children and a removal touches O(1) nodes. Depth
/// never grows beyond that of the initial perfectly balanced tree.
///
/// Nodes are keyed by sorted control position, so in-order traversal visits
/// live controls in non-decreasing score order.
class ControlTree {
public:
    static constexpr std::int32_t kNone = -1;

    explicit ControlTree(std::span<const double> sorted_control_scores);

    /// Nearest live controls on each side of a treated score x: `below` is
    /// the live control with the largest position among those with score
    /// < x, `above` the one with the smallest position among those with
    /// score >= x. Either may be kNone.
    struct Neighbors {
        std::int32_t below = kNone;
        std::int32_t above = kNone;
        std::uint32_t steps = 0;
    };

    /// Descends the tree with the two-to-four guess search.
    Neighbors neighbors(double x) const;

    /// Removes the live control at sorted position `control`.
    void remove(std::size_t control);

    bool contains(std::size_t control) const;
    std::size_t size() const noexcept { return live_; }
    std::size_t void_count() const noexcept;
    std::size_t depth() const;

    /// Live control positions, in order.
    std::vector<std::size_t> in_order() const;

    /// Empty when every structural invariant holds; otherwise a description.
    std::string check_invariants() const;

private:
    struct Node {
        std::int32_t left = kNone;
        std::int32_t right = kNone;
        std::int32_t parent = kNone;
        bool is_void = false;
        bool removed = false;
    };

    std::int32_t build(std::size_t lo, std::size_t hi, std::int32_t parent);
    void splice(std::int32_t node);
    std::size_t children(std::int32_t node) const {
        return (nodes_[node].left != kNone) + (nodes_[node].right != kNone);
    }

    std::span<const double> scores_;
    std::vector<Node> nodes_;  // indexed by sorted control position
    std::int32_t root_ = kNone;
    std::size_t live_ = 0;
};

}  // namespace psmatch
