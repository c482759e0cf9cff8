#include "psmatch/control_tree.hpp"

#include <array>
#include <cassert>
#include <functional>
#include <limits>
#include <sstream>

#include "psmatch/errors.hpp"

namespace psmatch {
namespace {

// Sentinel guesses standing for scores below and above every control.
constexpr std::int32_t kLowDummy = -2;
constexpr std::int32_t kHighDummy = -3;

struct Guess {
    std::int32_t node;
    bool is_static;
};

}  // namespace

ControlTree::ControlTree(std::span<const double> sorted_control_scores)
    : scores_(sorted_control_scores), nodes_(sorted_control_scores.size()), live_(sorted_control_scores.size()) {
    if (scores_.size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
        throw InvalidInput("too many controls for ControlTree");
    }
    root_ = build(0, scores_.size(), kNone);
}

std::int32_t ControlTree::build(std::size_t lo, std::size_t hi, std::int32_t parent) {
    if (lo >= hi) return kNone;
    const std::size_t mid = lo + (hi - lo) / 2;
    const auto node = static_cast<std::int32_t>(mid);
    nodes_[mid].parent = parent;
    nodes_[mid].left = build(lo, mid, node);
    nodes_[mid].right = build(mid + 1, hi, node);
    return node;
}

ControlTree::Neighbors ControlTree::neighbors(double x) const {
    // Guesses are kept in in-order sequence. A static guess is a single
    // candidate; a branching guess stands for its whole subtree. The first
    // guess always lies below x and the last at or above it.
    std::array<Guess, 4> guesses{};
    std::array<Guess, 4> next{};
    std::size_t count = 0;
    guesses[count++] = {kLowDummy, true};
    if (root_ != kNone) guesses[count++] = {root_, false};
    guesses[count++] = {kHighDummy, true};

    auto below = [&](std::int32_t node) {
        if (node == kLowDummy) return true;
        if (node == kHighDummy) return false;
        return scores_[static_cast<std::size_t>(node)] < x;
    };

    Neighbors out;
    for (;;) {
        ++out.steps;
        std::size_t split = 1;
        while (split + 1 < count && below(guesses[split].node)) ++split;
        const Guess left = guesses[split - 1];
        const Guess right = guesses[split];

        if (left.is_static && right.is_static) {
            out.below = left.node >= 0 ? left.node : kNone;
            out.above = right.node >= 0 ? right.node : kNone;
            return out;
        }

        std::size_t n = 0;
        if (left.is_static) {
            next[n++] = left;
        } else {
            const Node& node = nodes_[static_cast<std::size_t>(left.node)];
            if (node.is_void) {
                next[n++] = {node.left, false};
                next[n++] = {node.right, false};
            } else {
                next[n++] = {left.node, true};
                if (node.right != kNone) next[n++] = {node.right, false};
            }
        }
        if (right.is_static) {
            next[n++] = right;
        } else {
            const Node& node = nodes_[static_cast<std::size_t>(right.node)];
            if (node.is_void) {
                next[n++] = {node.left, false};
                next[n++] = {node.right, false};
            } else {
                if (node.left != kNone) next[n++] = {node.left, false};
                next[n++] = {right.node, true};
            }
        }
        guesses = next;
        count = n;
    }
}

void ControlTree::splice(std::int32_t node) {
    Node& n = nodes_[static_cast<std::size_t>(node)];
    const std::int32_t child = n.left != kNone ? n.left : n.right;
    assert(n.left == kNone || n.right == kNone);
    if (child != kNone) nodes_[static_cast<std::size_t>(child)].parent = n.parent;
    if (n.parent == kNone) {
        root_ = child;
    } else {
        Node& p = nodes_[static_cast<std::size_t>(n.parent)];
        (p.left == node ? p.left : p.right) = child;
    }
    n.removed = true;
    n.left = n.right = n.parent = kNone;
}

void ControlTree::remove(std::size_t control) {
    if (!contains(control)) {
        throw InvalidInput("control " + std::to_string(control) + " is not in the tree");
    }
    const auto node = static_cast<std::int32_t>(control);
    --live_;
    if (children(node) == 2) {
        nodes_[control].is_void = true;
        return;
    }
    const std::int32_t parent = nodes_[control].parent;
    splice(node);
    // A void parent that lost a child now has one and must go as well.
    if (parent != kNone && nodes_[static_cast<std::size_t>(parent)].is_void && children(parent) < 2) {
        splice(parent);
    }
}

bool ControlTree::contains(std::size_t control) const {
    return control < nodes_.size() && !nodes_[control].removed && !nodes_[control].is_void;
}

std::size_t ControlTree::void_count() const noexcept {
    std::size_t voids = 0;
    for (const Node& n : nodes_) voids += (!n.removed && n.is_void);
    return voids;
}

std::size_t ControlTree::depth() const {
    std::function<std::size_t(std::int32_t)> walk = [&](std::int32_t node) -> std::size_t {
        if (node == kNone) return 0;
        const Node& n = nodes_[static_cast<std::size_t>(node)];
        return 1 + std::max(walk(n.left), walk(n.right));
    };
    return walk(root_);
}

std::vector<std::size_t> ControlTree::in_order() const {
    std::vector<std::size_t> out;
    out.reserve(live_);
    std::function<void(std::int32_t)> walk = [&](std::int32_t node) {
        if (node == kNone) return;
        const Node& n = nodes_[static_cast<std::size_t>(node)];
        walk(n.left);
        if (!n.is_void) out.push_back(static_cast<std::size_t>(node));
        walk(n.right);
    };
    walk(root_);
    return out;
}

std::string ControlTree::check_invariants() const {
    std::ostringstream problem;
    std::size_t reachable = 0, live = 0;
    std::int64_t last_position = -1;
    bool ok = true;

    std::function<void(std::int32_t, std::int32_t)> walk = [&](std::int32_t node, std::int32_t parent) {
        if (node == kNone || !ok) return;
        const Node& n = nodes_[static_cast<std::size_t>(node)];
        if (n.removed) {
            problem << "removed node " << node << " is still linked";
            ok = false;
            return;
        }
        if (n.parent != parent) {
            problem << "node " << node << " has a stale parent link";
            ok = false;
            return;
        }
        if (n.is_void && children(node) != 2) {
            problem << "void node " << node << " has " << children(node) << " children";
            ok = false;
            return;
        }
        ++reachable;
        walk(n.left, node);
        if (!ok) return;
        if (node <= last_position) {
            problem << "in-order sequence is not increasing at node " << node;
            ok = false;
            return;
        }
        if (last_position >= 0 && scores_[static_cast<std::size_t>(node)] < scores_[last_position]) {
            problem << "in-order scores decrease at node " << node;
            ok = false;
            return;
        }
        last_position = node;
        live += !n.is_void;
        walk(n.right, node);
    };
    walk(root_, kNone);
    if (!ok) return problem.str();

    if (live != live_) {
        problem << "size is " << live_ << " but " << live << " live nodes are reachable";
        return problem.str();
    }
    std::size_t linked = 0;
    for (const Node& n : nodes_) linked += !n.removed;
    if (linked != reachable) {
        problem << linked << " nodes are marked present but " << reachable << " are reachable";
        return problem.str();
    }
    return {};
}

}  // namespace psmatch
