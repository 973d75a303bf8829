#include "pdz/tree_shape.hpp"

#include <string>

#include "pdz/error.hpp"

namespace pdz {

namespace {

// Walks the preorder of the unique ordered strict tree with the given leaf
// depths. `emit` sees each node flag. Throws if no such tree exists.
template <typename Emit>
void walk_preorder(std::span<const std::uint32_t> depths, Emit&& emit) {
    if (depths.empty()) {
        throw invalid_argument("tree shape: no leaves");
    }
    // Depths of right children still waiting to be filled.
    std::vector<std::uint32_t> pending;
    std::uint32_t slot = 0;
    for (std::size_t i = 0; i < depths.size(); ++i) {
        if (i > 0) {
            if (pending.empty()) {
                throw invalid_argument("tree shape: leaf " + std::to_string(i + 1) +
                                       " has no room (Kraft sum exceeds 1)");
            }
            slot = pending.back();
            pending.pop_back();
        }
        if (depths[i] < slot) {
            throw invalid_argument("tree shape: leaf " + std::to_string(i + 1) +
                                   " is not aligned to an ordered tree");
        }
        for (; slot < depths[i]; ++slot) {
            emit(true);
            pending.push_back(slot + 1);
        }
        emit(false);
    }
    if (!pending.empty()) {
        throw invalid_argument("tree shape: Kraft sum below 1 (tree is not strict)");
    }
}

}  // namespace

strict_tree_shape::strict_tree_shape(std::vector<std::uint32_t> leaf_depths) : depths_(std::move(leaf_depths)) {
    walk_preorder(depths_, [](bool) {});
}

bit_string strict_tree_shape::preorder() const {
    bit_string out;
    walk_preorder(depths_, [&out](bool internal) { out.push_back(internal); });
    return out;
}

}  // namespace pdz
