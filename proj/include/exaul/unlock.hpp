#pragma once

#include <cstddef>

#include "exaul/grid.hpp"

namespace exaul {

// Contiguous arm range whose feedback is revealed by the chosen arm's
// decision: the accepting side [0..cut] when the chosen arm answered,
// its complement [cut+1..size-1] otherwise.
struct UnlockSet {
    bool answered = false;
    std::size_t cut_index = 0;
    std::size_t lo = 0;  // first member
    std::size_t hi = 0;  // last member (inclusive)

    std::size_t count() const { return hi - lo + 1; }
    bool contains(std::size_t k) const { return k >= lo && k <= hi; }
};

inline UnlockSet unlock_set(const HypothesisGrid& grid, std::size_t chosen_index, double score) {
    if (chosen_index >= grid.size())
        throw std::out_of_range("chosen index out of range");
    const std::size_t cut = grid.cut_index(score);
    const bool answered = accepts(grid.value(chosen_index), score);
    if (answered) return UnlockSet{true, cut, 0, cut};
    return UnlockSet{false, cut, cut + 1, grid.size() - 1};
}

}  // namespace exaul
