#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace bnb {

// Weak compositions of m into r parts: every count vector of length r with
// nonnegative entries summing to m. These are the outcome states of m
// purchases of one r-valued action.

// C(m + r - 1, r - 1); throws std::overflow_error past 2^64.
std::uint64_t composition_count(int m, int r);

// Visits every composition in colexicographic order (last part varies slowest),
// starting from (m, 0, ..., 0).
void for_each_composition(int m, int r, const std::function<void(std::span<const int>)>& visit);

// Advances `counts` to the next composition in colex order; false after the last.
bool next_composition(std::vector<int>& counts);

} // namespace bnb
