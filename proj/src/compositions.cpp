#include "bnb/compositions.hpp"

#include <stdexcept>

namespace bnb {

std::uint64_t composition_count(int m, int r)
{
    if (m < 0 || r < 1) {
        throw std::invalid_argument("composition_count needs m >= 0 and r >= 1");
    }
    // C(m + k, k) with k = r - 1, built up so every intermediate is an exact binomial.
    const std::uint64_t k = static_cast<std::uint64_t>(r - 1);
    unsigned __int128 result = 1;
    for (std::uint64_t t = 1; t <= k; ++t) {
        result = result * (static_cast<std::uint64_t>(m) + t) / t;
        if (result > UINT64_MAX) {
            throw std::overflow_error("composition count overflows 64 bits");
        }
    }
    return static_cast<std::uint64_t>(result);
}

bool next_composition(std::vector<int>& counts)
{
    std::size_t i = 0;
    while (i < counts.size() && counts[i] == 0) {
        ++i;
    }
    if (i + 1 >= counts.size()) {
        return false;
    }
    const int v = counts[i];
    counts[i] = 0;
    counts[0] = v - 1;
    counts[i + 1] += 1;
    return true;
}

void for_each_composition(int m, int r, const std::function<void(std::span<const int>)>& visit)
{
    if (m < 0 || r < 1) {
        throw std::invalid_argument("for_each_composition needs m >= 0 and r >= 1");
    }
    std::vector<int> counts(static_cast<std::size_t>(r), 0);
    counts[0] = m;
    do {
        visit(counts);
    } while (m > 0 && next_composition(counts));
}

} // namespace bnb
