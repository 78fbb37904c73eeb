#include "absw/core.hpp"

#include <algorithm>
#include <numeric>

namespace absw {

std::vector<ObjectMap> enumerate_permutations(const Domain& d) {
    std::vector<int> table(static_cast<size_t>(d.size()));
    std::iota(table.begin(), table.end(), 0);
    std::vector<ObjectMap> out;
    do {
        out.emplace_back(table, MapKind::Bijective);
    } while (std::next_permutation(table.begin(), table.end()));
    return out;
}

} // namespace absw
