#include "rmpa/fixed_point.hpp"

#include <vector>

namespace rmpa {

int64_t saturating_tree_sum(std::span<const int64_t> inputs, int64_t bound) {
    if (inputs.empty()) return 0;
    size_t width = 1;
    while (width < inputs.size()) width <<= 1;
    std::vector<int64_t> level(width, 0);
    for (size_t i = 0; i < inputs.size(); ++i) level[i] = inputs[i];
    while (width > 1) {
        for (size_t i = 0; i < width / 2; ++i) level[i] = sat_add(level[2 * i], level[2 * i + 1], bound);
        width /= 2;
    }
    return level[0];
}

int64_t divider_tree_average(std::span<const int64_t> inputs, int levels) {
    if (levels < 0 || inputs.size() != (size_t{1} << levels))
        throw std::invalid_argument("divider tree needs 2^levels inputs");
    std::vector<int64_t> level(inputs.begin(), inputs.end());
    for (int l = 0; l < levels; ++l) {
        size_t half = level.size() / 2;
        for (size_t i = 0; i < half; ++i) level[i] = (level[2 * i] + level[2 * i + 1]) >> 1;
        level.resize(half);
    }
    return level[0];
}

}  // namespace rmpa
