#include <stdexcept>

#include "netgain/kernels.hpp"

namespace netgain::kernels::scalar {

std::int64_t pair_gain_sum(std::span<const PrefixPair> coords, int b) {
    if (coords.empty()) return 0;
    const std::size_t n = coords.front().fine.size();
    std::int64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            std::int64_t term = 1;
            for (const auto& c : coords) {
                if (c.coarse[i] != c.coarse[k]) {
                    term = 0;
                    break;
                }
                term *= (c.fine[i] == c.fine[k]) ? (b - 1) : -1;
            }
            total += term;
        }
    }
    return total;
}

void row_axpy(const Field& field, std::span<Element> dst, std::span<const Element> src, Element coeff) {
    if (coeff == 0) return;
    const Element* add = field.add_table();
    const Element* mul_row = field.mul_table() + static_cast<std::size_t>(coeff) * field.b();
    const std::size_t b = static_cast<std::size_t>(field.b());
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = add[dst[i] * b + mul_row[src[i]]];
}

}  // namespace netgain::kernels::scalar
