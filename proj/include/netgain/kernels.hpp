#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference version and,
// on x86-64, an AVX2 version chosen at runtime from CPUID. The two must agree
// bit for bit; tests force each path explicitly.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "netgain/gf.hpp"

namespace netgain::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// Best ISA supported by both the build and the running CPU.
Isa detected_isa();

/// ISA currently used by the dispatching entry points.
Isa active_isa();

/// Forces an ISA (falls back to scalar if unsupported); nullopt restores
/// detection. Not thread-safe with concurrent kernel calls.
void set_isa_override(std::optional<Isa> isa);

bool isa_supported(Isa isa);

/// One coordinate of a pairwise prefix-match product. `fine[i]` and
/// `coarse[i]` label the b-adic cells of point i at resolutions k+1 and k;
/// equal fine labels must imply equal coarse labels.
struct PrefixPair {
    std::span<const std::uint32_t> fine;
    std::span<const std::uint32_t> coarse;
};

/// sum over ordered pairs (i, i') of prod_j (b*[fine_j equal] - [coarse_j equal]).
/// Every coordinate must have the same number of points.
std::int64_t pair_gain_sum(std::span<const PrefixPair> coords, int b);

/// dst[i] <- dst[i] + coeff * src[i] over the field.
void row_axpy(const Field& field, std::span<Element> dst, std::span<const Element> src, Element coeff);

namespace scalar {
std::int64_t pair_gain_sum(std::span<const PrefixPair> coords, int b);
void row_axpy(const Field& field, std::span<Element> dst, std::span<const Element> src, Element coeff);
}  // namespace scalar

namespace avx2 {
std::int64_t pair_gain_sum(std::span<const PrefixPair> coords, int b);
void row_axpy(const Field& field, std::span<Element> dst, std::span<const Element> src, Element coeff);
}  // namespace avx2

}  // namespace netgain::kernels
