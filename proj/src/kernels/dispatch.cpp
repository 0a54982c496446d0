#include <atomic>
#include <stdexcept>

#include "netgain/kernels.hpp"

namespace netgain::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(NETGAIN_HAVE_AVX2_KERNELS) && (defined(__x86_64__) || defined(__i386__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

std::atomic<int> g_override{-1};

void check_shapes(std::span<const PrefixPair> coords) {
    if (coords.empty()) return;
    const std::size_t n = coords.front().fine.size();
    for (const auto& c : coords)
        if (c.fine.size() != n || c.coarse.size() != n)
            throw std::invalid_argument("prefix label arrays differ in length");
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool isa_supported(Isa isa) {
    static const bool avx2 = cpu_has_avx2();
    return isa == Isa::scalar || (isa == Isa::avx2 && avx2);
}

Isa detected_isa() { return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

Isa active_isa() {
    const int o = g_override.load(std::memory_order_relaxed);
    if (o >= 0) {
        const auto isa = static_cast<Isa>(o);
        return isa_supported(isa) ? isa : Isa::scalar;
    }
    return detected_isa();
}

void set_isa_override(std::optional<Isa> isa) {
    g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

std::int64_t pair_gain_sum(std::span<const PrefixPair> coords, int b) {
    check_shapes(coords);
    if (active_isa() == Isa::avx2) return avx2::pair_gain_sum(coords, b);
    return scalar::pair_gain_sum(coords, b);
}

void row_axpy(const Field& field, std::span<Element> dst, std::span<const Element> src, Element coeff) {
    if (dst.size() != src.size()) throw std::invalid_argument("row lengths differ");
    if (active_isa() == Isa::avx2) return avx2::row_axpy(field, dst, src, coeff);
    scalar::row_axpy(field, dst, src, coeff);
}

#if !defined(NETGAIN_HAVE_AVX2_KERNELS)
namespace avx2 {
std::int64_t pair_gain_sum(std::span<const PrefixPair> coords, int b) { return scalar::pair_gain_sum(coords, b); }
void row_axpy(const Field& field, std::span<Element> dst, std::span<const Element> src, Element coeff) {
    scalar::row_axpy(field, dst, src, coeff);
}
}  // namespace avx2
#endif

}  // namespace netgain::kernels
