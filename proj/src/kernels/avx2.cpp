// Compiled with -mavx2; only reached after a runtime CPUID check.

#include <immintrin.h>

#include <algorithm>
#include <array>
#include <limits>

#include "netgain/kernels.hpp"

namespace netgain::kernels::avx2 {

namespace {

constexpr std::size_t kMaxCoords = 16;

bool product_fits_int32(std::size_t coords, int b) {
    std::int64_t bound = 1;
    const std::int64_t f = std::max(b - 1, 1);
    for (std::size_t j = 0; j < coords; ++j) {
        bound *= f;
        if (bound > std::numeric_limits<std::int32_t>::max()) return false;
    }
    return true;
}

inline __m256i load8(const std::uint32_t* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }

}  // namespace

std::int64_t pair_gain_sum(std::span<const PrefixPair> coords, int b) {
    if (coords.empty()) return 0;
    if (coords.size() > kMaxCoords || !product_fits_int32(coords.size(), b)) return scalar::pair_gain_sum(coords, b);

    const std::size_t n = coords.front().fine.size();
    const std::size_t d = coords.size();
    const std::size_t vec_end = n - n % 8;
    const __m256i bvec = _mm256_set1_epi32(b);
    const __m256i minus_one = _mm256_set1_epi32(-1);
    const __m256i one = _mm256_set1_epi32(1);

    __m256i fine_i[kMaxCoords];
    __m256i coarse_i[kMaxCoords];
    std::int64_t total = 0;

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            fine_i[j] = _mm256_set1_epi32(static_cast<int>(coords[j].fine[i]));
            coarse_i[j] = _mm256_set1_epi32(static_cast<int>(coords[j].coarse[i]));
        }
        __m256i acc = _mm256_setzero_si256();
        for (std::size_t k = 0; k < vec_end; k += 8) {
            __m256i term = one;
            for (std::size_t j = 0; j < d; ++j) {
                const __m256i eq_coarse = _mm256_cmpeq_epi32(load8(coords[j].coarse.data() + k), coarse_i[j]);
                const __m256i eq_fine = _mm256_cmpeq_epi32(load8(coords[j].fine.data() + k), fine_i[j]);
                // fine match -> b-1, coarse-only match -> -1, otherwise 0
                const __m256i factor = _mm256_and_si256(eq_coarse, _mm256_add_epi32(_mm256_and_si256(eq_fine, bvec), minus_one));
                term = _mm256_mullo_epi32(term, factor);
            }
            acc = _mm256_add_epi64(acc, _mm256_cvtepi32_epi64(_mm256_castsi256_si128(term)));
            acc = _mm256_add_epi64(acc, _mm256_cvtepi32_epi64(_mm256_extracti128_si256(term, 1)));
        }
        alignas(32) std::array<std::int64_t, 4> lanes{};
        _mm256_store_si256(reinterpret_cast<__m256i*>(lanes.data()), acc);
        total += lanes[0] + lanes[1] + lanes[2] + lanes[3];

        for (std::size_t k = vec_end; k < n; ++k) {
            std::int64_t term = 1;
            for (std::size_t j = 0; j < d; ++j) {
                if (coords[j].coarse[i] != coords[j].coarse[k]) {
                    term = 0;
                    break;
                }
                term *= (coords[j].fine[i] == coords[j].fine[k]) ? (b - 1) : -1;
            }
            total += term;
        }
    }
    return total;
}

void row_axpy(const Field& field, std::span<Element> dst, std::span<const Element> src, Element coeff) {
    if (coeff == 0) return;
    const int b = field.b();
    const std::int32_t* add32 = field.add_table32();
    const std::int32_t* mul_row32 = field.mul_table32() + static_cast<std::size_t>(coeff) * b;
    const std::size_t n = dst.size();
    const std::size_t vec_end = n - n % 8;
    const __m256i bvec = _mm256_set1_epi32(b);
    const __m256i pick_low_bytes =
        _mm256_setr_epi8(0, 4, 8, 12, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,
                         0, 4, 8, 12, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1);
    const __m256i gather_dwords = _mm256_setr_epi32(0, 4, 1, 1, 1, 1, 1, 1);

    for (std::size_t i = 0; i < vec_end; i += 8) {
        const __m256i s32 = _mm256_cvtepu8_epi32(_mm_loadl_epi64(reinterpret_cast<const __m128i*>(src.data() + i)));
        const __m256i d32 = _mm256_cvtepu8_epi32(_mm_loadl_epi64(reinterpret_cast<const __m128i*>(dst.data() + i)));
        const __m256i prod = _mm256_i32gather_epi32(mul_row32, s32, 4);
        const __m256i idx = _mm256_add_epi32(_mm256_mullo_epi32(d32, bvec), prod);
        const __m256i sum = _mm256_i32gather_epi32(add32, idx, 4);
        const __m256i packed = _mm256_permutevar8x32_epi32(_mm256_shuffle_epi8(sum, pick_low_bytes), gather_dwords);
        _mm_storel_epi64(reinterpret_cast<__m128i*>(dst.data() + i), _mm256_castsi256_si128(packed));
    }
    const Element* add = field.add_table();
    const Element* mul_row = field.mul_table() + static_cast<std::size_t>(coeff) * b;
    for (std::size_t i = vec_end; i < n; ++i) dst[i] = add[dst[i] * b + mul_row[src[i]]];
}

}  // namespace netgain::kernels::avx2
