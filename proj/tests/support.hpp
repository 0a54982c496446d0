#pragma once

// Independent reference computations shared by the test suites. Nothing
// here calls into the elimination or table code under test.

#include <cstdint>
#include <set>
#include <vector>

#include "netgain/gf.hpp"
#include "netgain/net.hpp"
#include "netgain/rng.hpp"

namespace testing_support {

using netgain::Element;

/// Coefficients (base-p digits) of a field index.
inline std::vector<int> coeffs(int v, int p, int r) {
    std::vector<int> c(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i, v /= p) c[static_cast<std::size_t>(i)] = v % p;
    return c;
}

inline int from_coeffs(const std::vector<int>& c, int p) {
    int v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * p + c[i];
    return v;
}

/// Schoolbook product of two field indices modulo the monic poly.
inline int poly_mul(int a, int b, int p, int r, const std::vector<int>& poly) {
    const auto ca = coeffs(a, p, r), cb = coeffs(b, p, r);
    std::vector<int> prod(static_cast<std::size_t>(2 * r), 0);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) prod[static_cast<std::size_t>(i + j)] += ca[static_cast<std::size_t>(i)] * cb[static_cast<std::size_t>(j)];
    for (int d = 2 * r - 1; d >= r; --d) {
        const int c = prod[static_cast<std::size_t>(d)] % p;
        prod[static_cast<std::size_t>(d)] = 0;
        for (int i = 0; i < r; ++i) prod[static_cast<std::size_t>(d - r + i)] += (p - 1) * c * poly[static_cast<std::size_t>(i)];
    }
    std::vector<int> out(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) out[static_cast<std::size_t>(i)] = prod[static_cast<std::size_t>(i)] % p;
    return from_coeffs(out, p);
}

/// Rank as log_b of the size of the row span, by enumerating every
/// combination of rows. Small matrices only.
inline int span_rank(const netgain::Field& f, const netgain::FieldMatrix& m) {
    std::set<std::vector<Element>> span;
    span.insert(std::vector<Element>(m.cols(), 0));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::set<std::vector<Element>> next;
        for (const auto& v : span) {
            for (int c = 0; c < f.b(); ++c) {
                auto w = v;
                for (std::size_t j = 0; j < m.cols(); ++j) w[j] = f.add(w[j], f.mul(static_cast<Element>(c), m.at(i, j)));
                next.insert(w);
            }
        }
        span.swap(next);
    }
    int r = 0;
    for (std::size_t size = 1; size < span.size(); size *= static_cast<std::size_t>(f.b())) ++r;
    return r;
}

inline netgain::FieldMatrix random_matrix(const netgain::Field& f, std::size_t rows, std::size_t cols,
                                          netgain::SplitMix64& gen) {
    netgain::FieldMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = static_cast<Element>(gen.below(static_cast<std::uint64_t>(f.b())));
    return m;
}

/// The three-dimensional example net, written out rather than built.
inline netgain::DigitalNet example_net(int b) {
    const auto f = netgain::Field::of_order(b);
    auto mat = [](std::vector<std::vector<Element>> rows) {
        netgain::FieldMatrix m(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) m.at(i, j) = rows[i][j];
        return m;
    };
    return netgain::DigitalNet(f, 3, 3, 3,
                               {mat({{1, 0, 0}, {0, 1, 1}, {0, 0, 0}}), mat({{0, 1, 0}, {1, 0, 1}, {0, 0, 0}}),
                                mat({{0, 0, 1}, {1, 1, 0}, {0, 0, 0}})});
}

}  // namespace testing_support
