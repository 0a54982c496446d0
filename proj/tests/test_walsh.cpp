#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "netgain/walsh.hpp"
#include "support.hpp"

using namespace netgain;

namespace {

PointSet single_point(int b, std::vector<std::vector<Element>> digits, int depth) {
    PointSet p(b, static_cast<int>(digits.size()), depth, 1);
    for (std::size_t j = 0; j < digits.size(); ++j)
        for (std::size_t i = 0; i < digits[j].size(); ++i) p.digit(0, static_cast<int>(j), static_cast<int>(i)) = digits[j][i];
    return p;
}

// One cell anchor per grid cell, as a point set.
PointSet grid_anchors(int b, int n, int s) {
    std::size_t per = 1;
    for (int i = 0; i < n; ++i) per *= static_cast<std::size_t>(b);
    std::size_t total = 1;
    for (int j = 0; j < s; ++j) total *= per;
    PointSet p(b, s, n, total);
    for (std::size_t cell = 0; cell < total; ++cell) {
        std::size_t c = cell;
        for (int j = s; j-- > 0;) {
            std::size_t axis = c % per;
            c /= per;
            for (int i = n; i-- > 0;) {
                p.digit(cell, j, i) = static_cast<Element>(axis % static_cast<std::size_t>(b));
                axis /= static_cast<std::size_t>(b);
            }
        }
    }
    return p;
}

}  // namespace

TEST_CASE("roots of unity") {
    const RootOfUnity a{3, 2}, c{3, 2};
    CHECK(a * c == RootOfUnity{3, 1});
    CHECK(std::abs(RootOfUnity{2, 1}.value() + 1.0) < 1e-15);
    CHECK_THROWS(a * RootOfUnity{2, 1});
}

TEST_CASE("cyclotomic reduction") {
    CyclotomicSum z(3);
    z.add(0);
    z.add(1);
    z.add(2);
    CHECK(z.integer() == 0);
    CyclotomicSum w(4);
    w.add(1);
    w.add(3);
    w.add(0, 5);
    CHECK(w.integer() == 5);
    CyclotomicSum v(9);
    for (int e : {0, 3, 6}) v.add(e, 2);
    CHECK(v.integer() == 0);
    CyclotomicSum u(5);
    u.add(1);
    CHECK_FALSE(u.integer().has_value());
    CHECK_THROWS(CyclotomicSum(6));
}

TEST_CASE("wal_eval examples") {
    const Field f2 = Field::of_order(2), f3 = Field::of_order(3);
    const auto x0 = single_point(2, {{1}}, 1);
    CHECK(wal_eval(f2, std::vector<std::uint64_t>{0}, x0, 0).exponent == 0);
    const auto w = wal_eval(f2, std::vector<std::uint64_t>{1}, x0, 0);
    CHECK(w.exponent == 1);
    CHECK(w.value().real() == doctest::Approx(-1.0));
    const auto x3 = single_point(3, {{2}}, 1);
    CHECK(wal_eval(f3, std::vector<std::uint64_t>{2}, x3, 0).exponent == 1);
    CHECK_THROWS(wal_eval(f3, std::vector<std::uint64_t>{3}, x3, 0));
}

TEST_CASE("wal is multiplicative over coordinates") {
    const Field f = Field::of_order(4);
    const auto x = single_point(4, {{1, 3}, {2, 2}}, 2);
    const auto both = wal_eval(f, std::vector<std::uint64_t>{7, 9}, x, 0);
    const auto first = wal_eval(f, std::vector<std::uint64_t>{7, 0}, x, 0);
    const auto second = wal_eval(f, std::vector<std::uint64_t>{0, 9}, x, 0);
    CHECK(both == first * second);
}

TEST_CASE("trace and literal characters coincide for prime b") {
    SplitMix64 gen(5);
    for (int b : {2, 3, 5, 7}) {
        const Field f = Field::of_order(b);
        const auto pts = generate_points(make_random_net(f, 2, 2, 3, 1), 3);
        for (int trial = 0; trial < 50; ++trial) {
            const std::vector<std::uint64_t> l{gen.below(static_cast<std::uint64_t>(b * b * b)), gen.below(static_cast<std::uint64_t>(b * b))};
            const std::size_t h = static_cast<std::size_t>(gen.below(pts.size()));
            REQUIRE(wal_eval(f, l, pts, h, WalshCharacter::trace) == wal_eval(f, l, pts, h, WalshCharacter::literal));
        }
    }
}

TEST_CASE("Walsh-Dirichlet kernel examples") {
    const Field f2 = Field::of_order(2), f3 = Field::of_order(3);
    const auto zero = single_point(3, {{0, 0}, {0, 0}}, 2);
    CHECK(dirichlet_sum(f3, {0, 1}, std::vector<int>{2, 1}, zero, 0) == 27);
    const auto half = single_point(2, {{1}}, 1);
    CHECK(dirichlet_sum(f2, {0}, std::vector<int>{1}, half, 0) == 0);
    const auto x = single_point(3, {{0}, {1}}, 1);
    CHECK(dirichlet_sum(f3, {0, 1}, std::vector<int>{1, 1}, x, 0) == 0);
}

TEST_CASE("Walsh-Dirichlet kernel equals its closed form (fuzz)") {
    SplitMix64 gen(31);
    const int bases[] = {2, 3, 4, 5, 8, 9};
    for (int trial = 0; trial < 1000; ++trial) {
        const int b = bases[gen.below(6)];
        const Field f = Field::of_order(b);
        const int s = 1 + static_cast<int>(gen.below(3));
        const int depth = 3;
        PointSet x(b, s, depth, 1);
        for (int j = 0; j < s; ++j)
            for (int i = 0; i < depth; ++i)
                // Bias toward zeros so the indicator fires often.
                x.digit(0, j, i) = gen.below(2) ? Element{0} : static_cast<Element>(gen.below(static_cast<std::uint64_t>(b)));
        Subset u;
        std::vector<int> k;
        for (int j = 0; j < s; ++j)
            if (gen.below(2) || (j == s - 1 && u.empty())) {
                u.push_back(j);
                k.push_back(static_cast<int>(gen.below(b <= 5 ? 3 : 2)));
            }
        REQUIRE(dirichlet_sum(f, u, k, x, 0) == dirichlet_closed_form(u, k, x, 0));
    }
}

TEST_CASE("character sums: examples") {
    const DigitalNet one(Field::of_order(2), 1, 1, 1, {FieldMatrix(1, 1, {1})});
    CHECK(character_sum(one, std::vector<std::uint64_t>{0}).integer() == 2);
    CHECK(character_sum(one, std::vector<std::uint64_t>{1}).integer() == 0);
    const DigitalNet ex = make_example_net(Field::of_order(2));
    CHECK(character_sum(ex, std::vector<std::uint64_t>{2, 2, 2}).integer() == 8);
    CHECK(character_sum(ex, std::vector<std::uint64_t>{0, 0, 0}).integer() == 8);
}

TEST_CASE("character sums are |P| on the dual net and 0 elsewhere") {
    SplitMix64 gen(12);
    for (int b : {2, 3, 4, 5, 8, 9, 16, 25}) {
        CAPTURE(b);
        const Field f = Field::of_order(b);
        const int m = b <= 5 ? 2 : 1;
        const DigitalNet net = make_random_net(f, 2, m, m + 1, gen.next());
        std::uint64_t limit = 1;
        for (int i = 0; i <= m; ++i) limit *= static_cast<std::uint64_t>(b);
        const bool exhaustive = limit * limit <= 20000;
        const std::uint64_t trials = exhaustive ? limit * limit : 400;
        std::uint64_t hits = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            const std::vector<std::uint64_t> l =
                exhaustive ? std::vector<std::uint64_t>{t % limit, t / limit} : std::vector<std::uint64_t>{gen.below(limit), gen.below(limit)};
            const auto sum = character_sum(net, l, WalshCharacter::trace).integer();
            REQUIRE(sum.has_value());
            const bool in_dual = dual_contains(net, l);
            hits += in_dual;
            REQUIRE(*sum == (in_dual ? static_cast<std::int64_t>(net.size()) : 0));
        }
        if (exhaustive) CHECK(hits * net.size() >= limit * limit);
    }
}

TEST_CASE("literal character breaks the dual-net lemma for some non-prime b") {
    // With integer addition of digit values the map is not a group character
    // of GF(4).
    // Here x has digits (h, h) and l = 5 has digits (1, 1), which is dual.
    const Field f = Field::of_order(4);
    const DigitalNet net(f, 1, 1, 2, {FieldMatrix(2, 1, {1, 1})});
    const std::vector<std::uint64_t> l{5};
    REQUIRE(dual_contains(net, l));
    CHECK(character_sum(net, l, WalshCharacter::trace).integer() == 4);
    CHECK(character_sum(net, l, WalshCharacter::literal).integer() == 0);
}

TEST_CASE("orthonormality on the grid") {
    for (int b : {2, 3, 4, 5}) {
        const Field f = Field::of_order(b);
        const int n = b == 2 ? 3 : 2;
        const auto cells = grid_anchors(b, n, 1);
        for (std::uint64_t kk = 0; kk < cells.size(); ++kk)
            for (std::uint64_t l = 0; l < cells.size(); ++l) {
                std::complex<double> acc{0, 0};
                for (std::size_t h = 0; h < cells.size(); ++h)
                    acc += wal_eval(f, std::vector<std::uint64_t>{kk}, cells, h).value() *
                           std::conj(wal_eval(f, std::vector<std::uint64_t>{l}, cells, h).value());
                acc /= static_cast<double>(cells.size());
                REQUIRE(std::abs(acc - std::complex<double>(kk == l ? 1.0 : 0.0)) < 1e-12);
            }
    }
}

TEST_CASE("Walsh spectrum examples") {
    GridFunction c{3, 1, 2, std::vector<double>(9, 2.5)};
    const auto sc = walsh_spectrum(c);
    CHECK(std::abs(sc.coeffs[0] - 2.5) < 1e-14);
    for (std::size_t i = 1; i < sc.coeffs.size(); ++i) CHECK(std::abs(sc.coeffs[i]) < 1e-14);

    GridFunction ind{2, 1, 1, {1.0, 0.0}};
    const auto si = walsh_spectrum(ind);
    CHECK(si.coeffs[0].real() == 0.5);
    CHECK(si.coeffs[1].real() == 0.5);

    // f = wal_{(2,3)} on a b=2, n=2, s=2 grid.
    const Field f2 = Field::of_order(2);
    const auto anchors = grid_anchors(2, 2, 2);
    GridFunction w{2, 2, 2, {}};
    for (std::size_t h = 0; h < anchors.size(); ++h)
        w.values.push_back(wal_eval(f2, std::vector<std::uint64_t>{2, 3}, anchors, h).value().real());
    const auto sw = walsh_spectrum(w);
    for (std::size_t i = 0; i < sw.coeffs.size(); ++i) {
        const auto l = sw.index_vector(i);
        CHECK(sw.coeffs[i] == std::complex<double>(l == std::vector<std::uint64_t>{2, 3} ? 1.0 : 0.0));
    }
    CHECK(sw.at(std::vector<std::uint64_t>{2, 3}) == std::complex<double>(1.0));
    CHECK(sw.at(std::vector<std::uint64_t>{9, 3}) == std::complex<double>(0.0));
}

TEST_CASE("spectrum matches direct projection and reconstructs f") {
    SplitMix64 gen(9);
    for (int b : {2, 3, 4}) {
        const Field f = Field::of_order(b);
        GridFunction g{b, 1, 2, {}};
        g.values.resize(static_cast<std::size_t>(b * b));
        for (auto& v : g.values) v = gen.uniform() - 0.5;
        const auto spec = walsh_spectrum(g);
        const auto anchors = grid_anchors(b, 1, 2);
        for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
            const auto l = spec.index_vector(i);
            std::complex<double> direct{0, 0};
            for (std::size_t h = 0; h < anchors.size(); ++h)
                direct += g.values[g.cell_of(anchors, h)] * std::conj(wal_eval(f, l, anchors, h).value());
            direct /= static_cast<double>(anchors.size());
            REQUIRE(std::abs(direct - spec.coeffs[i]) < 1e-12);
        }
        for (std::size_t h = 0; h < anchors.size(); ++h) {
            std::complex<double> rebuilt{0, 0};
            for (std::size_t i = 0; i < spec.coeffs.size(); ++i)
                rebuilt += spec.coeffs[i] * wal_eval(f, spec.index_vector(i), anchors, h).value();
            REQUIRE(std::abs(rebuilt - g.values[h]) < 1e-12);
        }
    }
}

TEST_CASE("Parseval") {
    SplitMix64 gen(4);
    // Base 2 with dyadic values: exact.
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(gen.below(3)), s = 1 + static_cast<int>(gen.below(2));
        std::vector<Rational> values(static_cast<std::size_t>(1) << (n * s));
        for (auto& v : values) v = Rational(static_cast<std::int64_t>(gen.below(33)) - 16, 8);
        const auto coeffs = walsh_spectrum_dyadic(n, s, values);
        Rational energy(0), mean_sq(0);
        for (const auto& c : coeffs) energy += c * c;
        for (const auto& v : values) mean_sq += v * v;
        mean_sq /= static_cast<std::int64_t>(values.size());
        REQUIRE(energy == mean_sq);

        GridFunction g{2, n, s, {}};
        for (const auto& v : values) g.values.push_back(to_double(v));
        const auto spec = walsh_spectrum(g);
        REQUIRE(spec.energy() == g.mean_square());
        for (std::size_t i = 0; i < coeffs.size(); ++i) REQUIRE(spec.coeffs[i] == std::complex<double>(to_double(coeffs[i])));
    }
    for (int b : {3, 4, 5, 8, 9}) {
        GridFunction g{b, b <= 5 ? 2 : 1, 2, {}};
        g.values.resize(g.cell_count());
        for (auto& v : g.values) v = gen.uniform() * 4.0 - 2.0;
        REQUIRE(std::abs(walsh_spectrum(g).energy() - g.mean_square()) <= 1e-10);
    }
}

TEST_CASE("grid functions: validation and files") {
    CHECK_THROWS(GridFunction{2, 1, 1, {1.0}}.validate());
    CHECK_THROWS(GridFunction{2, 1, 1, {1.0, NAN}}.validate());
    CHECK_THROWS(GridFunction{6, 1, 1, std::vector<double>(6, 0.0)}.validate());
    CHECK_THROWS(walsh_spectrum(GridFunction{2, 21, 1, {}}));
    const GridFunction g{3, 1, 2, {1, 2, 3, 4, 5, 6, 7, 8, 9}};
    CHECK(grid_from_json(grid_to_json(g)).values == g.values);
    CHECK_THROWS(grid_from_json(R"({"b":2,"n":1,"s":1,"values":[1]})"));
    CHECK_THROWS(grid_from_json(R"({"b":2})"));
    const std::string path = "test_walsh_grid.json";
    {
        std::FILE* fp = std::fopen(path.c_str(), "w");
        std::fputs(R"({"b":2,"n":1,"s":1,"values":[0.25,0.75]})", fp);
        std::fclose(fp);
    }
    const auto from_file = read_grid_file(path);
    CHECK(from_file.mean() == 0.5);
    std::remove(path.c_str());
    CHECK_THROWS(read_grid_file("/nonexistent/grid.json"));
}

TEST_CASE("grid cell lookup") {
    const GridFunction g{3, 1, 2, {0, 1, 2, 3, 4, 5, 6, 7, 8}};
    const auto x = single_point(3, {{2, 1}, {1, 0}}, 2);
    CHECK(g.cell_of(x, 0) == 7);
    const PointSet shallow(3, 2, 0, 1);
    CHECK_THROWS(g.cell_of(shallow, 0));
}
