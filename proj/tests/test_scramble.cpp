#include <doctest.h>

#include <cstdlib>
#include <map>
#include <set>

#include "netgain/gain.hpp"
#include "netgain/scramble.hpp"
#include "support.hpp"

using namespace netgain;

namespace {

PointSet truncate(const PointSet& p, int depth) {
    PointSet out(p.b(), p.s(), depth, p.size());
    for (std::size_t h = 0; h < p.size(); ++h)
        for (int j = 0; j < p.s(); ++j)
            for (int i = 0; i < depth; ++i) out.digit(h, j, i) = p.digit(h, j, i);
    return out;
}

}  // namespace

TEST_CASE("identity trees only pad the tail") {
    const auto pts = generate_points(make_example_net(Field::of_order(3)));
    ScrambleReplicate rep{42, 6, true, {}};
    const auto out = owen_scramble(pts, rep);
    REQUIRE(out.depth() == 6);
    for (std::size_t h = 0; h < pts.size(); ++h)
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 6; ++i)
                REQUIRE(out.digit(h, j, i) == (i < 3 ? pts.digit(h, j, i) : rep.tail_digit(3, h, j, i)));
    CHECK(owen_scramble(pts, rep) == out);
}

TEST_CASE("one-node tree swapping the root") {
    PointSet zero(2, 1, 1, 1);
    ScrambleReplicate rep{0, 1, true, {}};
    rep.overrides[{0, {}}] = {1, 0};
    const auto out = owen_scramble(zero, rep);
    CHECK(out.value(0, 0) == 0.5);
}

TEST_CASE("depth below input precision is rejected") {
    const auto pts = generate_points(make_example_net(Field::of_order(2)));
    CHECK_THROWS(owen_scramble(pts, ScrambleReplicate{1, 2, false, {}}));
}

TEST_CASE("node permutations are deterministic permutations") {
    ScrambleReplicate rep{7, 4, false, {}};
    for (int b : {2, 3, 5, 9, 64}) {
        const std::vector<Element> prefix{1, 0};
        const auto p = rep.permutation(b, 1, prefix);
        std::set<Element> seen(p.begin(), p.end());
        CHECK(seen.size() == static_cast<std::size_t>(b));
        CHECK(*seen.rbegin() == b - 1);
        CHECK(rep.permutation(b, 1, prefix) == p);
    }
}

TEST_CASE("node permutations are uniform over all b! orders") {
    // 6000 independent nodes for b = 3; chi-square with 5 degrees of freedom.
    ScrambleReplicate rep{123, 2, false, {}};
    std::map<std::vector<Element>, int> counts;
    const int nodes = 6000;
    for (int i = 0; i < nodes; ++i) {
        const std::vector<Element> prefix{static_cast<Element>(i % 3), static_cast<Element>((i / 3) % 3)};
        ScrambleReplicate r = rep;
        r.seed = static_cast<std::uint64_t>(i);
        ++counts[r.permutation(3, 0, prefix)];
    }
    REQUIRE(counts.size() == 6);
    double chi2 = 0.0;
    for (const auto& [perm, c] : counts) chi2 += (c - 1000.0) * (c - 1000.0) / 1000.0;
    CHECK(chi2 < 20.52);  // 0.999 quantile of chi-square(5)
}

TEST_CASE("nested structure: shared prefixes stay shared, points stay distinct") {
    const auto pts = generate_points(make_random_net(Field::of_order(3), 2, 3, 3, 5));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto out = owen_scramble(pts, ScrambleReplicate{seed, 5, false, {}});
        std::set<std::vector<double>> distinct;
        for (std::size_t a = 0; a < pts.size(); ++a) {
            distinct.insert({out.value(a, 0), out.value(a, 1)});
            for (std::size_t c = 0; c < pts.size(); ++c)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k <= 3; ++k)
                        REQUIRE((pts.prefix(a, j, k) == pts.prefix(c, j, k)) == (out.prefix(a, j, k) == out.prefix(c, j, k)));
        }
        REQUIRE(distinct.size() == pts.size());
    }
}

TEST_CASE("scrambling preserves the net property") {
    for (int b : {2, 3}) {
        const auto pts = generate_points(make_example_net(Field::of_order(b)));
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto out = owen_scramble(pts, ScrambleReplicate{seed, 5, false, {}});
            REQUIRE(strict_t_value_bruteforce(truncate(out, 3), 3) == 1);
        }
    }
}

TEST_CASE("estimate examples") {
    const DigitalNet ex = make_example_net(Field::of_order(2));
    const auto pts = generate_points(ex);
    GridFunction c{2, 2, 3, std::vector<double>(64, 1.75)};
    CHECK(estimate(ex.field(), c, pts) == 1.75);
    CHECK(estimate(ex.field(), WalshIntegrand{{0, 0, 0}}, pts) == 1.0);
    const double walsh_mean = estimate(ex.field(), WalshIntegrand{{4, 0, 0}}, pts);
    const auto exact = character_sum(ex, std::vector<std::uint64_t>{4, 0, 0}).integer();
    REQUIRE(exact.has_value());
    CHECK(walsh_mean == static_cast<double>(*exact) / 8.0);
    CHECK((walsh_mean == 0.0 || walsh_mean == 1.0));
    CHECK_THROWS(estimate(ex.field(), GridFunction{2, 4, 3, std::vector<double>(4096, 0.0)}, pts));
    CHECK_THROWS(estimate(ex.field(), WalshIntegrand{{8, 0, 0}}, pts));
}

TEST_CASE("variance experiment: constant and trivial Walsh integrands") {
    const DigitalNet ex = make_example_net(Field::of_order(2));
    const auto one = variance_experiment(ex, GridFunction{2, 1, 3, std::vector<double>(8, 1.0)}, 200, 1);
    CHECK(one.estimate_variance == 0.0);
    CHECK(one.estimate_mean == 1.0);
    REQUIRE(one.target.has_value());
    CHECK(*one.target == 0);
    const auto w0 = variance_experiment(ex, WalshIntegrand{{0, 0, 0}}, 200, 2);
    CHECK(w0.estimate_mean == 1.0);
    CHECK(w0.estimate_variance == 0.0);
    CHECK_THROWS(variance_experiment(ex, WalshIntegrand{{0, 0, 0}}, 1, 2));
    CHECK_THROWS(variance_experiment(ex, WalshIntegrand{{0, 0}}, 10, 2));
    CHECK_THROWS(variance_experiment(ex, WalshIntegrand{{0, 0, 0}}, 10, 2, 2));
}

TEST_CASE("variance experiment is deterministic and thread-count independent") {
    const DigitalNet net = make_example_net(Field::of_order(2));
    const Integrand f = WalshIntegrand{{4, 0, 0}};
    setenv("NETGAIN_THREADS", "1", 1);
    const auto a = variance_experiment(net, f, 500, 99);
    setenv("NETGAIN_THREADS", "3", 1);
    const auto c = variance_experiment(net, f, 500, 99);
    unsetenv("NETGAIN_THREADS");
    CHECK(a.estimates == c.estimates);
    CHECK(a.estimate_mean == c.estimate_mean);
    CHECK(a.estimate_variance == c.estimate_variance);
    CHECK(a.target == c.target);
    const auto d = variance_experiment(net, f, 500, 100);
    CHECK_FALSE(a.estimates == d.estimates);
    CHECK(a.estimate_variance > 0.0);
}

TEST_CASE("cancelling complex Walsh sums estimate exactly zero") {
    const DigitalNet net = make_random_net(Field::of_order(3), 2, 2, 2, 8);
    const auto res = variance_experiment(net, WalshIntegrand{{4, 2}}, 50, 99);
    REQUIRE(res.target.has_value());
    CHECK(*res.target == 0);
    CHECK(res.estimate_variance == 0.0);
}

TEST_CASE("theoretical variance examples") {
    const DigitalNet ex = make_example_net(Field::of_order(2));
    const std::vector<ExactSpectrumEntry> constant{{{0, 0, 0}, Rational(3)}};
    CHECK(theoretical_variance_exact(ex, constant) == 0);
    const std::vector<ExactSpectrumEntry> single{{{4, 0, 0}, Rational(1)}};
    CHECK(theoretical_variance_exact(ex, single) == Rational(1, 4));
    const std::vector<SpectrumEntry> single_d{{{4, 0, 0}, 1.0}};
    CHECK(theoretical_variance(ex, single_d) == 0.25);
}

TEST_CASE("real part of a complex Walsh function splits over conjugate indices") {
    const Field f3 = Field::of_order(3);
    const auto spec = integrand_spectrum(f3, WalshIntegrand{{1, 5}}, 2);
    REQUIRE(spec.size() == 2);
    CHECK(spec[0].first == std::vector<std::uint64_t>{1, 5});
    CHECK(spec[1].first == std::vector<std::uint64_t>{2, 7});  // digits (2), (1,2)
    CHECK(spec[0].second == 0.5);
    const Field f4 = Field::of_order(4);
    CHECK(integrand_spectrum(f4, WalshIntegrand{{3, 6}}, 2).size() == 1);  // characteristic 2: real
}

TEST_CASE("exact and floating spectra give the same theoretical variance") {
    SplitMix64 gen(3);
    const DigitalNet net = make_random_net(Field::of_order(2), 2, 2, 2, 4);
    GridFunction g{2, 2, 2, {}};
    for (int i = 0; i < 16; ++i) g.values.push_back(static_cast<double>(gen.below(17)) / 4.0);
    const auto exact = integrand_spectrum_exact(net.field(), g, 2);
    REQUIRE(exact.has_value());
    const double approx = theoretical_variance(net, integrand_spectrum(net.field(), g, 2));
    CHECK(std::abs(to_double(theoretical_variance_exact(net, *exact)) - approx) < 1e-12);
    GridFunction irrational = g;
    irrational.values[0] = 0.1;
    CHECK_FALSE(integrand_spectrum_exact(net.field(), irrational, 2).has_value());
}
