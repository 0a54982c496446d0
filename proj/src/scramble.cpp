#include "netgain/scramble.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "netgain/gain.hpp"
#include "netgain/parallel.hpp"
#include "netgain/rng.hpp"

namespace netgain {

namespace {

constexpr std::uint64_t kNodeTag = 0x6e6f6465ULL;
constexpr std::uint64_t kTailTag = 0x7461696cULL;
constexpr std::uint64_t kReplicateTag = 0x7265706cULL;

// Digit-wise negation in the field: conj(wal_l) = wal_{l'}.
std::vector<std::uint64_t> conjugate_index(const Field& field, std::span<const std::uint64_t> l) {
    std::vector<std::uint64_t> out;
    const auto b = static_cast<std::uint64_t>(field.b());
    for (auto lj : l) {
        std::uint64_t v = 0, scale = 1;
        for (; lj > 0; lj /= b, scale *= b) v += scale * field.neg(static_cast<Element>(lj % b));
        out.push_back(v);
    }
    return out;
}

GainQuery bucket_of(std::span<const std::uint64_t> l, int b) {
    GainQuery q;
    for (std::size_t j = 0; j < l.size(); ++j) {
        if (l[j] == 0) continue;
        q.u.push_back(static_cast<int>(j));
        q.k.push_back(digit_count(l[j], b) - 1);
    }
    return q;
}

std::optional<Rational> dyadic(double v) {
    double scaled = v;
    std::int64_t den = 1;
    for (int i = 0; i <= 40; ++i) {
        if (scaled == std::floor(scaled) && std::fabs(scaled) < 0x1.0p52) {
            return Rational(static_cast<std::int64_t>(scaled), den);
        }
        scaled *= 2.0;
        den *= 2;
    }
    return std::nullopt;
}

}  // namespace

std::vector<Element> ScrambleReplicate::permutation(int b, int j, std::span<const Element> prefix) const {
    if (!overrides.empty()) {
        auto it = overrides.find({j, std::vector<Element>(prefix.begin(), prefix.end())});
        if (it != overrides.end()) return it->second;
    }
    std::vector<Element> perm(static_cast<std::size_t>(b));
    std::iota(perm.begin(), perm.end(), Element{0});
    if (identity) return perm;
    std::uint64_t key = hash_key({seed, kNodeTag, static_cast<std::uint64_t>(j), prefix.size()});
    for (Element d : prefix) key = hash_combine(key, d);
    SplitMix64 gen(key);
    for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[gen.below(i + 1)]);
    return perm;
}

Element ScrambleReplicate::tail_digit(int b, std::size_t h, int j, int i) const {
    SplitMix64 gen(hash_key({seed, kTailTag, h, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(i)}));
    return static_cast<Element>(gen.below(static_cast<std::uint64_t>(b)));
}

PointSet owen_scramble(const PointSet& points, const ScrambleReplicate& rep) {
    if (rep.depth < points.depth()) throw std::invalid_argument("scrambling depth below input precision");
    const int b = points.b();
    PointSet out(b, points.s(), rep.depth, points.size());
    std::vector<Element> input(static_cast<std::size_t>(rep.depth));
    for (std::size_t h = 0; h < points.size(); ++h) {
        for (int j = 0; j < points.s(); ++j) {
            for (int i = 0; i < rep.depth; ++i)
                input[static_cast<std::size_t>(i)] =
                    i < points.depth() ? points.digit(h, j, i) : rep.tail_digit(b, h, j, i);
            for (int i = 0; i < rep.depth; ++i) {
                const auto perm = rep.permutation(b, j, std::span<const Element>(input.data(), static_cast<std::size_t>(i)));
                out.digit(h, j, i) = perm.at(input[static_cast<std::size_t>(i)]);
            }
        }
    }
    return out;
}

int integrand_depth(const Integrand& f, int b) {
    if (const auto* w = std::get_if<WalshIntegrand>(&f)) {
        int d = 0;
        for (auto lj : w->l) d = std::max(d, digit_count(lj, b));
        return d;
    }
    return std::get<GridFunction>(f).n;
}

double evaluate(const Field& field, const Integrand& f, const PointSet& points, std::size_t h) {
    if (const auto* w = std::get_if<WalshIntegrand>(&f)) {
        const RootOfUnity r = wal_eval(field, w->l, points, h);
        if (r.exponent == 0) return 1.0;
        if (2 * r.exponent == r.modulus) return -1.0;
        return r.value().real();
    }
    const auto& g = std::get<GridFunction>(f);
    return g.at_cell(g.cell_of(points, h));
}

double estimate(const Field& field, const Integrand& f, const PointSet& points) {
    if (const auto* g = std::get_if<GridFunction>(&f)) {
        if (g->b != field.b() || g->s != points.s()) throw std::invalid_argument("grid function does not match net");
    }
    if (const auto* w = std::get_if<WalshIntegrand>(&f)) {
        // Exact cyclotomic accumulation so that cancelling sums are exactly 0.
        CyclotomicSum sum(field.p());
        for (std::size_t h = 0; h < points.size(); ++h) sum.add(wal_eval(field, w->l, points, h));
        if (const auto v = sum.integer()) return static_cast<double>(*v) / static_cast<double>(points.size());
        return sum.value().real() / static_cast<double>(points.size());
    }
    double acc = 0.0;
    for (std::size_t h = 0; h < points.size(); ++h) acc += evaluate(field, f, points, h);
    return acc / static_cast<double>(points.size());
}

ExperimentResult variance_experiment(const DigitalNet& net, const Integrand& f, int replicates,
                                     std::uint64_t master_seed, int depth) {
    if (replicates < 2) throw std::invalid_argument("at least two replicates are needed");
    const int needed = std::max(net.n(), integrand_depth(f, net.b()));
    if (depth == 0) depth = needed;
    if (depth < needed) throw std::invalid_argument("scrambling depth below input precision");
    if (const auto* w = std::get_if<WalshIntegrand>(&f)) {
        if (w->l.size() != static_cast<std::size_t>(net.s())) throw std::invalid_argument("Walsh index needs s components");
    }

    const PointSet base = generate_points(net);
    ExperimentResult res;
    res.replicates = replicates;
    res.estimates.assign(static_cast<std::size_t>(replicates), 0.0);
    parallel_for(static_cast<std::size_t>(replicates), [&](std::size_t r) {
        ScrambleReplicate rep;
        rep.seed = hash_key({master_seed, kReplicateTag, r});
        rep.depth = depth;
        res.estimates[r] = estimate(net.field(), f, owen_scramble(base, rep));
    });

    const double R = static_cast<double>(replicates);
    double mean = 0.0;
    for (double e : res.estimates) mean += e;
    mean /= R;
    double m2 = 0.0, m4 = 0.0;
    for (double e : res.estimates) {
        const double d = (e - mean) * (e - mean);
        m2 += d;
        m4 += d * d;
    }
    res.estimate_mean = mean;
    res.estimate_variance = m2 / (R - 1.0);
    m4 /= R;
    const double s2 = res.estimate_variance;
    const double var_of_var = (m4 - s2 * s2 * (R - 3.0) / (R - 1.0)) / R;
    res.variance_standard_error = var_of_var > 0.0 ? std::sqrt(var_of_var) : 0.0;
    if (auto spec = integrand_spectrum_exact(net.field(), f, net.s())) res.target = theoretical_variance_exact(net, *spec);
    return res;
}

std::vector<SpectrumEntry> integrand_spectrum(const Field& field, const Integrand& f, int s) {
    std::vector<SpectrumEntry> out;
    if (const auto* w = std::get_if<WalshIntegrand>(&f)) {
        if (w->l.size() != static_cast<std::size_t>(s)) throw std::invalid_argument("Walsh index needs s components");
        const auto conj = conjugate_index(field, w->l);
        if (conj == w->l) {
            out.emplace_back(w->l, 1.0);
        } else {
            out.emplace_back(w->l, 0.5);
            out.emplace_back(conj, 0.5);
        }
        return out;
    }
    const auto& g = std::get<GridFunction>(f);
    if (g.s != s || g.b != field.b()) throw std::invalid_argument("grid function does not match net");
    const WalshSpectrum spec = walsh_spectrum(g);
    for (std::size_t i = 0; i < spec.coeffs.size(); ++i)
        if (std::abs(spec.coeffs[i]) > 1e-14) out.emplace_back(spec.index_vector(i), spec.coeffs[i]);
    return out;
}

std::optional<std::vector<ExactSpectrumEntry>> integrand_spectrum_exact(const Field& field, const Integrand& f, int s) {
    std::vector<ExactSpectrumEntry> out;
    if (std::holds_alternative<WalshIntegrand>(f)) {
        for (auto& [l, c] : integrand_spectrum(field, f, s)) out.emplace_back(l, c.real() == 1.0 ? Rational(1) : Rational(1, 2));
        return out;
    }
    const auto& g = std::get<GridFunction>(f);
    if (g.b != 2 || g.s != s) return std::nullopt;
    g.validate();
    std::vector<Rational> values;
    values.reserve(g.values.size());
    for (double v : g.values) {
        auto q = dyadic(v);
        if (!q) return std::nullopt;
        values.push_back(*q);
    }
    const auto coeffs = walsh_spectrum_dyadic(g.n, g.s, values);
    const WalshSpectrum layout{g.b, g.n, g.s, {}};
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] != 0) out.emplace_back(layout.index_vector(i), coeffs[i]);
    return out;
}

double theoretical_variance(const DigitalNet& net, std::span<const SpectrumEntry> spectrum) {
    std::map<GainQuery, double> sigma2;
    for (const auto& [l, c] : spectrum) {
        GainQuery q = bucket_of(l, net.b());
        if (q.u.empty()) continue;
        sigma2[q] += std::norm(c);
    }
    double acc = 0.0;
    for (const auto& [q, v] : sigma2) acc += to_double(gain_formula(net, q)) * v;
    return acc / static_cast<double>(net.size());
}

Rational theoretical_variance_exact(const DigitalNet& net, std::span<const ExactSpectrumEntry> spectrum) {
    std::map<GainQuery, Rational> sigma2;
    for (const auto& [l, c] : spectrum) {
        GainQuery q = bucket_of(l, net.b());
        if (q.u.empty()) continue;
        sigma2[q] += c * c;
    }
    Rational acc(0);
    for (const auto& [q, v] : sigma2) acc += gain_formula(net, q) * v;
    return acc / static_cast<std::int64_t>(net.size());
}

}  // namespace netgain
