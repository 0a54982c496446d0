#include "netgain/gain.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "netgain/kernels.hpp"

namespace netgain {

namespace {

std::vector<int> plus_ones(const std::vector<int>& k, unsigned mask) {
    std::vector<int> out = k;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (mask & (1u << i)) ++out[i];
    return out;
}

int rank_of(const DigitalNet& net, const Subset& u, const std::vector<int>& k) {
    return static_cast<int>(rank(net.field(), stack_c_uk(net, u, k)));
}

// Relabels values densely (sorted order) so they fit 32-bit lanes.
std::vector<std::uint32_t> dense_labels(const std::vector<std::uint64_t>& raw) {
    std::vector<std::uint64_t> sorted = raw;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<std::uint32_t> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        out[i] = static_cast<std::uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), raw[i]) - sorted.begin());
    return out;
}

std::uint64_t encode(const FieldVector& v, int b) {
    std::uint64_t code = 0;
    for (std::size_t i = v.size(); i-- > 0;) code = code * static_cast<std::uint64_t>(b) + v[i];
    return code;
}

FieldVector decode(std::uint64_t code, int b, std::size_t len) {
    FieldVector v(len);
    for (auto& e : v) {
        e = static_cast<Element>(code % static_cast<std::uint64_t>(b));
        code /= static_cast<std::uint64_t>(b);
    }
    return v;
}

std::uint64_t upow(std::uint64_t b, int e, std::uint64_t limit) {
    std::uint64_t v = 1;
    for (int i = 0; i < e; ++i) {
        if (v > limit / b) throw GuardExceeded("enumeration limit exceeded");
        v *= b;
    }
    return v;
}

}  // namespace

int GainQuery::k_total() const { return std::accumulate(k.begin(), k.end(), 0); }

void GainQuery::validate(int s) const {
    if (u.empty()) throw std::invalid_argument("subset u must be nonempty");
    if (u.size() != k.size()) throw std::invalid_argument("k must have one entry per coordinate of u");
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < 0 || u[i] >= s) throw std::out_of_range("coordinate outside 1..s");
        if (i > 0 && u[i] <= u[i - 1]) throw std::invalid_argument("subset u must be strictly increasing");
        if (k[i] < 0) throw std::invalid_argument("k entries must be nonnegative");
    }
}

std::vector<std::vector<int>> enumerate_k(std::size_t u_size, int kmax) {
    std::vector<std::vector<int>> out;
    std::vector<int> k(u_size, 0);
    while (true) {
        out.push_back(k);
        std::size_t pos = 0;
        while (pos < u_size && ++k[pos] > kmax) k[pos++] = 0;
        if (pos == u_size) break;
    }
    return out;
}

Rational gain_definition(const PointSet& points, const GainQuery& q) {
    q.validate(points.s());
    const int b = points.b();
    const std::size_t n = points.size();
    if (n == 0) throw std::invalid_argument("empty point set");
    for (int kj : q.k)
        if (kj + 1 > points.depth()) throw std::invalid_argument("digit precision below max k_j + 1");

    std::vector<std::vector<std::uint32_t>> fine(q.u.size()), coarse(q.u.size());
    std::vector<kernels::PrefixPair> coords;
    for (std::size_t idx = 0; idx < q.u.size(); ++idx) {
        std::vector<std::uint64_t> f(n), c(n);
        for (std::size_t h = 0; h < n; ++h) {
            c[h] = points.prefix(h, q.u[idx], q.k[idx]);
            f[h] = c[h] * static_cast<std::uint64_t>(b) + points.digit(h, q.u[idx], q.k[idx]);
        }
        fine[idx] = dense_labels(f);
        coarse[idx] = dense_labels(c);
    }
    for (std::size_t idx = 0; idx < q.u.size(); ++idx) coords.push_back({fine[idx], coarse[idx]});

    const std::int64_t total = kernels::pair_gain_sum(coords, b);
    const std::int64_t denom = static_cast<std::int64_t>(n) * checked_pow(b - 1, static_cast<int>(q.u.size()));
    return Rational(total, denom);
}

RankProfile rank_profile(const DigitalNet& net, const GainQuery& q) {
    q.validate(net.s());
    const Field& f = net.field();
    const auto k1 = plus_ones(q.k, ~0u);
    const FieldMatrix c_k = stack_c_uk(net, q.u, q.k);
    const FieldMatrix c_k1 = stack_c_uk(net, q.u, k1);

    RankProfile out;
    out.rank_k = static_cast<int>(rank(f, c_k));
    out.rank_k1 = static_cast<int>(rank(f, c_k1));
    out.dim_v = q.k_total() - out.rank_k;

    // V(u, k+1_u) ∩ P^⊥ is the kernel of C_{u,k+1_u}^T; project each basis
    // vector onto the digit at position k_j + 1 of every coordinate.
    const auto kernel = kernel_basis(f, c_k1.transposed());
    std::vector<std::size_t> top_rows;
    std::size_t offset = 0;
    for (int kj : q.k) {
        top_rows.push_back(offset + static_cast<std::size_t>(kj));
        offset += static_cast<std::size_t>(kj) + 1;
    }
    std::vector<FieldVector> projected;
    for (const auto& v : kernel) {
        FieldVector p;
        for (auto r : top_rows) p.push_back(v[r]);
        projected.push_back(std::move(p));
    }
    const auto image = span_basis(f, projected);
    out.dim_image = static_cast<int>(image.size());
    if (out.dim_image != static_cast<int>(q.u.size()) - out.rank_k1 + out.rank_k)
        throw std::logic_error("projected image dimension disagrees with the rank identity");
    out.q_count = subspace_all_nonzero_count(f, image);
    return out;
}

Rational gain_formula(const DigitalNet& net, const GainQuery& q) {
    const RankProfile rp = rank_profile(net, q);
    const int b = net.b();
    // b^{m-|k|} * b^{dim V} = b^{m - rank_k}
    const Rational scale = rational_pow(b, net.m() - rp.rank_k) / Rational(checked_pow(b - 1, static_cast<int>(q.u.size())));
    return scale * Rational(static_cast<std::int64_t>(rp.q_count));
}

std::uint64_t count_A_dual_bruteforce(const DigitalNet& net, const GainQuery& q) {
    q.validate(net.s());
    const int b = net.b();
    const std::size_t d = q.u.size();
    std::uint64_t candidates = 1;
    for (int kj : q.k) {
        const std::uint64_t span = static_cast<std::uint64_t>(b - 1) * upow(static_cast<std::uint64_t>(b), kj, 1ULL << 22);
        if (candidates > (1ULL << 22) / span) throw GuardExceeded("more than 2^22 dual candidates");
        candidates *= span;
    }

    // Syndromes of every l_j in [b^{k_j}, b^{k_j+1}).
    std::vector<std::vector<FieldVector>> syn(d);
    for (std::size_t idx = 0; idx < d; ++idx) {
        const std::uint64_t lo = upow(static_cast<std::uint64_t>(b), q.k[idx], 1ULL << 62);
        for (std::uint64_t l = lo; l < lo * static_cast<std::uint64_t>(b); ++l)
            syn[idx].push_back(dual_syndrome(net, q.u[idx], l));
    }

    std::vector<std::size_t> pos(d, 0);
    std::uint64_t count = 0;
    const Field& f = net.field();
    while (true) {
        FieldVector acc(static_cast<std::size_t>(net.m()), 0);
        for (std::size_t idx = 0; idx < d; ++idx) kernels::row_axpy(f, acc, syn[idx][pos[idx]], 1);
        if (std::all_of(acc.begin(), acc.end(), [](Element e) { return e == 0; })) ++count;
        std::size_t i = 0;
        while (i < d && ++pos[i] == syn[i].size()) pos[i++] = 0;
        if (i == d) break;
    }
    return count;
}

std::uint64_t count_A_dual_histogram(const DigitalNet& net, const GainQuery& q) {
    q.validate(net.s());
    const int b = net.b();
    const std::size_t m = static_cast<std::size_t>(net.m());
    const std::uint64_t cells = upow(static_cast<std::uint64_t>(b), net.m(), 1ULL << 16);
    const Field& f = net.field();

    const auto histogram = [&](int j, int kj) {
        std::vector<std::uint64_t> h(cells, 0);
        const auto bb = static_cast<std::uint64_t>(b);
        if (kj + 1 <= net.n()) {
            const std::uint64_t lo = upow(bb, kj, 1ULL << 40);
            for (std::uint64_t l = lo; l < lo * bb; ++l) ++h[encode(dual_syndrome(net, j, l), b)];
        } else {
            // Digits at positions >= n do not reach the syndrome: the low n
            // digits are free and the rest contribute a multiplicity.
            const std::uint64_t mult = static_cast<std::uint64_t>(b - 1) * upow(bb, kj - net.n(), 1ULL << 40);
            const std::uint64_t low = upow(bb, net.n(), 1ULL << 40);
            for (std::uint64_t l = 0; l < low; ++l) h[encode(dual_syndrome(net, j, l), b)] += mult;
        }
        return h;
    };

    std::vector<std::uint64_t> acc(cells, 0);
    acc[0] = 1;
    for (std::size_t idx = 0; idx < q.u.size(); ++idx) {
        const auto h = histogram(q.u[idx], q.k[idx]);
        std::vector<std::uint64_t> next(cells, 0);
        for (std::uint64_t a = 0; a < cells; ++a) {
            if (acc[a] == 0) continue;
            const auto va = decode(a, b, m);
            for (std::uint64_t c = 0; c < cells; ++c) {
                if (h[c] == 0) continue;
                auto vc = decode(c, b, m);
                kernels::row_axpy(f, vc, va, 1);
                next[encode(vc, b)] += acc[a] * h[c];
            }
        }
        acc = std::move(next);
    }
    return acc[0];
}

std::int64_t count_A_inclusion_exclusion(const DigitalNet& net, const GainQuery& q) {
    q.validate(net.s());
    const std::size_t d = q.u.size();
    std::int64_t total = 0;
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        const auto kv = plus_ones(q.k, mask);
        const int rows = std::accumulate(kv.begin(), kv.end(), 0);
        const std::int64_t v_count = checked_pow(net.b(), rows - rank_of(net, q.u, kv));
        const int sign_exp = static_cast<int>(d) - std::popcount(mask);
        total += (sign_exp % 2 == 0) ? v_count : -v_count;
    }
    return total;
}

BoundCase bound_case(int t, int m, int u_size, int k_total) {
    if (k_total <= m - t - u_size) return BoundCase::zero;
    if (k_total <= m - t) return BoundCase::middle;
    return BoundCase::top;
}

Rational bound_three_case(int b, int t, int m, int u_size, int k_total) {
    switch (bound_case(t, m, u_size, k_total)) {
    case BoundCase::zero: return Rational(0);
    case BoundCase::middle: return rational_pow(b, m - k_total) * rational_pow(b - 1, k_total - m + t);
    case BoundCase::top: return rational_pow(b, t);
    }
    throw std::logic_error("unreachable bound case");
}

Rational bound_B(const DigitalNet& net, const GainQuery& q) {
    q.validate(net.s());
    const int rank_k = rank_of(net, q.u, q.k);
    const int rank_k1 = rank_of(net, q.u, plus_ones(q.k, ~0u));
    return rational_pow(net.b(), net.m() - rank_k) * rational_pow(net.b() - 1, rank_k - rank_k1);
}

Rational bound_uniform(int b, int t, int s) { return rational_pow(b, t + s - 1) / rational_pow(b - 1, s - 1); }

namespace {

// deficient[k] = C_{u,k+1_u} not full row rank, for k ∈ [0, n]^{|u|}.
struct DeficiencyGrid {
    std::vector<std::vector<int>> ks;
    std::map<std::vector<int>, bool> deficient;
};

DeficiencyGrid deficiency_grid(const DigitalNet& net, const Subset& u) {
    if (u.empty()) throw std::invalid_argument("subset u must be nonempty");
    DeficiencyGrid g;
    g.ks = enumerate_k(u.size(), net.n());
    for (const auto& k : g.ks) g.deficient[k] = !full_row_rank(net, u, plus_ones(k, ~0u));
    return g;
}

bool componentwise_le(const std::vector<int>& a, const std::vector<int>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

}  // namespace

std::vector<std::vector<int>> enumerate_E1(const DigitalNet& net, const Subset& u) {
    const auto g = deficiency_grid(net, u);
    std::vector<std::vector<int>> out;
    for (const auto& k : g.ks) {
        if (!g.deficient.at(k)) continue;
        bool minimal = true;
        for (const auto& kp : g.ks) {
            if (kp != k && componentwise_le(kp, k) && g.deficient.at(kp)) {
                minimal = false;
                break;
            }
        }
        if (minimal) out.push_back(k);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<int>> enumerate_E2(const DigitalNet& net, const Subset& u) {
    const auto g = deficiency_grid(net, u);
    const unsigned full = (1u << u.size()) - 1;
    std::vector<std::vector<int>> out;
    for (const auto& k : g.ks) {
        if (!g.deficient.at(k)) continue;
        bool ok = true;
        for (unsigned v = 0; v < full && ok; ++v) ok = full_row_rank(net, u, plus_ones(k, v));
        if (ok) out.push_back(k);
    }
    std::sort(out.begin(), out.end());
    return out;
}

int t_star(const DigitalNet& net, const Subset& u) {
    const auto e1 = enumerate_E1(net, u);
    if (e1.empty()) throw std::logic_error("E1 is empty");
    int best = std::numeric_limits<int>::max();
    for (const auto& k : e1) best = std::min(best, std::accumulate(k.begin(), k.end(), 0));
    return net.m() + 1 - static_cast<int>(u.size()) - best;
}

namespace {

std::vector<Subset> subsets_within(const Subset& scope) {
    std::vector<Subset> out;
    for (const auto& idx : nonempty_subsets(static_cast<int>(scope.size()))) {
        Subset v;
        for (int i : idx) v.push_back(scope[static_cast<std::size_t>(i)]);
        out.push_back(std::move(v));
    }
    return out;
}

Subset full_scope(const DigitalNet& net, const std::optional<Subset>& scope) {
    if (scope) {
        GainQuery probe{*scope, std::vector<int>(scope->size(), 0)};
        probe.validate(net.s());
        return *scope;
    }
    Subset all(static_cast<std::size_t>(net.s()));
    std::iota(all.begin(), all.end(), 0);
    return all;
}

Rational max_gain_over_k(const DigitalNet& net, const Subset& v) {
    Rational best(0);
    for (const auto& k : enumerate_k(v.size(), net.n())) best = std::max(best, gain_formula(net, {v, k}));
    return best;
}

Rational closed_form(int b, int t_star_v, std::size_t v_size) {
    const int vs = static_cast<int>(v_size);
    return rational_pow(b, t_star_v + vs - 1) / rational_pow(b - 1, vs - 1);
}

}  // namespace

MaxGainReport gamma_exact(const DigitalNet& net, std::optional<Subset> scope) {
    const Subset top = full_scope(net, scope);
    MaxGainReport rep;
    rep.order = subsets_within(top);

    std::map<Subset, Rational> exhaustive_cache;
    const auto exhaustive = [&](const Subset& v) {
        auto it = exhaustive_cache.find(v);
        if (it == exhaustive_cache.end()) it = exhaustive_cache.emplace(v, max_gain_over_k(net, v)).first;
        return it->second;
    };

    for (const auto& u : rep.order) {
        SubsetGainReport sr;
        sr.e1 = enumerate_E1(net, u);
        sr.e2 = enumerate_E2(net, u);
        for (const auto& k : sr.e2)
            if (std::find(sr.e1.begin(), sr.e1.end(), k) == sr.e1.end())
                throw std::logic_error("E2 is not contained in E1");
        sr.t_star = t_star(net, u);
        sr.gamma_u_closed_form = closed_form(net.b(), sr.t_star, u.size());
        sr.gamma_u_bound = Rational(0);
        for (const auto& k : sr.e1) sr.gamma_u_bound = std::max(sr.gamma_u_bound, bound_B(net, {u, k}));
        sr.c1_full_rank = full_row_rank(net, u, std::vector<int>(u.size(), 1));
        rep.subsets.emplace(u, std::move(sr));
    }

    for (const auto& u : rep.order) {
        auto& sr = rep.subsets.at(u);
        Rational best(0);
        if (sr.c1_full_rank) {
            for (const auto& v : subsets_within(u)) best = std::max(best, rep.subsets.at(v).gamma_u_closed_form);
            sr.closed_form_used = true;
        } else {
            for (const auto& v : subsets_within(u)) best = std::max(best, exhaustive(v));
        }
        sr.gamma_u_star = best;
    }

    const auto& top_rep = rep.subsets.at(top);
    rep.gamma = top_rep.gamma_u_star;
    rep.c1_full_rank = top_rep.c1_full_rank;
    rep.closed_form_used = top_rep.closed_form_used;
    return rep;
}

Rational gamma_exhaustive(const DigitalNet& net, std::optional<Subset> scope) {
    const Subset top = full_scope(net, scope);
    Rational best(0);
    for (const auto& v : subsets_within(top)) best = std::max(best, max_gain_over_k(net, v));
    return best;
}

}  // namespace netgain
