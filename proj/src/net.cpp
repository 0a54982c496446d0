#include "netgain/net.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "netgain/kernels.hpp"
#include "netgain/rng.hpp"

namespace netgain {

namespace {

std::uint64_t checked_power(std::uint64_t b, int e, std::uint64_t limit) {
    std::uint64_t v = 1;
    for (int i = 0; i < e; ++i) {
        if (v > limit / b) throw GuardExceeded("power exceeds enumeration limit");
        v *= b;
    }
    return v;
}

}  // namespace

std::vector<Subset> nonempty_subsets(int s) {
    std::vector<Subset> out;
    for (int size = 1; size <= s; ++size) {
        std::vector<bool> pick(static_cast<std::size_t>(s), false);
        std::fill(pick.begin(), pick.begin() + size, true);
        do {
            Subset u;
            for (int j = 0; j < s; ++j)
                if (pick[static_cast<std::size_t>(j)]) u.push_back(j);
            out.push_back(std::move(u));
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    return out;
}

DigitalNet::DigitalNet(Field field, int s, int m, int n, std::vector<FieldMatrix> matrices)
    : field_(std::move(field)), s_(s), m_(m), n_(n), matrices_(std::move(matrices)) {
    if (s_ < 1) throw std::invalid_argument("net dimension s must be >= 1");
    if (m_ < 1 || n_ < m_) throw std::invalid_argument("net requires n >= m >= 1");
    if (matrices_.size() != static_cast<std::size_t>(s_))
        throw std::invalid_argument("expected one generating matrix per dimension");
    for (const auto& c : matrices_) {
        if (c.rows() != static_cast<std::size_t>(n_) || c.cols() != static_cast<std::size_t>(m_))
            throw std::invalid_argument("generating matrix must be n x m");
        c.validate(field_);
    }
}

std::uint64_t DigitalNet::size() const { return checked_power(static_cast<std::uint64_t>(b()), m_, 1ULL << 62); }

PointSet::PointSet(int b, int s, int depth, std::size_t count)
    : b_(b), s_(s), depth_(depth), count_(count),
      digits_(count * static_cast<std::size_t>(s) * static_cast<std::size_t>(depth), 0) {
    if (s < 1 || depth < 0) throw std::invalid_argument("invalid point set shape");
}

std::uint64_t PointSet::prefix(std::size_t h, int j, int k) const {
    if (k > depth_) throw std::out_of_range("prefix longer than digit precision");
    std::uint64_t v = 0;
    for (int i = 0; i < k; ++i) {
        if (v > (UINT64_MAX - static_cast<std::uint64_t>(b_)) / static_cast<std::uint64_t>(b_))
            throw GuardExceeded("prefix does not fit 64 bits");
        v = v * static_cast<std::uint64_t>(b_) + digit(h, j, i);
    }
    return v;
}

double PointSet::value(std::size_t h, int j) const {
    double x = 0.0;
    for (int i = depth_; i-- > 0;) x = (x + digit(h, j, i)) / b_;
    return x;
}

Element DigitMap::backward(Element e) const {
    if (identity()) return e;
    for (std::size_t d = 0; d < to_field.size(); ++d)
        if (to_field[d] == e) return static_cast<Element>(d);
    throw std::invalid_argument("element outside digit map");
}

void DigitMap::validate(int b) const {
    if (identity()) return;
    if (to_field.size() != static_cast<std::size_t>(b)) throw std::invalid_argument("digit map must have b entries");
    if (to_field[0] != 0) throw std::invalid_argument("digit map must send 0 to 0");
    std::vector<bool> seen(static_cast<std::size_t>(b), false);
    for (Element e : to_field) {
        if (e >= b || seen[e]) throw std::invalid_argument("digit map is not a bijection");
        seen[e] = true;
    }
}

PointSet generate_points(const DigitalNet& net, int depth, const DigitMap& phi) {
    if (depth == 0) depth = net.n();
    if (depth < net.n()) throw std::invalid_argument("point depth below net precision");
    phi.validate(net.b());
    const std::uint64_t count = checked_power(static_cast<std::uint64_t>(net.b()), net.m(), 1ULL << 24);
    const Field& f = net.field();
    PointSet pts(net.b(), net.s(), depth, static_cast<std::size_t>(count));

    std::vector<Element> eta(static_cast<std::size_t>(net.m()), 0);
    for (std::uint64_t h = 0; h < count; ++h) {
        std::uint64_t rest = h;
        for (auto& e : eta) {
            e = phi.forward(static_cast<Element>(rest % static_cast<std::uint64_t>(net.b())));
            rest /= static_cast<std::uint64_t>(net.b());
        }
        for (int j = 0; j < net.s(); ++j) {
            const auto xi = mat_vec(f, net.matrix(j), eta);
            for (int i = 0; i < net.n(); ++i) pts.digit(h, j, i) = phi.backward(xi[static_cast<std::size_t>(i)]);
        }
    }
    return pts;
}

FieldMatrix stack_c_uk(const DigitalNet& net, const Subset& u, std::span<const int> k) {
    if (u.empty()) throw std::invalid_argument("subset u must be nonempty");
    if (u.size() != k.size()) throw std::invalid_argument("k must have one entry per coordinate of u");
    const std::size_t m = static_cast<std::size_t>(net.m());
    std::size_t rows = 0;
    for (int kj : k) {
        if (kj < 0) throw std::invalid_argument("k entries must be nonnegative");
        rows += static_cast<std::size_t>(kj);
    }
    FieldMatrix out(rows, m);
    std::size_t r = 0;
    for (std::size_t idx = 0; idx < u.size(); ++idx) {
        if (u[idx] < 0 || u[idx] >= net.s()) throw std::out_of_range("coordinate outside 1..s");
        const auto& c = net.matrix(u[idx]);
        for (int i = 0; i < k[idx]; ++i, ++r) {
            if (i >= net.n()) continue;  // zero row
            for (std::size_t col = 0; col < m; ++col) out.at(r, col) = c.at(static_cast<std::size_t>(i), col);
        }
    }
    return out;
}

bool full_row_rank(const DigitalNet& net, const Subset& u, std::span<const int> k) {
    const auto c = stack_c_uk(net, u, k);
    return rank(net.field(), c) == c.rows();
}

int strict_t_value(const DigitalNet& net) {
    const int m = net.m();
    const int cap = std::min(net.n(), m + 1);
    int best = m + 1;  // any m + 1 rows are dependent
    for (const auto& u : nonempty_subsets(net.s())) {
        std::vector<int> k(u.size(), 0);
        while (true) {
            const int total = std::accumulate(k.begin(), k.end(), 0);
            if (total < best && !full_row_rank(net, u, k)) best = total;
            std::size_t pos = 0;
            while (pos < k.size() && ++k[pos] > cap) k[pos++] = 0;
            if (pos == k.size()) break;
        }
    }
    return m + 1 - best;
}

namespace {

bool is_net_with_t(const PointSet& pts, int m, int t) {
    const int level = m - t;
    const int s = pts.s();
    const std::uint64_t per_box = checked_power(static_cast<std::uint64_t>(pts.b()), t, 1ULL << 40);
    const std::uint64_t boxes = checked_power(static_cast<std::uint64_t>(pts.b()), level, 1ULL << 24);
    std::vector<int> c(static_cast<std::size_t>(s), 0);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(boxes));
    // enumerate compositions of `level` into s nonnegative parts
    c[0] = level;
    while (true) {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t h = 0; h < pts.size(); ++h) {
            std::uint64_t box = 0;
            for (int j = 0; j < s; ++j) {
                const std::uint64_t scale = checked_power(static_cast<std::uint64_t>(pts.b()), c[static_cast<std::size_t>(j)], 1ULL << 24);
                box = box * scale + pts.prefix(h, j, c[static_cast<std::size_t>(j)]);
            }
            ++counts[static_cast<std::size_t>(box)];
        }
        for (auto cnt : counts)
            if (cnt != per_box) return false;

        // next composition (reverse lexicographic)
        int j = s - 2;
        while (j >= 0 && c[static_cast<std::size_t>(j)] == 0) --j;
        if (j < 0) break;
        --c[static_cast<std::size_t>(j)];
        const int tail = c[static_cast<std::size_t>(s - 1)] + 1;
        c[static_cast<std::size_t>(s - 1)] = 0;
        c[static_cast<std::size_t>(j + 1)] = tail;
    }
    return true;
}

}  // namespace

int strict_t_value_bruteforce(const PointSet& points, int m) {
    if (points.s() > 6 || m > 24) throw GuardExceeded("point set too large for elementary-interval enumeration");
    const std::uint64_t expected = checked_power(static_cast<std::uint64_t>(points.b()), m, 1ULL << 24);
    if (points.size() != expected) throw std::invalid_argument("point count is not b^m");
    if (points.depth() < m) throw std::invalid_argument("digit precision below m");
    for (int t = 0; t < m; ++t)
        if (is_net_with_t(points, m, t)) return t;
    return m;
}

int strict_t_value_bruteforce(const DigitalNet& net) {
    if (net.s() > 6 || static_cast<double>(net.m()) * std::log2(static_cast<double>(net.b())) > 16.0)
        throw GuardExceeded("net too large for elementary-interval enumeration");
    return strict_t_value_bruteforce(generate_points(net), net.m());
}

FieldVector dual_syndrome(const DigitalNet& net, int j, std::uint64_t l) {
    const Field& f = net.field();
    const auto& c = net.matrix(j);
    FieldVector out(static_cast<std::size_t>(net.m()), 0);
    for (int i = 0; i < net.n() && l > 0; ++i) {
        const Element kappa = static_cast<Element>(l % static_cast<std::uint64_t>(net.b()));
        l /= static_cast<std::uint64_t>(net.b());
        if (kappa == 0) continue;
        kernels::row_axpy(f, out, c.row(static_cast<std::size_t>(i)), kappa);
    }
    return out;
}

bool dual_contains(const DigitalNet& net, std::span<const std::uint64_t> l) {
    if (l.size() != static_cast<std::size_t>(net.s())) throw std::invalid_argument("dual index needs s components");
    const std::uint64_t limit = checked_power(static_cast<std::uint64_t>(net.b()), net.n(), 1ULL << 62);
    FieldVector acc(static_cast<std::size_t>(net.m()), 0);
    for (int j = 0; j < net.s(); ++j) {
        if (l[static_cast<std::size_t>(j)] >= limit) throw std::out_of_range("dual index component exceeds b^n");
        const auto syn = dual_syndrome(net, j, l[static_cast<std::size_t>(j)]);
        kernels::row_axpy(net.field(), acc, syn, 1);
    }
    return std::all_of(acc.begin(), acc.end(), [](Element e) { return e == 0; });
}

std::vector<Element> digitwise_sub(const Field& field, std::span<const Element> x, std::span<const Element> y) {
    if (x.size() != y.size()) throw std::invalid_argument("digit vectors differ in length");
    std::vector<Element> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = field.sub(x[i], y[i]);
    return out;
}

DigitalNet make_identity_net(const Field& field, int s, int m, int n) {
    if (n == 0) n = m;
    std::vector<FieldMatrix> mats;
    for (int j = 0; j < s; ++j) {
        FieldMatrix c(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) c.at(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = 1;
        mats.push_back(std::move(c));
    }
    return DigitalNet(field, s, m, n, std::move(mats));
}

DigitalNet make_faure_net(const Field& field, int s, int m, int n) {
    if (n == 0) n = m;
    if (field.b() < s) throw std::invalid_argument("Faure construction requires b >= s");
    // Pascal triangle modulo p
    std::vector<std::vector<int>> binom(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(m), 0));
    for (int k = 0; k < m; ++k) {
        binom[static_cast<std::size_t>(k)][0] = 1;
        for (int i = 1; i <= k; ++i)
            binom[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
                (binom[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i - 1)] +
                 (i < k ? binom[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i)] : 0)) % field.p();
    }
    std::vector<FieldMatrix> mats;
    for (int j = 0; j < s; ++j) {
        const Element beta = static_cast<Element>(j);
        FieldMatrix c(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k) {
            Element power = 1;  // beta^(k-i), walking i downward from k
            for (int i = k; i >= 0; --i) {
                const Element coef = field.from_int(binom[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]);
                c.at(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) = field.mul(coef, power);
                power = field.mul(power, beta);
            }
        }
        mats.push_back(std::move(c));
    }
    return DigitalNet(field, s, m, n, std::move(mats));
}

DigitalNet make_random_net(const Field& field, int s, int m, int n, std::uint64_t seed) {
    if (n == 0) n = m;
    SplitMix64 gen(hash_key({seed, static_cast<std::uint64_t>(field.b()), static_cast<std::uint64_t>(s),
                             static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(n)}));
    std::vector<FieldMatrix> mats;
    for (int j = 0; j < s; ++j) {
        FieldMatrix c(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
        for (int i = 0; i < n; ++i)
            for (int col = 0; col < m; ++col)
                c.at(static_cast<std::size_t>(i), static_cast<std::size_t>(col)) =
                    static_cast<Element>(gen.below(static_cast<std::uint64_t>(field.b())));
        mats.push_back(std::move(c));
    }
    return DigitalNet(field, s, m, n, std::move(mats));
}

DigitalNet make_example_net(const Field& field) {
    const auto mk = [](std::vector<Element> e) { return FieldMatrix(3, 3, std::move(e)); };
    std::vector<FieldMatrix> mats{
        mk({1, 0, 0, 0, 1, 1, 0, 0, 0}),
        mk({0, 1, 0, 1, 0, 1, 0, 0, 0}),
        mk({0, 0, 1, 1, 1, 0, 0, 0, 0}),
    };
    return DigitalNet(field, 3, 3, 3, std::move(mats));
}

DigitalNet load_sobol_net(std::istream& in, int s, int m, int n) {
    if (n == 0) n = m;
    if (s < 1 || m < 1 || m > 62 || n < m) throw std::invalid_argument("invalid Sobol' net shape");
    const Field f2 = Field::make(2, 1);
    std::vector<FieldMatrix> mats;
    mats.push_back([&] {
        FieldMatrix c(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) c.at(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = 1;
        return c;
    }());

    std::string line;
    int line_no = 0;
    while (static_cast<int>(mats.size()) < s && std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first.find_first_not_of("0123456789") != std::string::npos) continue;  // header
        int degree = 0;
        std::uint64_t a = 0;
        if (!(ls >> degree >> a) || degree < 1 || degree > 62)
            throw std::invalid_argument("malformed direction-number line " + std::to_string(line_no));
        std::vector<std::uint64_t> mi;
        std::uint64_t v = 0;
        while (ls >> v) mi.push_back(v);
        if (static_cast<int>(mi.size()) != degree)
            throw std::invalid_argument("direction-number line " + std::to_string(line_no) + " needs s initial values");
        for (std::size_t i = 0; i < mi.size(); ++i)
            if (mi[i] % 2 == 0 || mi[i] >= (1ULL << (i + 1)))
                throw std::invalid_argument("initial direction numbers must be odd and below 2^i");
        // m_i = 2 a_1 m_{i-1} ^ ... ^ 2^{s-1} a_{s-1} m_{i-s+1} ^ 2^s m_{i-s} ^ m_{i-s}
        for (int i = degree; i < m; ++i) {
            std::uint64_t next = mi[static_cast<std::size_t>(i - degree)] ^ (mi[static_cast<std::size_t>(i - degree)] << degree);
            for (int kk = 1; kk < degree; ++kk) {
                const std::uint64_t bit = (a >> (degree - 1 - kk)) & 1ULL;
                if (bit) next ^= mi[static_cast<std::size_t>(i - kk)] << kk;
            }
            mi.push_back(next);
        }
        FieldMatrix c(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
        for (int col = 0; col < m; ++col)
            for (int r = 0; r <= col && r < n; ++r)
                c.at(static_cast<std::size_t>(r), static_cast<std::size_t>(col)) =
                    static_cast<Element>((mi[static_cast<std::size_t>(col)] >> (col - r)) & 1ULL);
        mats.push_back(std::move(c));
    }
    if (static_cast<int>(mats.size()) < s) throw std::invalid_argument("not enough direction-number lines for s");
    return DigitalNet(f2, s, m, n, std::move(mats));
}

}  // namespace netgain
