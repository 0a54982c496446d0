#include "netgain/walsh.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace netgain {

namespace {

std::uint64_t upow(std::uint64_t b, int e, std::uint64_t limit) {
    std::uint64_t v = 1;
    for (int i = 0; i < e; ++i) {
        if (v > limit / b) throw GuardExceeded("enumeration limit exceeded");
        v *= b;
    }
    return v;
}

int character_modulus(const Field& f, WalshCharacter c) { return c == WalshCharacter::trace ? f.p() : f.b(); }

// Exponent contribution of one digit pair.
struct ExponentAccumulator {
    const Field& field;
    WalshCharacter character;
    Element trace_acc = 0;
    long long literal_acc = 0;

    void add(Element kappa, Element xi) {
        const Element prod = field.mul(kappa, xi);
        if (character == WalshCharacter::trace)
            trace_acc = field.add(trace_acc, prod);
        else
            literal_acc += prod;
    }
    RootOfUnity result() const {
        if (character == WalshCharacter::trace) return {field.p(), field.first_coordinate(trace_acc)};
        return {field.b(), static_cast<int>(literal_acc % field.b())};
    }
};

}  // namespace

std::complex<double> RootOfUnity::value() const {
    const double angle = 2.0 * std::numbers::pi * exponent / modulus;
    return {std::cos(angle), std::sin(angle)};
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& o) const {
    if (modulus != o.modulus) throw std::invalid_argument("roots of unity of different order");
    return {modulus, (exponent + o.exponent) % modulus};
}

CyclotomicSum::CyclotomicSum(int modulus) : modulus_(modulus), counts_(static_cast<std::size_t>(modulus), 0) {
    if (modulus < 1) throw std::invalid_argument("modulus must be positive");
    if (modulus > 1) prime_power_decompose(modulus);
}

void CyclotomicSum::add(int exponent, std::int64_t times) {
    const int e = ((exponent % modulus_) + modulus_) % modulus_;
    counts_[static_cast<std::size_t>(e)] += times;
}

void CyclotomicSum::add(const RootOfUnity& w, std::int64_t times) {
    if (w.modulus != modulus_) throw std::invalid_argument("root of unity of different order");
    add(w.exponent, times);
}

std::optional<std::int64_t> CyclotomicSum::integer() const {
    if (modulus_ == 1) return counts_[0];
    // Reduce modulo Phi_q(x) = sum_{j<p} x^{j q/p}: for each e >= phi(q),
    // omega^e = -sum_{j=1}^{p-1} omega^{e - j q/p}.
    const auto [p, r] = prime_power_decompose(modulus_);
    (void)r;
    const int step = modulus_ / p;
    const int phi = modulus_ - step;
    std::vector<std::int64_t> c = counts_;
    for (int e = modulus_ - 1; e >= phi; --e) {
        const std::int64_t v = c[static_cast<std::size_t>(e)];
        if (v == 0) continue;
        c[static_cast<std::size_t>(e)] = 0;
        for (int j = 1; j < p; ++j) c[static_cast<std::size_t>(e - j * step)] -= v;
    }
    for (int e = 1; e < phi; ++e)
        if (c[static_cast<std::size_t>(e)] != 0) return std::nullopt;
    return c[0];
}

std::complex<double> CyclotomicSum::value() const {
    std::complex<double> acc{0.0, 0.0};
    for (int e = 0; e < modulus_; ++e)
        acc += static_cast<double>(counts_[static_cast<std::size_t>(e)]) * RootOfUnity{modulus_, e}.value();
    return acc;
}

int digit_count(std::uint64_t v, int b) {
    int d = 0;
    while (v > 0) {
        v /= static_cast<std::uint64_t>(b);
        ++d;
    }
    return d;
}

RootOfUnity wal_eval(const Field& field, std::span<const std::uint64_t> k, const PointSet& points, std::size_t h,
                     WalshCharacter character) {
    if (k.size() != static_cast<std::size_t>(points.s())) throw std::invalid_argument("Walsh index needs s components");
    if (points.b() != field.b()) throw std::invalid_argument("point base differs from field order");
    ExponentAccumulator acc{field, character};
    for (int j = 0; j < points.s(); ++j) {
        std::uint64_t kj = k[static_cast<std::size_t>(j)];
        if (digit_count(kj, field.b()) > points.depth()) throw std::invalid_argument("insufficient digits for Walsh index");
        for (int i = 0; kj > 0; ++i) {
            const Element kappa = static_cast<Element>(kj % static_cast<std::uint64_t>(field.b()));
            kj /= static_cast<std::uint64_t>(field.b());
            acc.add(kappa, points.digit(h, j, i));
        }
    }
    return acc.result();
}

std::int64_t dirichlet_sum(const Field& field, const Subset& u, std::span<const int> k, const PointSet& points,
                           std::size_t h, WalshCharacter character) {
    if (u.size() != k.size()) throw std::invalid_argument("k must have one entry per coordinate of u");
    int total = 0;
    for (int kj : k) total += kj;
    const std::uint64_t count = upow(static_cast<std::uint64_t>(field.b()), total, 1ULL << 22);

    CyclotomicSum sum(character_modulus(field, character));
    std::vector<std::uint64_t> l(static_cast<std::size_t>(points.s()), 0);
    std::vector<std::uint64_t> limits;
    for (int kj : k) limits.push_back(upow(static_cast<std::uint64_t>(field.b()), kj, 1ULL << 22));
    std::vector<std::uint64_t> pos(u.size(), 0);
    for (std::uint64_t step = 0; step < count; ++step) {
        for (std::size_t idx = 0; idx < u.size(); ++idx) l[static_cast<std::size_t>(u[idx])] = pos[idx];
        sum.add(wal_eval(field, l, points, h, character));
        std::size_t i = 0;
        while (i < pos.size() && ++pos[i] == limits[i]) pos[i++] = 0;
    }
    const auto v = sum.integer();
    if (!v) throw std::logic_error("Walsh-Dirichlet sum is not an integer");
    return *v;
}

std::int64_t dirichlet_closed_form(const Subset& u, std::span<const int> k, const PointSet& points, std::size_t h) {
    std::int64_t scale = 1;
    for (std::size_t idx = 0; idx < u.size(); ++idx) {
        if (points.prefix(h, u[idx], k[idx]) != 0) return 0;
        for (int i = 0; i < k[idx]; ++i) scale *= points.b();
    }
    return scale;
}

CyclotomicSum character_sum(const DigitalNet& net, std::span<const std::uint64_t> l, WalshCharacter character) {
    if (l.size() != static_cast<std::size_t>(net.s())) throw std::invalid_argument("Walsh index needs s components");
    int depth = net.n();
    for (auto lj : l) depth = std::max(depth, digit_count(lj, net.b()));
    const PointSet pts = generate_points(net, depth);
    CyclotomicSum sum(character_modulus(net.field(), character));
    for (std::size_t h = 0; h < pts.size(); ++h) sum.add(wal_eval(net.field(), l, pts, h, character));
    return sum;
}

std::size_t GridFunction::cell_count() const {
    return static_cast<std::size_t>(upow(static_cast<std::uint64_t>(b), n * s, 1ULL << 20));
}

void GridFunction::validate() const {
    prime_power_decompose(b);
    if (n < 1 || s < 1) throw std::invalid_argument("grid function needs n >= 1 and s >= 1");
    if (values.size() != cell_count()) throw std::invalid_argument("grid function needs b^(n s) values");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("grid function values must be finite");
}

std::size_t GridFunction::cell_of(const PointSet& points, std::size_t h) const {
    if (points.depth() < n) throw std::invalid_argument("point precision below grid resolution");
    if (points.s() != s || points.b() != b) throw std::invalid_argument("point set does not match grid function");
    std::uint64_t cell = 0;
    const std::uint64_t per_axis = upow(static_cast<std::uint64_t>(b), n, 1ULL << 20);
    for (int j = 0; j < s; ++j) cell = cell * per_axis + points.prefix(h, j, n);
    return static_cast<std::size_t>(cell);
}

double GridFunction::mean() const {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc / static_cast<double>(values.size());
}

double GridFunction::mean_square() const {
    double acc = 0.0;
    for (double v : values) acc += v * v;
    return acc / static_cast<double>(values.size());
}

GridFunction grid_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        GridFunction f;
        f.b = j.at("b").get<int>();
        f.n = j.at("n").get<int>();
        f.s = j.at("s").get<int>();
        f.values = j.at("values").get<std::vector<double>>();
        f.validate();
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("grid file: ") + e.what());
    }
}

std::string grid_to_json(const GridFunction& f) {
    nlohmann::json j;
    j["b"] = f.b;
    j["n"] = f.n;
    j["s"] = f.s;
    j["values"] = f.values;
    return j.dump();
}

GridFunction read_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open grid file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return grid_from_json(ss.str());
}

std::complex<double> WalshSpectrum::at(std::span<const std::uint64_t> l) const {
    if (l.size() != static_cast<std::size_t>(s)) throw std::invalid_argument("Walsh index needs s components");
    const std::uint64_t per_axis = upow(static_cast<std::uint64_t>(b), n, 1ULL << 20);
    std::uint64_t flat = 0;
    for (auto lj : l) {
        if (lj >= per_axis) return {0.0, 0.0};
        flat = flat * per_axis + lj;
    }
    return coeffs.at(static_cast<std::size_t>(flat));
}

std::vector<std::uint64_t> WalshSpectrum::index_vector(std::size_t flat) const {
    const std::uint64_t per_axis = upow(static_cast<std::uint64_t>(b), n, 1ULL << 20);
    std::vector<std::uint64_t> l(static_cast<std::size_t>(s));
    for (int j = s; j-- > 0;) {
        l[static_cast<std::size_t>(j)] = flat % per_axis;
        flat /= per_axis;
    }
    return l;
}

double WalshSpectrum::energy() const {
    double acc = 0.0;
    for (const auto& c : coeffs) acc += std::norm(c);
    return acc;
}

WalshSpectrum walsh_spectrum(const GridFunction& f, WalshCharacter character) {
    f.validate();
    const Field field = Field::of_order(f.b);
    const std::size_t per_axis = static_cast<std::size_t>(upow(static_cast<std::uint64_t>(f.b), f.n, 1ULL << 12));
    const std::size_t total = f.cell_count();

    // conj(wal_l) at the lower-left corner of 1-D cell c, as a complex table.
    std::vector<std::complex<double>> table(per_axis * per_axis);
    const int modulus = character_modulus(field, character);
    for (std::size_t l = 0; l < per_axis; ++l) {
        for (std::size_t c = 0; c < per_axis; ++c) {
            ExponentAccumulator acc{field, character};
            std::size_t lv = l;
            for (int i = 0; i < f.n; ++i) {
                const Element kappa = static_cast<Element>(lv % static_cast<std::size_t>(f.b));
                lv /= static_cast<std::size_t>(f.b);
                std::size_t div = 1;  // digit xi_{i+1} of c / b^n
                for (int q = 0; q < f.n - 1 - i; ++q) div *= static_cast<std::size_t>(f.b);
                const Element xi = static_cast<Element>((c / div) % static_cast<std::size_t>(f.b));
                acc.add(kappa, xi);
            }
            const RootOfUnity w = acc.result();
            const int conj = (modulus - w.exponent) % modulus;
            auto v = RootOfUnity{modulus, conj}.value();
            if (f.b == 2) v = {conj == 0 ? 1.0 : -1.0, 0.0};
            table[l * per_axis + c] = v;
        }
    }

    std::vector<std::complex<double>> data(f.values.begin(), f.values.end());
    std::vector<std::complex<double>> line(per_axis), out(per_axis);
    const double inv = 1.0 / static_cast<double>(per_axis);
    std::size_t stride = total;
    for (int axis = 0; axis < f.s; ++axis) {
        stride /= per_axis;
        const std::size_t block = stride * per_axis;
        for (std::size_t base = 0; base < total; base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                for (std::size_t c = 0; c < per_axis; ++c) line[c] = data[base + off + c * stride];
                for (std::size_t l = 0; l < per_axis; ++l) {
                    std::complex<double> acc{0.0, 0.0};
                    for (std::size_t c = 0; c < per_axis; ++c) acc += line[c] * table[l * per_axis + c];
                    out[l] = acc * inv;
                }
                for (std::size_t l = 0; l < per_axis; ++l) data[base + off + l * stride] = out[l];
            }
        }
    }
    return WalshSpectrum{f.b, f.n, f.s, std::move(data)};
}

std::vector<Rational> walsh_spectrum_dyadic(int n, int s, std::span<const Rational> values) {
    if (n < 1 || s < 1) throw std::invalid_argument("grid function needs n >= 1 and s >= 1");
    const std::size_t per_axis = static_cast<std::size_t>(upow(2, n, 1ULL << 12));
    const std::size_t total = static_cast<std::size_t>(upow(2, n * s, 1ULL << 20));
    if (values.size() != total) throw std::invalid_argument("grid function needs 2^(n s) values");

    // wal_l(c) = (-1)^{sum_i kappa_i xi_{i+1}}; xi_1 is the top bit of c.
    auto sign = [n](std::size_t l, std::size_t c) {
        int parity = 0;
        for (int i = 0; i < n; ++i) parity ^= static_cast<int>((l >> i) & (c >> (n - 1 - i)) & 1U);
        return parity ? -1 : 1;
    };

    std::vector<Rational> data(values.begin(), values.end());
    std::vector<Rational> line(per_axis), out(per_axis);
    const Rational inv(1, static_cast<std::int64_t>(per_axis));
    std::size_t stride = total;
    for (int axis = 0; axis < s; ++axis) {
        stride /= per_axis;
        const std::size_t block = stride * per_axis;
        for (std::size_t base = 0; base < total; base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                for (std::size_t c = 0; c < per_axis; ++c) line[c] = data[base + off + c * stride];
                for (std::size_t l = 0; l < per_axis; ++l) {
                    Rational acc(0);
                    for (std::size_t c = 0; c < per_axis; ++c) acc += sign(l, c) > 0 ? line[c] : -line[c];
                    out[l] = acc * inv;
                }
                for (std::size_t l = 0; l < per_axis; ++l) data[base + off + l * stride] = out[l];
            }
        }
    }
    return data;
}

}  // namespace netgain
