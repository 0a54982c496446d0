#include "netgain/gf.hpp"

#include <algorithm>
#include <sstream>

#include "netgain/kernels.hpp"

namespace netgain {

namespace {

using Poly = std::vector<int>;  // lowest degree first, over GF(p)

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int mod_p(long long v, int p) {
    long long r = v % p;
    return static_cast<int>(r < 0 ? r + p : r);
}

int inverse_mod_p(int a, int p) {
    for (int x = 1; x < p; ++x)
        if ((a * x) % p == 1) return x;
    throw std::domain_error("no inverse modulo p");
}

// Remainder of a modulo a nonzero d.
Poly poly_mod(Poly a, const Poly& d, int p) {
    trim(a);
    Poly dd = d;
    trim(dd);
    const int lead_inv = inverse_mod_p(dd.back(), p);
    while (a.size() >= dd.size()) {
        const int coef = (a.back() * lead_inv) % p;
        const std::size_t shift = a.size() - dd.size();
        for (std::size_t i = 0; i < dd.size(); ++i)
            a[shift + i] = mod_p(a[shift + i] - coef * dd[i], p);
        trim(a);
    }
    return a;
}

bool irreducible(const Poly& f, int p) {
    const int deg = static_cast<int>(f.size()) - 1;
    if (deg <= 1) return deg == 1;
    // Trial division by every monic polynomial of degree 1..deg/2.
    for (int d = 1; 2 * d <= deg; ++d) {
        long long count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (long long code = 0; code < count; ++code) {
            Poly g(d + 1, 0);
            long long c = code;
            for (int i = 0; i < d; ++i) {
                g[i] = static_cast<int>(c % p);
                c /= p;
            }
            g[d] = 1;
            if (poly_mod(f, g, p).empty()) return false;
        }
    }
    return true;
}

Poly default_poly(int p, int r) {
    long long count = 1;
    for (int i = 0; i < r; ++i) count *= p;
    for (long long code = 0; code < count; ++code) {
        Poly f(r + 1, 0);
        long long c = code;
        for (int i = 0; i < r; ++i) {
            f[i] = static_cast<int>(c % p);
            c /= p;
        }
        f[r] = 1;
        if (irreducible(f, p)) return f;
    }
    throw std::logic_error("no irreducible polynomial found");
}

std::vector<int> digits_of(int v, int p, int r) {
    std::vector<int> d(r);
    for (int i = 0; i < r; ++i) {
        d[i] = v % p;
        v /= p;
    }
    return d;
}

int index_of(const std::vector<int>& d, int p) {
    int v = 0;
    for (std::size_t i = d.size(); i-- > 0;) v = v * p + d[i];
    return v;
}

}  // namespace

bool is_prime(int v) {
    if (v < 2) return false;
    for (int d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

std::pair<int, int> prime_power_decompose(int b) {
    if (b < 2) throw std::invalid_argument("field order must be a prime power >= 2");
    int p = 2;
    while (b % p != 0) ++p;
    int r = 0;
    int rest = b;
    while (rest % p == 0) {
        rest /= p;
        ++r;
    }
    if (rest != 1) throw std::invalid_argument("field order " + std::to_string(b) + " is not a prime power");
    return {p, r};
}

Field Field::make(int p, int r, std::optional<std::vector<int>> poly) {
    if (!is_prime(p)) throw std::invalid_argument("field characteristic " + std::to_string(p) + " is not prime");
    if (r < 1) throw std::invalid_argument("field extension degree must be >= 1");
    int b = 1;
    for (int i = 0; i < r; ++i) {
        b *= p;
        if (b > kMaxFieldOrder) throw std::invalid_argument("field order exceeds 64");
    }

    Poly f;
    if (poly) {
        f = *poly;
        if (static_cast<int>(f.size()) != r + 1)
            throw std::invalid_argument("polynomial must have r + 1 coefficients");
        for (int c : f)
            if (c < 0 || c >= p) throw std::invalid_argument("polynomial coefficient out of range");
        if (f.back() != 1) throw std::invalid_argument("polynomial must be monic of degree r");
        if (!irreducible(f, p)) throw std::invalid_argument("polynomial is reducible");
    } else if (r == 1) {
        f = {0, 1};
    } else {
        f = default_poly(p, r);
    }

    Field field;
    field.p_ = p;
    field.r_ = r;
    field.b_ = b;
    field.poly_ = f;

    auto t = std::make_shared<Tables>();
    const std::size_t bb = static_cast<std::size_t>(b) * b;
    t->add.resize(bb);
    t->mul.resize(bb);
    t->neg.resize(b);
    t->inv.assign(b, 0);
    for (int a = 0; a < b; ++a) {
        const auto da = digits_of(a, p, r);
        std::vector<int> nd(r);
        for (int i = 0; i < r; ++i) nd[i] = mod_p(-da[i], p);
        t->neg[a] = static_cast<Element>(index_of(nd, p));
        for (int c = 0; c < b; ++c) {
            const auto dc = digits_of(c, p, r);
            std::vector<int> sum(r);
            for (int i = 0; i < r; ++i) sum[i] = (da[i] + dc[i]) % p;
            t->add[a * b + c] = static_cast<Element>(index_of(sum, p));

            Poly prod(2 * r, 0);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) prod[i + j] = (prod[i + j] + da[i] * dc[j]) % p;
            Poly red = poly_mod(prod, f, p);
            red.resize(r, 0);
            t->mul[a * b + c] = static_cast<Element>(index_of(red, p));
        }
    }
    for (int a = 1; a < b; ++a)
        for (int c = 1; c < b; ++c)
            if (t->mul[a * b + c] == 1) t->inv[a] = static_cast<Element>(c);
    t->add32.assign(t->add.begin(), t->add.end());
    t->mul32.assign(t->mul.begin(), t->mul.end());
    field.tables_ = std::move(t);
    return field;
}

Field Field::of_order(int b) {
    const auto [p, r] = prime_power_decompose(b);
    return make(p, r);
}

Element Field::inv(Element a) const {
    if (check(a) == 0) throw std::domain_error("inverse of zero");
    return tables_->inv[a];
}

Element Field::from_int(long long v) const { return static_cast<Element>(mod_p(v, p_)); }

std::string Field::describe() const {
    std::ostringstream os;
    os << "GF(" << b_ << ")";
    if (r_ > 1) {
        os << " mod ";
        bool first = true;
        for (int i = r_; i >= 0; --i) {
            if (poly_[i] == 0) continue;
            if (!first) os << " + ";
            first = false;
            if (poly_[i] != 1 || i == 0) os << poly_[i];
            if (i >= 1) os << "x";
            if (i >= 2) os << "^" << i;
        }
    }
    return os.str();
}

Element field_arith(const Field& field, FieldOp op, Element a, std::optional<Element> c) {
    const auto need = [&]() -> Element {
        if (!c) throw std::invalid_argument("binary field operation needs two operands");
        return *c;
    };
    switch (op) {
    case FieldOp::add: return field.add(a, need());
    case FieldOp::sub: return field.sub(a, need());
    case FieldOp::mul: return field.mul(a, need());
    case FieldOp::neg: return field.neg(a);
    case FieldOp::inv: return field.inv(a);
    }
    throw std::invalid_argument("unknown field operation");
}

FieldMatrix::FieldMatrix(std::size_t rows, std::size_t cols, std::vector<Element> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) throw std::invalid_argument("matrix entry count does not match shape");
}

FieldMatrix FieldMatrix::identity(std::size_t n) {
    FieldMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

void FieldMatrix::append_row(std::span<const Element> values) {
    if (rows_ == 0 && entries_.empty() && cols_ == 0) cols_ = values.size();
    if (values.size() != cols_) throw std::invalid_argument("row length does not match matrix");
    entries_.insert(entries_.end(), values.begin(), values.end());
    ++rows_;
}

FieldMatrix FieldMatrix::transposed() const {
    FieldMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
}

void FieldMatrix::validate(const Field& field) const {
    if (entries_.size() != rows_ * cols_) throw std::invalid_argument("matrix entry count does not match shape");
    for (Element e : entries_)
        if (e >= field.b()) throw std::invalid_argument("matrix entry outside the field");
}

namespace {

// Reduced row echelon form in place; returns pivot column per pivot row.
std::vector<std::size_t> reduce(const Field& field, FieldMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && m.at(sel, col) == 0) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row)
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.at(sel, c), m.at(row, c));
        const Element scale = field.inv(m.at(row, col));
        for (std::size_t c = 0; c < m.cols(); ++c) m.at(row, c) = field.mul(m.at(row, c), scale);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m.at(r, col) == 0) continue;
            kernels::row_axpy(field, m.row(r), m.row(row), field.neg(m.at(r, col)));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

std::size_t rank(const Field& field, const FieldMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    FieldMatrix work = m;
    return reduce(field, work).size();
}

std::vector<FieldVector> kernel_basis(const Field& field, const FieldMatrix& m) {
    FieldMatrix work = m;
    const auto pivots = reduce(field, work);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;

    std::vector<FieldVector> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        FieldVector v(m.cols(), 0);
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = field.neg(work.at(i, free));
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<FieldVector> span_basis(const Field& field, std::span<const FieldVector> vectors) {
    if (vectors.empty()) return {};
    FieldMatrix m;
    for (const auto& v : vectors) m.append_row(v);
    const auto pivots = reduce(field, m);
    std::vector<FieldVector> basis;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        auto r = m.row(i);
        basis.emplace_back(r.begin(), r.end());
    }
    return basis;
}

std::uint64_t subspace_all_nonzero_count(const Field& field, std::span<const FieldVector> basis) {
    const std::size_t d = basis.size();
    if (d == 0) return 0;
    const std::size_t len = basis.front().size();
    for (const auto& v : basis)
        if (v.size() != len) throw std::invalid_argument("basis vectors differ in length");

    std::uint64_t total = 1;
    for (std::size_t i = 0; i < d; ++i) {
        total *= static_cast<std::uint64_t>(field.b());
        if (total > (1ULL << 20)) throw GuardExceeded("subspace too large to enumerate");
    }

    // Odometer over coefficient vectors; the running combination is updated
    // incrementally as one coefficient advances.
    std::vector<Element> coeff(d, 0);
    FieldVector acc(len, 0);
    std::uint64_t count = 0;
    for (std::uint64_t step = 0;; ++step) {
        if (step > 0 && std::all_of(acc.begin(), acc.end(), [](Element e) { return e != 0; })) ++count;
        std::size_t pos = 0;
        while (pos < d) {
            // coeff[pos] -> coeff[pos] + 1 (in index order), adjust acc.
            const Element old = coeff[pos];
            const Element next = static_cast<Element>((old + 1) % field.b());
            const Element delta = field.sub(next, old);
            kernels::row_axpy(field, acc, basis[pos], delta);
            coeff[pos] = next;
            if (next != 0) break;
            ++pos;
        }
        if (pos == d) break;
    }
    // step 0 is the zero vector, never nowhere-zero when len > 0.
    if (len == 0) count = total;
    return count;
}

FieldVector mat_vec(const Field& field, const FieldMatrix& m, std::span<const Element> v) {
    if (v.size() != m.cols()) throw std::invalid_argument("vector length does not match matrix");
    FieldVector out(m.rows(), 0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Element acc = 0;
        for (std::size_t c = 0; c < m.cols(); ++c) acc = field.add(acc, field.mul(m.at(r, c), v[c]));
        out[r] = acc;
    }
    return out;
}

}  // namespace netgain
