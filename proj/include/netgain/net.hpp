#pragma once

// Digital nets over GF(b): generating matrices, point digits, the stacked
// row systems C_{u,k}, t-values and dual-net membership.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "netgain/gf.hpp"

namespace netgain {

/// Sorted, 0-based coordinate indices of a nonempty subset of 1..s.
using Subset = std::vector<int>;

/// All nonempty subsets of {0..s-1}, ordered by size then lexicographically.
std::vector<Subset> nonempty_subsets(int s);

class DigitalNet {
public:
    DigitalNet(Field field, int s, int m, int n, std::vector<FieldMatrix> matrices);

    const Field& field() const noexcept { return field_; }
    int b() const noexcept { return field_.b(); }
    int s() const noexcept { return s_; }
    int m() const noexcept { return m_; }
    int n() const noexcept { return n_; }
    const std::vector<FieldMatrix>& matrices() const noexcept { return matrices_; }
    const FieldMatrix& matrix(int j) const { return matrices_.at(static_cast<std::size_t>(j)); }

    std::uint64_t size() const;

    bool operator==(const DigitalNet&) const = default;

private:
    Field field_;
    int s_;
    int m_;
    int n_;
    std::vector<FieldMatrix> matrices_;
};

/// Digit table of a finite point set in [0,1)^s: digit(h, j, i) is the
/// coefficient of b^{-(i+1)} in coordinate j of point h.
class PointSet {
public:
    PointSet(int b, int s, int depth, std::size_t count);

    int b() const noexcept { return b_; }
    int s() const noexcept { return s_; }
    int depth() const noexcept { return depth_; }
    std::size_t size() const noexcept { return count_; }

    Element digit(std::size_t h, int j, int i) const { return digits_[offset(h, j) + static_cast<std::size_t>(i)]; }
    Element& digit(std::size_t h, int j, int i) { return digits_[offset(h, j) + static_cast<std::size_t>(i)]; }

    std::span<const Element> coordinate(std::size_t h, int j) const {
        return {digits_.data() + offset(h, j), static_cast<std::size_t>(depth_)};
    }
    std::span<Element> coordinate(std::size_t h, int j) {
        return {digits_.data() + offset(h, j), static_cast<std::size_t>(depth_)};
    }

    /// floor(b^k x_{h,j}) from the first k digits; k <= depth.
    std::uint64_t prefix(std::size_t h, int j, int k) const;

    double value(std::size_t h, int j) const;

    bool operator==(const PointSet&) const = default;

private:
    std::size_t offset(std::size_t h, int j) const {
        return (h * static_cast<std::size_t>(s_) + static_cast<std::size_t>(j)) * static_cast<std::size_t>(depth_);
    }

    int b_;
    int s_;
    int depth_;
    std::size_t count_;
    std::vector<Element> digits_;
};

/// Optional non-identity digit bijection Z_b -> F_b with 0 -> 0. The
/// default (empty) is the identity.
struct DigitMap {
    std::vector<Element> to_field;  // index -> element

    bool identity() const noexcept { return to_field.empty(); }
    Element forward(Element d) const { return identity() ? d : to_field.at(d); }
    Element backward(Element e) const;
    void validate(int b) const;
};

/// The b^m points in index order; digits beyond n (up to depth) are zero.
PointSet generate_points(const DigitalNet& net, int depth = 0, const DigitMap& phi = {});

/// Rows 1..k_j of C_{u_j} stacked in subset order; rows past n are zero.
FieldMatrix stack_c_uk(const DigitalNet& net, const Subset& u, std::span<const int> k);

bool full_row_rank(const DigitalNet& net, const Subset& u, std::span<const int> k);

int strict_t_value(const DigitalNet& net);

/// Smallest t for which every elementary interval of volume b^{t-m}
/// holds exactly b^t points; m = log_b(|points|).
int strict_t_value_bruteforce(const PointSet& points, int m);
int strict_t_value_bruteforce(const DigitalNet& net);

/// C_j^T nu_n(l) in F_b^m; digits of l beyond position n are ignored.
FieldVector dual_syndrome(const DigitalNet& net, int j, std::uint64_t l);

/// Membership of l in the dual net; each l_j must be below b^n.
bool dual_contains(const DigitalNet& net, std::span<const std::uint64_t> l);

/// Digit-wise b-adic subtraction x - y through the field.
std::vector<Element> digitwise_sub(const Field& field, std::span<const Element> x, std::span<const Element> y);

// Constructions.
DigitalNet make_identity_net(const Field& field, int s, int m, int n = 0);
DigitalNet make_faure_net(const Field& field, int s, int m, int n = 0);
DigitalNet make_random_net(const Field& field, int s, int m, int n, std::uint64_t seed);
/// Three-dimensional 3x3 example net whose strict t-value is 1 in every base.
DigitalNet make_example_net(const Field& field);

// Net file (JSON).
std::string net_to_json(const DigitalNet& net);
DigitalNet net_from_json(const std::string& text);
DigitalNet read_net_file(const std::string& path);
void write_net_file(const DigitalNet& net, const std::string& path);

/// Base-2 net from Joe-Kuo direction numbers ("d s a m_1 .. m_s" per line,
/// optional header). Dimension 1 is the van der Corput identity.
DigitalNet load_sobol_net(std::istream& directions, int s, int m, int n = 0);

}  // namespace netgain
