#pragma once

// Arithmetic and dense linear algebra over GF(p^r), b = p^r <= 64.
//
// An element is identified with its index in [0, b): the base-p digits of the
// index are the coefficients (lowest degree first) of a polynomial of degree
// < r, reduced modulo a fixed monic irreducible polynomial. The digit map
// Z_b -> F_b is the identity on indices, so 0 maps to 0.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace netgain {

using Element = std::uint8_t;

inline constexpr int kMaxFieldOrder = 64;

/// Raised when an enumeration would exceed a hard size limit.
class GuardExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

enum class FieldOp { add, sub, mul, neg, inv };

class Field {
public:
    /// Builds GF(p^r). Without `poly`, the monic irreducible polynomial with
    /// the smallest integer encoding sum_i c_i p^i is used. Coefficients are
    /// given lowest degree first and must have length r + 1.
    static Field make(int p, int r, std::optional<std::vector<int>> poly = std::nullopt);

    /// Builds the field of order b (a prime power) with the default polynomial.
    static Field of_order(int b);

    int p() const noexcept { return p_; }
    int r() const noexcept { return r_; }
    int b() const noexcept { return b_; }
    const std::vector<int>& poly() const noexcept { return poly_; }

    Element add(Element a, Element c) const { return tables_->add[idx(a, c)]; }
    Element sub(Element a, Element c) const { return tables_->add[idx(a, tables_->neg[check(c)])]; }
    Element mul(Element a, Element c) const { return tables_->mul[idx(a, c)]; }
    Element neg(Element a) const { return tables_->neg[check(a)]; }
    Element inv(Element a) const;

    /// Image of the integer v in the prime subfield.
    Element from_int(long long v) const;

    /// Coefficient of x^0 in the polynomial basis; a GF(p)-linear functional.
    int first_coordinate(Element a) const { return check(a) % p_; }

    // Raw tables for kernels: add/mul are row-major b x b.
    const Element* add_table() const noexcept { return tables_->add.data(); }
    const Element* mul_table() const noexcept { return tables_->mul.data(); }
    const std::int32_t* add_table32() const noexcept { return tables_->add32.data(); }
    const std::int32_t* mul_table32() const noexcept { return tables_->mul32.data(); }

    bool operator==(const Field& o) const noexcept {
        return p_ == o.p_ && r_ == o.r_ && poly_ == o.poly_;
    }

    std::string describe() const;

private:
    struct Tables {
        std::vector<Element> add, mul, neg, inv;
        std::vector<std::int32_t> add32, mul32;
    };

    Field() = default;

    Element check(Element a) const {
        if (a >= b_) throw std::out_of_range("field element index out of range");
        return a;
    }
    std::size_t idx(Element a, Element c) const {
        return static_cast<std::size_t>(check(a)) * static_cast<std::size_t>(b_) + check(c);
    }

    int p_ = 0;
    int r_ = 0;
    int b_ = 0;
    std::vector<int> poly_;
    std::shared_ptr<const Tables> tables_;
};

Element field_arith(const Field& field, FieldOp op, Element a, std::optional<Element> c = std::nullopt);

bool is_prime(int v);

/// Splits a prime power into (p, r); throws if b is not a prime power.
std::pair<int, int> prime_power_decompose(int b);

/// Dense matrix over a field, row-major.
class FieldMatrix {
public:
    FieldMatrix() = default;
    FieldMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols, 0) {}
    FieldMatrix(std::size_t rows, std::size_t cols, std::vector<Element> entries);

    static FieldMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Element& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    Element at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    std::span<Element> row(std::size_t r) { return {entries_.data() + r * cols_, cols_}; }
    std::span<const Element> row(std::size_t r) const { return {entries_.data() + r * cols_, cols_}; }

    const std::vector<Element>& entries() const noexcept { return entries_; }

    void append_row(std::span<const Element> values);
    FieldMatrix transposed() const;

    /// Throws unless every entry is below b.
    void validate(const Field& field) const;

    bool operator==(const FieldMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Element> entries_;
};

using FieldVector = std::vector<Element>;

std::size_t rank(const Field& field, const FieldMatrix& m);

/// Basis of {v : M v = 0}, one vector per free column of the reduced row
/// echelon form, in increasing free-column order.
std::vector<FieldVector> kernel_basis(const Field& field, const FieldMatrix& m);

/// Echelon basis of span(vectors); drops dependent vectors.
std::vector<FieldVector> span_basis(const Field& field, std::span<const FieldVector> vectors);

/// Number of elements of span(basis) with no zero coordinate. The basis must
/// be linearly independent; b^dim must not exceed 2^20.
std::uint64_t subspace_all_nonzero_count(const Field& field, std::span<const FieldVector> basis);

FieldVector mat_vec(const Field& field, const FieldMatrix& m, std::span<const Element> v);

}  // namespace netgain
