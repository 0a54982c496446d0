#pragma once

// b-adic Walsh functions, exact sums of their values, and Walsh spectra of
// functions that are constant on the cells of a b^{-n} grid.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "netgain/gf.hpp"
#include "netgain/net.hpp"
#include "netgain/rational.hpp"

namespace netgain {

/// How a Walsh exponent is formed for a non-prime b = p^r.
///  - trace:   omega_p^{psi(sum phi(kappa) phi(xi))}, psi = first polynomial
///             coordinate. An additive character of GF(b).
///  - literal: omega_b^{sum phi^{-1}(phi(kappa) phi(xi))} with integer
///             addition of the digit values.
/// The two coincide for prime b.
enum class WalshCharacter { trace, literal };

struct RootOfUnity {
    int modulus = 1;
    int exponent = 0;

    std::complex<double> value() const;
    RootOfUnity operator*(const RootOfUnity& o) const;
    bool operator==(const RootOfUnity&) const = default;
};

/// Exact element sum_e counts[e] * omega_q^e of Z[omega_q], q a prime power.
class CyclotomicSum {
public:
    explicit CyclotomicSum(int modulus);

    int modulus() const noexcept { return modulus_; }
    void add(int exponent, std::int64_t times = 1);
    void add(const RootOfUnity& w, std::int64_t times = 1);

    /// The integer value, if the element is a rational integer.
    std::optional<std::int64_t> integer() const;
    std::complex<double> value() const;
    const std::vector<std::int64_t>& counts() const noexcept { return counts_; }

private:
    int modulus_;
    std::vector<std::int64_t> counts_;
};

/// Number of base-b digits of v (0 for v = 0).
int digit_count(std::uint64_t v, int b);

RootOfUnity wal_eval(const Field& field, std::span<const std::uint64_t> k, const PointSet& points, std::size_t h,
                     WalshCharacter character = WalshCharacter::trace);

/// sum_{l ∈ V(u,k)} wal_l(x_h) by direct summation. Requires b^{|k|} <= 2^22.
std::int64_t dirichlet_sum(const Field& field, const Subset& u, std::span<const int> k, const PointSet& points,
                           std::size_t h, WalshCharacter character = WalshCharacter::trace);

/// b^{|k|} * prod_{j∈u} [floor(b^{k_j} x_j) = 0].
std::int64_t dirichlet_closed_form(const Subset& u, std::span<const int> k, const PointSet& points, std::size_t h);

/// sum over the net's points of wal_l, exact.
CyclotomicSum character_sum(const DigitalNet& net, std::span<const std::uint64_t> l,
                            WalshCharacter character = WalshCharacter::trace);

/// Constant on each cell of the b^{-n} grid in [0,1)^s. Cell index is
/// digit-lexicographic: coordinate 0 most significant, and within a
/// coordinate the cell is floor(b^n x_j).
struct GridFunction {
    int b = 2;
    int n = 1;
    int s = 1;
    std::vector<double> values;

    std::size_t cell_count() const;
    void validate() const;
    double at_cell(std::size_t cell) const { return values.at(cell); }
    /// Cell holding point h (needs depth >= n).
    std::size_t cell_of(const PointSet& points, std::size_t h) const;
    double mean() const;
    double mean_square() const;
};

GridFunction read_grid_file(const std::string& path);
GridFunction grid_from_json(const std::string& text);
std::string grid_to_json(const GridFunction& f);

/// Walsh coefficients f^(l) for every l ∈ [0, b^n)^s, indexed like the
/// grid cells (l_0 most significant).
struct WalshSpectrum {
    int b = 2;
    int n = 1;
    int s = 1;
    std::vector<std::complex<double>> coeffs;

    std::complex<double> at(std::span<const std::uint64_t> l) const;
    std::vector<std::uint64_t> index_vector(std::size_t flat) const;
    double energy() const;  // sum |f^(l)|^2
};

WalshSpectrum walsh_spectrum(const GridFunction& f, WalshCharacter character = WalshCharacter::trace);

/// Base-2 spectrum in exact arithmetic; `values` laid out like GridFunction.
std::vector<Rational> walsh_spectrum_dyadic(int n, int s, std::span<const Rational> values);

}  // namespace netgain
