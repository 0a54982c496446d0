#pragma once

// Nested uniform (Owen) scrambling in base b and replicated variance
// experiments for the scrambled-net estimator.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "netgain/net.hpp"
#include "netgain/rational.hpp"
#include "netgain/walsh.hpp"

namespace netgain {

/// One scrambling draw. Permutation trees are never stored: the node for
/// (coordinate j, input prefix) derives its permutation from the seed.
struct ScrambleReplicate {
    std::uint64_t seed = 0;
    int depth = 0;
    bool identity = false;  // every node the identity permutation
    /// Explicit node permutations, keyed by (coordinate, input prefix).
    std::map<std::pair<int, std::vector<Element>>, std::vector<Element>> overrides;

    std::vector<Element> permutation(int b, int j, std::span<const Element> prefix) const;
    /// Uniform digit used to pad point h beyond the input precision.
    Element tail_digit(int b, std::size_t h, int j, int i) const;
};

PointSet owen_scramble(const PointSet& points, const ScrambleReplicate& rep);

/// Re(wal_l); exactly wal_l when that is real.
struct WalshIntegrand {
    std::vector<std::uint64_t> l;
};

using Integrand = std::variant<WalshIntegrand, GridFunction>;

/// Digits of each coordinate the integrand reads.
int integrand_depth(const Integrand& f, int b);

double evaluate(const Field& field, const Integrand& f, const PointSet& points, std::size_t h);

/// (1/N) sum_h f(y_h).
double estimate(const Field& field, const Integrand& f, const PointSet& points);

struct ExperimentResult {
    int replicates = 0;
    double estimate_mean = 0.0;
    double estimate_variance = 0.0;  // divisor R - 1
    double variance_standard_error = 0.0;
    std::optional<Rational> target;
    std::vector<double> estimates;  // replicate order
};

/// Replicate r is scrambled with seed hash(master_seed, r). depth 0 picks
/// max(n, integrand_depth).
ExperimentResult variance_experiment(const DigitalNet& net, const Integrand& f, int replicates,
                                     std::uint64_t master_seed, int depth = 0);

using SpectrumEntry = std::pair<std::vector<std::uint64_t>, std::complex<double>>;
using ExactSpectrumEntry = std::pair<std::vector<std::uint64_t>, Rational>;

/// Nonzero Walsh coefficients of the integrand (trace character).
std::vector<SpectrumEntry> integrand_spectrum(const Field& field, const Integrand& f, int s);

/// Exact spectrum when available: Walsh integrands, and base-2 grid
/// functions with dyadic values.
std::optional<std::vector<ExactSpectrumEntry>> integrand_spectrum_exact(const Field& field, const Integrand& f, int s);

/// (1/N) sum over buckets (u,k) of Gamma_{u,k} sigma^2_{u,k}; the bucket of
/// l has u = support(l) and k_j = floor(log_b l_j).
double theoretical_variance(const DigitalNet& net, std::span<const SpectrumEntry> spectrum);
Rational theoretical_variance_exact(const DigitalNet& net, std::span<const ExactSpectrumEntry> spectrum);

}  // namespace netgain
