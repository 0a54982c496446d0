#pragma once

// Gain coefficients of scrambled point sets, exact.
//
// Two independent routes are provided: `gain_definition` works on the raw
// digits of any finite point set, and `gain_formula` uses only ranks and
// kernels of stacked generating-matrix rows of a digital net. The remaining
// functions expose the intermediate counts (dual-net intersections, the
// projected image) and the bounds built from them.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "netgain/net.hpp"
#include "netgain/rational.hpp"

namespace netgain {

/// A bucket (u, k): u a nonempty sorted 0-based subset, k one entry per
/// coordinate of u.
struct GainQuery {
    Subset u;
    std::vector<int> k;

    int k_total() const;
    void validate(int s) const;

    auto operator<=>(const GainQuery&) const = default;
};

struct RankProfile {
    int rank_k = 0;     // rank C_{u,k}
    int rank_k1 = 0;    // rank C_{u,k+1_u}
    int dim_v = 0;      // |k| - rank_k
    int dim_image = 0;  // |u| - rank_k1 + rank_k
    std::uint64_t q_count = 0;
};

Rational gain_definition(const PointSet& points, const GainQuery& q);

RankProfile rank_profile(const DigitalNet& net, const GainQuery& q);

Rational gain_formula(const DigitalNet& net, const GainQuery& q);

/// |A(u, k+1_u) ∩ P^⊥| by enumerating every index vector of the bucket
/// and testing dual membership. At most 2^22 candidates.
std::uint64_t count_A_dual_bruteforce(const DigitalNet& net, const GainQuery& q);

/// Same count via per-coordinate histograms of C_j^T nu(l_j) convolved over
/// F_b^m; no kernel or rank computation involved.
std::uint64_t count_A_dual_histogram(const DigitalNet& net, const GainQuery& q);

/// sum_{v ⊆ u} (-1)^{|u|-|v|} |V(u, k+1_v) ∩ P^⊥| with each V-count taken
/// as b^{|k+1_v| - rank C_{u,k+1_v}}.
std::int64_t count_A_inclusion_exclusion(const DigitalNet& net, const GainQuery& q);

enum class BoundCase { zero = 1, middle = 2, top = 3 };

BoundCase bound_case(int t, int m, int u_size, int k_total);

/// Three-case bound for a digital (t, m, s)-net.
Rational bound_three_case(int b, int t, int m, int u_size, int k_total);

/// b^{m - rank C_{u,k}} (b-1)^{rank C_{u,k} - rank C_{u,k+1_u}}.
Rational bound_B(const DigitalNet& net, const GainQuery& q);

/// b^{t+s-1} / (b-1)^{s-1}.
Rational bound_uniform(int b, int t, int s);

/// Minimal k (componentwise) with C_{u,k+1_u} rank-deficient, components
/// searched in [0, n]. Sorted lexicographically.
std::vector<std::vector<int>> enumerate_E1(const DigitalNet& net, const Subset& u);

/// k with C_{u,k+1_u} rank-deficient and C_{u,k+1_v} full row rank for
/// every proper v ⊊ u.
std::vector<std::vector<int>> enumerate_E2(const DigitalNet& net, const Subset& u);

int t_star(const DigitalNet& net, const Subset& u);

struct SubsetGainReport {
    int t_star = 0;
    std::vector<std::vector<int>> e1;
    std::vector<std::vector<int>> e2;
    Rational gamma_u_bound;  // max over E1(u) of B(u, k)
    Rational gamma_u_closed_form;  // b^{t*_u+|u|-1} / (b-1)^{|u|-1}
    Rational gamma_u_star;   // exact max over nonempty v ⊆ u, all k
    bool c1_full_rank = false;  // C_{u,1_u} full row rank
    bool closed_form_used = false;
};

struct MaxGainReport {
    std::map<Subset, SubsetGainReport> subsets;  // iterated in std::map order
    std::vector<Subset> order;                   // size-then-lexicographic
    Rational gamma;
    bool c1_full_rank = false;
    bool closed_form_used = false;
};

/// Maximal gain coefficients. The closed form in t*_v applies when
/// C_{u,1_u} is full row rank; otherwise the exhaustive maximum of
/// gain_formula over k ∈ [0, n]^{|v|} is used.
MaxGainReport gamma_exact(const DigitalNet& net, std::optional<Subset> scope = std::nullopt);

/// max over nonempty v ⊆ u and k ∈ [0, n]^{|v|} of gain_formula.
Rational gamma_exhaustive(const DigitalNet& net, std::optional<Subset> scope = std::nullopt);

/// Every k ∈ [0, kmax]^{|u|}, odometer order with the first coordinate
/// fastest.
std::vector<std::vector<int>> enumerate_k(std::size_t u_size, int kmax);

}  // namespace netgain
