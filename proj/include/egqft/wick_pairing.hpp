#pragma once

#include "egqft/power_counting.hpp"
#include "egqft/propagators.hpp"

#include <functional>
#include <string>
#include <vector>

namespace egq {

// ---------------------------------------------------------------- causal Wick expansion

// One term (-1)^f / s! * (Omega|F(B_1^(s_1) ... B_n^(s_n))Omega) :A^{s_1} ... A^{s_n}:
struct WickTerm {
    SList s_list;
    int sign = 1;
    Rational weight{1};                    // 1 / (s_1! ... s_n!)
    std::vector<Polynomial> vev_factors;   // B_j^(s_j), the arguments of the VEV
    std::vector<SuperQuadriIndex> normal_monomials;
    bool vev_forced_zero = false;          // field content rules out a nonzero VEV
};

std::vector<WickTerm> wick_expand(const std::vector<Polynomial>& polys, const FieldTable& ft);

// Human-readable tag of the VEV factor, e.g. "(Omega|F(phi, psi * psi)Omega)".
std::string vev_key(const WickTerm& t, const FieldTable& ft);

// ---------------------------------------------------------------- complete pairings

struct Occurrence {
    int slot = 0;  // index into the left or right list
    Generator gen;
    auto operator<=>(const Occurrence&) const = default;
};

enum class PairingClass { vacuum, massless, massive };
std::string to_string(PairingClass c);

struct PairingTerm {
    std::vector<std::pair<Occurrence, Occurrence>> pairs;  // (left, right)
    std::vector<TwoPointKey> two_points;                   // one per pair
    SList residual_left;
    SList residual_right;
    CRational constant{1};  // fermionic reordering sign
    PairingClass classification = PairingClass::vacuum;
};

enum class PairingMode {
    full,        // every occurrence on both sides is paired
    all_subsets  // every admissible partial pairing (the sum over paired sub-lists)
};

struct PairingOptions {
    PairingMode mode = PairingMode::full;
    bool force = false;  // lift the factorial blow-up guard
};

constexpr int kMaxPairedOccurrences = 12;

std::vector<PairingTerm> complete_pairings(const SList& left, const SList& right, const ModelSpec& model,
                                           const PairingOptions& opts = {});

bool momentum_support_vanishes(const PairingTerm& t);

// Paired ext/der counts per slot: the quantities subtracted from the residual lists.
struct PairedCounts {
    std::vector<std::map<FieldId, int>> ext_bar;
    std::vector<std::map<FieldId, int>> der_bar;
};
PairedCounts paired_counts_left(const PairingTerm& t, std::size_t slots);
PairedCounts paired_counts_right(const PairingTerm& t, std::size_t slots);

// Generic perfect-matching enumerator: occurrences carry a group label and a parity,
// only pairs from different groups for which allowed(a, b) holds are formed.
// Each matching is returned with the sign of bringing partners adjacent.
struct Matching {
    std::vector<std::pair<int, int>> pairs;  // (earlier, later) occurrence indices
    int sign = 1;
};
std::vector<Matching> perfect_matchings(const std::vector<int>& groups, const std::vector<int>& parities,
                                        const std::function<bool(int, int)>& allowed);

// ---------------------------------------------------------------- Isserlis oracle

// E[x_{o_1} ... x_{o_n}] for a centred Gaussian with covariance cov.
Rational isserlis_oracle(const std::vector<std::vector<Rational>>& cov, const std::vector<int>& occurrences);
double isserlis_oracle(const std::vector<std::vector<double>>& cov, const std::vector<int>& occurrences);

// ---------------------------------------------------------------- operator-product expansions

enum class FactorKind { T, aT };

struct Factor {
    FactorKind kind = FactorKind::T;
    std::vector<int> args;  // argument labels, sorted
    auto operator<=>(const Factor&) const = default;
};

using Word = std::vector<Factor>;

// coefficient * graded_sign(flattened word) * word. The graded sign is implied by the
// word and the argument parities, so identical words can be combined by their coefficients.
struct OpTerm {
    Rational coeff;
    Word word;
};

struct OpProductExpansion {
    std::vector<int> parities;  // parity of each argument label
    std::vector<OpTerm> terms;

    int graded_sign(const Word& w) const;
    // Combine equal words, drop zeros.
    OpProductExpansion normalized() const;
    // Replace every aT factor by its ordered-partition expansion in T.
    OpProductExpansion expand_to_T() const;
    bool is_zero() const { return normalized().terms.empty(); }
};

OpProductExpansion operator-(const OpProductExpansion& a, const OpProductExpansion& b);

// Ordered set partitions of labels (in their given order).
std::vector<std::vector<std::vector<int>>> ordered_set_partitions(const std::vector<int>& labels);
Rational fubini_number(int n);

// aT(1..n) with parities; default all even.
OpProductExpansion expand_aT(int n, const std::vector<int>& parities = {});
// Labels 0..i_size-1 form I, the following labels the J blocks (one per entry of j_sizes).
// Generalized Adv(I; J_1, ..., J_k) from S(g+h_1)S(g)^{-1} ... S(g+h_k)S(g)^{-1}.
OpProductExpansion expand_adv(int i_size, const std::vector<int>& j_sizes, const std::vector<int>& parities = {});
// Ret(I; J_1, ..., J_k) from S(g)^{-1}S(g+h_1) ... S(g)^{-1}S(g+h_k).
OpProductExpansion expand_ret(int i_size, const std::vector<int>& j_sizes, const std::vector<int>& parities = {});
OpProductExpansion expand_dif(int i_size, const std::vector<int>& j_sizes, const std::vector<int>& parities = {});
// -sum over I1+I2+I3 = I, I2 != I, of (-1)^{|I1|} aT(I1) Adv(I2; J) T(I3).
OpProductExpansion expand_dif_aT_adv_T(int i_size, const std::vector<int>& j_sizes,
                                       const std::vector<int>& parities = {});
// Same sum with the graded commutator [aT(I1), Adv(I2; J)] T(I3).
OpProductExpansion expand_dif_commutator(int i_size, const std::vector<int>& j_sizes,
                                         const std::vector<int>& parities = {});
// Same sum with the graded commutator [aT(I1) Adv(I2; J), T(I3)].
OpProductExpansion expand_dif_outer_commutator(int i_size, const std::vector<int>& j_sizes,
                                               const std::vector<int>& parities = {});

// The two telescoping sums implied by S^{-1}S = 1 and S S^{-1} = 1.
OpProductExpansion telescoping_left(int n, const std::vector<int>& parities = {});
OpProductExpansion telescoping_right(int n, const std::vector<int>& parities = {});

std::string to_string(const OpProductExpansion& e);

}  // namespace egq
