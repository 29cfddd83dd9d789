#pragma once

#include "egqft/rational.hpp"

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace egq {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class FieldKind { scalar, dirac, vector, ghost };
enum class Statistics { bose, fermi };

std::string to_string(FieldKind k);
FieldKind parse_field_kind(const std::string& s);

struct QuantumNumbers {
    int fermion = 0;
    int charge = 0;
    Rational dim{1};
    double mass = 0.0;
    Statistics statistics = Statistics::bose;

    bool operator==(const QuantumNumbers&) const = default;
};

using FieldId = int;

struct FieldInfo {
    std::string name;
    FieldKind kind = FieldKind::scalar;
    QuantumNumbers qn;
    FieldId adjoint = 0;  // index of the *-partner, itself when self-adjoint
    int multiplet = 0;    // component fields of one Lorentz multiplet share this
    int component = 0;    // Lorentz or spinor component inside the multiplet

    bool operator==(const FieldInfo&) const = default;
};

struct Multiplet {
    std::string name;
    int adjoint = 0;
    bool operator==(const Multiplet&) const = default;
};

// Basic-generator table of a model.
struct FieldTable {
    std::vector<FieldInfo> fields;
    std::vector<Multiplet> multiplets;

    int size() const { return static_cast<int>(fields.size()); }
    const FieldInfo& at(FieldId f) const;
    bool odd(FieldId f) const { return at(f).qn.statistics == Statistics::fermi; }
    std::optional<FieldId> find(const std::string& name) const;
    std::optional<int> find_multiplet(const std::string& name) const;

    bool operator==(const FieldTable&) const = default;
};

using MultiIndex = std::array<int, 4>;

inline int order(const MultiIndex& a) { return a[0] + a[1] + a[2] + a[3]; }

// Graded-lex comparison of multi-indices: total order first, then lexicographic.
std::strong_ordering graded_lex(const MultiIndex& a, const MultiIndex& b);

struct Generator {
    FieldId field = 0;
    MultiIndex alpha{0, 0, 0, 0};

    std::strong_ordering operator<=>(const Generator& o) const {
        if (auto c = field <=> o.field; c != 0) return c;
        return graded_lex(alpha, o.alpha);
    }
    bool operator==(const Generator& o) const = default;
};

Rational canonical_dim(const Generator& g, const FieldTable& ft);
std::string to_string(const Generator& g, const FieldTable& ft);

// Finite multiset of generators.
class SuperQuadriIndex {
public:
    SuperQuadriIndex() = default;
    explicit SuperQuadriIndex(std::map<Generator, int> entries);
    static SuperQuadriIndex single(const Generator& g, int mult = 1);

    const std::map<Generator, int>& entries() const { return entries_; }
    int multiplicity(const Generator& g) const;
    void add(const Generator& g, int mult = 1);

    bool empty() const { return entries_.empty(); }
    int total() const;              // |r|
    Rational factorial() const;     // r!
    bool contains(const SuperQuadriIndex& s) const;  // this >= s componentwise
    SuperQuadriIndex operator-(const SuperQuadriIndex& s) const;
    SuperQuadriIndex operator+(const SuperQuadriIndex& s) const;
    std::vector<Generator> sequence() const;  // generators repeated, canonical order

    int fermion(const FieldTable& ft) const;
    int charge(const FieldTable& ft) const;
    int parity(const FieldTable& ft) const;  // grading 0/1 from statistics
    Rational dim(const FieldTable& ft) const;

    // All s with 0 <= s <= *this.
    std::vector<SuperQuadriIndex> sub_indices() const;

    auto operator<=>(const SuperQuadriIndex& o) const { return entries_ <=> o.entries_; }
    bool operator==(const SuperQuadriIndex& o) const = default;

private:
    std::map<Generator, int> entries_;
};

std::string to_string(const SuperQuadriIndex& s, const FieldTable& ft);

struct Monomial {
    CRational coeff;
    SuperQuadriIndex index;
};

// Element of the free graded-commutative algebra: sum of coeff * A^r.
class Polynomial {
public:
    Polynomial() = default;
    static Polynomial constant(const CRational& c);
    static Polynomial monomial(const CRational& c, const SuperQuadriIndex& r);
    static Polynomial generator(const Generator& g);
    // Product of generators given in arbitrary order; reorders with graded signs.
    static Polynomial ordered_product(const CRational& c, const std::vector<Generator>& gens,
                                      const FieldTable& ft);

    const std::map<SuperQuadriIndex, CRational>& terms() const { return terms_; }
    std::vector<Monomial> monomials() const;
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(const SuperQuadriIndex& r, const CRational& c);
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial scaled(const CRational& c) const;
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    bool operator==(const Polynomial& o) const = default;

    // True when o == c * this for some nonzero constant c.
    bool proportional_to(const Polynomial& o) const;

private:
    std::map<SuperQuadriIndex, CRational> terms_;
};

Polynomial multiply(const Polynomial& a, const Polynomial& b, const FieldTable& ft);

struct HomogeneousComponent {
    int fermion = 0;
    int charge = 0;
    Rational dim;
    Polynomial part;
};
std::vector<HomogeneousComponent> homogeneous_components(const Polynomial& p, const FieldTable& ft);

// Throws DomainError naming two differing components when p is not homogeneous in dim.
Rational canonical_dim(const Polynomial& p, const FieldTable& ft);
int fermion_number(const Polynomial& p, const FieldTable& ft);
int charge_number(const Polynomial& p, const FieldTable& ft);
int parity(const Polynomial& p, const FieldTable& ft);

// Left graded derivative by one generator.
Polynomial derive(const Polynomial& p, const Generator& g, const FieldTable& ft);
// B^(s): iterated derivatives, the smallest generator applied first.
Polynomial derive(const Polynomial& p, const SuperQuadriIndex& s, const FieldTable& ft);

enum class SubpolyView { all, distinct_up_to_constant, by_multiplet };

struct SubPolynomial {
    SuperQuadriIndex s;
    Polynomial poly;
};
std::vector<SubPolynomial> subpolynomials(const Polynomial& p, const FieldTable& ft,
                                          SubpolyView view = SubpolyView::all);

// pi[k] is the old position of the entry placed at new position k.
int permutation_sign(const std::vector<int>& fermion_numbers, const std::vector<int>& pi);

Polynomial adjoint(const Polynomial& p, const FieldTable& ft);

std::string to_string(const Polynomial& p, const FieldTable& ft);

}  // namespace egq
