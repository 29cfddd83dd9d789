#include "egqft/symbolic_fields.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace egq {

std::string to_string(FieldKind k) {
    switch (k) {
        case FieldKind::scalar: return "scalar";
        case FieldKind::dirac: return "dirac";
        case FieldKind::vector: return "vector";
        case FieldKind::ghost: return "ghost";
    }
    return "scalar";
}

FieldKind parse_field_kind(const std::string& s) {
    if (s == "scalar") return FieldKind::scalar;
    if (s == "dirac") return FieldKind::dirac;
    if (s == "vector") return FieldKind::vector;
    if (s == "ghost") return FieldKind::ghost;
    throw std::invalid_argument("unknown field kind '" + s + "'");
}

const FieldInfo& FieldTable::at(FieldId f) const {
    if (f < 0 || f >= size()) throw std::out_of_range("field id " + std::to_string(f) + " out of range");
    return fields[static_cast<std::size_t>(f)];
}

std::optional<FieldId> FieldTable::find(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (fields[static_cast<std::size_t>(i)].name == name) return i;
    return std::nullopt;
}

std::optional<int> FieldTable::find_multiplet(const std::string& name) const {
    for (std::size_t i = 0; i < multiplets.size(); ++i)
        if (multiplets[i].name == name) return static_cast<int>(i);
    return std::nullopt;
}

std::strong_ordering graded_lex(const MultiIndex& a, const MultiIndex& b) {
    if (auto c = order(a) <=> order(b); c != 0) return c;
    return a <=> b;
}

Rational canonical_dim(const Generator& g, const FieldTable& ft) {
    return ft.at(g.field).qn.dim + order(g.alpha);
}

std::string to_string(const Generator& g, const FieldTable& ft) {
    std::string out;
    for (int mu = 0; mu < 4; ++mu)
        for (int k = 0; k < g.alpha[static_cast<std::size_t>(mu)]; ++k) out += "d[" + std::to_string(mu) + "]";
    return out + ft.at(g.field).name;
}

// ---------------------------------------------------------------- SuperQuadriIndex

SuperQuadriIndex::SuperQuadriIndex(std::map<Generator, int> entries) {
    for (auto& [g, m] : entries) {
        if (m < 0) throw std::invalid_argument("negative multiplicity");
        if (m > 0) entries_[g] = m;
    }
}

SuperQuadriIndex SuperQuadriIndex::single(const Generator& g, int mult) {
    SuperQuadriIndex s;
    s.add(g, mult);
    return s;
}

int SuperQuadriIndex::multiplicity(const Generator& g) const {
    auto it = entries_.find(g);
    return it == entries_.end() ? 0 : it->second;
}

void SuperQuadriIndex::add(const Generator& g, int mult) {
    if (mult == 0) return;
    int& m = entries_[g];
    m += mult;
    if (m < 0) throw std::invalid_argument("negative multiplicity");
    if (m == 0) entries_.erase(g);
}

int SuperQuadriIndex::total() const {
    int n = 0;
    for (auto& [g, m] : entries_) n += m;
    return n;
}

Rational SuperQuadriIndex::factorial() const {
    Rational r = 1;
    for (auto& [g, m] : entries_) r *= egq::factorial(m);
    return r;
}

bool SuperQuadriIndex::contains(const SuperQuadriIndex& s) const {
    for (auto& [g, m] : s.entries_)
        if (multiplicity(g) < m) return false;
    return true;
}

SuperQuadriIndex SuperQuadriIndex::operator-(const SuperQuadriIndex& s) const {
    SuperQuadriIndex r = *this;
    for (auto& [g, m] : s.entries_) r.add(g, -m);
    return r;
}

SuperQuadriIndex SuperQuadriIndex::operator+(const SuperQuadriIndex& s) const {
    SuperQuadriIndex r = *this;
    for (auto& [g, m] : s.entries_) r.add(g, m);
    return r;
}

std::vector<Generator> SuperQuadriIndex::sequence() const {
    std::vector<Generator> out;
    for (auto& [g, m] : entries_)
        for (int k = 0; k < m; ++k) out.push_back(g);
    return out;
}

int SuperQuadriIndex::fermion(const FieldTable& ft) const {
    int f = 0;
    for (auto& [g, m] : entries_) f += m * ft.at(g.field).qn.fermion;
    return f;
}

int SuperQuadriIndex::charge(const FieldTable& ft) const {
    int q = 0;
    for (auto& [g, m] : entries_) q += m * ft.at(g.field).qn.charge;
    return q;
}

int SuperQuadriIndex::parity(const FieldTable& ft) const {
    int p = 0;
    for (auto& [g, m] : entries_)
        if (ft.odd(g.field)) p += m;
    return p & 1;
}

Rational SuperQuadriIndex::dim(const FieldTable& ft) const {
    Rational d = 0;
    for (auto& [g, m] : entries_) d += m * canonical_dim(g, ft);
    return d;
}

std::vector<SuperQuadriIndex> SuperQuadriIndex::sub_indices() const {
    std::vector<SuperQuadriIndex> out{SuperQuadriIndex{}};
    for (auto& [g, m] : entries_) {
        std::vector<SuperQuadriIndex> next;
        for (auto& base : out)
            for (int k = 0; k <= m; ++k) {
                SuperQuadriIndex s = base;
                s.add(g, k);
                next.push_back(std::move(s));
            }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string to_string(const SuperQuadriIndex& s, const FieldTable& ft) {
    if (s.empty()) return "1";
    std::string out;
    for (auto& [g, m] : s.entries()) {
        if (!out.empty()) out += " * ";
        out += to_string(g, ft);
        if (m > 1) out += "^" + std::to_string(m);
    }
    return out;
}

// ---------------------------------------------------------------- sorting with signs

namespace {

// Sorts a generator sequence into canonical order. Returns the sign, or 0 when an odd
// generator occurs twice.
int sort_graded(std::vector<Generator>& seq, const FieldTable& ft) {
    int inversions = 0;
    // insertion sort keeps the transposition count explicit
    for (std::size_t i = 1; i < seq.size(); ++i) {
        std::size_t j = i;
        while (j > 0 && seq[j] < seq[j - 1]) {
            if (ft.odd(seq[j].field) && ft.odd(seq[j - 1].field)) ++inversions;
            std::swap(seq[j], seq[j - 1]);
            --j;
        }
    }
    for (std::size_t i = 1; i < seq.size(); ++i)
        if (seq[i] == seq[i - 1] && ft.odd(seq[i].field)) return 0;
    return (inversions & 1) ? -1 : 1;
}

SuperQuadriIndex from_sequence(const std::vector<Generator>& seq) {
    SuperQuadriIndex s;
    for (auto& g : seq) s.add(g);
    return s;
}

}  // namespace

// ---------------------------------------------------------------- Polynomial

Polynomial Polynomial::constant(const CRational& c) {
    Polynomial p;
    p.add_term(SuperQuadriIndex{}, c);
    return p;
}

Polynomial Polynomial::monomial(const CRational& c, const SuperQuadriIndex& r) {
    Polynomial p;
    p.add_term(r, c);
    return p;
}

Polynomial Polynomial::generator(const Generator& g) {
    return monomial(CRational(1), SuperQuadriIndex::single(g));
}

Polynomial Polynomial::ordered_product(const CRational& c, const std::vector<Generator>& gens,
                                       const FieldTable& ft) {
    std::vector<Generator> seq = gens;
    int sign = sort_graded(seq, ft);
    Polynomial p;
    if (sign == 0) return p;
    p.add_term(from_sequence(seq), sign < 0 ? -c : c);
    return p;
}

std::vector<Monomial> Polynomial::monomials() const {
    std::vector<Monomial> out;
    for (auto& [r, c] : terms_) out.push_back({c, r});
    return out;
}

void Polynomial::add_term(const SuperQuadriIndex& r, const CRational& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(r);
    if (it == terms_.end()) {
        terms_.emplace(r, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    for (auto& [r, c] : o.terms_) add_term(r, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    for (auto& [r, c] : o.terms_) add_term(r, -c);
    return *this;
}

Polynomial Polynomial::scaled(const CRational& c) const {
    Polynomial p;
    if (c.is_zero()) return p;
    for (auto& [r, v] : terms_) p.terms_.emplace(r, v * c);
    return p;
}

bool Polynomial::proportional_to(const Polynomial& o) const {
    if (is_zero() || o.is_zero()) return false;
    if (terms_.size() != o.terms_.size()) return false;
    auto it = terms_.begin();
    auto jt = o.terms_.begin();
    if (!(it->first == jt->first)) return false;
    CRational ratio = jt->second / it->second;
    for (; it != terms_.end(); ++it, ++jt) {
        if (!(it->first == jt->first)) return false;
        if (it->second * ratio != jt->second) return false;
    }
    return true;
}

Polynomial multiply(const Polynomial& a, const Polynomial& b, const FieldTable& ft) {
    Polynomial out;
    for (auto& [ra, ca] : a.terms())
        for (auto& [rb, cb] : b.terms()) {
            std::vector<Generator> seq = ra.sequence();
            auto tail = rb.sequence();
            seq.insert(seq.end(), tail.begin(), tail.end());
            out += Polynomial::ordered_product(ca * cb, seq, ft);
        }
    return out;
}

std::vector<HomogeneousComponent> homogeneous_components(const Polynomial& p, const FieldTable& ft) {
    std::vector<HomogeneousComponent> out;
    for (auto& [r, c] : p.terms()) {
        int f = r.fermion(ft), q = r.charge(ft);
        Rational d = r.dim(ft);
        auto it = std::find_if(out.begin(), out.end(), [&](const HomogeneousComponent& h) {
            return h.fermion == f && h.charge == q && h.dim == d;
        });
        if (it == out.end()) {
            out.push_back({f, q, d, Polynomial{}});
            it = out.end() - 1;
        }
        it->part.add_term(r, c);
    }
    return out;
}

Rational canonical_dim(const Polynomial& p, const FieldTable& ft) {
    if (p.is_zero()) return 0;
    const SuperQuadriIndex* first = nullptr;
    Rational d0;
    for (auto& [r, c] : p.terms()) {
        Rational d = r.dim(ft);
        if (!first) {
            first = &r;
            d0 = d;
        } else if (d != d0) {
            throw DomainError("polynomial is not homogeneous in canonical dimension: component '" +
                              to_string(*first, ft) + "' has dim " + to_string(d0) + ", component '" +
                              to_string(r, ft) + "' has dim " + to_string(d));
        }
    }
    return d0;
}

namespace {
template <class F>
int homogeneous_number(const Polynomial& p, F get, const char* what) {
    if (p.is_zero()) return 0;
    std::optional<int> v;
    for (auto& [r, c] : p.terms()) {
        int x = get(r);
        if (v && *v != x) throw DomainError(std::string("polynomial is not homogeneous in ") + what);
        v = x;
    }
    return *v;
}
}  // namespace

int fermion_number(const Polynomial& p, const FieldTable& ft) {
    return homogeneous_number(p, [&](const SuperQuadriIndex& r) { return r.fermion(ft); }, "fermion number");
}

int charge_number(const Polynomial& p, const FieldTable& ft) {
    return homogeneous_number(p, [&](const SuperQuadriIndex& r) { return r.charge(ft); }, "charge number");
}

int parity(const Polynomial& p, const FieldTable& ft) {
    return homogeneous_number(p, [&](const SuperQuadriIndex& r) { return r.parity(ft); }, "grading");
}

Polynomial derive(const Polynomial& p, const Generator& g, const FieldTable& ft) {
    Polynomial out;
    const bool g_odd = ft.odd(g.field);
    for (auto& [r, c] : p.terms()) {
        int m = r.multiplicity(g);
        if (m == 0) continue;
        int odd_before = 0;
        if (g_odd)
            for (auto& [h, mh] : r.entries()) {
                if (!(h < g)) break;
                if (ft.odd(h.field)) odd_before += mh;
            }
        CRational coef = c * CRational(Rational(m));
        if (odd_before & 1) coef = -coef;
        out.add_term(r - SuperQuadriIndex::single(g), coef);
    }
    return out;
}

Polynomial derive(const Polynomial& p, const SuperQuadriIndex& s, const FieldTable& ft) {
    Polynomial out = p;
    const auto& e = s.entries();
    // smallest generator first, so that (A^r)^(r) = r! for the ordered monomial A^r
    for (auto& [g, m] : e)
        for (int k = 0; k < m && !out.is_zero(); ++k) out = derive(out, g, ft);
    return out;
}

std::vector<SubPolynomial> subpolynomials(const Polynomial& p, const FieldTable& ft, SubpolyView view) {
    std::set<SuperQuadriIndex> candidates;
    for (auto& [r, c] : p.terms())
        for (auto& s : r.sub_indices()) candidates.insert(s);
    std::vector<SubPolynomial> all;
    for (auto& s : candidates) {
        Polynomial d = derive(p, s, ft);
        if (!d.is_zero()) all.push_back({s, std::move(d)});
    }
    if (view == SubpolyView::all) return all;

    std::vector<SubPolynomial> out;
    if (view == SubpolyView::distinct_up_to_constant) {
        for (auto& sp : all) {
            bool seen = std::any_of(out.begin(), out.end(),
                                    [&](const SubPolynomial& o) { return o.poly.proportional_to(sp.poly); });
            if (!seen) out.push_back(sp);
        }
        return out;
    }
    // by_multiplet: one class per pattern of (multiplet, derivative order) counts
    std::set<std::map<std::pair<int, int>, int>> seen;
    for (auto& sp : all) {
        std::map<std::pair<int, int>, int> key;
        for (auto& [g, m] : sp.s.entries()) key[{ft.at(g.field).multiplet, order(g.alpha)}] += m;
        if (seen.insert(key).second) out.push_back(sp);
    }
    return out;
}

int permutation_sign(const std::vector<int>& fermion_numbers, const std::vector<int>& pi) {
    const std::size_t n = fermion_numbers.size();
    if (pi.size() != n)
        throw std::invalid_argument("permutation length " + std::to_string(pi.size()) +
                                    " does not match list length " + std::to_string(n));
    std::vector<char> used(n, 0);
    for (int v : pi) {
        if (v < 0 || static_cast<std::size_t>(v) >= n || used[static_cast<std::size_t>(v)])
            throw std::invalid_argument("not a permutation");
        used[static_cast<std::size_t>(v)] = 1;
    }
    int count = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            auto a = static_cast<std::size_t>(pi[i]), b = static_cast<std::size_t>(pi[j]);
            if (a > b && (fermion_numbers[a] & 1) && (fermion_numbers[b] & 1)) ++count;
        }
    return (count & 1) ? -1 : 1;
}

Polynomial adjoint(const Polynomial& p, const FieldTable& ft) {
    Polynomial out;
    for (auto& [r, c] : p.terms()) {
        auto seq = r.sequence();
        std::reverse(seq.begin(), seq.end());
        for (auto& g : seq) g.field = ft.at(g.field).adjoint;
        out += Polynomial::ordered_product(c.conj(), seq, ft);
    }
    return out;
}

std::string to_string(const Polynomial& p, const FieldTable& ft) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [r, c] : p.terms()) {
        if (!first) os << " + ";
        first = false;
        if (r.empty()) {
            os << to_string(c);
            continue;
        }
        if (c != CRational(1)) os << to_string(c) << " * ";
        os << to_string(r, ft);
    }
    return os.str();
}

}  // namespace egq
