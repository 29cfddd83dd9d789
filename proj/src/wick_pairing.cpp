#include "egqft/wick_pairing.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace egq {

// ---------------------------------------------------------------- causal Wick expansion

namespace {

using Counts = std::map<int, int>;  // multiplet -> number of generators

std::set<Counts> multiplet_contents(const Polynomial& p, const FieldTable& ft) {
    std::set<Counts> out;
    for (auto& [r, c] : p.terms()) {
        Counts k;
        for (auto& [g, m] : r.entries()) k[ft.at(g.field).multiplet] += m;
        out.insert(k);
    }
    return out;
}

bool content_forbids_vev(const Counts& k, const FieldTable& ft) {
    auto count = [&](int m) {
        auto it = k.find(m);
        return it == k.end() ? 0 : it->second;
    };
    for (auto& [m, n] : k) {
        const int a = ft.multiplets.at(static_cast<std::size_t>(m)).adjoint;
        if (a == m) {
            if (n % 2 != 0) return true;
        } else if (count(a) != n) {
            return true;
        }
    }
    return false;
}

// Forced zero when every choice of monomials from the VEV arguments has forbidden content.
bool forced_zero(const std::vector<Polynomial>& factors, const FieldTable& ft) {
    std::vector<std::vector<Counts>> options;
    for (auto& f : factors) {
        auto s = multiplet_contents(f, ft);
        options.emplace_back(s.begin(), s.end());
    }
    std::vector<std::size_t> pick(options.size(), 0);
    while (true) {
        Counts total;
        for (std::size_t j = 0; j < options.size(); ++j)
            for (auto& [m, n] : options[j][pick[j]]) total[m] += n;
        if (!content_forbids_vev(total, ft)) return false;
        std::size_t j = 0;
        while (j < pick.size() && ++pick[j] == options[j].size()) pick[j++] = 0;
        if (j == pick.size()) return true;
    }
}

}  // namespace

std::vector<WickTerm> wick_expand(const std::vector<Polynomial>& polys, const FieldTable& ft) {
    // candidate derivative indices per argument, with the derived polynomial
    std::vector<std::vector<std::pair<SuperQuadriIndex, Polynomial>>> cand(polys.size());
    for (std::size_t j = 0; j < polys.size(); ++j) {
        std::set<SuperQuadriIndex> subs;
        for (auto& [r, c] : polys[j].terms())
            for (auto& s : r.sub_indices()) subs.insert(s);
        for (auto& s : subs) {
            Polynomial d = derive(polys[j], s, ft);
            if (!d.is_zero()) cand[j].emplace_back(s, std::move(d));
        }
        if (cand[j].empty()) return {};
    }
    std::vector<WickTerm> out;
    std::vector<std::size_t> pick(polys.size(), 0);
    while (true) {
        WickTerm t;
        // :B_j: = sum_s A^{s} B_j^(s) / s!; moving each A^{s_j} left past the earlier B_i^(s_i)
        int exponent = 0, odd_vev = 0;
        Rational fact = 1;
        for (std::size_t j = 0; j < polys.size(); ++j) {
            auto& [s, d] = cand[j][pick[j]];
            t.s_list.push_back(s);
            t.vev_factors.push_back(d);
            exponent += s.parity(ft) * odd_vev;
            odd_vev += parity(d, ft);
            fact *= s.factorial();
        }
        t.sign = (exponent & 1) ? -1 : 1;
        t.weight = 1 / fact;
        t.normal_monomials = t.s_list;
        t.vev_forced_zero = forced_zero(t.vev_factors, ft);
        out.push_back(std::move(t));
        // odometer with the first argument slowest
        std::size_t j = polys.size();
        while (j > 0) {
            --j;
            if (++pick[j] < cand[j].size()) break;
            pick[j] = 0;
            if (j == 0) return out;
        }
        if (polys.empty()) return out;
    }
}

std::string vev_key(const WickTerm& t, const FieldTable& ft) {
    std::string s = "(Omega|F(";
    for (std::size_t j = 0; j < t.vev_factors.size(); ++j) {
        if (j) s += ", ";
        s += to_string(t.vev_factors[j], ft);
    }
    return s + ")Omega)";
}

// ---------------------------------------------------------------- complete pairings

std::string to_string(PairingClass c) {
    switch (c) {
        case PairingClass::vacuum: return "vacuum";
        case PairingClass::massless: return "massless";
        case PairingClass::massive: return "massive";
    }
    return "vacuum";
}

namespace {

std::vector<Occurrence> occurrences(const SList& list) {
    std::vector<Occurrence> out;
    for (std::size_t slot = 0; slot < list.size(); ++slot)
        for (auto& g : list[slot].sequence()) out.push_back({static_cast<int>(slot), g});
    return out;
}

}  // namespace

std::vector<PairingTerm> complete_pairings(const SList& left, const SList& right, const ModelSpec& model,
                                           const PairingOptions& opts) {
    const FieldTable& ft = model.fields;
    const auto L = occurrences(left), R = occurrences(right);
    const int nl = static_cast<int>(L.size()), nr = static_cast<int>(R.size());
    if (opts.mode == PairingMode::full && nl != nr) return {};
    const int paired = opts.mode == PairingMode::full ? nl + nr : 2 * std::min(nl, nr);
    if (paired > kMaxPairedOccurrences && !opts.force)
        throw DomainError("pairing enumeration over " + std::to_string(paired) + " occurrences exceeds the limit of " +
                          std::to_string(kMaxPairedOccurrences) + "; set the force flag to proceed");

    // allowed two-point structures
    std::vector<std::vector<std::optional<TwoPointKey>>> tp(static_cast<std::size_t>(nl));
    for (int a = 0; a < nl; ++a)
        for (int b = 0; b < nr; ++b) tp[a].push_back(two_point(model, L[a].gen, R[b].gen));

    std::vector<int> parities;
    for (auto& o : L) parities.push_back(ft.odd(o.gen.field) ? 1 : 0);
    for (auto& o : R) parities.push_back(ft.odd(o.gen.field) ? 1 : 0);

    std::vector<PairingTerm> out;
    std::vector<int> partner(static_cast<std::size_t>(nl), -1);
    std::vector<char> used(static_cast<std::size_t>(nr), 0);

    auto emit = [&]() {
        PairingTerm t;
        t.residual_left.assign(left.size(), {});
        t.residual_right.assign(right.size(), {});
        std::vector<int> order;  // pairs adjacent, then residual left, then residual right
        std::vector<int> rest_l, rest_r;
        bool all_massless = true;
        for (int a = 0; a < nl; ++a) {
            int b = partner[a];
            if (b < 0) {
                rest_l.push_back(a);
                t.residual_left[L[a].slot].add(L[a].gen);
                if (ft.at(L[a].gen.field).qn.mass > 0) all_massless = false;
                continue;
            }
            t.pairs.emplace_back(L[a], R[b]);
            t.two_points.push_back(*tp[a][b]);
            if (tp[a][b]->mass > 0) all_massless = false;
            order.push_back(a);
            order.push_back(nl + b);
        }
        for (int b = 0; b < nr; ++b)
            if (!used[b]) {
                rest_r.push_back(nl + b);
                t.residual_right[R[b].slot].add(R[b].gen);
                if (ft.at(R[b].gen.field).qn.mass > 0) all_massless = false;
            }
        order.insert(order.end(), rest_l.begin(), rest_l.end());
        order.insert(order.end(), rest_r.begin(), rest_r.end());
        t.constant = CRational(permutation_sign(parities, order));
        t.classification = t.pairs.empty() ? PairingClass::vacuum
                           : all_massless  ? PairingClass::massless
                                           : PairingClass::massive;
        out.push_back(std::move(t));
    };

    auto rec = [&](auto&& self, int a) -> void {
        if (a == nl) {
            if (opts.mode == PairingMode::full && std::count(used.begin(), used.end(), 0) != 0) return;
            emit();
            return;
        }
        for (int b = 0; b < nr; ++b) {
            if (used[b] || !tp[a][b]) continue;
            used[b] = 1;
            partner[a] = b;
            self(self, a + 1);
            used[b] = 0;
            partner[a] = -1;
        }
        if (opts.mode == PairingMode::all_subsets) self(self, a + 1);
    };
    rec(rec, 0);
    return out;
}

bool momentum_support_vanishes(const PairingTerm& t) {
    return std::any_of(t.two_points.begin(), t.two_points.end(), [](const TwoPointKey& k) { return k.mass > 0; });
}

namespace {
PairedCounts paired_counts(const PairingTerm& t, std::size_t slots, bool left_side) {
    PairedCounts pc;
    pc.ext_bar.resize(slots);
    pc.der_bar.resize(slots);
    for (auto& [l, r] : t.pairs) {
        const Occurrence& o = left_side ? l : r;
        const auto slot = static_cast<std::size_t>(o.slot);
        pc.ext_bar.at(slot)[o.gen.field] += 1;
        pc.der_bar.at(slot)[o.gen.field] += order(o.gen.alpha);
    }
    return pc;
}
}  // namespace

PairedCounts paired_counts_left(const PairingTerm& t, std::size_t slots) { return paired_counts(t, slots, true); }
PairedCounts paired_counts_right(const PairingTerm& t, std::size_t slots) { return paired_counts(t, slots, false); }

std::vector<Matching> perfect_matchings(const std::vector<int>& groups, const std::vector<int>& parities,
                                        const std::function<bool(int, int)>& allowed) {
    const int n = static_cast<int>(groups.size());
    std::vector<Matching> out;
    if (n % 2 != 0) return out;
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    std::vector<std::pair<int, int>> current;
    auto rec = [&](auto&& self) -> void {
        int first = 0;
        while (first < n && used[first]) ++first;
        if (first == n) {
            std::vector<int> order;
            for (auto& [a, b] : current) {
                order.push_back(a);
                order.push_back(b);
            }
            out.push_back({current, permutation_sign(parities, order)});
            return;
        }
        used[first] = 1;
        for (int b = first + 1; b < n; ++b) {
            if (used[b] || groups[b] == groups[first] || !allowed(first, b)) continue;
            used[b] = 1;
            current.emplace_back(first, b);
            self(self);
            current.pop_back();
            used[b] = 0;
        }
        used[first] = 0;
    };
    rec(rec);
    return out;
}

// ---------------------------------------------------------------- Isserlis oracle

namespace {
template <class T>
T isserlis_rec(const std::vector<std::vector<T>>& cov, std::vector<int>& occ) {
    if (occ.empty()) return T(1);
    if (occ.size() % 2 != 0) return T(0);
    const int first = occ.front();
    T sum(0);
    for (std::size_t j = 1; j < occ.size(); ++j) {
        const T& c = cov.at(static_cast<std::size_t>(first)).at(static_cast<std::size_t>(occ[j]));
        if (c == T(0)) continue;
        std::vector<int> rest;
        for (std::size_t k = 1; k < occ.size(); ++k)
            if (k != j) rest.push_back(occ[k]);
        sum += c * isserlis_rec(cov, rest);
    }
    return sum;
}
}  // namespace

Rational isserlis_oracle(const std::vector<std::vector<Rational>>& cov, const std::vector<int>& occurrences) {
    std::vector<int> occ = occurrences;
    return isserlis_rec(cov, occ);
}

double isserlis_oracle(const std::vector<std::vector<double>>& cov, const std::vector<int>& occurrences) {
    std::vector<int> occ = occurrences;
    return isserlis_rec(cov, occ);
}

// ---------------------------------------------------------------- operator-product expansions

int OpProductExpansion::graded_sign(const Word& w) const {
    std::vector<int> flat;
    for (auto& f : w) flat.insert(flat.end(), f.args.begin(), f.args.end());
    // inversions among odd labels relative to ascending order
    int count = 0;
    for (std::size_t i = 0; i < flat.size(); ++i)
        for (std::size_t j = i + 1; j < flat.size(); ++j)
            if (flat[i] > flat[j] && parities.at(static_cast<std::size_t>(flat[i])) &&
                parities.at(static_cast<std::size_t>(flat[j])))
                ++count;
    return (count & 1) ? -1 : 1;
}

OpProductExpansion OpProductExpansion::normalized() const {
    std::map<Word, Rational> acc;
    for (auto& t : terms) {
        Word w;
        for (auto& f : t.word)
            if (!f.args.empty()) w.push_back(f);  // T(empty) = aT(empty) = 1
        acc[w] += t.coeff;
    }
    OpProductExpansion out;
    out.parities = parities;
    for (auto& [w, c] : acc)
        if (c != 0) out.terms.push_back({c, w});
    return out;
}

std::vector<std::vector<std::vector<int>>> ordered_set_partitions(const std::vector<int>& labels) {
    std::vector<std::vector<std::vector<int>>> out;
    const std::size_t n = labels.size();
    if (n == 0) {
        out.push_back({});
        return out;
    }
    // assign each label a block index; keep surjective assignments
    std::vector<std::size_t> block(n, 0);
    for (std::size_t k = 1; k <= n; ++k) {
        std::fill(block.begin(), block.end(), 0);
        while (true) {
            std::vector<std::vector<int>> parts(k);
            for (std::size_t i = 0; i < n; ++i) parts[block[i]].push_back(labels[i]);
            if (std::all_of(parts.begin(), parts.end(), [](auto& p) { return !p.empty(); })) out.push_back(parts);
            std::size_t i = 0;
            while (i < n && ++block[i] == k) block[i++] = 0;
            if (i == n) break;
        }
    }
    return out;
}

Rational fubini_number(int n) {
    // a(n) = sum_{k=1}^{n} C(n,k) a(n-k)
    std::vector<Rational> a(static_cast<std::size_t>(n) + 1, 0);
    a[0] = 1;
    for (int m = 1; m <= n; ++m) {
        Rational binom = 1;
        for (int k = 1; k <= m; ++k) {
            binom = binom * (m - k + 1) / k;
            a[static_cast<std::size_t>(m)] += binom * a[static_cast<std::size_t>(m - k)];
        }
    }
    return a[static_cast<std::size_t>(n)];
}

namespace {

std::vector<int> resolve_parities(int n, const std::vector<int>& parities) {
    if (parities.empty()) return std::vector<int>(static_cast<std::size_t>(n), 0);
    if (static_cast<int>(parities.size()) != n)
        throw std::invalid_argument("parity list has " + std::to_string(parities.size()) + " entries, expected " +
                                    std::to_string(n));
    return parities;
}

std::vector<int> range(int begin, int end) {
    std::vector<int> v;
    for (int i = begin; i < end; ++i) v.push_back(i);
    return v;
}

Factor make_factor(FactorKind k, std::vector<int> args) {
    std::sort(args.begin(), args.end());
    return {k, std::move(args)};
}

// aT(labels) as T-words with intrinsic coefficients (-1)^{|I|+k}.
std::vector<OpTerm> aT_terms(const std::vector<int>& labels) {
    std::vector<OpTerm> out;
    if (labels.empty()) {
        out.push_back({Rational(1), {}});
        return out;
    }
    for (auto& parts : ordered_set_partitions(labels)) {
        OpTerm t;
        t.coeff = ((labels.size() + parts.size()) % 2) ? -1 : 1;
        for (auto& p : parts) t.word.push_back(make_factor(FactorKind::T, p));
        out.push_back(std::move(t));
    }
    return out;
}

// All ways to distribute labels over `slots` ordered (possibly empty) subsets.
template <class F>
void distribute(const std::vector<int>& labels, std::size_t slots, F&& f) {
    std::vector<std::size_t> pick(labels.size(), 0);
    while (true) {
        std::vector<std::vector<int>> parts(slots);
        for (std::size_t i = 0; i < labels.size(); ++i) parts[pick[i]].push_back(labels[i]);
        f(parts);
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == slots) pick[i++] = 0;
        if (i == pick.size()) return;
    }
}

std::vector<OpTerm> concat(const std::vector<OpTerm>& a, const std::vector<OpTerm>& b) {
    std::vector<OpTerm> out;
    for (auto& x : a)
        for (auto& y : b) {
            OpTerm t{x.coeff * y.coeff, x.word};
            t.word.insert(t.word.end(), y.word.begin(), y.word.end());
            out.push_back(std::move(t));
        }
    return out;
}

std::vector<OpTerm> single(FactorKind k, const std::vector<int>& args, Rational c = 1) {
    return {OpTerm{std::move(c), {make_factor(k, args)}}};
}

std::vector<OpTerm> adv_terms(const std::vector<int>& I, const std::vector<std::vector<int>>& J) {
    std::vector<OpTerm> out;
    const std::size_t k = J.size();
    distribute(I, 2 * k, [&](const std::vector<std::vector<int>>& parts) {
        std::vector<OpTerm> acc{OpTerm{Rational(1), {}}};
        for (std::size_t i = 0; i < k; ++i) {
            std::vector<int> tb = parts[2 * i];
            tb.insert(tb.end(), J[i].begin(), J[i].end());
            acc = concat(acc, single(FactorKind::T, tb));
            const auto& ab = parts[2 * i + 1];
            acc = concat(acc, single(FactorKind::aT, ab, (ab.size() % 2) ? -1 : 1));
        }
        out.insert(out.end(), acc.begin(), acc.end());
    });
    return out;
}

std::vector<OpTerm> ret_terms(const std::vector<int>& I, const std::vector<std::vector<int>>& J) {
    std::vector<OpTerm> out;
    const std::size_t k = J.size();
    distribute(I, 2 * k, [&](const std::vector<std::vector<int>>& parts) {
        std::vector<OpTerm> acc{OpTerm{Rational(1), {}}};
        for (std::size_t i = 0; i < k; ++i) {
            const auto& ab = parts[2 * i];
            acc = concat(acc, single(FactorKind::aT, ab, (ab.size() % 2) ? -1 : 1));
            std::vector<int> tb = parts[2 * i + 1];
            tb.insert(tb.end(), J[i].begin(), J[i].end());
            acc = concat(acc, single(FactorKind::T, tb));
        }
        out.insert(out.end(), acc.begin(), acc.end());
    });
    return out;
}

void negate(std::vector<OpTerm>& v) {
    for (auto& t : v) t.coeff = -t.coeff;
}

}  // namespace

OpProductExpansion OpProductExpansion::expand_to_T() const {
    OpProductExpansion out;
    out.parities = parities;
    for (auto& t : terms) {
        std::vector<OpTerm> acc{OpTerm{t.coeff, {}}};
        for (auto& f : t.word)
            acc = concat(acc, f.kind == FactorKind::aT ? aT_terms(f.args) : single(FactorKind::T, f.args));
        out.terms.insert(out.terms.end(), acc.begin(), acc.end());
    }
    return out.normalized();
}

OpProductExpansion operator-(const OpProductExpansion& a, const OpProductExpansion& b) {
    OpProductExpansion out;
    out.parities = a.parities;
    out.terms = a.terms;
    for (auto t : b.terms) {
        t.coeff = -t.coeff;
        out.terms.push_back(std::move(t));
    }
    return out;
}

OpProductExpansion expand_aT(int n, const std::vector<int>& parities) {
    if (n < 0) throw std::invalid_argument("expand_aT needs n >= 0");
    OpProductExpansion e;
    e.parities = resolve_parities(n, parities);
    e.terms = aT_terms(range(0, n));
    return e;
}

namespace {

std::vector<std::vector<int>> j_blocks(int i_size, const std::vector<int>& j_sizes, int& total) {
    if (i_size < 0 || j_sizes.empty()) throw std::invalid_argument("needs |I| >= 0 and at least one J block");
    int next = i_size;
    std::vector<std::vector<int>> J;
    for (int s : j_sizes) {
        if (s < 0) throw std::invalid_argument("negative J block size");
        J.push_back(range(next, next + s));
        next += s;
    }
    total = next;
    return J;
}

enum class DifForm { plain, inner_commutator, outer_commutator };

OpProductExpansion dif_sum(int i_size, const std::vector<int>& j_sizes, const std::vector<int>& parities,
                           DifForm form) {
    int total = 0;
    const auto J = j_blocks(i_size, j_sizes, total);
    OpProductExpansion e;
    e.parities = resolve_parities(total, parities);
    distribute(range(0, i_size), 3, [&](const std::vector<std::vector<int>>& p) {
        if (static_cast<int>(p[1].size()) == i_size) return;
        const Rational sign = (p[0].size() % 2) ? 1 : -1;  // -(-1)^{|I1|}
        auto x = single(FactorKind::aT, p[0], sign);
        auto y = adv_terms(p[1], J);
        auto z = single(FactorKind::T, p[2]);
        // graded commutators carry their reordering sign in the word itself
        std::vector<OpTerm> t;
        switch (form) {
            case DifForm::plain: t = concat(concat(x, y), z); break;
            case DifForm::inner_commutator: {
                t = concat(concat(x, y), z);
                auto yx = concat(concat(y, x), z);
                negate(yx);
                t.insert(t.end(), yx.begin(), yx.end());
                break;
            }
            case DifForm::outer_commutator: {
                t = concat(concat(x, y), z);
                auto zxy = concat(z, concat(x, y));
                negate(zxy);
                t.insert(t.end(), zxy.begin(), zxy.end());
                break;
            }
        }
        e.terms.insert(e.terms.end(), t.begin(), t.end());
    });
    return e;
}

}  // namespace

OpProductExpansion expand_adv(int i_size, const std::vector<int>& j_sizes, const std::vector<int>& parities) {
    int total = 0;
    const auto J = j_blocks(i_size, j_sizes, total);
    OpProductExpansion e;
    e.parities = resolve_parities(total, parities);
    e.terms = adv_terms(range(0, i_size), J);
    return e;
}

OpProductExpansion expand_ret(int i_size, const std::vector<int>& j_sizes, const std::vector<int>& parities) {
    int total = 0;
    const auto J = j_blocks(i_size, j_sizes, total);
    OpProductExpansion e;
    e.parities = resolve_parities(total, parities);
    e.terms = ret_terms(range(0, i_size), J);
    return e;
}

OpProductExpansion expand_dif(int i_size, const std::vector<int>& j_sizes, const std::vector<int>& parities) {
    return expand_adv(i_size, j_sizes, parities) - expand_ret(i_size, j_sizes, parities);
}

OpProductExpansion expand_dif_aT_adv_T(int i_size, const std::vector<int>& j_sizes, const std::vector<int>& parities) {
    return dif_sum(i_size, j_sizes, parities, DifForm::plain);
}

OpProductExpansion expand_dif_commutator(int i_size, const std::vector<int>& j_sizes,
                                         const std::vector<int>& parities) {
    return dif_sum(i_size, j_sizes, parities, DifForm::inner_commutator);
}

OpProductExpansion expand_dif_outer_commutator(int i_size, const std::vector<int>& j_sizes,
                                               const std::vector<int>& parities) {
    return dif_sum(i_size, j_sizes, parities, DifForm::outer_commutator);
}

OpProductExpansion telescoping_left(int n, const std::vector<int>& parities) {
    OpProductExpansion e;
    e.parities = resolve_parities(n, parities);
    distribute(range(0, n), 2, [&](const std::vector<std::vector<int>>& p) {
        auto t = concat(single(FactorKind::aT, p[0], (p[0].size() % 2) ? -1 : 1), single(FactorKind::T, p[1]));
        e.terms.insert(e.terms.end(), t.begin(), t.end());
    });
    return e;
}

OpProductExpansion telescoping_right(int n, const std::vector<int>& parities) {
    OpProductExpansion e;
    e.parities = resolve_parities(n, parities);
    distribute(range(0, n), 2, [&](const std::vector<std::vector<int>>& p) {
        auto t = concat(single(FactorKind::T, p[0]), single(FactorKind::aT, p[1], (p[1].size() % 2) ? -1 : 1));
        e.terms.insert(e.terms.end(), t.begin(), t.end());
    });
    return e;
}

std::string to_string(const OpProductExpansion& e) {
    std::ostringstream os;
    bool first = true;
    for (auto& t : e.terms) {
        const Rational c = t.coeff * e.graded_sign(t.word);
        os << (first ? "" : " ") << (c < 0 ? "- " : (first ? "" : "+ "));
        const Rational a = c < 0 ? Rational(-c) : c;
        if (a != 1 || t.word.empty()) os << to_string(a) << (t.word.empty() ? "" : " ");
        for (std::size_t k = 0; k < t.word.size(); ++k) {
            os << (t.word[k].kind == FactorKind::T ? "T(" : "aT(");
            for (std::size_t i = 0; i < t.word[k].args.size(); ++i)
                os << (i ? "," : "") << "B" << t.word[k].args[i] + 1;
            os << ")";
        }
        first = false;
    }
    return first ? "0" : os.str();
}

}  // namespace egq
