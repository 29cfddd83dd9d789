#include "doctest.h"
#include "generators.hpp"

#include "egqft/wick_pairing.hpp"

#include <numeric>

using namespace egq;
using namespace egq::testgen;

namespace {

Generator gen(FieldId f, MultiIndex a = {0, 0, 0, 0}) { return Generator{f, a}; }

SuperQuadriIndex power(FieldId f, int n) {
    SuperQuadriIndex s;
    if (n) s.add(gen(f), n);
    return s;
}

// Test-local brute force: all perfect matchings of n labels avoiding pairs inside one group.
void brute_matchings(std::vector<int> left, const std::vector<int>& groups,
                     std::vector<std::pair<int, int>>& cur, std::vector<std::vector<std::pair<int, int>>>& out) {
    if (left.empty()) {
        out.push_back(cur);
        return;
    }
    const int a = left.front();
    for (std::size_t k = 1; k < left.size(); ++k) {
        const int b = left[k];
        if (groups[static_cast<std::size_t>(a)] == groups[static_cast<std::size_t>(b)]) continue;
        std::vector<int> rest;
        for (std::size_t m = 1; m < left.size(); ++m)
            if (m != k) rest.push_back(left[m]);
        cur.emplace_back(a, b);
        brute_matchings(rest, groups, cur, out);
        cur.pop_back();
    }
}

Rational matching_moment(const std::vector<std::vector<Rational>>& cov, const std::vector<int>& occ) {
    std::vector<int> groups(occ.size());
    std::iota(groups.begin(), groups.end(), 0);
    Rational sum = 0;
    for (auto& m : perfect_matchings(groups, std::vector<int>(occ.size(), 0), [](int, int) { return true; })) {
        Rational prod = 1;
        for (auto& [a, b] : m.pairs) prod *= cov[static_cast<std::size_t>(occ[static_cast<std::size_t>(a)])][static_cast<std::size_t>(occ[static_cast<std::size_t>(b)])];
        sum += prod * m.sign;
    }
    return sum;
}

}  // namespace

TEST_CASE("Wick expansion of the scalar-model vertex pair") {
    const ModelSpec sm = builtin("scalar_model");
    const Polynomial& L = sm.vertices[0].poly;
    auto terms = wick_expand({L, L}, sm.fields);
    CHECK(terms.size() == 36);
    int survivors = 0;
    for (auto& t : terms) {
        const int phi = t.s_list[0].multiplicity(gen(0)) + t.s_list[1].multiplicity(gen(0));
        const int psi = t.s_list[0].multiplicity(gen(1)) + t.s_list[1].multiplicity(gen(1));
        // VEV content is what is left after taking the derivatives
        const bool even = (2 - phi) % 2 == 0 && (4 - psi) % 2 == 0;
        CHECK(t.vev_forced_zero == !even);
        CHECK(t.sign == 1);
        CHECK(t.weight == 1 / (t.s_list[0].factorial() * t.s_list[1].factorial()));
        survivors += !t.vev_forced_zero;
    }
    CHECK(survivors == 10);

    auto single = wick_expand({Polynomial::constant(CRational(Rational(1, 3)))}, sm.fields);
    REQUIRE(single.size() == 1);
    CHECK(single[0].s_list[0].empty());
    CHECK(vev_key(single[0], sm.fields) == "(Omega|F(1/3)Omega)");
}

TEST_CASE("Wick expansion of the QED current against a spinor component") {
    const ModelSpec qed = builtin("spinor_qed_massive");
    const FieldTable& ft = qed.fields;
    for (int mu = 0; mu < 4; ++mu)
        for (int a = 1; a <= 4; ++a) {
            const Polynomial j = derive(qed.vertices[0].poly, gen(mu), ft);
            const Generator psi_a = gen(3 + a);
            auto terms = wick_expand({j, Polynomial::generator(psi_a)}, ft);
            const GammaMatrix g0g = matmul(gamma(0), gamma(mu));
            Polynomial normal_part;
            int contracted = 0;
            for (auto& t : terms) {
                if (t.vev_forced_zero) continue;
                if (t.s_list[1].empty()) {
                    // contracted term: -(Omega|F((psibar gamma^mu)_b, psi_a)Omega) :psi_b:
                    REQUIRE(t.s_list[0].total() == 1);
                    const Generator psi_b = t.s_list[0].sequence()[0];
                    REQUIRE(psi_b.field >= 4);
                    REQUIRE(psi_b.field <= 7);
                    const std::size_t b = static_cast<std::size_t>(psi_b.field - 4);
                    Polynomial row;
                    for (std::size_t c = 0; c < 4; ++c)
                        if (!g0g[c][b].is_zero()) row += Polynomial::generator(gen(8 + static_cast<int>(c))).scaled(g0g[c][b]);
                    CHECK(t.vev_factors[0].scaled(CRational(t.sign)) == row.scaled(CRational(-1)));
                    CHECK(t.vev_factors[1] == Polynomial::generator(psi_a));
                    ++contracted;
                } else if (t.vev_factors[0].terms().begin()->first.empty()) {
                    // fully derived: the pieces reassemble :j psi_a:
                    REQUIRE(t.vev_factors[1] == Polynomial::constant(CRational(1)));
                    normal_part += Polynomial::monomial(t.vev_factors[0].terms().begin()->second * CRational(t.sign) * CRational(t.weight), t.s_list[0]);
                } else {
                    // (Omega|F(j, 1)Omega): survives the content check, vanishes by normal ordering
                    CHECK(t.s_list[0].empty());
                    CHECK(t.vev_factors[0] == j);
                }
            }
            CHECK(contracted == 4);
            CHECK(normal_part == j);
        }
}

TEST_CASE("a single argument reproduces its normal-ordered form") {
    for (auto& name : builtin_names()) {
        const ModelSpec m = builtin(name);
        for (int trial = 0; trial < 40; ++trial) {
            Polynomial b = random_monomial(m.fields, 4, 1);
            Polynomial extra = random_monomial(m.fields, 4, 1);
            if (parity(extra, m.fields) == parity(b, m.fields)) b += extra;
            if (b.is_zero()) continue;
            // only the constant term of a lone normal-ordered argument has a VEV
            Polynomial rebuilt;
            for (auto& t : wick_expand({b}, m.fields)) {
                auto it = t.vev_factors[0].terms().find(SuperQuadriIndex{});
                if (it == t.vev_factors[0].terms().end()) continue;
                rebuilt += Polynomial::monomial(it->second * CRational(t.sign) * CRational(t.weight), t.s_list[0]);
            }
            CHECK(rebuilt == b);
        }
    }
}

TEST_CASE("argument permutation multiplies Wick signs by the permutation sign") {
    const ModelSpec qed = builtin("spinor_qed_massive");
    const FieldTable& ft = qed.fields;
    const Polynomial p1 = Polynomial::ordered_product(CRational(1), {gen(8), gen(4)}, ft);
    const Polynomial p2 = Polynomial::generator(gen(5));
    const Polynomial p3 = Polynomial::generator(gen(9));
    const std::vector<Polynomial> args{p1, p2, p3};
    auto base = wick_expand(args, ft);
    const std::vector<int> pi{2, 0, 1};
    auto permuted = wick_expand({args[2], args[0], args[1]}, ft);
    REQUIRE(base.size() == permuted.size());
    for (auto& t : base) {
        SList moved{t.s_list[2], t.s_list[0], t.s_list[1]};
        const WickTerm* match = nullptr;
        for (auto& u : permuted)
            if (u.s_list == moved) match = &u;
        REQUIRE(match != nullptr);
        // grading of each argument after taking the derivative and of the normal-ordered part
        std::vector<int> vev_par, nor_par;
        for (int k = 0; k < 3; ++k) {
            vev_par.push_back(parity(t.vev_factors[static_cast<std::size_t>(k)], ft));
            nor_par.push_back(t.s_list[static_cast<std::size_t>(k)].parity(ft));
        }
        std::vector<int> whole;
        for (int k = 0; k < 3; ++k) whole.push_back(vev_par[static_cast<std::size_t>(k)] + nor_par[static_cast<std::size_t>(k)]);
        // F(B_pi) = sign(pi) F(B); the VEV and the normal product are reordered separately
        CHECK(match->sign * permutation_sign(vev_par, pi) * permutation_sign(nor_par, pi) ==
              t.sign * permutation_sign(whole, pi));
    }
}

TEST_CASE("complete pairings: counts, classification and signs") {
    const ModelSpec sm = builtin("scalar_model");
    auto two = complete_pairings({power(0, 2)}, {power(0, 2)}, sm);
    CHECK(two.size() == 2);
    auto six = complete_pairings({power(0, 3)}, {power(0, 3)}, sm);
    CHECK(six.size() == 6);
    for (auto& t : six) {
        CHECK(t.constant == CRational(1));
        CHECK(t.classification == PairingClass::massless);
        CHECK_FALSE(momentum_support_vanishes(t));
    }
    CHECK(complete_pairings({power(0, 1)}, {power(1, 1)}, sm).empty());
    CHECK(complete_pairings({power(0, 2)}, {power(0, 3)}, sm).empty());

    auto massive = complete_pairings({power(1, 2)}, {power(1, 2)}, sm);
    REQUIRE(massive.size() == 2);
    CHECK(massive[0].classification == PairingClass::massive);
    CHECK(momentum_support_vanishes(massive[0]));

    PairingOptions subsets{PairingMode::all_subsets, false};
    auto partial = complete_pairings({power(0, 1)}, {power(0, 1)}, sm, subsets);
    REQUIRE(partial.size() == 2);
    int vacuum = 0;
    for (auto& t : partial)
        if (t.classification == PairingClass::vacuum) {
            ++vacuum;
            CHECK_FALSE(momentum_support_vanishes(t));
            CHECK(t.residual_left[0] == power(0, 1));
        }
    CHECK(vacuum == 1);

    // :phi^a: against :phi^b: has delta_ab a! full contractions
    for (int a = 0; a <= 5; ++a)
        for (int b = 0; b <= 5; ++b)
            CHECK(complete_pairings({power(0, a)}, {power(0, b)}, sm).size() ==
                  (a == b ? static_cast<std::size_t>(factorial(a)) : 0u));

    // fermion sign: :psi1 psi3: against :psi*1 psi*3:
    const ModelSpec qed = builtin("spinor_qed_massive");
    SuperQuadriIndex l, r;
    l.add(gen(4));
    l.add(gen(6));
    r.add(gen(8));
    r.add(gen(10));
    auto ferm = complete_pairings({l}, {r}, qed);
    REQUIRE(ferm.size() == 2);
    for (auto& t : ferm) {
        const bool straight = t.pairs[0].second.gen.field == 8;
        CHECK(t.constant == CRational(straight ? -1 : 1));
    }

    CHECK_THROWS_AS(complete_pairings({power(0, 7)}, {power(0, 7)}, sm), DomainError);
}

TEST_CASE("complete pairings agree with a brute-force matching count") {
    const ModelSpec sm = builtin("scalar_model");
    for (int trial = 0; trial < 60; ++trial) {
        SList left, right;
        std::vector<int> groups;
        int slot = 0;
        int total = 0;
        for (int k = uniform_int(1, 2); k > 0; --k, ++slot) {
            int n = uniform_int(0, 3);
            left.push_back(power(0, n));
            total += n;
            for (int i = 0; i < n; ++i) groups.push_back(slot);
        }
        for (int k = uniform_int(1, 2); k > 0; --k, ++slot) {
            int n = uniform_int(0, 3);
            right.push_back(power(0, n));
            total += n;
            for (int i = 0; i < n; ++i) groups.push_back(slot);
        }
        if (total > 12) continue;
        // oracle: matchings between the two sides only, with left slots grouped together
        std::vector<int> side(groups.size());
        int nl = 0;
        for (auto& s : left) nl += s.total();
        for (std::size_t i = 0; i < side.size(); ++i) side[i] = static_cast<int>(i) < nl ? 0 : 1;
        std::vector<int> labels(groups.size());
        std::iota(labels.begin(), labels.end(), 0);
        std::vector<std::pair<int, int>> cur;
        std::vector<std::vector<std::pair<int, int>>> oracle;
        brute_matchings(labels, side, cur, oracle);
        auto terms = complete_pairings(left, right, sm);
        CHECK(terms.size() == oracle.size());

        // paired counts plus residual equal the original lists
        for (auto& t : terms) {
            auto pl = paired_counts_left(t, left.size());
            auto pr = paired_counts_right(t, right.size());
            for (std::size_t s = 0; s < left.size(); ++s)
                CHECK(pl.ext_bar[s][0] + ext({t.residual_left[s]}, 0) == ext({left[s]}, 0));
            for (std::size_t s = 0; s < right.size(); ++s)
                CHECK(pr.ext_bar[s][0] + ext({t.residual_right[s]}, 0) == ext({right[s]}, 0));
        }
    }
}

TEST_CASE("paired counts track derivatives") {
    const ModelSpec sqed = builtin("scalar_qed_massless");
    SuperQuadriIndex l, r;
    l.add(gen(4, {1, 0, 0, 0}));
    l.add(gen(0));
    r.add(gen(5, {0, 2, 0, 0}));
    r.add(gen(0));
    auto terms = complete_pairings({l}, {r}, sqed, {PairingMode::all_subsets, false});
    for (auto& t : terms) {
        auto pl = paired_counts_left(t, 1);
        auto pr = paired_counts_right(t, 1);
        for (FieldId f = 0; f < sqed.fields.size(); ++f) {
            CHECK(pl.ext_bar[0][f] + ext({t.residual_left[0]}, f) == ext({l}, f));
            CHECK(pl.der_bar[0][f] + der({t.residual_left[0]}, f) == der({l}, f));
            CHECK(pr.ext_bar[0][f] + ext({t.residual_right[0]}, f) == ext({r}, f));
            CHECK(pr.der_bar[0][f] + der({t.residual_right[0]}, f) == der({r}, f));
        }
    }
    CHECK(terms.size() == 4);
}

TEST_CASE("Isserlis oracle") {
    std::vector<std::vector<Rational>> unit{{1}};
    CHECK(isserlis_oracle(unit, {0, 0, 0, 0}) == 3);
    CHECK(isserlis_oracle(unit, {0, 0, 0}) == 0);
    const Rational rho(2, 7);
    std::vector<std::vector<Rational>> cov{{1, rho}, {rho, 1}};
    CHECK(isserlis_oracle(cov, {0, 0, 1, 1}) == 1 + 2 * rho * rho);
}

TEST_CASE("pairing sums reproduce Gaussian moments") {
    std::vector<std::vector<Rational>> cov{{2, Rational(1, 3), Rational(-1, 2)},
                                           {Rational(1, 3), 1, Rational(1, 5)},
                                           {Rational(-1, 2), Rational(1, 5), Rational(3, 2)}};
    for (int a = 0; a <= 8; ++a)
        for (int b = 0; a + b <= 8; ++b)
            for (int c = 0; a + b + c <= 8; ++c) {
                std::vector<int> occ;
                occ.insert(occ.end(), static_cast<std::size_t>(a), 0);
                occ.insert(occ.end(), static_cast<std::size_t>(b), 1);
                occ.insert(occ.end(), static_cast<std::size_t>(c), 2);
                CHECK(matching_moment(cov, occ) == isserlis_oracle(cov, occ));
            }
}

TEST_CASE("ordered partitions and the anti-time-ordered expansion") {
    const std::vector<int> counts{1, 1, 3, 13, 75, 541};
    for (int n = 0; n <= 5; ++n) {
        std::vector<int> labels(static_cast<std::size_t>(n));
        std::iota(labels.begin(), labels.end(), 0);
        CHECK(ordered_set_partitions(labels).size() == static_cast<std::size_t>(counts[static_cast<std::size_t>(n)]));
        CHECK(fubini_number(n) == counts[static_cast<std::size_t>(n)]);
        if (n >= 1) CHECK(expand_aT(n).terms.size() == static_cast<std::size_t>(counts[static_cast<std::size_t>(n)]));
    }
    auto two = expand_aT(2).normalized();
    REQUIRE(two.terms.size() == 3);
    for (auto& t : two.terms) {
        if (t.word.size() == 1) {
            CHECK(t.word[0].args == std::vector<int>{0, 1});
            CHECK(t.coeff == -1);
        } else {
            CHECK(t.coeff == 1);
        }
    }
    // graded sign of T(B2)T(B1) for two odd arguments
    OpProductExpansion odd = expand_aT(2, {1, 1});
    CHECK(odd.graded_sign({Factor{FactorKind::T, {1}}, Factor{FactorKind::T, {0}}}) == -1);
}

TEST_CASE("telescoping identities and the Dif representations") {
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<int> par(8);
        for (auto& p : par) p = trial == 0 ? 0 : uniform_int(0, 1);
        for (int n = 1; n <= 4; ++n) {
            std::vector<int> p(par.begin(), par.begin() + n);
            CHECK(telescoping_left(n, p).expand_to_T().is_zero());
            CHECK(telescoping_right(n, p).expand_to_T().is_zero());
        }
        for (int i = 0; i <= 3; ++i)
            for (const std::vector<int>& js : {std::vector<int>{1}, {2}, {1, 1}}) {
                const int total = i + std::accumulate(js.begin(), js.end(), 0);
                std::vector<int> p(par.begin(), par.begin() + total);
                auto dif = expand_dif(i, js, p).expand_to_T();
                CHECK((dif - expand_dif_aT_adv_T(i, js, p).expand_to_T()).is_zero());
                CHECK((dif - expand_dif_commutator(i, js, p).expand_to_T()).is_zero());
                CHECK((dif - expand_dif_outer_commutator(i, js, p).expand_to_T()).is_zero());
            }
    }
    // with I empty the advanced and retarded products are the single factor T(J)
    auto adv = expand_adv(0, {2}).normalized();
    REQUIRE(adv.terms.size() == 1);
    CHECK(adv.terms[0].word.size() == 1);
    CHECK(adv.terms[0].word[0].args == std::vector<int>{0, 1});
    CHECK(expand_dif(0, {2}).is_zero());
    CHECK_FALSE(expand_dif(1, {1}).expand_to_T().is_zero());
    CHECK_THROWS_AS(expand_adv(1, {}), std::invalid_argument);
}
