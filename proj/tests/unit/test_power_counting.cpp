#include "doctest.h"
#include "generators.hpp"

#include "egqft/power_counting.hpp"

#include <iterator>

using namespace egq;
using namespace egq::testgen;

namespace {

// u-list whose entries are all admissible derivative indices of the model's vertex.
SList random_vertex_ulist(const ModelSpec& m, int max_len) {
    const auto& terms = m.vertices.at(0).poly.terms();
    SList u;
    const int k = uniform_int(1, max_len);
    for (int j = 0; j < k; ++j) {
        auto it = terms.begin();
        std::advance(it, uniform_int(0, static_cast<int>(terms.size()) - 1));
        auto subs = it->first.sub_indices();
        u.push_back(subs[static_cast<std::size_t>(uniform_int(0, static_cast<int>(subs.size()) - 1))]);
    }
    return u;
}

int multiplet(const ModelSpec& m, const std::string& name) { return *m.fields.find_multiplet(name); }

}  // namespace

TEST_CASE("ext and der") {
    const ModelSpec qed = builtin("spinor_qed_massless");
    SList s{SuperQuadriIndex::single(Generator{1, {}}), SuperQuadriIndex::single(Generator{2, {}})};
    CHECK(ext_multiplet(s, qed.fields, multiplet(qed, "A")) == 2);
    CHECK(der_multiplet(s, qed.fields, multiplet(qed, "A")) == 0);

    SList d{SuperQuadriIndex::single(Generator{0, {0, 1, 0, 0}}, 2)};
    CHECK(ext(d, 0) == 2);
    CHECK(der(d, 0) == 2);
    CHECK(ext({}, 0) == 0);
    CHECK(der({}, 0) == 0);
}

TEST_CASE("omega_general and omega_prime") {
    CHECK(omega_general({3, 3}, 0).value() == 2);
    CHECK(omega_general({2, 2}, 1).value() == 2);
    CHECK(omega_general({4}, 0).value() == 4);
    Omega half = omega_general({Rational(3, 2)}, 0);
    CHECK(half.vanishing_sector());
    CHECK_THROWS_AS(half.value(), DomainError);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Rational> dims;
        const int c = uniform_int(0, 1);
        for (int k = uniform_int(1, 5); k > 0; --k) dims.push_back(Rational(uniform_int(0, 8), 2));
        CHECK(omega_general(dims, c) == omega_prime(dims, c));
    }
}

TEST_CASE("omega_massless agrees with the model formulas and the general form") {
    const ModelSpec spinor = builtin("spinor_qed_massive");
    const ModelSpec scalar = builtin("scalar_qed_massive");
    const ModelSpec sm = builtin("scalar_model");
    for (int trial = 0; trial < 200; ++trial) {
        SList u = random_vertex_ulist(spinor, 4);
        Rational expect = 4 - ext_multiplet(u, spinor.fields, multiplet(spinor, "A")) -
                          Rational(3, 2) * (ext_multiplet(u, spinor.fields, multiplet(spinor, "psi")) +
                                            ext_multiplet(u, spinor.fields, multiplet(spinor, "psi*")));
        CHECK(omega_massless(spinor, u).raw == expect);

        u = random_vertex_ulist(scalar, 4);
        expect = 4 - ext_multiplet(u, scalar.fields, multiplet(scalar, "A"));
        for (auto name : {"phi", "phi*"})
            expect -= ext_multiplet(u, scalar.fields, multiplet(scalar, name)) +
                      der_multiplet(u, scalar.fields, multiplet(scalar, name));
        CHECK(omega_massless(scalar, u).raw == expect);

        u = random_vertex_ulist(sm, 4);
        CHECK(omega_massless(sm, u).raw == 4 - ext(u, 0) - ext(u, 1));
    }
    for (auto& name : builtin_names()) {
        const ModelSpec m = builtin(name);
        const Polynomial& L = m.vertices.at(0).poly;
        const int c = m.c_const;
        for (int trial = 0; trial < 200; ++trial) {
            SList u = random_vertex_ulist(m, 4);
            std::vector<Rational> dims;
            bool all_nonzero = true;
            for (auto& s : u) {
                Polynomial d = derive(L, s, m.fields);
                if (d.is_zero()) all_nonzero = false;
                else dims.push_back(canonical_dim(d, m.fields));
            }
            if (!all_nonzero) continue;
            CHECK(omega_massless(m, u) == omega_general(dims, c));
            CHECK(omega_massless(m, u) == omega_prime(dims, c));
        }
    }
    CHECK(omega_massless(sm, {SuperQuadriIndex{}, SuperQuadriIndex{}, SuperQuadriIndex{}}).value() == 4);
    CHECK(omega_from_counts(sm, {{"phi", 2}, {"psi", 0}}, {}).value() == 2);
    CHECK_THROWS_AS(omega_from_counts(sm, {{"chi", 1}}, {}), DomainError);
    CHECK_THROWS_AS(omega_massless(with_c(sm, 0), {}), DomainError);
}

TEST_CASE("scaling-degree bound and classification") {
    const ModelSpec sm = builtin("scalar_model");
    const Polynomial& L = sm.vertices[0].poly;
    CHECK(sd_bound(sm, {L, L}) == 8);
    CHECK(sd_bound(sm, {}) == 0);
    const ModelSpec sm0 = with_c(sm, 0);
    CHECK(sd_bound(sm0, {L, Polynomial::constant(CRational(1))}) == sd_bound(sm0, {L}));

    CHECK(classify(builtin("spinor_qed_massive")) == Renormalizability::renormalizable);
    CHECK(classify(sm0) == Renormalizability::super);
    CHECK(classify(sm) == Renormalizability::renormalizable);
}

TEST_CASE("IR-index arithmetic") {
    IrIndex four{4, IrScope::underline, false};
    PairedFieldStats scalar_pair{1, 2, 0, 0.0};
    CHECK(ir_index_product(four, four, {scalar_pair}).value == 6);
    CHECK(ir_index_product(four, four, {scalar_pair}).scope == IrScope::underline);
    CHECK(ir_index_product(four, {3, IrScope::partial, false}, {}).value == 3);
    CHECK(ir_index_product(four, {3, IrScope::partial, false}, {}).scope == IrScope::partial);
    CHECK_THROWS_AS(ir_index_product(four, four, {PairedFieldStats{1, 2, 0, 1.0}}), DomainError);

    for (int trial = 0; trial < 500; ++trial) {
        const int s1 = uniform_int(0, 6), s2 = uniform_int(0, 6);
        IrIndex d{4 - s1, IrScope::underline, false}, dp{4 - s2, IrScope::underline, false};
        CHECK(ir_index_product(d, dp, {}).value == 4 - (s1 + s2));

        // the sum term is exact: half-integer dims pair up to integers
        std::vector<PairedFieldStats> stats;
        int expect = d.value + dp.value - 4;
        for (int k = uniform_int(0, 3); k > 0; --k) {
            PairedFieldStats s{Rational(3, 2), 2 * uniform_int(0, 2), uniform_int(0, 3), 0.0};
            expect += 3 * s.ext_bar / 2 + s.der_bar;
            stats.push_back(s);
        }
        CHECK(ir_index_product(d, dp, stats).value == expect);

        const int v = uniform_int(-6, 6);
        IrIndex split = ir_index_split({v, IrScope::partial, false});
        CHECK(split.value == std::min(v, 0));
        CHECK(split.constant_plus_remainder == (v == 1));
    }
    CHECK(ir_index_split({-3, IrScope::partial, false}).value == -3);
    CHECK(ir_index_split({1, IrScope::partial, false}).constant_plus_remainder);
    CHECK(ir_index_split({5, IrScope::partial, false}).value == 0);
}
