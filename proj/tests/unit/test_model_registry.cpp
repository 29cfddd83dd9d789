#include "doctest.h"

#include "egqft/model_registry.hpp"
#include "egqft/power_counting.hpp"

using namespace egq;

namespace {

const char* kScalarModelText = R"(# the scalar model written out
[fields]               # name kind mass charge fermion
phi  scalar  0.0  0  0
psi  scalar  1.0  0  0
[vertices]
e = 1/2 * phi*psi^2
[options]
c = 1
)";

bool has_reason(const ModelVerdict& v, const std::string& needle) {
    for (auto& r : v.reasons)
        if (r.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("builtin field tables") {
    CHECK(builtin("spinor_qed_massive").fields.size() == 12);
    CHECK(builtin("spinor_qed_massless").fields.size() == 12);
    CHECK(builtin("scalar_qed_massive").fields.size() == 6);
    CHECK(builtin("scalar_qed_massless").fields.size() == 6);
    CHECK_THROWS_AS(builtin("phi_cubed"), DomainError);

    const ModelSpec sm = builtin("scalar_model");
    REQUIRE(sm.vertices.size() == 1);
    CHECK(sm.c_const == 1);
    CHECK(canonical_dim(sm.vertices[0].poly, sm.fields) == 3);
    auto monos = sm.vertices[0].poly.monomials();
    REQUIRE(monos.size() == 1);
    CHECK(monos[0].coeff == CRational(Rational(1, 2)));

    // fermi statistics exactly for odd fermion number
    for (auto& name : builtin_names())
        for (auto& f : builtin(name).fields.fields)
            CHECK((f.qn.statistics == Statistics::fermi) == (f.qn.fermion % 2 != 0));
}

TEST_CASE("scalar QED vertex is A_mu times the current") {
    const ModelSpec m = builtin("scalar_qed_massive");
    const FieldTable& ft = m.fields;
    const Polynomial& L = m.vertices[0].poly;
    for (int mu = 0; mu < 4; ++mu) {
        MultiIndex d{0, 0, 0, 0};
        d[static_cast<std::size_t>(mu)] = 1;
        const CRational c = CRational::imag_unit() * CRational(mu == 0 ? 1 : -1);
        Polynomial j = Polynomial::ordered_product(c, {Generator{5, {}}, Generator{4, d}}, ft);
        j -= Polynomial::ordered_product(c, {Generator{5, d}, Generator{4, {}}}, ft);
        CHECK(derive(L, Generator{mu, {}}, ft) == j);
    }
    CHECK(adjoint(L, ft) == L);
}

TEST_CASE("verdicts") {
    for (auto name : {"spinor_qed_massive", "spinor_qed_massless", "scalar_qed_massive", "scalar_qed_massless"}) {
        ModelVerdict v = validate(builtin(name));
        CHECK(v.renormalizability == Renormalizability::renormalizable);
        CHECK(v.wal_eligible);
        CHECK(has_reason(v, "not checked"));
    }
    ModelVerdict c1 = validate(builtin("scalar_model"));
    CHECK(c1.renormalizability == Renormalizability::renormalizable);
    CHECK(c1.wal_eligible);
    ModelVerdict c0 = validate(with_c(builtin("scalar_model"), 0));
    CHECK(c0.renormalizability == Renormalizability::super);
    CHECK_FALSE(c0.wal_eligible);

    ModelSpec phi3 = parse_model_spec("[fields]\nphi scalar 0 0 0\n[vertices]\ng = phi^3\n[options]\nc = 1\n");
    ModelVerdict v3 = validate(phi3);
    CHECK_FALSE(v3.wal_eligible);
    CHECK(has_reason(v3, "no massive field"));

    ModelSpec phi4 = parse_model_spec("[fields]\nphi scalar 1 0 0\n[vertices]\ng = phi^4\n[options]\nc = 1\n");
    CHECK(validate(phi4).renormalizability == Renormalizability::nonrenormalizable);
    CHECK_FALSE(validate(phi4).wal_eligible);

    ModelSpec broken = builtin("scalar_model");
    broken.fields.fields[0].adjoint = 7;
    CHECK_THROWS_AS(validate(broken), DomainError);
}

TEST_CASE("parser") {
    CHECK(parse_model_spec(kScalarModelText) == builtin("scalar_model"));

    ModelSpec free = parse_model_spec("[fields]\nphi scalar 1 0 0\n[vertices]\n");
    CHECK(free.vertices.empty());
    CHECK(has_reason(validate(free), "free model"));

    ModelSpec half = parse_model_spec("[fields]\nphi scalar 0 0 0\npsi scalar 1 0 0\n[vertices]\ne = 1/2 * phi*psi^2\n");
    auto monos = half.vertices.at(0).poly.monomials();
    REQUIRE(monos.size() == 1);
    CHECK(monos[0].coeff == CRational(Rational(1, 2)));
    CHECK(monos[0].index.total() == 3);

    ModelSpec charged = parse_model_spec(
        "[fields]\nA scalar 0 0 0\nphi scalar 1 -1 0\nphi* scalar 1 1 0\n[vertices]\n"
        "e = 1 * A*phi*phi* + 2 * d[0]phi*d[0]phi*\n");
    CHECK(charged.fields.at(1).adjoint == 2);
    CHECK(charged.vertices[0].poly.size() == 2);
}

TEST_CASE("parse errors carry positions") {
    auto expect_error = [](const std::string& text, int line, const std::string& needle) {
        try {
            parse_model_spec(text);
            FAIL("no error for: " << text);
        } catch (const ParseError& e) {
            CHECK(e.line == line);
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_error("[fields]\nphi scalar 0 0 0\n[vertices]\ne = phi*chi\n", 4, "unknown field name 'chi'");
    expect_error("[fields]\npsi dirac 1 -1 1\n", 2, "builtin");
    expect_error("[fields]\nphi scalar 0 0\n", 2, "field line needs");
    expect_error("phi scalar 0 0 0\n", 1, "before any section");
    expect_error("[fields]\nphi scalar 0 0 0\n[options]\nc = 2\n", 4, "c must be 0 or 1");
    expect_error("[fields]\nphi scalar 0 0 0\nphi scalar 1 0 0\n", 3, "duplicate");
    expect_error("[fields]\nphi scalar 0 0 0\n[vertices]\ne = d[5]phi\n", 4, "derivative index");
    expect_error("[colors]\n", 1, "unknown section");
}

TEST_CASE("serialize then parse is the identity on builtins and parsed specs") {
    for (auto& name : builtin_names()) {
        const ModelSpec m = builtin(name);
        CHECK(parse_model_spec(serialize_model_spec(m)) == m);
        CHECK(load_model(name) == m);
    }
    const ModelSpec parsed = parse_model_spec(kScalarModelText);
    const std::string text = serialize_model_spec(parsed);
    CHECK(parse_model_spec(text) == parsed);
    CHECK(serialize_model_spec(parse_model_spec(text)) == text);
    CHECK_THROWS_AS(load_model("/nonexistent/model.spec"), DomainError);
}
