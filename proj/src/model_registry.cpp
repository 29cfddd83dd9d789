#include "egqft/model_registry.hpp"

#include "egqft/power_counting.hpp"
#include "egqft/propagators.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace egq {

std::string to_string(Renormalizability r) {
    switch (r) {
        case Renormalizability::super: return "super-renormalizable";
        case Renormalizability::renormalizable: return "renormalizable";
        case Renormalizability::nonrenormalizable: return "nonrenormalizable";
    }
    return "nonrenormalizable";
}

ParseError::ParseError(const std::string& msg, int line_, int column_)
    : std::runtime_error("line " + std::to_string(line_) + ", column " + std::to_string(column_) + ": " + msg),
      line(line_),
      column(column_) {}

// ---------------------------------------------------------------- builtins

namespace {

QuantumNumbers make_qn(int fermion, int charge, Rational dim, double mass) {
    QuantumNumbers q;
    q.fermion = fermion;
    q.charge = charge;
    q.dim = std::move(dim);
    q.mass = mass;
    q.statistics = (fermion & 1) ? Statistics::fermi : Statistics::bose;
    return q;
}

void add_vector_potential(FieldTable& ft) {
    int mult = static_cast<int>(ft.multiplets.size());
    ft.multiplets.push_back({"A", mult});
    for (int mu = 0; mu < 4; ++mu) {
        FieldId id = ft.size();
        ft.fields.push_back({"A" + std::to_string(mu), FieldKind::vector, make_qn(0, 0, 1, 0.0), id, mult, mu});
    }
}

ModelSpec spinor_qed(double mass, const std::string& name) {
    ModelSpec m;
    m.name = name;
    m.builtin_name = name;
    m.c_const = 0;
    FieldTable& ft = m.fields;
    add_vector_potential(ft);
    int mpsi = static_cast<int>(ft.multiplets.size());
    ft.multiplets.push_back({"psi", mpsi + 1});
    ft.multiplets.push_back({"psi*", mpsi});
    for (int a = 0; a < 4; ++a)
        ft.fields.push_back({"psi" + std::to_string(a + 1), FieldKind::dirac, make_qn(1, -1, Rational(3, 2), mass),
                             8 + a, mpsi, a});
    for (int a = 0; a < 4; ++a)
        ft.fields.push_back({"psi*" + std::to_string(a + 1), FieldKind::dirac,
                             make_qn(-1, 1, Rational(3, 2), mass), 4 + a, mpsi + 1, a});
    Polynomial L;
    for (int mu = 0; mu < 4; ++mu) {
        GammaMatrix g0g = matmul(gamma(0), gamma(mu));
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                const CRational& c = g0g[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
                if (c.is_zero()) continue;
                std::vector<Generator> word{Generator{8 + a, {}}, Generator{4 + b, {}}, Generator{mu, {}}};
                L += Polynomial::ordered_product(c, word, ft);
            }
    }
    m.vertices.push_back({L, "e"});
    return m;
}

ModelSpec scalar_qed(double mass, const std::string& name) {
    ModelSpec m;
    m.name = name;
    m.builtin_name = name;
    m.c_const = 0;
    FieldTable& ft = m.fields;
    add_vector_potential(ft);
    int mphi = static_cast<int>(ft.multiplets.size());
    ft.multiplets.push_back({"phi", mphi + 1});
    ft.multiplets.push_back({"phi*", mphi});
    const FieldId phi = 4, phis = 5;
    ft.fields.push_back({"phi", FieldKind::scalar, make_qn(0, -1, 1, mass), phis, mphi, 0});
    ft.fields.push_back({"phi*", FieldKind::scalar, make_qn(0, 1, 1, mass), phi, mphi + 1, 0});
    // A_mu j^mu with j^mu = i (phi* d^mu phi - (d^mu phi*) phi), d^mu = g^{mu mu} d_mu
    Polynomial L;
    const CRational i = CRational::imag_unit();
    for (int mu = 0; mu < 4; ++mu) {
        MultiIndex d{0, 0, 0, 0};
        d[static_cast<std::size_t>(mu)] = 1;
        CRational c = i * CRational(metric(mu));
        L += Polynomial::ordered_product(c, {Generator{mu, {}}, Generator{phis, {}}, Generator{phi, d}}, ft);
        L += Polynomial::ordered_product(-c, {Generator{mu, {}}, Generator{phis, d}, Generator{phi, {}}}, ft);
    }
    m.vertices.push_back({L, "e"});
    return m;
}

ModelSpec scalar_model() {
    ModelSpec m;
    m.name = "scalar_model";
    m.builtin_name = "scalar_model";
    m.c_const = 1;
    FieldTable& ft = m.fields;
    ft.multiplets.push_back({"phi", 0});
    ft.multiplets.push_back({"psi", 1});
    ft.fields.push_back({"phi", FieldKind::scalar, make_qn(0, 0, 1, 0.0), 0, 0, 0});
    ft.fields.push_back({"psi", FieldKind::scalar, make_qn(0, 0, 1, 1.0), 1, 1, 0});
    SuperQuadriIndex r;
    r.add(Generator{0, {}}, 1);
    r.add(Generator{1, {}}, 2);
    m.vertices.push_back({Polynomial::monomial(CRational(Rational(1, 2)), r), "e"});
    return m;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names{"spinor_qed_massive", "spinor_qed_massless", "scalar_qed_massive",
                                                "scalar_qed_massless", "scalar_model"};
    return names;
}

ModelSpec builtin(const std::string& name) {
    if (name == "spinor_qed_massive") return spinor_qed(1.0, name);
    if (name == "spinor_qed_massless") return spinor_qed(0.0, name);
    if (name == "scalar_qed_massive") return scalar_qed(1.0, name);
    if (name == "scalar_qed_massless") return scalar_qed(0.0, name);
    if (name == "scalar_model") return scalar_model();
    throw DomainError("unknown builtin model '" + name + "'");
}

ModelSpec with_c(ModelSpec m, int c) {
    m.c_const = c;
    return m;
}

// ---------------------------------------------------------------- validation

bool contains_massive_field(const Polynomial& p, const FieldTable& ft) {
    if (p.is_zero()) return false;
    for (auto& [r, c] : p.terms()) {
        bool massive = false;
        for (auto& [g, mult] : r.entries())
            if (ft.at(g.field).qn.mass > 0) massive = true;
        if (!massive) return false;
    }
    return true;
}

ModelVerdict validate(const ModelSpec& m) {
    const FieldTable& ft = m.fields;
    for (int i = 0; i < ft.size(); ++i) {
        const FieldInfo& f = ft.at(i);
        if (f.adjoint < 0 || f.adjoint >= ft.size())
            throw DomainError("field '" + f.name + "' has dangling adjoint id " + std::to_string(f.adjoint));
        if (ft.at(f.adjoint).adjoint != i) throw DomainError("adjoint pairing of '" + f.name + "' is not an involution");
        if (f.multiplet < 0 || f.multiplet >= static_cast<int>(ft.multiplets.size()))
            throw DomainError("field '" + f.name + "' has dangling multiplet id");
    }
    for (auto& v : m.vertices)
        for (auto& [r, c] : v.poly.terms())
            for (auto& [g, mult] : r.entries()) {
                if (g.field < 0 || g.field >= ft.size())
                    throw DomainError("vertex '" + v.coupling + "' references dangling field id " +
                                      std::to_string(g.field));
                if (order(g.alpha) > 2)
                    throw DomainError("vertex '" + v.coupling + "' uses a derivative of order above 2");
            }

    ModelVerdict verdict;
    verdict.reasons.push_back("Lorentz-scalar condition on vertices not checked");
    bool all_even_fermion = true;
    bool all_dim3_massive = !m.vertices.empty();
    bool all_dim4 = !m.vertices.empty();
    bool c_matches = true;
    for (auto& v : m.vertices) {
        const std::string tag = "vertex '" + v.coupling + "': ";
        Rational dim;
        try {
            dim = canonical_dim(v.poly, ft);
        } catch (const DomainError& e) {
            verdict.reasons.push_back(tag + e.what());
            all_dim3_massive = all_dim4 = c_matches = false;
            continue;
        }
        try {
            if (fermion_number(v.poly, ft) != 0) {
                verdict.reasons.push_back(tag + "nonzero fermion number");
                all_even_fermion = false;
            }
            if (charge_number(v.poly, ft) != 0) verdict.reasons.push_back(tag + "nonzero charge number");
        } catch (const DomainError& e) {
            verdict.reasons.push_back(tag + e.what());
            all_even_fermion = false;
        }
        if (!(adjoint(v.poly, ft) == v.poly)) verdict.reasons.push_back(tag + "not self-adjoint");
        if (dim > 4) verdict.reasons.push_back(tag + "canonical dimension " + to_string(dim) + " exceeds 4");
        if (Rational(m.c_const) != 4 - dim) {
            c_matches = false;
            verdict.reasons.push_back(tag + "c = " + std::to_string(m.c_const) + " differs from 4 - dim = " +
                                      to_string(Rational(4 - dim)));
        }
        if (dim != 3 || !contains_massive_field(v.poly, ft)) all_dim3_massive = false;
        if (dim != 4) all_dim4 = false;
        if (dim == 3 && !contains_massive_field(v.poly, ft))
            verdict.reasons.push_back("wAL assumption case (1) fails: " + tag + "no massive field");
    }
    verdict.renormalizability = classify(m);
    verdict.wal_eligible = all_even_fermion && c_matches && (all_dim3_massive || all_dim4);
    if (m.vertices.empty()) verdict.reasons.push_back("free model: no vertices");
    return verdict;
}

// ---------------------------------------------------------------- text format

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    std::string out(buf, res.ptr);
    if (out.find_first_of(".e") == std::string::npos && out.find("inf") == std::string::npos) out += ".0";
    return out;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct VertexParser {
    const std::string& text;
    const FieldTable& ft;
    int line;
    int col0;  // column offset of text[0]
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col0 + static_cast<int>(pos)); }
    void skip() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool at_end() {
        skip();
        return pos >= text.size();
    }
    char peek() {
        skip();
        return pos < text.size() ? text[pos] : '\0';
    }

    int parse_int() {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) fail("expected integer");
        return std::stoi(text.substr(start, pos - start));
    }

    Generator parse_factor_head(int& power) {
        MultiIndex alpha{0, 0, 0, 0};
        skip();
        while (pos + 1 < text.size() && text[pos] == 'd' && text[pos + 1] == '[') {
            pos += 2;
            int mu = parse_int();
            if (mu < 0 || mu > 3) fail("derivative index must be 0..3");
            if (pos >= text.size() || text[pos] != ']') fail("expected ']'");
            ++pos;
            alpha[static_cast<std::size_t>(mu)] += 1;
        }
        if (pos >= text.size() || !ident_start(text[pos])) fail("expected field name");
        std::size_t start = pos;
        while (pos < text.size() && ident_char(text[pos])) ++pos;
        std::string name = text.substr(start, pos - start);
        // trailing '*' is the adjoint marker unless another factor follows directly
        if (pos < text.size() && text[pos] == '*' && ft.find(name + "*")) {
            std::size_t after = pos + 1;
            bool factor_follows = after < text.size() && (ident_start(text[after]));
            if (!factor_follows) {
                name += "*";
                ++pos;
            }
        }
        auto id = ft.find(name);
        if (!id) {
            pos = start;
            fail("unknown field name '" + name + "'");
        }
        power = 1;
        if (pos < text.size() && text[pos] == '^') {
            ++pos;
            power = parse_int();
        }
        return Generator{*id, alpha};
    }

    std::vector<Generator> parse_monomial() {
        std::vector<Generator> gens;
        while (true) {
            int power = 1;
            Generator g = parse_factor_head(power);
            for (int k = 0; k < power; ++k) gens.push_back(g);
            if (peek() == '*') {
                ++pos;
                continue;
            }
            break;
        }
        return gens;
    }

    CRational parse_coefficient_or_one(bool& have_monomial) {
        skip();
        have_monomial = true;
        char c = peek();
        CRational coef(1);
        bool numeric = std::isdigit(static_cast<unsigned char>(c)) || c == '.';
        bool bare_i = c == 'i' && (pos + 1 >= text.size() || !ident_char(text[pos + 1]));
        if (numeric) {
            std::size_t start = pos;
            while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/' ||
                                         text[pos] == '.'))
                ++pos;
            Rational r;
            try {
                r = parse_rational(text.substr(start, pos - start));
            } catch (const std::exception& e) {
                pos = start;
                fail(std::string("bad coefficient: ") + e.what());
            }
            coef = CRational(r);
            if (pos < text.size() && text[pos] == 'i' && (pos + 1 >= text.size() || !ident_char(text[pos + 1]))) {
                ++pos;
                coef = CRational(Rational(0), r);
            }
        } else if (bare_i) {
            ++pos;
            coef = CRational::imag_unit();
        } else {
            return coef;
        }
        if (peek() == '*') {
            ++pos;
        } else {
            have_monomial = false;
        }
        return coef;
    }

    Polynomial parse() {
        Polynomial p;
        bool first = true;
        while (!at_end()) {
            int sign = 1;
            char c = peek();
            if (c == '+' || c == '-') {
                sign = c == '-' ? -1 : 1;
                ++pos;
            } else if (!first) {
                fail("expected '+' or '-' between terms");
            }
            first = false;
            bool have_monomial = true;
            CRational coef = parse_coefficient_or_one(have_monomial);
            if (sign < 0) coef = -coef;
            std::vector<Generator> gens;
            if (have_monomial) gens = parse_monomial();
            p += Polynomial::ordered_product(coef, gens, ft);
        }
        return p;
    }
};

}  // namespace

ModelSpec parse_model_spec(const std::string& text) {
    ModelSpec m;
    m.name = "custom";
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    struct PendingVertex {
        std::string coupling, rhs;
        int line, col;
    };
    std::vector<PendingVertex> pending;
    std::string builtin_ref;
    bool c_set = false;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
        std::string t = trim(line);
        if (t.empty()) continue;
        int col = static_cast<int>(line.find(t.front())) + 1;
        if (t.front() == '[') {
            if (t.back() != ']') throw ParseError("unterminated section header", lineno, col);
            section = t.substr(1, t.size() - 2);
            if (section != "fields" && section != "vertices" && section != "options")
                throw ParseError("unknown section '" + section + "'", lineno, col);
            continue;
        }
        if (section.empty()) throw ParseError("content before any section header", lineno, col);
        if (section == "fields") {
            std::istringstream ls(t);
            std::string name, kind, mass_s, charge_s, fermion_s, extra;
            if (!(ls >> name >> kind >> mass_s >> charge_s >> fermion_s))
                throw ParseError("field line needs: name kind mass charge fermion", lineno, col);
            if (ls >> extra) throw ParseError("trailing token '" + extra + "'", lineno, col);
            FieldKind fk;
            try {
                fk = parse_field_kind(kind);
            } catch (const std::exception& e) {
                throw ParseError(e.what(), lineno, col);
            }
            if (fk == FieldKind::dirac || fk == FieldKind::vector)
                throw ParseError("field kind '" + kind +
                                     "' is outside the scalar-sector grammar; use a builtin model "
                                     "(spinor_qed_massive, spinor_qed_massless, scalar_qed_massive, "
                                     "scalar_qed_massless)",
                                 lineno, col);
            if (m.fields.find(name)) throw ParseError("duplicate field '" + name + "'", lineno, col);
            QuantumNumbers q;
            try {
                q.mass = std::stod(mass_s);
                q.charge = std::stoi(charge_s);
                q.fermion = std::stoi(fermion_s);
            } catch (const std::exception&) {
                throw ParseError("bad numeric column in field line", lineno, col);
            }
            if (q.mass < 0) throw ParseError("negative mass", lineno, col);
            q.dim = 1;
            q.statistics = (fk == FieldKind::ghost || (q.fermion & 1)) ? Statistics::fermi : Statistics::bose;
            int mult = static_cast<int>(m.fields.multiplets.size());
            m.fields.multiplets.push_back({name, mult});
            m.fields.fields.push_back({name, fk, q, m.fields.size(), mult, 0});
        } else if (section == "vertices") {
            auto eq = t.find('=');
            if (eq == std::string::npos) throw ParseError("vertex line needs 'coupling = expression'", lineno, col);
            std::string coupling = trim(t.substr(0, eq));
            if (coupling.empty()) throw ParseError("missing coupling name", lineno, col);
            pending.push_back({coupling, t.substr(eq + 1), lineno, col + static_cast<int>(eq) + 1});
        } else {
            auto eq = t.find('=');
            if (eq == std::string::npos) throw ParseError("option line needs 'key = value'", lineno, col);
            std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
            if (key == "c") {
                if (value != "0" && value != "1") throw ParseError("c must be 0 or 1", lineno, col);
                m.c_const = value == "1" ? 1 : 0;
                c_set = true;
            } else if (key == "builtin") {
                builtin_ref = value;
            } else if (key == "name") {
                m.name = value;
            } else {
                throw ParseError("unknown option '" + key + "'", lineno, col);
            }
        }
    }
    if (!builtin_ref.empty()) {
        if (!m.fields.fields.empty() || !pending.empty())
            throw ParseError("'builtin' option cannot be combined with fields or vertices", lineno, 1);
        int c = m.c_const;
        try {
            m = builtin(builtin_ref);
        } catch (const DomainError& e) {
            throw ParseError(e.what(), lineno, 1);
        }
        if (c_set) m.c_const = c;
        return m;
    }
    // adjoint partners: "X*" pairs with "X"
    FieldTable& ft = m.fields;
    for (int i = 0; i < ft.size(); ++i) {
        FieldInfo& f = ft.fields[static_cast<std::size_t>(i)];
        if (f.name.size() > 1 && f.name.back() == '*') {
            auto partner = ft.find(f.name.substr(0, f.name.size() - 1));
            if (!partner) throw ParseError("field '" + f.name + "' has no partner '" +
                                               f.name.substr(0, f.name.size() - 1) + "'", 0, 0);
            f.adjoint = *partner;
            ft.fields[static_cast<std::size_t>(*partner)].adjoint = i;
        }
    }
    for (auto& f : ft.fields) {
        ft.multiplets[static_cast<std::size_t>(f.multiplet)].adjoint = ft.at(f.adjoint).multiplet;
        if (f.qn.charge != 0 && ft.at(f.adjoint).name == f.name)
            throw ParseError("charged field '" + f.name + "' needs an adjoint partner '" + f.name + "*'", 0, 0);
    }
    for (auto& pv : pending) {
        VertexParser vp{pv.rhs, ft, pv.line, pv.col};
        Polynomial poly = vp.parse();
        m.vertices.push_back({poly, pv.coupling});
    }
    return m;
}

std::string serialize_model_spec(const ModelSpec& m) {
    std::ostringstream os;
    bool scalar_sector = true;
    for (auto& f : m.fields.fields)
        if (f.kind == FieldKind::dirac || f.kind == FieldKind::vector) scalar_sector = false;
    if (!scalar_sector) {
        if (m.builtin_name.empty()) throw DomainError("model outside the scalar sector has no text form");
        os << "[options]\nbuiltin = " << m.builtin_name << "\nc = " << m.c_const << "\n";
        return os.str();
    }
    os << "[fields]\n";
    for (auto& f : m.fields.fields)
        os << f.name << " " << to_string(f.kind) << " " << format_double(f.qn.mass) << " " << f.qn.charge << " "
           << f.qn.fermion << "\n";
    os << "[vertices]\n";
    for (auto& v : m.vertices) {
        os << v.coupling << " =";
        bool first = true;
        for (auto& [r, c] : v.poly.terms()) {
            auto emit = [&](const Rational& x, bool imag) {
                if (x == 0) return;
                Rational mag = x < 0 ? Rational(-x) : x;
                os << (x < 0 ? " - " : (first ? " " : " + ")) << to_string(mag) << (imag ? "i" : "");
                if (!r.empty()) os << " * " << to_string(r, m.fields);
                first = false;
            };
            emit(c.re, false);
            emit(c.im, true);
        }
        os << "\n";
    }
    os << "[options]\nc = " << m.c_const << "\n";
    return os.str();
}

ModelSpec load_model(const std::string& name_or_path) {
    for (auto& n : builtin_names())
        if (n == name_or_path) return builtin(n);
    std::ifstream in(name_or_path);
    if (!in) throw DomainError("unknown model '" + name_or_path + "' (not a builtin name or readable file)");
    std::stringstream buf;
    buf << in.rdbuf();
    ModelSpec m = parse_model_spec(buf.str());
    return m;
}

}  // namespace egq
