#include "egqft/power_counting.hpp"

#include <algorithm>

namespace egq {

SuperQuadriIndex total_index(const SList& s) {
    SuperQuadriIndex t;
    for (auto& x : s) t = t + x;
    return t;
}

bool massless_only(const SList& s, const FieldTable& ft) {
    for (auto& x : s)
        for (auto& [g, m] : x.entries())
            if (ft.at(g.field).qn.mass > 0) return false;
    return true;
}

int ext(const SList& s, FieldId f) {
    int n = 0;
    for (auto& x : s)
        for (auto& [g, m] : x.entries())
            if (g.field == f) n += m;
    return n;
}

int der(const SList& s, FieldId f) {
    int n = 0;
    for (auto& x : s)
        for (auto& [g, m] : x.entries())
            if (g.field == f) n += m * order(g.alpha);
    return n;
}

int ext_multiplet(const SList& s, const FieldTable& ft, int multiplet) {
    int n = 0;
    for (FieldId f = 0; f < ft.size(); ++f)
        if (ft.at(f).multiplet == multiplet) n += ext(s, f);
    return n;
}

int der_multiplet(const SList& s, const FieldTable& ft, int multiplet) {
    int n = 0;
    for (FieldId f = 0; f < ft.size(); ++f)
        if (ft.at(f).multiplet == multiplet) n += der(s, f);
    return n;
}

int Omega::value() const {
    if (vanishing_sector())
        throw DomainError("power-counting index " + to_string(raw) + " is not an integer: vanishing sector");
    return static_cast<int>(numerator(raw));
}

std::string to_string(const Omega& w) {
    return w.vanishing_sector() ? "vanishing-sector(" + to_string(w.raw) + ")" : to_string(w.raw);
}

Omega omega_general(const std::vector<Rational>& dims, int c) {
    Rational sum = 0;
    for (auto& d : dims) sum += d + c;
    const int k = static_cast<int>(dims.size());
    return Omega{sum - 4 * (k - 1)};
}

Omega omega_prime(const std::vector<Rational>& dims, int c) {
    Rational sum = 0;
    for (auto& d : dims) sum += 4 - c - d;
    return Omega{4 - sum};
}

namespace {
void require_eligible(const ModelSpec& model) {
    ModelVerdict v = validate(model);
    if (!v.wal_eligible) {
        std::string why;
        for (auto& r : v.reasons)
            if (r.find("not checked") == std::string::npos) why += (why.empty() ? "" : "; ") + r;
        throw DomainError("model '" + model.name + "' fails the wAL eligibility assumption" +
                          (why.empty() ? std::string() : ": " + why));
    }
}
}  // namespace

Omega omega_massless(const ModelSpec& model, const SList& u) {
    require_eligible(model);
    Rational sum = 0;
    for (FieldId f = 0; f < model.fields.size(); ++f) sum += model.fields.at(f).qn.dim * ext(u, f) + der(u, f);
    return Omega{4 - sum};
}

Omega omega_from_counts(const ModelSpec& model, const std::map<std::string, int>& ext_counts,
                        const std::map<std::string, int>& der_counts) {
    require_eligible(model);
    const FieldTable& ft = model.fields;
    auto dim_of = [&](const std::string& name) -> Rational {
        auto m = ft.find_multiplet(name);
        if (!m) throw DomainError("unknown field '" + name + "' in model '" + model.name + "'");
        for (auto& f : ft.fields)
            if (f.multiplet == *m) return f.qn.dim;
        throw DomainError("empty multiplet '" + name + "'");
    };
    Rational sum = 0;
    for (auto& [name, n] : ext_counts) sum += dim_of(name) * n;
    for (auto& [name, n] : der_counts) {
        dim_of(name);
        sum += n;
    }
    return Omega{4 - sum};
}

Rational sd_bound(const ModelSpec& model, const std::vector<Polynomial>& polys) {
    Rational sum = 0;
    for (auto& p : polys) sum += canonical_dim(p, model.fields) + model.c_const;
    return sum;
}

Renormalizability classify(const ModelSpec& model) {
    bool all_strict = true;
    for (auto& v : model.vertices) {
        Rational d = canonical_dim(v.poly, model.fields) + model.c_const;
        if (d > 4) return Renormalizability::nonrenormalizable;
        if (d == 4) all_strict = false;
    }
    return all_strict ? Renormalizability::super : Renormalizability::renormalizable;
}

IrIndex ir_index_product(const IrIndex& d, const IrIndex& d_prime, const std::vector<PairedFieldStats>& stats) {
    Rational sum = 0;
    for (auto& s : stats) {
        if (s.mass > 0 && (s.ext_bar != 0 || s.der_bar != 0))
            throw DomainError("IR-index product rule needs massless paired fields; got mass " + std::to_string(s.mass));
        sum += s.dim * s.ext_bar + s.der_bar;
    }
    if (denominator(sum) != 1) throw DomainError("paired-field dimension sum is not an integer");
    IrIndex out;
    out.value = d.value + d_prime.value + static_cast<int>(numerator(sum)) - 4;
    out.scope = (d.scope == IrScope::underline && d_prime.scope == IrScope::underline) ? IrScope::underline
                                                                                      : IrScope::partial;
    return out;
}

IrIndex ir_index_split(const IrIndex& d) {
    IrIndex out;
    out.scope = d.scope;
    out.value = std::min(d.value, 0);
    out.constant_plus_remainder = d.value == 1;
    return out;
}

}  // namespace egq
