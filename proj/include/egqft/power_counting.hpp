#pragma once

#include "egqft/model_registry.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace egq {

using SList = std::vector<SuperQuadriIndex>;

SuperQuadriIndex total_index(const SList& s);
bool massless_only(const SList& s, const FieldTable& ft);

int ext(const SList& s, FieldId f);
int der(const SList& s, FieldId f);
// Summed over all components of a multiplet (ext(A) = sum over mu of ext(A_mu)).
int ext_multiplet(const SList& s, const FieldTable& ft, int multiplet);
int der_multiplet(const SList& s, const FieldTable& ft, int multiplet);

// Power-counting index; non-integer values mark a sector whose VEVs vanish.
struct Omega {
    Rational raw;
    bool vanishing_sector() const { return denominator(raw) != 1; }
    int value() const;  // throws DomainError on a vanishing sector
    bool operator==(const Omega&) const = default;
};
std::string to_string(const Omega& w);

Omega omega_general(const std::vector<Rational>& dims, int c);
// 4 - sum(4 - c - dim B_j)
Omega omega_prime(const std::vector<Rational>& dims, int c);
// 4 - sum_i [dim(A_i) ext_u(A_i) + der_u(A_i)]; requires a wAL-eligible model.
Omega omega_massless(const ModelSpec& model, const SList& u);
// Same formula from per-multiplet ext/der counts keyed by multiplet name.
Omega omega_from_counts(const ModelSpec& model, const std::map<std::string, int>& ext_counts,
                        const std::map<std::string, int>& der_counts);

Rational sd_bound(const ModelSpec& model, const std::vector<Polynomial>& polys);

Renormalizability classify(const ModelSpec& model);

enum class IrScope { underline, partial };

struct IrIndex {
    int value = 0;
    IrScope scope = IrScope::underline;
    bool constant_plus_remainder = false;  // d = 1 splitting case: constant + O(|q|^{1-eps})
    bool operator==(const IrIndex&) const = default;
};

struct PairedFieldStats {
    Rational dim;
    int ext_bar = 0;
    int der_bar = 0;
    double mass = 0.0;
};

IrIndex ir_index_product(const IrIndex& d, const IrIndex& d_prime, const std::vector<PairedFieldStats>& stats);
IrIndex ir_index_split(const IrIndex& d);

}  // namespace egq
