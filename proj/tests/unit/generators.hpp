#pragma once
// Hand-rolled random generators shared by the property tests.

#include "egqft/power_counting.hpp"

#include <random>

namespace egq::testgen {

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(20240611);
    return g;
}

inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }
inline double uniform_real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline MultiIndex random_alpha(int max_order) {
    MultiIndex a{0, 0, 0, 0};
    const int n = uniform_int(0, max_order);
    for (int k = 0; k < n; ++k) ++a[static_cast<std::size_t>(uniform_int(0, 3))];
    return a;
}

inline Generator random_generator(const FieldTable& ft, int max_order) {
    return Generator{uniform_int(0, ft.size() - 1), random_alpha(max_order)};
}

inline SuperQuadriIndex random_index(const FieldTable& ft, int max_size, int max_order) {
    SuperQuadriIndex s;
    const int n = uniform_int(0, max_size);
    for (int k = 0; k < n; ++k) {
        Generator g = random_generator(ft, max_order);
        // a fermionic generator can appear at most once
        if (ft.odd(g.field) && s.multiplicity(g) > 0) continue;
        s.add(g);
    }
    return s;
}

inline Rational random_rational(int range = 5) {
    int den = uniform_int(1, range);
    return Rational(uniform_int(-range, range), den);
}

inline CRational random_coeff() {
    CRational c(random_rational(), uniform_int(0, 1) ? random_rational() : Rational(0));
    if (c.is_zero()) c = CRational(1);
    return c;
}

inline Polynomial random_monomial(const FieldTable& ft, int max_size, int max_order) {
    return Polynomial::monomial(random_coeff(), random_index(ft, max_size, max_order));
}

}  // namespace egq::testgen
