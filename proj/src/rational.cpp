#include "egqft/rational.hpp"

#include <stdexcept>

namespace egq {

std::string to_string(const Rational& r) {
    return r.str();
}

std::string to_string(const CRational& c) {
    if (c.im == 0) return to_string(c.re);
    std::string imag;
    if (c.im == 1)
        imag = "i";
    else if (c.im == -1)
        imag = "-i";
    else
        imag = to_string(c.im) + "i";
    if (c.re == 0) return imag;
    std::string out = "(" + to_string(c.re);
    if (imag[0] != '-') out += "+";
    return out + imag + ")";
}

Rational parse_rational(const std::string& text) {
    std::string t;
    for (char ch : text)
        if (ch != ' ' && ch != '\t') t += ch;
    if (t.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = t.find('/');
    auto to_int = [](const std::string& s) -> boost::multiprecision::cpp_int {
        if (s.empty() || s == "-" || s == "+") throw std::invalid_argument("bad integer '" + s + "'");
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad integer '" + s + "'");
        boost::multiprecision::cpp_int v(s[0] == '+' ? s.substr(1) : s);
        return v;
    };
    if (slash == std::string::npos) {
        auto dot = t.find('.');
        if (dot == std::string::npos) return Rational(to_int(t));
        // decimal literal such as 0.5
        std::string whole = t.substr(0, dot);
        std::string frac = t.substr(dot + 1);
        bool neg = !whole.empty() && whole[0] == '-';
        if (whole.empty() || whole == "-" || whole == "+") whole += "0";
        boost::multiprecision::cpp_int den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        Rational mag = Rational(to_int(neg ? whole.substr(1) : whole)) +
                       (frac.empty() ? Rational(0) : Rational(to_int(frac), den));
        return neg ? Rational(-mag) : mag;
    }
    auto num = to_int(t.substr(0, slash));
    auto den = to_int(t.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
}

Rational factorial(int n) {
    Rational r = 1;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

}  // namespace egq
