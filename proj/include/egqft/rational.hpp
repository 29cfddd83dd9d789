#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <string>

namespace egq {

using Rational = boost::multiprecision::cpp_rational;

// Exact complex number with rational parts.
struct CRational {
    Rational re{0};
    Rational im{0};

    CRational() = default;
    CRational(Rational r) : re(std::move(r)) {}
    CRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    CRational(int r) : re(r) {}

    static CRational imag_unit() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    CRational conj() const { return {re, -im}; }

    CRational operator-() const { return {-re, -im}; }
    CRational& operator+=(const CRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    CRational& operator-=(const CRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    CRational& operator*=(const CRational& o) {
        Rational r = re * o.re - im * o.im;
        Rational i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    CRational& operator/=(const CRational& o) {
        Rational den = o.re * o.re + o.im * o.im;
        if (den == 0) throw std::domain_error("division by zero");
        Rational r = (re * o.re + im * o.im) / den;
        Rational i = (im * o.re - re * o.im) / den;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    friend CRational operator+(CRational a, const CRational& b) { return a += b; }
    friend CRational operator-(CRational a, const CRational& b) { return a -= b; }
    friend CRational operator*(CRational a, const CRational& b) { return a *= b; }
    friend CRational operator/(CRational a, const CRational& b) { return a /= b; }
    friend bool operator==(const CRational& a, const CRational& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const CRational& a, const CRational& b) { return !(a == b); }

    std::complex<double> to_complex() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }
};

std::string to_string(const Rational& r);
std::string to_string(const CRational& c);
Rational parse_rational(const std::string& text);
Rational factorial(int n);

}  // namespace egq
