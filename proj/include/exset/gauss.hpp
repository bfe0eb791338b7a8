#pragma once

#include "exset/rational.hpp"

namespace exset {

// Element of Q(i).
struct GaussRat {
    Rat re;
    Rat im;

    GaussRat() = default;
    GaussRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
    GaussRat(long r) : re(r), im(0) {}
    GaussRat(long r, long i) : re(r), im(i) {}

    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    // membership in K = Q* + iQ
    bool in_K() const { return !re.is_zero(); }

    GaussRat conj() const { return {re, -im}; }
    GaussRat operator-() const { return {-re, -im}; }

    // |.|^2, always rational
    Rat norm() const { return re * re + im * im; }

    friend GaussRat operator+(const GaussRat& a, const GaussRat& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussRat operator-(const GaussRat& a, const GaussRat& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussRat operator/(const GaussRat& a, const GaussRat& b) {
        if (b.is_zero()) throw ZeroDivisor();
        Rat n = b.norm();
        GaussRat t = a * b.conj();
        return {t.re / n, t.im / n};
    }

    friend bool operator==(const GaussRat& a, const GaussRat& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

    GaussRat pow(unsigned e) const {
        GaussRat acc(1);
        GaussRat base = *this;
        while (e) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }
};

} // namespace exset
