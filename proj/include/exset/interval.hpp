#pragma once

#include <algorithm>

#include "exset/piexpr.hpp"

namespace exset {

struct RatInterval {
    Rat lo;
    Rat hi;

    RatInterval() = default;
    RatInterval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw std::logic_error("RatInterval: lo > hi");
    }
    static RatInterval point(const Rat& v) { return {v, v}; }

    Rat width() const { return hi - lo; }
    bool contains(const Rat& v) const { return lo <= v && v <= hi; }
    bool contains_zero() const { return lo.sign() <= 0 && hi.sign() >= 0; }

    friend RatInterval operator+(const RatInterval& a, const RatInterval& b) {
        return {a.lo + b.lo, a.hi + b.hi};
    }
    friend RatInterval operator-(const RatInterval& a, const RatInterval& b) {
        return {a.lo - b.hi, a.hi - b.lo};
    }
    RatInterval scale(const Rat& s) const {
        if (s.sign() >= 0) return {lo * s, hi * s};
        return {hi * s, lo * s};
    }
    RatInterval inflate(const Rat& r) const { return {lo - r, hi + r}; }

    RatInterval intersect(const RatInterval& o) const {
        return {std::max(lo, o.lo), std::min(hi, o.hi)};
    }
    bool subset_of(const RatInterval& o) const { return o.lo <= lo && hi <= o.hi; }

    // interval of x^2
    RatInterval square() const {
        Rat a = lo * lo, b = hi * hi;
        Rat h = std::max(a, b);
        if (contains_zero()) return {Rat(0), h};
        return {std::min(a, b), h};
    }
    // power of a nonnegative interval
    RatInterval pow_nonneg(unsigned k) const {
        return {lo.pow(k), hi.pow(k)};
    }
};

struct ComplexBox {
    RatInterval re;
    RatInterval im;

    bool contains(const GaussRat& v) const { return re.contains(v.re) && im.contains(v.im); }

    // interval containing |v|^2 for all v in the box
    RatInterval abs_sq() const { return re.square() + im.square(); }

    ComplexBox inflate(const Rat& r) const { return {re.inflate(r), im.inflate(r)}; }
};

// Interval containing pi with width <= 2^-p, from the Machin identity
// pi = 16 arctan(1/5) - 4 arctan(1/239) with the alternating-series
// remainder bracket. Brackets are nested as the term count grows, so
// refinement is monotone.
inline RatInterval pi_enclosure(unsigned p) {
    Rat eps = pow2(-static_cast<long>(p)) / Rat(64);
    auto arctan_inv = [&eps](long x) {
        // arctan(1/x), bracket from partial sums of the alternating series
        Rat xsq_inv = Rat(1, x * x);
        Rat term(1, x);
        Rat sum(0);
        int sign = 1;
        unsigned k = 0;
        while (true) {
            Rat t = term / Rat(2 * static_cast<long>(k) + 1);
            if (sign > 0) sum += t; else sum -= t;
            term *= xsq_inv;
            Rat next = term / Rat(2 * static_cast<long>(k) + 3);
            if (next < eps) {
                // next term bounds the remainder, with known sign
                if (sign > 0) return RatInterval(sum - next, sum);
                return RatInterval(sum, sum + next);
            }
            sign = -sign;
            ++k;
        }
    };
    RatInterval a5 = arctan_inv(5);
    RatInterval a239 = arctan_inv(239);
    return a5.scale(Rat(16)) - a239.scale(Rat(4));
}

// Box containing the value of v for any real pi inside pi_enclosure(p).
inline ComplexBox enclose(const PiExpr& v, unsigned p) {
    RatInterval re = RatInterval::point(Rat(0));
    RatInterval im = RatInterval::point(Rat(0));
    if (v.is_zero()) return {re, im};
    RatInterval pi = pi_enclosure(p);
    RatInterval pk = RatInterval::point(Rat(1));
    for (unsigned k = 0; k < v.coeffs().size(); ++k) {
        if (k > 0) pk = pi.pow_nonneg(k);
        const GaussRat& c = v.coeff(k);
        re = re + pk.scale(c.re);
        im = im + pk.scale(c.im);
    }
    return {re, im};
}

enum class CertResult { Proved, Disproved, Undecided };

// Certified comparison |v| ? bound (bound > 0), by squared magnitudes.
inline CertResult cert_abs_lt(const PiExpr& v, const Rat& bound, unsigned p_max) {
    Rat b2 = bound * bound;
    if (v.is_pi_free()) {
        Rat n = v.as_gauss().norm();
        if (n < b2) return CertResult::Proved;
        if (n > b2) return CertResult::Disproved;
        return CertResult::Undecided;
    }
    unsigned p = std::min(8u, p_max);
    while (true) {
        RatInterval m = enclose(v, p).abs_sq();
        if (m.hi < b2) return CertResult::Proved;
        if (m.lo > b2) return CertResult::Disproved;
        if (p >= p_max) break;
        p = std::min(2 * p, p_max);
    }
    return CertResult::Undecided;
}

// Rational upper bound for |v|.
inline Rat abs_upper(const PiExpr& v, unsigned p) {
    if (v.is_zero()) return Rat(0);
    if (v.is_pi_free()) {
        GaussRat g = v.as_gauss();
        if (g.im.is_zero()) return g.re.abs();
        if (g.re.is_zero()) return g.im.abs();
    }
    return sqrt_upper(enclose(v, p).abs_sq().hi);
}

} // namespace exset
