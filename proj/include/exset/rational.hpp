#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace exset {

struct ZeroDivisor : std::runtime_error {
    ZeroDivisor() : std::runtime_error("ZeroDivisor") {}
};

struct BadRational : std::runtime_error {
    explicit BadRational(const std::string& what) : std::runtime_error("BadRational: " + what) {}
};

// Arbitrary-precision rational, always canonical: gcd(|num|,den)=1, den>0.
class Rat {
public:
    Rat() : v_(0) {}
    Rat(long n) : v_(n) {}
    Rat(long n, long d) : v_(n, d) {
        if (d == 0) throw ZeroDivisor();
        v_.canonicalize();
    }
    explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }
    explicit Rat(const mpz_class& z) : v_(z) {}

    // Parses canonical "p/q" or plain integer "p". Rejects anything else.
    static Rat parse(const std::string& s) {
        if (s.empty()) throw BadRational("empty string");
        for (char c : s)
            if (!(c == '-' || c == '/' || (c >= '0' && c <= '9')))
                throw BadRational(s);
        auto slash = s.find('/');
        mpz_class num, den;
        try {
            if (slash == std::string::npos) {
                num = mpz_class(s);
                den = 1;
            } else {
                num = mpz_class(s.substr(0, slash));
                den = mpz_class(s.substr(slash + 1));
            }
        } catch (const std::invalid_argument&) {
            throw BadRational(s);
        }
        if (den == 0) throw BadRational(s);
        Rat r;
        r.v_ = mpq_class(num, den);
        r.v_.canonicalize();
        return r;
    }

    std::string str() const {
        if (v_.get_den() == 1) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    bool is_zero() const { return v_ == 0; }
    int sign() const { return sgn(v_); }

    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat abs() const { return Rat(mpq_class(::abs(v_))); }

    friend Rat operator+(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ + b.v_)); }
    friend Rat operator-(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ - b.v_)); }
    friend Rat operator*(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ * b.v_)); }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.is_zero()) throw ZeroDivisor();
        return Rat(mpq_class(a.v_ / b.v_));
    }

    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

    Rat pow(unsigned e) const {
        mpz_class n, d;
        mpz_pow_ui(n.get_mpz_t(), v_.get_num().get_mpz_t(), e);
        mpz_pow_ui(d.get_mpz_t(), v_.get_den().get_mpz_t(), e);
        return Rat(mpq_class(n, d));
    }

    double to_double() const { return v_.get_d(); }

    const mpq_class& raw() const { return v_; }

private:
    mpq_class v_;
};

inline Rat pow2(long e) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
    if (e >= 0) return Rat(p);
    return Rat(mpq_class(1, p));
}

inline Rat factorial(unsigned n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rat(f);
}

inline Rat binomial(unsigned n, unsigned k) {
    if (k > n) return Rat(0);
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return Rat(b);
}

// Smallest integer f with 2^f > |q| never needed; this is a plain rational
// floor used for grid rounding.
inline mpz_class floor_mpz(const Rat& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.num().get_mpz_t(), q.den().get_mpz_t());
    return f;
}

// A rational r with r*r >= q >= 0 and r not far above sqrt(q).
inline Rat sqrt_upper(const Rat& q) {
    if (q.sign() < 0) throw std::invalid_argument("sqrt_upper: negative");
    if (q.is_zero()) return Rat(0);
    // start from integer sqrt of ceil(q), then a few Newton steps from above
    mpz_class c = floor_mpz(q) + 1;
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), c.get_mpz_t());
    Rat r = Rat(mpz_class(s + 1));
    for (int i = 0; i < 8; ++i) {
        Rat next = (r + q / r) / Rat(2);
        // Newton from above stays above sqrt(q)
        if (next * next >= q) r = next; else break;
    }
    return r;
}

} // namespace exset
