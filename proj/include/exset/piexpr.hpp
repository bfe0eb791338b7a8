#pragma once

#include <vector>

#include "exset/gauss.hpp"

namespace exset {

// Element of the ring Q(i)[pi], pi a formal (real) symbol.
// coeffs[k] is the coefficient of pi^k; no trailing zero entry.
class PiExpr {
public:
    PiExpr() = default;
    PiExpr(GaussRat c) {
        if (!c.is_zero()) coeffs_.push_back(std::move(c));
    }
    PiExpr(long n) : PiExpr(GaussRat(n)) {}

    static PiExpr pi_power(unsigned k, GaussRat c = GaussRat(1)) {
        PiExpr e;
        if (c.is_zero()) return e;
        e.coeffs_.resize(k + 1);
        e.coeffs_[k] = std::move(c);
        return e;
    }

    bool is_zero() const { return coeffs_.empty(); }

    // highest pi power with nonzero coefficient; -1 for the zero element
    int pi_degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    bool is_pi_free() const { return pi_degree() <= 0; }

    // requires pi_degree() <= 0
    GaussRat as_gauss() const {
        if (coeffs_.empty()) return GaussRat();
        if (coeffs_.size() > 1) throw std::logic_error("PiExpr::as_gauss: pi-laden value");
        return coeffs_[0];
    }

    const GaussRat& coeff(unsigned k) const {
        static const GaussRat zero;
        return k < coeffs_.size() ? coeffs_[k] : zero;
    }
    const std::vector<GaussRat>& coeffs() const { return coeffs_; }

    PiExpr conj() const {
        PiExpr r;
        r.coeffs_.reserve(coeffs_.size());
        for (const auto& c : coeffs_) r.coeffs_.push_back(c.conj());
        return r;  // leading coeff stays nonzero under conjugation
    }

    PiExpr operator-() const {
        PiExpr r;
        r.coeffs_.reserve(coeffs_.size());
        for (const auto& c : coeffs_) r.coeffs_.push_back(-c);
        return r;
    }

    friend PiExpr operator+(const PiExpr& a, const PiExpr& b) {
        PiExpr r;
        size_t n = std::max(a.coeffs_.size(), b.coeffs_.size());
        r.coeffs_.resize(n);
        for (size_t k = 0; k < n; ++k) r.coeffs_[k] = a.coeff(k) + b.coeff(k);
        r.trim();
        return r;
    }
    friend PiExpr operator-(const PiExpr& a, const PiExpr& b) { return a + (-b); }
    friend PiExpr operator*(const PiExpr& a, const PiExpr& b) {
        PiExpr r;
        if (a.is_zero() || b.is_zero()) return r;
        r.coeffs_.resize(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (size_t i = 0; i < a.coeffs_.size(); ++i)
            for (size_t j = 0; j < b.coeffs_.size(); ++j)
                r.coeffs_[i + j] = r.coeffs_[i + j] + a.coeffs_[i] * b.coeffs_[j];
        r.trim();
        return r;
    }

    PiExpr scalar_mul(const GaussRat& s) const {
        PiExpr r;
        if (s.is_zero()) return r;
        r.coeffs_.reserve(coeffs_.size());
        for (const auto& c : coeffs_) r.coeffs_.push_back(c * s);
        r.trim();
        return r;
    }
    PiExpr scalar_div(const GaussRat& s) const {
        if (s.is_zero()) throw ZeroDivisor();
        PiExpr r;
        r.coeffs_.reserve(coeffs_.size());
        for (const auto& c : coeffs_) r.coeffs_.push_back(c / s);
        return r;  // division by a unit cannot create trailing zeros
    }

    friend bool operator==(const PiExpr& a, const PiExpr& b) { return a.coeffs_ == b.coeffs_; }
    friend bool operator!=(const PiExpr& a, const PiExpr& b) { return !(a == b); }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    std::vector<GaussRat> coeffs_;
};

} // namespace exset
