#pragma once

#include <map>
#include <numeric>
#include <vector>

#include "exset/interval.hpp"

namespace exset {

using ExpVec = std::vector<unsigned>;

inline unsigned degree_of(const ExpVec& e) {
    return std::accumulate(e.begin(), e.end(), 0u);
}

inline bool full_support(const ExpVec& e) {
    for (unsigned x : e)
        if (x == 0) return false;
    return true;
}

struct ArityMismatch : std::runtime_error {
    ArityMismatch() : std::runtime_error("ArityMismatch") {}
};

// All full-support exponent vectors of degree d in m variables, in
// descending lexicographic order. Empty when d < m.
inline std::vector<ExpVec> lex_monomials(unsigned d, unsigned m) {
    std::vector<ExpVec> out;
    if (m == 0 || d < m) return out;
    ExpVec cur(m);
    auto rec = [&](auto&& self, unsigned pos, unsigned rem) -> void {
        if (pos + 1 == m) {
            cur[pos] = rem;
            out.push_back(cur);
            return;
        }
        unsigned tail = m - pos - 1;  // each remaining slot needs >= 1
        for (unsigned e = rem - tail; e >= 1; --e) {
            cur[pos] = e;
            self(self, pos + 1, rem - e);
        }
    };
    rec(rec, 0, d);
    return out;
}

// Sparse multivariate polynomial over Q(i)[pi].
class MPoly {
public:
    explicit MPoly(unsigned arity) : m_(arity) {}

    static MPoly zero(unsigned arity) { return MPoly(arity); }
    static MPoly constant(unsigned arity, PiExpr c) {
        MPoly p(arity);
        p.add_term(ExpVec(arity, 0), std::move(c));
        return p;
    }
    // z_1 ... z_m
    static MPoly coordinate_product(unsigned arity) {
        MPoly p(arity);
        p.add_term(ExpVec(arity, 1), PiExpr(1));
        return p;
    }
    static MPoly monomial(ExpVec e, PiExpr c) {
        MPoly p(static_cast<unsigned>(e.size()));
        p.add_term(std::move(e), std::move(c));
        return p;
    }

    unsigned arity() const { return m_; }
    const std::map<ExpVec, PiExpr>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    unsigned degree() const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, degree_of(e));
        return d;
    }

    const PiExpr& coeff(const ExpVec& e) const {
        static const PiExpr z;
        auto it = terms_.find(e);
        return it == terms_.end() ? z : it->second;
    }

    void add_term(ExpVec e, PiExpr c) {
        if (e.size() != m_) throw ArityMismatch();
        if (c.is_zero()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(std::move(e), std::move(c));
            return;
        }
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    friend MPoly operator+(const MPoly& a, const MPoly& b) {
        if (a.m_ != b.m_) throw ArityMismatch();
        MPoly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }
    friend MPoly operator-(const MPoly& a, const MPoly& b) {
        return a + b.scalar_mul(PiExpr(-1));
    }
    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        if (a.m_ != b.m_) throw ArityMismatch();
        MPoly r(a.m_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                ExpVec e(a.m_);
                for (unsigned i = 0; i < a.m_; ++i) e[i] = ea[i] + eb[i];
                r.add_term(std::move(e), ca * cb);
            }
        return r;
    }

    MPoly scalar_mul(const PiExpr& s) const {
        MPoly r(m_);
        if (s.is_zero()) return r;
        for (const auto& [e, c] : terms_) r.add_term(e, c * s);
        return r;
    }

    PiExpr eval(const std::vector<GaussRat>& point) const {
        if (point.size() != m_) throw ArityMismatch();
        PiExpr acc;
        for (const auto& [e, c] : terms_) {
            GaussRat mono(1);
            for (unsigned i = 0; i < m_; ++i)
                if (e[i]) mono = mono * point[i].pow(e[i]);
            acc = acc + c.scalar_mul(mono);
        }
        return acc;
    }

    MPoly homogeneous_layer(unsigned d) const {
        MPoly r(m_);
        for (const auto& [e, c] : terms_)
            if (degree_of(e) == d) r.add_term(e, c);
        return r;
    }

    MPoly truncate_degree(unsigned d) const {
        MPoly r(m_);
        for (const auto& [e, c] : terms_)
            if (degree_of(e) <= d) r.add_term(e, c);
        return r;
    }

    bool full_support_only() const {
        for (const auto& [e, c] : terms_)
            if (!full_support(e)) return false;
        return true;
    }

    // rational upper bound on the length sum of |coefficients|
    Rat length_upper(unsigned precision) const {
        Rat s(0);
        for (const auto& [e, c] : terms_) s += abs_upper(c, precision);
        return s;
    }

    friend bool operator==(const MPoly& a, const MPoly& b) {
        return a.m_ == b.m_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

    // canonical term order for files: degree ascending, lex descending inside
    std::vector<std::pair<ExpVec, PiExpr>> canonical_terms() const {
        std::vector<std::pair<ExpVec, PiExpr>> v(terms_.begin(), terms_.end());
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
            unsigned da = degree_of(a.first), db = degree_of(b.first);
            if (da != db) return da < db;
            return a.first > b.first;
        });
        return v;
    }

private:
    unsigned m_;
    std::map<ExpVec, PiExpr> terms_;
};

} // namespace exset
