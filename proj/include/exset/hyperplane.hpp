#pragma once

#include "exset/mpoly.hpp"

namespace exset {

struct DegenerateDirection : std::runtime_error {
    DegenerateDirection() : std::runtime_error("DegenerateDirection") {}
};
struct DegenerateConfiguration : std::runtime_error {
    DegenerateConfiguration() : std::runtime_error("DegenerateConfiguration") {}
};

using Point = std::vector<GaussRat>;

inline bool point_is_zero(const Point& u) {
    for (const auto& c : u)
        if (!c.is_zero()) return false;
    return true;
}

inline bool point_full_support(const Point& u) {
    for (const auto& c : u)
        if (c.is_zero()) return false;
    return true;
}

inline Point conj_point(const Point& u) {
    Point r;
    r.reserve(u.size());
    for (const auto& c : u) r.push_back(c.conj());
    return r;
}

// u on the complex line C*v? Exact cross-ratio test u_i v_k = u_k v_i.
inline bool is_complex_collinear(const Point& u, const Point& v) {
    if (point_is_zero(v)) throw DegenerateDirection();
    size_t m = u.size();
    for (size_t i = 0; i < m; ++i)
        for (size_t k = i + 1; k < m; ++k)
            if (u[i] * v[k] != u[k] * v[i]) return false;
    return true;
}

// One factor of an annihilator: the affine form mu . z - lambda.
struct Hyperplane {
    Point mu;
    GaussRat lambda;

    GaussRat form_at(const Point& z) const {
        GaussRat s(0);
        for (size_t i = 0; i < mu.size(); ++i) s = s + mu[i] * z[i];
        return s - lambda;
    }

    MPoly as_poly() const {
        unsigned m = static_cast<unsigned>(mu.size());
        MPoly p(m);
        for (unsigned i = 0; i < m; ++i) {
            if (mu[i].is_zero()) continue;
            ExpVec e(m, 0);
            e[i] = 1;
            p.add_term(std::move(e), PiExpr(mu[i]));
        }
        p.add_term(ExpVec(m, 0), PiExpr(-lambda));
        return p;
    }
};

// Hyperplane through u_j missing u_next: parallel to the complex line
// C*u_next when the three points are non-collinear, Hermitian-normal to it
// when collinear. Either way lambda != 0.
inline Hyperplane build_hyperplane(const Point& u_j, const Point& u_next) {
    size_t m = u_j.size();
    if (u_j.size() != u_next.size()) throw ArityMismatch();
    if (point_is_zero(u_j) || point_is_zero(u_next) || u_j == u_next)
        throw DegenerateConfiguration();

    if (is_complex_collinear(u_j, u_next)) {
        Point mu = conj_point(u_next);
        GaussRat lambda(0);
        for (size_t i = 0; i < m; ++i) lambda = lambda + mu[i] * u_j[i];
        // u_j = t*u_next with t != 0, so lambda = conj(t)... * |u_next|^2 != 0
        return {std::move(mu), lambda};
    }

    // mu . u_next = 0 by eliminating the first nonzero coordinate of u_next.
    size_t q = 0;
    while (u_next[q].is_zero()) ++q;
    for (size_t r = 0; r < m; ++r) {
        if (r == q) continue;
        Point mu(m, GaussRat(0));
        mu[r] = GaussRat(1);
        mu[q] = -(u_next[r] / u_next[q]);
        GaussRat lambda = u_j[r] + mu[q] * u_j[q];
        if (!lambda.is_zero()) return {std::move(mu), lambda};
    }
    // all basis solutions vanish at u_j only when u_j is collinear with u_next
    throw DegenerateConfiguration();
}

// A_n = product of one factor per point, each missing u_next.
// A_0 = z_1...z_m.
inline MPoly build_annihilator(const std::vector<Point>& points, const Point& u_next) {
    unsigned m = static_cast<unsigned>(u_next.size());
    if (points.empty()) return MPoly::coordinate_product(m);
    MPoly a = MPoly::constant(m, PiExpr(1));
    for (const auto& u : points) a = a * build_hyperplane(u, u_next).as_poly();
    return a;
}

} // namespace exset
