#pragma once

#include <cstdint>
#include <map>

#include "exset/steering.hpp"

namespace exset {

struct NotConjClosed : std::runtime_error {
    NotConjClosed() : std::runtime_error("NotConjClosed") {}
};
struct OriginMissing : std::runtime_error {
    OriginMissing() : std::runtime_error("OriginMissing") {}
};
struct OverlapSV : std::runtime_error {
    OverlapSV() : std::runtime_error("OverlapSV") {}
};
struct DuplicatePoint : std::runtime_error {
    DuplicatePoint() : std::runtime_error("DuplicatePoint") {}
};
struct NotPinned : std::runtime_error {
    NotPinned() : std::runtime_error("NotPinned") {}
};
struct OriginTargetNotInK : std::runtime_error {
    OriginTargetNotInK() : std::runtime_error("OriginTargetNotInK") {}
};

struct RatLess {
    bool operator()(const Rat& a, const Rat& b) const { return a < b; }
};
struct PointLess {
    bool operator()(const Point& a, const Point& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i].re != b[i].re) return a[i].re < b[i].re;
            if (a[i].im != b[i].im) return a[i].im < b[i].im;
        }
        return false;
    }
};

enum class PointRole { Exceptional, ForcedTranscendental, Auxiliary };

struct PointSpec {
    Point coords;
    TargetSelector selector;
    PointRole role = PointRole::Auxiliary;
};

// support mask of a point's nonzero coordinates
inline uint32_t support_mask(const Point& u) {
    uint32_t s = 0;
    for (size_t i = 0; i < u.size(); ++i)
        if (!u[i].is_zero()) s |= (1u << i);
    return s;
}

inline Point project_to_mask(const Point& u, uint32_t mask) {
    Point r = u;
    for (size_t i = 0; i < u.size(); ++i)
        if (!(mask & (1u << i))) r[i] = GaussRat(0);
    return r;
}

// coordinates of u indexed by the mask, ascending index
inline Point restrict_to_mask(const Point& u, uint32_t mask) {
    Point r;
    for (size_t i = 0; i < u.size(); ++i)
        if (mask & (1u << i)) r.push_back(u[i]);
    return r;
}

inline std::map<uint32_t, std::vector<size_t>> partition_by_support(
    const std::vector<PointSpec>& specs, unsigned m) {
    std::map<uint32_t, std::vector<size_t>> part;
    for (size_t i = 0; i < specs.size(); ++i)
        part[support_mask(specs[i].coords)].push_back(i);
    (void)m;
    return part;
}

// Adds every coordinate-zeroed copy of every point, so all Theta offsets
// stay exactly representable. Added points are auxiliary with free K
// targets. Idempotent; commutes with coordinatewise conjugation.
inline std::vector<PointSpec> projection_closure(std::vector<PointSpec> specs, unsigned m) {
    std::map<Point, bool, PointLess> seen;
    for (const auto& s : specs) {
        if (seen.count(s.coords)) throw DuplicatePoint();
        seen[s.coords] = true;
    }
    std::vector<PointSpec> added;
    for (const auto& s : specs) {
        uint32_t supp = support_mask(s.coords);
        for (uint32_t t = supp;; t = (t - 1) & supp) {
            Point p = project_to_mask(s.coords, t);
            if (!seen.count(p)) {
                seen[p] = true;
                PointSpec aux;
                aux.coords = std::move(p);
                aux.selector.kind = TargetKind::GaussianK;
                aux.role = PointRole::Auxiliary;
                added.push_back(std::move(aux));
            }
            if (t == 0) break;
        }
    }
    // make sure the origin exists even for an empty input
    Point origin(m, GaussRat(0));
    if (!seen.count(origin)) {
        PointSpec aux;
        aux.coords = origin;
        aux.selector.kind = TargetKind::GaussianK;
        added.push_back(std::move(aux));
    }
    specs.insert(specs.end(), std::make_move_iterator(added.begin()),
                 std::make_move_iterator(added.end()));
    return specs;
}

struct FunctionBundle {
    unsigned arity = 1;
    GaussRat a0;
    std::map<uint32_t, FunctionBundle> subfunctions;
    ConstructionState engine;  // full-support steering state (may have 0 stages)
    std::vector<PointSpec> specs;  // closed constraint set of this bundle
    std::map<Point, PiExpr, PointLess> pinned;         // bundle-function values
    std::map<Point, PiExpr, PointLess> achieved_base;  // chosen element of E_u
    MPoly prefix{1};  // finalized coefficients, all pi-free and in K

    PiExpr eval_exact(const Point& u) const {
        auto it = pinned.find(u);
        if (it == pinned.end()) throw NotPinned();
        return it->second;
    }
};

namespace detail {

inline GaussRat choose_a0(const TargetSelector& sel, uint64_t seed, SelectorPolicy policy) {
    switch (sel.kind) {
        case TargetKind::ExplicitValue: {
            if (!sel.explicit_value.is_pi_free()) throw OriginTargetNotInK();
            GaussRat v = sel.explicit_value.as_gauss();
            if (!v.in_K()) throw OriginTargetNotInK();
            return v;
        }
        case TargetKind::GaussianK: {
            if (policy == SelectorPolicy::SmallestDenominator) return GaussRat(1);
            uint64_t h = splitmix64(seed ^ 0xa0a0a0a0ull);
            return {Rat(1) + Rat(mpz_class(2 * (h % 65536) + 1)) * pow2(-20), Rat(0)};
        }
        case TargetKind::PiPowerScaled:
            throw OriginTargetNotInK();  // K * pi^n misses K entirely
    }
    throw std::logic_error("unreachable");
}

// embed an arity-|mask| polynomial into arity m with each mask coordinate
// exponent shifted up by one (the prod z_i factor)
inline MPoly embed_shifted(const MPoly& sub, uint32_t mask, unsigned m) {
    MPoly out(m);
    for (const auto& [e, c] : sub.terms()) {
        ExpVec full(m, 0);
        unsigned k = 0;
        for (unsigned i = 0; i < m; ++i)
            if (mask & (1u << i)) full[i] = e[k++] + 1;
        out.add_term(std::move(full), c);
    }
    return out;
}

}  // namespace detail

// Recursive construction of f = a0 + sum_S (prod z_i) f_S(z_S) + f*.
// `specs` must be projection-closed and duplicate-free; every constraint
// point ends up pinned to an exact value in its target set.
inline FunctionBundle build_bundle(unsigned m, std::vector<PointSpec> specs, uint64_t seed,
                                   SelectorPolicy policy = SelectorPolicy::Seeded,
                                   unsigned p_max = 512,
                                   unsigned stage_cap = UINT32_MAX) {
    FunctionBundle b;
    b.arity = m;
    b.specs = std::move(specs);
    auto part = partition_by_support(b.specs, m);

    // origin -> a0
    const uint32_t full = (m >= 32) ? ~0u : ((1u << m) - 1);
    auto origin_it = part.find(0);
    if (origin_it == part.end()) throw OriginMissing();
    const PointSpec& origin_spec = b.specs[origin_it->second.front()];
    const TargetSelector& osel = origin_spec.selector;
    b.a0 = detail::choose_a0(osel, seed, policy);
    b.pinned[origin_spec.coords] = PiExpr(b.a0);
    b.achieved_base[origin_spec.coords] =
        osel.shift + PiExpr(osel.scale) * PiExpr(b.a0);

    // Theta relative to this bundle: a0 + sum over built proper supports
    auto theta = [&](const Point& u, uint32_t exclude_mask) {
        PiExpr th(b.a0);
        for (const auto& [mask, sub] : b.subfunctions) {
            if (mask == exclude_mask) continue;
            GaussRat prod(1);
            bool zero = false;
            for (unsigned i = 0; i < m; ++i)
                if (mask & (1u << i)) {
                    if (u[i].is_zero()) { zero = true; break; }
                    prod = prod * u[i];
                }
            if (zero) continue;
            th = th + sub.eval_exact(restrict_to_mask(u, mask)).scalar_mul(prod);
        }
        return th;
    };

    // proper nonempty supports, by size then mask: well-founded for Theta
    std::vector<uint32_t> masks;
    for (const auto& [mask, idxs] : part)
        if (mask != 0 && mask != full) masks.push_back(mask);
    std::sort(masks.begin(), masks.end(), [](uint32_t a, uint32_t c) {
        int pa = __builtin_popcount(a), pc = __builtin_popcount(c);
        return pa != pc ? pa < pc : a < c;
    });

    for (uint32_t mask : masks) {
        unsigned k = static_cast<unsigned>(__builtin_popcount(mask));
        std::vector<PointSpec> sub_specs;
        for (size_t idx : part[mask]) {
            const PointSpec& ps = b.specs[idx];
            PiExpr th = theta(ps.coords, mask);
            GaussRat prod(1);
            for (unsigned i = 0; i < m; ++i)
                if (mask & (1u << i)) prod = prod * ps.coords[i];
            PointSpec sub;
            sub.coords = restrict_to_mask(ps.coords, mask);
            sub.selector = ps.selector;
            sub.selector.shift = ps.selector.shift + th.scalar_mul(ps.selector.scale);
            sub.selector.scale = ps.selector.scale * prod;
            sub.role = ps.role;
            sub_specs.push_back(std::move(sub));
        }
        uint64_t sub_seed = splitmix64(seed ^ (uint64_t(mask) << 8) ^ m);
        FunctionBundle sub = build_bundle(k, projection_closure(std::move(sub_specs), k),
                                          sub_seed, policy, p_max);
        // pin this bundle's values at the X_S points
        for (size_t idx : part[mask]) {
            const Point& u = b.specs[idx].coords;
            GaussRat prod(1);
            for (unsigned i = 0; i < m; ++i)
                if (mask & (1u << i)) prod = prod * u[i];
            // theta recomputation excludes the S term; sub is not yet installed
            PiExpr val = theta(u, mask) + sub.eval_exact(restrict_to_mask(u, mask)).scalar_mul(prod);
            b.pinned[u] = val;
            const TargetSelector& sel = b.specs[idx].selector;
            b.achieved_base[u] = sel.shift + val.scalar_mul(sel.scale);
        }
        b.subfunctions.emplace(mask, std::move(sub));
    }

    // full-support points: the steering engine
    std::vector<Point> pts;
    std::vector<PiExpr> offsets;
    std::vector<TargetSelector> sels;
    if (auto it = part.find(full); it != part.end() && m > 0) {
        for (size_t idx : it->second) {
            const PointSpec& ps = b.specs[idx];
            pts.push_back(ps.coords);
            offsets.push_back(theta(ps.coords, ~0u));  // exclude nothing
            sels.push_back(ps.selector);
        }
    }
    unsigned n_stages = std::min<size_t>(pts.size(), stage_cap);
    b.engine = run(m, pts, offsets, sels, splitmix64(seed ^ 0xf5f5ull), n_stages,
                   policy, p_max);
    for (unsigned j = 1; j <= n_stages; ++j) {
        const Point& u = b.engine.points[j - 1];
        PiExpr val = b.engine.pinned_value(j);
        b.pinned[u] = val;
        b.achieved_base[u] = b.engine.selectors[j - 1].shift +
                             val.scalar_mul(b.engine.selectors[j - 1].scale);
    }

    // assembled finalized prefix
    MPoly prefix = MPoly::constant(m, PiExpr(b.a0));
    for (const auto& [mask, sub] : b.subfunctions)
        prefix = prefix + detail::embed_shifted(sub.prefix, mask, m);
    prefix = prefix + b.engine.fstar.truncate_degree(b.engine.finalized_degree);
    b.prefix = std::move(prefix);
    return b;
}

struct PsiBundle {
    MPoly prefix{1};  // real rational coefficients
    std::map<Point, PiExpr, PointLess> values;  // exact psi at constraint points
};

// psi(z) = (f(z) + conj(f(conj z)))/2: real parts of the coefficients,
// values from the pinned table. Needs conjugation closure.
inline PsiBundle symmetrize(const FunctionBundle& b) {
    PsiBundle psi;
    psi.prefix = MPoly(b.arity);
    for (const auto& [e, c] : b.prefix.terms()) {
        GaussRat g = c.as_gauss();
        psi.prefix.add_term(e, PiExpr(GaussRat(g.re, Rat(0))));
    }
    for (const auto& [u, fu] : b.pinned) {
        Point uc = conj_point(u);
        auto it = b.pinned.find(uc);
        if (it == b.pinned.end()) throw NotConjClosed();
        psi.values[u] = (fu + it->second.conj()).scalar_div(GaussRat(2));
    }
    return psi;
}

struct PointVerdict {
    Point coords;
    PointRole role = PointRole::Auxiliary;
    PiExpr f_value;    // achieved f(u), element of E_u
    PiExpr psi_value;  // exact psi(u)
    bool transcendental = false;  // pi-degree of psi(u) >= 1
};

struct PipelineResult {
    FunctionBundle bundle;
    PsiBundle psi;
    std::vector<PointVerdict> report;
};

// Exceptional-set front end: S-points get exact Gaussian-rational (algebraic)
// targets, the n-th V-point gets K*pi^n; after symmetrization psi is
// rational with exceptional set (restricted to the inputs) exactly S.
inline PipelineResult exceptional_pipeline(const std::vector<Point>& s_points,
                                           const std::vector<Point>& v_points, unsigned m,
                                           uint64_t seed,
                                           SelectorPolicy policy = SelectorPolicy::Seeded,
                                           unsigned p_max = 512) {
    std::map<Point, int, PointLess> role_of;  // 0 = S, 1 = V
    for (const auto& u : s_points) {
        if (role_of.count(u)) throw DuplicatePoint();
        role_of[u] = 0;
    }
    for (const auto& u : v_points) {
        if (auto it = role_of.find(u); it != role_of.end()) {
            if (it->second == 0) throw OverlapSV();
            throw DuplicatePoint();
        }
        role_of[u] = 1;
    }
    Point origin(m, GaussRat(0));
    if (!role_of.count(origin) || role_of[origin] != 0) throw OriginMissing();
    for (const auto& [u, r] : role_of) {
        auto it = role_of.find(conj_point(u));
        if (it == role_of.end() || it->second != r) throw NotConjClosed();
    }

    std::vector<PointSpec> specs;
    for (const auto& u : s_points) {
        PointSpec ps;
        ps.coords = u;
        ps.selector.kind = TargetKind::GaussianK;
        ps.role = PointRole::Exceptional;
        specs.push_back(std::move(ps));
    }
    for (size_t n = 0; n < v_points.size(); ++n) {
        PointSpec ps;
        ps.coords = v_points[n];
        ps.selector.kind = TargetKind::PiPowerScaled;
        ps.selector.pi_power = static_cast<unsigned>(n + 1);
        ps.role = PointRole::ForcedTranscendental;
        specs.push_back(std::move(ps));
    }

    PipelineResult res;
    res.bundle = build_bundle(m, projection_closure(std::move(specs), m), seed, policy, p_max);
    res.psi = symmetrize(res.bundle);
    for (const auto& u : s_points) {
        PointVerdict v{u, PointRole::Exceptional, res.bundle.achieved_base.at(u),
                       res.psi.values.at(u), false};
        v.transcendental = v.psi_value.pi_degree() >= 1;
        res.report.push_back(std::move(v));
    }
    for (const auto& u : v_points) {
        PointVerdict v{u, PointRole::ForcedTranscendental, res.bundle.achieved_base.at(u),
                       res.psi.values.at(u), false};
        v.transcendental = v.psi_value.pi_degree() >= 1;
        res.report.push_back(std::move(v));
    }
    return res;
}

} // namespace exset
