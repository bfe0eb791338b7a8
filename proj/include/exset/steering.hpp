#pragma once

#include <cassert>
#include <cstdint>
#include <optional>

#include "exset/hyperplane.hpp"

namespace exset {

struct SteeringStuck : std::runtime_error {
    explicit SteeringStuck(const std::string& where)
        : std::runtime_error("SteeringStuck: " + where) {}
};

// s_d = 1 / (C(d-1, m-1) d!), the per-coefficient magnitude cap.
inline Rat s_bound(unsigned d, unsigned m) {
    return Rat(1) / (binomial(d - 1, m - 1) * factorial(d));
}

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline Rat dyadic_round(const Rat& x, unsigned g) {
    Rat scaled = x * pow2(g) + Rat(1, 2);
    return Rat(floor_mpz(scaled)) / pow2(g);
}

enum class TargetKind { GaussianK, PiPowerScaled, ExplicitValue };

enum class SelectorPolicy { SmallestDenominator, Seeded };

// Describes the admissible set for one steered value. The base set E lives
// at the top of the affine chain: an engine target t is admissible when
// shift + scale * t belongs to E.
struct TargetSelector {
    TargetKind kind = TargetKind::GaussianK;
    unsigned pi_power = 0;      // PiPowerScaled: E = K * pi^pi_power
    PiExpr explicit_value;      // ExplicitValue: E = {explicit_value}
    PiExpr shift;               // tau
    GaussRat scale = GaussRat(1);  // sigma != 0
};

struct Correction {
    ExpVec monomial;
    PiExpr delta;
    GaussRat final_coeff;
};

struct StageRecord {
    unsigned n = 0;
    PiExpr delta0;
    PiExpr pinned_value;   // t, the engine value Theta_n + f*_n(u_n)
    PiExpr achieved_base;  // shift + scale*t, the chosen element of E_u
    std::vector<Correction> corrections;
    MPoly annihilator_prev{1};
    MPoly annihilator_cur{1};
    ExpVec stage_monomial;  // multiplier of delta0 * A_{n-1}
};

struct ConstructionState {
    unsigned m = 1;
    std::vector<Point> points;
    std::vector<PiExpr> external_offsets;
    std::vector<TargetSelector> selectors;
    std::vector<StageRecord> stages;
    MPoly fstar{1};
    unsigned finalized_degree = 0;
    uint64_t seed = 0;
    SelectorPolicy policy = SelectorPolicy::Seeded;
    unsigned p_max = 512;

    PiExpr pinned_value(unsigned j) const {
        if (j == 0 || j > stages.size())
            throw std::out_of_range("pinned_value: stage not completed");
        return stages[j - 1].pinned_value;
    }
};

namespace detail {

struct Selection {
    PiExpr engine_target;  // t
    PiExpr base_value;     // y = shift + scale*t
};

inline GaussRat approx_gauss(const PiExpr& v, unsigned p, unsigned grid) {
    ComplexBox b = enclose(v, p);
    Rat re = dyadic_round((b.re.lo + b.re.hi) / Rat(2), grid);
    Rat im = dyadic_round((b.im.lo + b.im.hi) / Rat(2), grid);
    return {re, im};
}

// Pick t with shift + scale*t in E, 0 < |delta| < bound certified, where
// delta = (t - center)/coef. Dyadic offsets above the set's image of the
// center, halved per attempt; 64 attempts, then stuck.
inline Selection select_target(const TargetSelector& sel, const PiExpr& center,
                               const GaussRat& coef, const Rat& bound, uint64_t seed,
                               unsigned stage, SelectorPolicy policy, unsigned p_max) {
    auto delta_of = [&](const PiExpr& y) {
        PiExpr t = (y - sel.shift).scalar_div(sel.scale);
        return std::pair<PiExpr, PiExpr>(t, (t - center).scalar_div(coef));
    };

    if (sel.kind == TargetKind::ExplicitValue) {
        auto [t, delta] = delta_of(sel.explicit_value);
        if (delta.is_zero()) throw SteeringStuck("explicit target equals center");
        if (cert_abs_lt(delta, bound, p_max) != CertResult::Proved)
            throw SteeringStuck("explicit target outside steering radius");
        return {t, sel.explicit_value};
    }

    PiExpr image_center = sel.shift + PiExpr(sel.scale) * center;

    for (unsigned attempt = 1; attempt <= 64; ++attempt) {
        unsigned p = std::min(32 + 16 * attempt, p_max);
        Rat eps;
        if (policy == SelectorPolicy::SmallestDenominator) {
            eps = pow2(-static_cast<long>(attempt));
        } else {
            uint64_t h = splitmix64(seed ^ (uint64_t(stage) << 32) ^ attempt);
            eps = Rat(mpz_class(2 * (h % 65536) + 1)) * pow2(-static_cast<long>(attempt + 17));
        }

        PiExpr y;
        if (sel.kind == TargetKind::GaussianK) {
            GaussRat base = image_center.is_pi_free() ? image_center.as_gauss()
                                                      : approx_gauss(image_center, p, attempt + 4);
            GaussRat cand(base.re + eps, base.im);
            if (cand.re.is_zero()) cand.re = cand.re + eps;  // keep Re != 0
            y = PiExpr(cand);
        } else {  // PiPowerScaled
            RatInterval pi = pi_enclosure(p);
            Rat pi_mid = ((pi.lo + pi.hi) / Rat(2)).pow(sel.pi_power);
            ComplexBox cb = enclose(image_center, p);
            Rat qre = dyadic_round((cb.re.lo + cb.re.hi) / Rat(2) / pi_mid, attempt + 4);
            Rat qim = dyadic_round((cb.im.lo + cb.im.hi) / Rat(2) / pi_mid, attempt + 4);
            GaussRat q(qre + eps, qim);
            if (q.re.is_zero()) q.re = q.re + eps;
            y = PiExpr::pi_power(sel.pi_power, q);
        }

        auto [t, delta] = delta_of(y);
        if (delta.is_zero()) continue;
        if (cert_abs_lt(delta, bound, p) == CertResult::Proved) return {t, y};
    }
    throw SteeringStuck("no admissible target after 64 attempts");
}

// A coefficient value in K: nonzero, Re != 0, certified |k| < cap.
// Reuses c_old when it already qualifies (zero correction).
inline GaussRat select_coefficient(const PiExpr& c_old, const Rat& cap, unsigned p_max) {
    Rat cap2 = cap * cap;
    if (c_old.is_pi_free()) {
        GaussRat g = c_old.as_gauss();
        if (g.in_K() && g.norm() < cap2) return g;
    }
    for (unsigned attempt = 2; attempt <= 64; ++attempt) {
        unsigned p = std::min(32 + 16 * attempt, p_max);
        GaussRat k = approx_gauss(c_old, p, attempt + 2);
        while (!k.is_zero() && k.norm() >= cap2)
            k = GaussRat(k.re / Rat(2), k.im / Rat(2));
        if (k.re.is_zero()) k.re = cap * pow2(-static_cast<long>(attempt + 1));
        if (k.norm() < cap2 && k.in_K()) return k;
    }
    throw SteeringStuck("no admissible coefficient after 64 attempts");
}

inline Point synthetic_witness(const std::vector<Point>& points, unsigned m) {
    for (long w = 2;; ++w) {
        Point cand(m, GaussRat(1));
        cand[0] = GaussRat(Rat(w), Rat(0));
        bool clash = false;
        for (const auto& u : points)
            if (u == cand) { clash = true; break; }
        if (!clash) return cand;
    }
}

inline ExpVec stage_monomial(unsigned n, unsigned m) {
    if (n == 1) return ExpVec(m, 0);  // stage 1 adds delta * A_0 directly
    ExpVec e(m, 1);
    e[0] = n;
    return e;
}

}  // namespace detail

// One steering step: pick delta_{n,0} so Theta_n + f*_{n,0}(u_n) lands in
// the point's target set, inside the s-bound ball.
inline void stage_advance(ConstructionState& st, unsigned n) {
    const unsigned m = st.m;
    if (n != st.stages.size() + 1) throw std::logic_error("stage_advance: out of order");
    if (n > st.points.size()) throw std::out_of_range("stage_advance: no such point");
    const Point& u = st.points[n - 1];
    if (!point_full_support(u))
        throw DegenerateConfiguration();

    std::vector<Point> prev(st.points.begin(), st.points.begin() + (n - 1));
    MPoly a_prev = build_annihilator(prev, u);
    GaussRat a_at_u = a_prev.eval(u).as_gauss();
    assert(!a_at_u.is_zero());

    ExpVec mono = detail::stage_monomial(n, m);
    GaussRat mono_at_u(1);
    for (unsigned i = 0; i < m; ++i)
        if (mono[i]) mono_at_u = mono_at_u * u[i].pow(mono[i]);
    GaussRat coef = mono_at_u * a_at_u;
    assert(!coef.is_zero());

    unsigned d = n + m - 1;
    Rat bound = s_bound(d, m) / Rat(static_cast<long>(d));

    PiExpr center = st.external_offsets[n - 1] + st.fstar.eval(u);
    detail::Selection pick = detail::select_target(st.selectors[n - 1], center, coef, bound,
                                                   st.seed, n, st.policy, st.p_max);
    PiExpr delta0 = (pick.engine_target - center).scalar_div(coef);
    assert(!delta0.is_zero());

    st.fstar = st.fstar + (MPoly::monomial(mono, PiExpr(1)) * a_prev).scalar_mul(delta0);

    StageRecord rec;
    rec.n = n;
    rec.delta0 = delta0;
    rec.pinned_value = pick.engine_target;
    rec.achieved_base = pick.base_value;
    rec.annihilator_prev = a_prev;
    rec.annihilator_cur = MPoly::zero(m);
    rec.stage_monomial = mono;
    st.stages.push_back(std::move(rec));
}

// Lex-ordered corrections pushing every degree n+m-1 coefficient into K
// under s_{n+m-1}; pinned values are untouched since A_n kills u_1..u_n.
inline void finalize_degree(ConstructionState& st, unsigned n) {
    const unsigned m = st.m;
    if (n != st.stages.size()) throw std::logic_error("finalize_degree: stage missing");
    StageRecord& rec = st.stages[n - 1];

    std::vector<Point> used(st.points.begin(), st.points.begin() + n);
    Point witness = (n < st.points.size()) ? st.points[n]
                                           : detail::synthetic_witness(st.points, m);
    MPoly a_cur = build_annihilator(used, witness);
    GaussRat a0 = a_cur.coeff(ExpVec(m, 0)).as_gauss();
    assert(!a0.is_zero());

    unsigned d = n + m - 1;
    Rat cap = s_bound(d, m);
    for (const ExpVec& e : lex_monomials(d, m)) {
        PiExpr c_old = st.fstar.coeff(e);
        GaussRat k = detail::select_coefficient(c_old, cap, st.p_max);
        PiExpr delta = (PiExpr(k) - c_old).scalar_div(a0);
        if (!delta.is_zero())
            st.fstar = st.fstar + (MPoly::monomial(e, PiExpr(1)) * a_cur).scalar_mul(delta);
        rec.corrections.push_back({e, delta, k});
    }
    rec.annihilator_cur = a_cur;
    st.finalized_degree = d;
}

// Full staged run. Deterministic in (inputs, seed).
inline ConstructionState run(unsigned m, std::vector<Point> points,
                             std::vector<PiExpr> offsets,
                             std::vector<TargetSelector> selectors, uint64_t seed,
                             unsigned n_stages,
                             SelectorPolicy policy = SelectorPolicy::Seeded,
                             unsigned p_max = 512) {
    if (n_stages > points.size())
        throw std::invalid_argument("run: more stages than points");
    if (offsets.size() != points.size() || selectors.size() != points.size())
        throw std::invalid_argument("run: inputs out of step");
    for (size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != m) throw ArityMismatch();
        if (!point_full_support(points[i])) throw DegenerateConfiguration();
        for (size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j]) throw DegenerateConfiguration();
    }

    ConstructionState st;
    st.m = m;
    st.points = std::move(points);
    st.external_offsets = std::move(offsets);
    st.selectors = std::move(selectors);
    st.fstar = MPoly::zero(m);
    st.finalized_degree = m - 1;
    st.seed = seed;
    st.policy = policy;
    st.p_max = p_max;

    for (unsigned n = 1; n <= n_stages; ++n) {
        stage_advance(st, n);
        finalize_degree(st, n);
    }
    return st;
}

} // namespace exset
