#pragma once

#include <sstream>

#include "exset/bundle.hpp"

namespace exset {

enum class Verdict { Algebraic, Transcendental };

// Structural and exact: a nonzero polynomial in pi of degree >= 1 with
// algebraic coefficients cannot be algebraic.
inline Verdict transcendence_verdict(const PiExpr& v) {
    return v.pi_degree() >= 1 ? Verdict::Transcendental : Verdict::Algebraic;
}

struct Check {
    std::string name;
    std::string statement;
    std::string evidence;  // "exact equality" | "interval bound" | "structural scan"
    bool pass = true;
};

struct Certificate {
    std::vector<Check> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    void add(std::string name, std::string statement, std::string evidence, bool pass) {
        checks.push_back({std::move(name), std::move(statement), std::move(evidence), pass});
    }
};

// Rational upper bound for sum_{n>D} max(1,R)^n / n!, the layerwise tail of
// the construction under the s-bounds. Extends D internally until the
// geometric domination ratio max(1,R)/(D+2) drops below one.
inline Rat tail_bound(unsigned D, const Rat& R) {
    Rat M = std::max(Rat(1), R);
    Rat extra(0);
    unsigned d = D;
    while (!(M < Rat(static_cast<long>(d) + 2))) {
        extra += M.pow(d + 1) / factorial(d + 1);
        ++d;
    }
    Rat geo = (M.pow(d + 1) / factorial(d + 1)) / (Rat(1) - M / Rat(static_cast<long>(d) + 2));
    return extra + geo;
}

// Tail of the whole bundle: the engine tail plus every subfunction tail,
// each scaled by its coordinate-product factor.
inline Rat bundle_tail(const FunctionBundle& b, const Rat& R);

// Box for the completed limit function at z, assuming every layer beyond
// the finalized degree is (eventually) corrected under its s-bound: exact
// prefix evaluation inflated by the certified tail of the steering engine.
// Not a bound on the finite run's value at steered points, whose
// not-yet-finalized layers are unconstrained.
inline ComplexBox certified_eval(const FunctionBundle& b, const Point& z, unsigned precision) {
    PiExpr prefix_val = b.prefix.eval(z);
    Rat norm_inf(0);
    for (const auto& c : z) norm_inf = std::max(norm_inf, sqrt_upper(c.norm()));
    Rat tail = tail_bound(b.engine.finalized_degree, norm_inf);
    return enclose(prefix_val, precision).inflate(tail);
}

// Variant inflated by the full component-summed tail, covering the
// subfunction series as well as the top-level engine.
inline ComplexBox certified_eval_bundle_tail(const FunctionBundle& b, const Point& z,
                                             unsigned precision) {
    PiExpr prefix_val = b.prefix.eval(z);
    Rat norm_inf(0);
    for (const auto& c : z) norm_inf = std::max(norm_inf, sqrt_upper(c.norm()));
    return enclose(prefix_val, precision).inflate(bundle_tail(b, norm_inf));
}

inline Rat bundle_tail(const FunctionBundle& b, const Rat& R) {
    Rat M = std::max(Rat(1), R);
    Rat t = tail_bound(b.engine.finalized_degree, R);
    for (const auto& [mask, sub] : b.subfunctions)
        t += M.pow(static_cast<unsigned>(__builtin_popcount(mask))) * bundle_tail(sub, R);
    return t;
}

namespace detail {

inline std::string stage_tag(unsigned level_mask, unsigned n) {
    std::ostringstream os;
    os << "engine[" << level_mask << "].stage" << n;
    return os.str();
}

// From-scratch re-expansion of f* out of the recorded deltas and
// annihilators; must match the incrementally built polynomial bitwise.
inline MPoly reexpand_fstar(const ConstructionState& st) {
    MPoly acc = MPoly::zero(st.m);
    for (const StageRecord& rec : st.stages) {
        acc = acc + (MPoly::monomial(rec.stage_monomial, PiExpr(1)) * rec.annihilator_prev)
                        .scalar_mul(rec.delta0);
        for (const Correction& c : rec.corrections) {
            if (c.delta.is_zero()) continue;
            acc = acc + (MPoly::monomial(c.monomial, PiExpr(1)) * rec.annihilator_cur)
                            .scalar_mul(c.delta);
        }
    }
    return acc;
}

inline void check_engine(const ConstructionState& st, unsigned label, Certificate& cert) {
    const unsigned m = st.m;
    Point origin(m, GaussRat(0));

    for (const StageRecord& rec : st.stages) {
        unsigned n = rec.n;
        std::string tag = stage_tag(label, n);

        bool ann_ok = true;
        for (unsigned j = 1; j < n; ++j)
            if (!rec.annihilator_prev.eval(st.points[j - 1]).is_zero()) ann_ok = false;
        if (rec.annihilator_prev.eval(st.points[n - 1]).is_zero()) ann_ok = false;
        // the stage-1 product is z_1...z_m, which vanishes at 0 by design;
        // every later A_n is a product of affine forms and must not
        if (rec.annihilator_prev.eval(origin).is_zero() != (n == 1)) ann_ok = false;
        for (unsigned j = 1; j <= n; ++j)
            if (!rec.annihilator_cur.eval(st.points[j - 1]).is_zero()) ann_ok = false;
        if (rec.annihilator_cur.eval(origin).is_zero()) ann_ok = false;
        cert.add(tag + ".annihilator", "A vanishes on used points, not at 0 or the next point",
                 "exact equality", ann_ok);

        unsigned d = n + m - 1;
        Rat db = s_bound(d, m) / Rat(static_cast<long>(d));
        bool delta_ok = !rec.delta0.is_zero() &&
                        cert_abs_lt(rec.delta0, db, st.p_max) == CertResult::Proved;
        cert.add(tag + ".delta0", "0 < |delta_{n,0}| < s_{n+m-1}/(n+m-1)", "interval bound",
                 delta_ok);

        Rat cap = s_bound(d, m);
        Rat lcount = binomial(d - 1, m - 1);
        bool corr_ok = Rat(static_cast<long>(rec.corrections.size())) == lcount;
        for (const Correction& c : rec.corrections) {
            const GaussRat& k = c.final_coeff;
            if (!k.in_K() || k.is_zero() || !(k.norm() < cap * cap)) corr_ok = false;
            PiExpr stored = st.fstar.coeff(c.monomial);
            if (!stored.is_pi_free() || stored.as_gauss() != k) corr_ok = false;
        }
        cert.add(tag + ".coefficients", "finalized layer in K under the s-bound",
                 "exact equality", corr_ok);

        PiExpr at_u = st.external_offsets[n - 1] + st.fstar.eval(st.points[n - 1]);
        cert.add(tag + ".pinned", "Theta_n + f*(u_n) equals the recorded target",
                 "exact equality", at_u == rec.pinned_value);

        const TargetSelector& sel = st.selectors[n - 1];
        PiExpr base = sel.shift + rec.pinned_value.scalar_mul(sel.scale);
        bool member = false;
        switch (sel.kind) {
            case TargetKind::GaussianK:
                member = base.is_pi_free() && base.as_gauss().in_K();
                break;
            case TargetKind::PiPowerScaled: {
                member = base.pi_degree() == static_cast<int>(sel.pi_power) &&
                         base.coeff(sel.pi_power).in_K();
                for (unsigned k = 0; k < sel.pi_power; ++k)
                    if (!base.coeff(k).is_zero()) member = false;
                break;
            }
            case TargetKind::ExplicitValue:
                member = base == sel.explicit_value;
                break;
        }
        cert.add(tag + ".membership", "achieved value lies in the target set (by kind)",
                 "structural scan", member);
    }

    std::ostringstream lbl;
    lbl << "engine[" << label << "]";
    cert.add(lbl.str() + ".full_support", "f* has only full-support monomials",
             "structural scan", st.fstar.full_support_only());
    cert.add(lbl.str() + ".oracle", "independent re-expansion of the stage log matches f*",
             "exact equality", reexpand_fstar(st) == st.fstar);
}

inline void check_bundle(const FunctionBundle& b, unsigned label, Certificate& cert) {
    check_engine(b.engine, label, cert);

    bool prefix_ok = true;
    for (const auto& [e, c] : b.prefix.terms()) {
        if (!c.is_pi_free()) { prefix_ok = false; break; }
        GaussRat g = c.as_gauss();
        unsigned d = degree_of(e);
        if (d == 0) {
            if (!g.in_K()) prefix_ok = false;
        } else if (!g.in_K() || g.is_zero()) {
            prefix_ok = false;
        }
    }
    std::ostringstream lbl;
    lbl << "bundle[" << label << "]";
    cert.add(lbl.str() + ".prefix", "all finalized prefix coefficients are pi-free and in K",
             "structural scan", prefix_ok);

    // support decomposition: the prefix restricted to each support class
    // equals the embedded subfunction prefix
    bool decomp_ok = true;
    const uint32_t full = (b.arity >= 32) ? ~0u : ((1u << b.arity) - 1);
    for (const auto& [e, c] : b.prefix.terms()) {
        uint32_t supp = 0;
        for (unsigned i = 0; i < b.arity; ++i)
            if (e[i]) supp |= (1u << i);
        if (supp == 0) {
            if (c.as_gauss() != b.a0) decomp_ok = false;
        } else if (supp == full) {
            if (c != b.engine.fstar.coeff(e)) decomp_ok = false;
        } else {
            auto it = b.subfunctions.find(supp);
            if (it == b.subfunctions.end()) { decomp_ok = false; continue; }
            ExpVec sub_e;
            for (unsigned i = 0; i < b.arity; ++i)
                if (supp & (1u << i)) sub_e.push_back(e[i] - 1);
            if (c != it->second.prefix.coeff(sub_e)) decomp_ok = false;
        }
    }
    cert.add(lbl.str() + ".decomposition",
             "each support class of the prefix comes solely from its component",
             "structural scan", decomp_ok);

    // every pinned value re-derives exactly from a0, the component
    // functions, and the engine polynomial
    bool pin_ok = true;
    for (const auto& [u, v] : b.pinned) {
        PiExpr val{PiExpr(b.a0)};
        for (const auto& [mask, sub] : b.subfunctions) {
            GaussRat prod(1);
            bool dead = false;
            for (unsigned i = 0; i < b.arity; ++i)
                if (mask & (1u << i)) {
                    if (u[i].is_zero()) { dead = true; break; }
                    prod = prod * u[i];
                }
            if (dead) continue;
            try {
                val = val + sub.eval_exact(restrict_to_mask(u, mask)).scalar_mul(prod);
            } catch (const NotPinned&) {
                pin_ok = false;
            }
        }
        val = val + b.engine.fstar.eval(u);
        if (val != v) pin_ok = false;
    }
    cert.add(lbl.str() + ".pinned",
             "pinned values equal a0 + component sum + f* exactly", "exact equality", pin_ok);

    unsigned sub_label = label * 37 + 1;
    for (const auto& [mask, sub] : b.subfunctions)
        check_bundle(sub, sub_label + mask, cert);
}

}  // namespace detail

inline Certificate check_all(const ConstructionState& st) {
    Certificate cert;
    detail::check_engine(st, 0, cert);
    return cert;
}

inline Certificate check_all(const FunctionBundle& b) {
    Certificate cert;
    detail::check_bundle(b, 0, cert);
    return cert;
}

} // namespace exset
