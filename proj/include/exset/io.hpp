#pragma once

#include <fstream>

#include <json.hpp>

#include "exset/certify.hpp"

namespace exset {

using json = nlohmann::json;

// ---- canonical scalar syntax ----------------------------------------------

inline std::string rat_str(const Rat& r) {
    return r.num().get_str() + "/" + r.den().get_str();
}
inline Rat rat_from_json(const json& j) {
    if (!j.is_string()) throw BadRational("expected rational string");
    return Rat::parse(j.get<std::string>());
}

inline json gauss_to_json(const GaussRat& g) {
    return json::array({rat_str(g.re), rat_str(g.im)});
}
inline GaussRat gauss_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw BadRational("expected [re, im]");
    return {rat_from_json(j[0]), rat_from_json(j[1])};
}

inline json piexpr_to_json(const PiExpr& v) {
    json a = json::array();
    for (const auto& c : v.coeffs()) a.push_back(gauss_to_json(c));
    return a;
}
inline PiExpr piexpr_from_json(const json& j) {
    PiExpr v;
    for (size_t k = 0; k < j.size(); ++k)
        v = v + PiExpr::pi_power(static_cast<unsigned>(k), gauss_from_json(j[k]));
    return v;
}

inline json mpoly_to_json(const MPoly& p) {
    json terms = json::array();
    for (const auto& [e, c] : p.canonical_terms()) {
        json exps = json::array();
        for (unsigned x : e) exps.push_back(x);
        terms.push_back(json::array({exps, piexpr_to_json(c)}));
    }
    return json{{"arity", p.arity()}, {"terms", terms}};
}
inline MPoly mpoly_from_json(const json& j) {
    MPoly p(j.at("arity").get<unsigned>());
    for (const auto& t : j.at("terms")) {
        ExpVec e;
        for (const auto& x : t.at(0)) e.push_back(x.get<unsigned>());
        p.add_term(std::move(e), piexpr_from_json(t.at(1)));
    }
    return p;
}

inline json point_to_json(const Point& u) {
    json a = json::array();
    for (const auto& c : u) a.push_back(gauss_to_json(c));
    return a;
}
inline Point point_from_json(const json& j) {
    Point u;
    for (const auto& c : j) u.push_back(gauss_from_json(c));
    return u;
}

// ---- problem files --------------------------------------------------------

enum class RunMode { Prescribe, Exceptional };

struct ProblemPoint {
    Point coords;
    TargetSelector selector;  // prescribe mode
    char role = 'S';          // exceptional mode: 'S' or 'V'
};

struct ProblemFile {
    unsigned variables = 1;
    uint64_t seed = 0;
    unsigned stages = UINT32_MAX;  // default: all full-support points
    unsigned degree = 0;           // 0: finalized degree
    unsigned precision = 512;
    RunMode mode = RunMode::Prescribe;
    SelectorPolicy policy = SelectorPolicy::Seeded;
    std::vector<ProblemPoint> points;
};

inline ProblemFile parse_problem(const json& j) {
    ProblemFile f;
    f.variables = j.at("variables").get<unsigned>();
    if (f.variables == 0 || f.variables > 16)
        throw std::runtime_error("variables must be in [1,16]");
    f.seed = j.value("seed", 0ull);
    if (j.contains("stages")) f.stages = j["stages"].get<unsigned>();
    f.degree = j.value("degree", 0u);
    f.precision = j.value("precision", 512u);
    std::string mode = j.value("mode", "prescribe");
    if (mode == "prescribe") f.mode = RunMode::Prescribe;
    else if (mode == "exceptional") f.mode = RunMode::Exceptional;
    else throw std::runtime_error("unknown mode: " + mode);
    std::string policy = j.value("policy", "seeded");
    if (policy == "seeded") f.policy = SelectorPolicy::Seeded;
    else if (policy == "smallest-denominator") f.policy = SelectorPolicy::SmallestDenominator;
    else throw std::runtime_error("unknown policy: " + policy);

    for (const auto& pj : j.at("points")) {
        ProblemPoint p;
        p.coords = point_from_json(pj.at("coords"));
        if (f.mode == RunMode::Prescribe) {
            const json& t = pj.at("target");
            std::string kind = t.at("kind").get<std::string>();
            if (kind == "gaussian_k") {
                p.selector.kind = TargetKind::GaussianK;
            } else if (kind == "pi_power") {
                p.selector.kind = TargetKind::PiPowerScaled;
                p.selector.pi_power = t.at("n").get<unsigned>();
                if (p.selector.pi_power == 0)
                    throw std::runtime_error("pi_power index must be positive");
            } else if (kind == "explicit") {
                p.selector.kind = TargetKind::ExplicitValue;
                p.selector.explicit_value = piexpr_from_json(t.at("value"));
            } else {
                throw std::runtime_error("unknown target kind: " + kind);
            }
        } else {
            std::string role = pj.at("role").get<std::string>();
            if (role == "S") p.role = 'S';
            else if (role == "V") p.role = 'V';
            else throw std::runtime_error("role must be S or V");
        }
        f.points.push_back(std::move(p));
    }
    return f;
}

inline std::vector<std::string> validate(const ProblemFile& f) {
    std::vector<std::string> errors;
    std::map<Point, size_t, PointLess> seen;
    for (size_t i = 0; i < f.points.size(); ++i) {
        const auto& p = f.points[i];
        if (p.coords.size() != f.variables)
            errors.push_back("ArityMismatch: point " + std::to_string(i));
        else if (auto it = seen.find(p.coords); it != seen.end())
            errors.push_back("DuplicatePoint: points " + std::to_string(it->second) + " and " +
                             std::to_string(i));
        else
            seen[p.coords] = i;
    }
    if (!errors.empty()) return errors;

    if (f.mode == RunMode::Exceptional) {
        Point origin(f.variables, GaussRat(0));
        auto it = seen.find(origin);
        if (it == seen.end() || f.points[it->second].role != 'S')
            errors.push_back("OriginMissing: exceptional mode needs (0,...,0) in S");
        for (const auto& p : f.points) {
            auto cit = seen.find(conj_point(p.coords));
            if (cit == seen.end() || f.points[cit->second].role != p.role)
                errors.push_back("NotConjClosed: conjugate of a point is absent or in the other class");
        }
    } else {
        Point origin(f.variables, GaussRat(0));
        if (auto it = seen.find(origin); it != seen.end()) {
            const auto& sel = f.points[it->second].selector;
            if (sel.kind == TargetKind::PiPowerScaled)
                errors.push_back("OriginTargetNotInK: E at the origin must meet K");
            if (sel.kind == TargetKind::ExplicitValue &&
                (!sel.explicit_value.is_pi_free() || !sel.explicit_value.as_gauss().in_K()))
                errors.push_back("OriginTargetNotInK: explicit origin value outside K");
        }
        unsigned full_count = 0;
        for (const auto& p : f.points)
            if (point_full_support(p.coords)) ++full_count;
        if (f.stages != UINT32_MAX && f.stages > full_count)
            errors.push_back("stages exceeds the number of full-support points");
    }
    if (f.degree != 0 && f.mode == RunMode::Prescribe) {
        unsigned full_count = 0;
        for (const auto& p : f.points)
            if (point_full_support(p.coords)) ++full_count;
        unsigned n = std::min(f.stages, full_count);
        if (n > 0 && f.degree < n + f.variables - 1)
            errors.push_back("degree below the finalized degree of the run");
    }
    return errors;
}

// ---- output artifacts -----------------------------------------------------

inline json stagelog_engine_json(const ConstructionState& st) {
    json stages = json::array();
    for (const auto& rec : st.stages) {
        json hyps = json::array();
        json corr = json::array();
        for (const auto& c : rec.corrections) {
            json exps = json::array();
            for (unsigned x : c.monomial) exps.push_back(x);
            corr.push_back(json{{"monomial", exps},
                                {"delta", piexpr_to_json(c.delta)},
                                {"final_coeff", gauss_to_json(c.final_coeff)}});
        }
        stages.push_back(json{{"n", rec.n},
                              {"delta0", piexpr_to_json(rec.delta0)},
                              {"pinned_value", piexpr_to_json(rec.pinned_value)},
                              {"achieved_base", piexpr_to_json(rec.achieved_base)},
                              {"annihilator_prev", mpoly_to_json(rec.annihilator_prev)},
                              {"annihilator_cur", mpoly_to_json(rec.annihilator_cur)},
                              {"corrections", corr}});
    }
    return json{{"finalized_degree", st.finalized_degree}, {"stages", stages}};
}

inline json stagelog_bundle_json(const FunctionBundle& b) {
    json subs = json::object();
    for (const auto& [mask, sub] : b.subfunctions)
        subs[std::to_string(mask)] = stagelog_bundle_json(sub);
    return json{{"arity", b.arity},
                {"a0", gauss_to_json(b.a0)},
                {"engine", stagelog_engine_json(b.engine)},
                {"subfunctions", subs}};
}

inline json certificate_to_json(const Certificate& cert) {
    json checks = json::array();
    for (const auto& c : cert.checks)
        checks.push_back(json{{"name", c.name},
                              {"statement", c.statement},
                              {"evidence", c.evidence},
                              {"pass", c.pass}});
    return json{{"checks", checks}, {"pass", cert.all_pass()}};
}

inline void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

} // namespace exset
