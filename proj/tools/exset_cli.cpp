// Command-line front end: reads a problem file, runs the staged
// construction, writes the series / stage log / report artifacts, and
// optionally the verification certificate and the symmetrized function.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "exset/io.hpp"

using namespace exset;

namespace {

json point_report(const FunctionBundle& b) {
    json out = json::array();
    for (const auto& [u, v] : b.pinned) {
        json entry{{"coords", point_to_json(u)},
                   {"value", piexpr_to_json(v)},
                   {"base_value", piexpr_to_json(b.achieved_base.at(u))},
                   {"verdict", transcendence_verdict(v) == Verdict::Transcendental
                                   ? "transcendental"
                                   : "algebraic"}};
        out.push_back(std::move(entry));
    }
    return out;
}

// finalized prefix plus the not-yet-finalized full-support terms up to d
MPoly partial_sum(const FunctionBundle& b, unsigned d) {
    MPoly p = b.prefix;
    if (d > b.engine.finalized_degree)
        p = p + b.engine.fstar.truncate_degree(d) -
            b.engine.fstar.truncate_degree(b.engine.finalized_degree);
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"steered entire-series construction with exact certificates"};

    std::string input_path, out_dir = ".";
    std::optional<uint64_t> seed;
    std::optional<unsigned> stages, degree, precision;
    std::optional<std::string> mode;
    bool verify = false, emit_psi = false;

    app.add_option("--input", input_path, "problem file (JSON)")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "override the problem seed");
    app.add_option("--stages", stages, "override the stage count");
    app.add_option("--degree", degree, "partial-sum degree for series.json");
    app.add_option("--precision", precision, "interval refinement cap (bits)");
    app.add_option("--mode", mode, "prescribe | exceptional")
        ->check(CLI::IsMember({"prescribe", "exceptional"}));
    app.add_flag("--verify", verify, "run all certificate checks");
    app.add_flag("--emit-psi", emit_psi, "write the symmetrized function");

    CLI11_PARSE(app, argc, argv);

    ProblemFile prob;
    try {
        std::ifstream in(input_path);
        if (!in) {
            std::cerr << "error: cannot open " << input_path << "\n";
            return 1;
        }
        json j = json::parse(in);
        prob = parse_problem(j);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    if (seed) prob.seed = *seed;
    if (stages) prob.stages = *stages;
    if (degree) prob.degree = *degree;
    if (precision) prob.precision = *precision;
    if (mode) prob.mode = (*mode == "exceptional") ? RunMode::Exceptional : RunMode::Prescribe;

    if (auto errors = validate(prob); !errors.empty()) {
        for (const auto& e : errors) std::cerr << "error: " << e << "\n";
        return 1;
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create " << out_dir << ": " << ec.message() << "\n";
        return 1;
    }
    auto path = [&](const char* name) { return (std::filesystem::path(out_dir) / name).string(); };

    FunctionBundle bundle;
    std::optional<PipelineResult> pipeline;
    try {
        if (prob.mode == RunMode::Exceptional) {
            std::vector<Point> s_pts, v_pts;
            for (const auto& p : prob.points)
                (p.role == 'S' ? s_pts : v_pts).push_back(p.coords);
            pipeline = exceptional_pipeline(s_pts, v_pts, prob.variables, prob.seed,
                                            prob.policy, prob.precision);
            bundle = pipeline->bundle;
        } else {
            std::vector<PointSpec> specs;
            for (const auto& p : prob.points)
                specs.push_back({p.coords, p.selector, PointRole::Auxiliary});
            bundle = build_bundle(prob.variables, projection_closure(std::move(specs),
                                                                     prob.variables),
                                  prob.seed, prob.policy, prob.precision, prob.stages);
        }
    } catch (const SteeringStuck& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    unsigned d = prob.degree ? prob.degree : bundle.engine.finalized_degree;
    json series{{"variables", prob.variables},
                {"seed", prob.seed},
                {"finalized_degree", bundle.engine.finalized_degree},
                {"partial_degree", d},
                {"prefix", mpoly_to_json(bundle.prefix)},
                {"partial_sum", mpoly_to_json(partial_sum(bundle, d))}};
    write_json(path("series.json"), series);
    write_json(path("stagelog.json"), stagelog_bundle_json(bundle));

    json report{{"mode", prob.mode == RunMode::Exceptional ? "exceptional" : "prescribe"},
                {"points", point_report(bundle)}};
    if (pipeline) {
        json verdicts = json::array();
        for (const auto& pv : pipeline->report)
            verdicts.push_back(
                json{{"coords", point_to_json(pv.coords)},
                     {"role", pv.role == PointRole::Exceptional ? "S" : "V"},
                     {"f_value", piexpr_to_json(pv.f_value)},
                     {"psi_value", piexpr_to_json(pv.psi_value)},
                     {"transcendental", pv.transcendental}});
        report["exceptional_report"] = verdicts;
    }
    write_json(path("report.json"), report);

    if (emit_psi) {
        try {
            PsiBundle psi = pipeline ? pipeline->psi : symmetrize(bundle);
            json values = json::array();
            for (const auto& [u, v] : psi.values)
                values.push_back(json{{"coords", point_to_json(u)},
                                      {"value", piexpr_to_json(v)}});
            write_json(path("psi.json"),
                       json{{"prefix", mpoly_to_json(psi.prefix)}, {"values", values}});
        } catch (const NotConjClosed&) {
            std::cerr << "error: NotConjClosed: constraint set is not conjugation-closed\n";
            return 1;
        }
    }

    if (verify) {
        Certificate cert = check_all(bundle);
        write_json(path("certificate.json"), certificate_to_json(cert));
        if (!cert.all_pass()) {
            for (const auto& c : cert.checks)
                if (!c.pass) std::cerr << "check failed: " << c.name << "\n";
            return 3;
        }
    }
    return 0;
}
