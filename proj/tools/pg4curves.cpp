// pg4curves: Frenet-Serret analysis, classification, synthesis and theorem
// audits for admissible curves in the pseudo-Galilean 4-space.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pg4/curve.hpp"
#include "pg4/errors.hpp"
#include "pg4/frenet.hpp"
#include "pg4/integrate.hpp"
#include "pg4/special.hpp"

using json = nlohmann::ordered_json;
using namespace pg4;

namespace {

constexpr const char* kSchema = "pg4-curves/1";

std::string fmt17(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// Deterministic output: write to a temporary file, then rename.
void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot write '" + tmp + "'");
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty())
        std::cout << content;
    else
        write_atomic(out_path, content);
}

struct CommonOptions {
    int grid = 101;
    double tol = 1e-6;
    int jet_order = 6;
    double step = 1e-3;
    std::string format = "json";
    std::string out;
    std::vector<int> signs = {-1, 1, 1};
    bool paper_signs = false;

    ClassifyOptions classify() const {
        ClassifyOptions opt;
        opt.grid = grid;
        opt.tol = tol;
        opt.jet_order = jet_order;
        return opt;
    }

    SignTriple sign_triple() const {
        SignTriple s;
        s.eps1 = signs.at(0);
        s.eps2 = signs.at(1);
        s.eps3 = signs.at(2);
        return s;
    }

    void validate() const {
        if (grid < 11) throw SpecificationError("--grid must be at least 11");
        if (jet_order < 5 || jet_order > 12) throw SpecificationError("--jet-order must be in [5,12]");
        if (!(tol > 0.0) || tol > 1e-2) throw SpecificationError("--tol must be in (0, 1e-2]");
        if (!(step > 0.0)) throw SpecificationError("--step must be positive");
        if (format != "json" && format != "csv") throw SpecificationError("--format must be json or csv");
        for (int e : signs)
            if (e != 1 && e != -1) throw SpecificationError("--signs entries must be +1 or -1");
    }
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--grid", opt.grid, "number of grid points");
    cmd->add_option("--tol", opt.tol, "classification tolerance");
    cmd->add_option("--jet-order", opt.jet_order, "truncation order of the coordinate jets");
    cmd->add_option("--step", opt.step, "integration step");
    cmd->add_option("--format", opt.format, "output format: json or csv");
    cmd->add_option("--out", opt.out, "output path (written atomically); stdout when omitted");
    cmd->add_option("--signs", opt.signs, "frame signature eps1 eps2 eps3")->expected(3);
    cmd->add_flag("--paper-signs", opt.paper_signs, "report residuals under the printed sign conventions");
}

json signs_json(const SignTriple& s) {
    return json{{"eps1", s.eps1}, {"eps2", s.eps2}, {"eps3", s.eps3}};
}

json vec_json(const Vec4& v) { return json::array({v.x, v.y, v.z, v.w}); }

// ---------------------------------------------------------------------------
// frenet
// ---------------------------------------------------------------------------

int cmd_frenet(const std::string& curve_file, const std::vector<double>& s_values, const CommonOptions& opt) {
    const CurveDef def = load_curve_file(curve_file);
    const ExpressionCurve curve(def);
    const ArclengthSampler sampler(curve, opt.jet_order);

    std::vector<double> samples = s_values;
    if (samples.empty()) {
        for (int i = 0; i < opt.grid; ++i)
            samples.push_back(sampler.s_min() + (sampler.s_max() - sampler.s_min()) * i / (opt.grid - 1.0));
    }

    struct Row {
        double s;
        Vec4 pos;
        FrenetApparatus app;
        double gram;
    };
    std::vector<Row> rows;
    std::string first_error;
    for (double s : samples) {
        try {
            const ArclengthJets jets = sampler.sample(s);
            const FrameJets f = frame_jets(jets);
            const FrenetApparatus app = frenet_apparatus(f);
            const Vec4 frame[4] = {app.T, app.N, app.B1, app.B2};
            const double diag[4] = {1.0, double(app.signs.eps1), double(app.signs.eps2),
                                    double(app.signs.eps3)};
            double gram = 0.0;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    gram = std::max(gram, std::abs(dot(frame[i], frame[j]) - (i == j ? diag[i] : 0.0)));
            rows.push_back({s,
                            {jets.coord[0].value(), jets.coord[1].value(), jets.coord[2].value(),
                             jets.coord[3].value()},
                            app,
                            gram});
        } catch (const GeometryError& e) {
            if (first_error.empty()) first_error = e.what();
        } catch (const NotAdmissible& e) {
            if (first_error.empty()) first_error = e.what();
        }
    }
    if (rows.empty()) throw DegenerateFirstCurvature("no valid apparatus at any sample point: " + first_error);

    if (opt.format == "csv") {
        std::string csv =
            "s,x,y,z,w,T_x,T_y,T_z,T_w,N_x,N_y,N_z,N_w,B1_x,B1_y,B1_z,B1_w,B2_x,B2_y,B2_z,B2_w,"
            "kappa,tau,sigma,eps1,eps2,eps3\n";
        for (const Row& r : rows) {
            std::vector<double> cells = {r.s,       r.pos.x,   r.pos.y,   r.pos.z,  r.pos.w,  r.app.T.x,
                                         r.app.T.y, r.app.T.z, r.app.T.w, r.app.N.x, r.app.N.y, r.app.N.z,
                                         r.app.N.w, r.app.B1.x, r.app.B1.y, r.app.B1.z, r.app.B1.w,
                                         r.app.B2.x, r.app.B2.y, r.app.B2.z, r.app.B2.w, r.app.kappa,
                                         r.app.tau, r.app.sigma};
            std::string line;
            for (double c : cells) line += fmt17(c) + ",";
            line += std::to_string(r.app.signs.eps1) + "," + std::to_string(r.app.signs.eps2) + "," +
                    std::to_string(r.app.signs.eps3);
            csv += line + "\n";
        }
        emit(csv, opt.out);
        return 0;
    }

    json doc;
    doc["schema"] = kSchema;
    doc["curve"] = def.label;
    doc["rows"] = json::array();
    for (const Row& r : rows) {
        json row;
        row["s"] = r.s;
        row["position"] = vec_json(r.pos);
        row["T"] = vec_json(r.app.T);
        row["N"] = vec_json(r.app.N);
        row["B1"] = vec_json(r.app.B1);
        row["B2"] = vec_json(r.app.B2);
        row["kappa"] = r.app.kappa;
        row["tau"] = r.app.tau;
        row["sigma"] = r.app.sigma;
        row["signs"] = signs_json(r.app.signs);
        row["paper_eps2_consistent"] = r.app.paper_eps2_consistent;
        row["paper_eps3_consistent"] = r.app.paper_eps3_consistent;
        row["gram_residual"] = r.gram;
        doc["rows"].push_back(row);
    }
    doc["skipped_points"] = static_cast<int>(samples.size() - rows.size());
    emit(doc.dump(2) + "\n", opt.out);
    return 0;
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

json flag_json(const FlagReport& f) {
    json out;
    out["applicable"] = f.applicable;
    out["flag"] = f.flag;
    out["residual"] = f.residual;
    out["fitted_constants"] = f.fitted_constants;
    if (!f.note.empty()) out["note"] = f.note;
    return out;
}

json classification_json(const ClassificationReport& rep) {
    json doc;
    doc["schema"] = kSchema;
    doc["curve"] = rep.curve_label;
    doc["grid"] = rep.grid;
    doc["tol"] = rep.tol;
    doc["scale"] = rep.scale;
    doc["apparatus_failures"] = rep.apparatus_failures;
    doc["points_used"] = rep.points_used;
    doc["signs"] = signs_json(rep.signs);
    doc["flags"] = json{{"rectifying", flag_json(rep.rectifying)},
                        {"osculating_type1", flag_json(rep.osculating_type1)},
                        {"osculating_type2", flag_json(rep.osculating_type2)},
                        {"normal", flag_json(rep.normal_curve)},
                        {"w_curve", flag_json(rep.w_curve)},
                        {"slant_helix", flag_json(rep.slant_helix)},
                        {"three_type_slant_helix", flag_json(rep.three_type_slant_helix)},
                        {"spherical", flag_json(rep.spherical)}};
    return doc;
}

int cmd_classify(const std::string& curve_file, const CommonOptions& opt) {
    const CurveDef def = load_curve_file(curve_file);
    const ExpressionCurve curve(def);
    const ClassificationReport rep = classify_curve(curve, opt.classify());
    emit(classification_json(rep).dump(2) + "\n", opt.out);
    return 0;
}

// ---------------------------------------------------------------------------
// audit
// ---------------------------------------------------------------------------

struct AuditSummary {
    json doc;
    double worst_identity = 0.0;  // runtime-sign identity residuals only
};

AuditSummary audit_curve(const Curve& curve, const CommonOptions& opt) {
    const ClassifyOptions copt = opt.classify();
    const ArclengthSampler sampler(curve, copt.jet_order);

    double gram_max = 0.0, reconstruction_max = 0.0, mu1_dev_max = 0.0, dist_rate_max = 0.0;
    double runtime_sys[4] = {0, 0, 0, 0}, paper_sys[4] = {0, 0, 0, 0};
    double fourth_runtime = 0.0, fourth_paper = 0.0;
    double sphere_analytic = 0.0, sphere_paper = 0.0, sphere_fd = 0.0, radius2_mean = 0.0;
    double pattern_max = 0.0, skew_max = 0.0;
    bool sigma_ok = true;
    int used = 0, failures = 0;
    SignTriple signs;
    bool eps2_flag = false, eps3_flag = false;

    std::vector<double> valid_s;
    for (int i = 0; i < copt.grid; ++i) {
        const double s = sampler.s_min() + (sampler.s_max() - sampler.s_min()) * i / (copt.grid - 1.0);
        try {
            const ArclengthJets jets = sampler.sample(s);
            const FrameJets f = frame_jets(jets);
            if (used == 0) {
                signs = f.signs;
                eps2_flag = f.paper_eps2_consistent;
                eps3_flag = f.paper_eps3_consistent;
            }
            ++used;
            valid_s.push_back(s);

            const FrenetApparatus app = frenet_apparatus(f);
            const Vec4 frame[4] = {app.T, app.N, app.B1, app.B2};
            const double diag[4] = {1.0, double(signs.eps1), double(signs.eps2), double(signs.eps3)};
            for (int r = 0; r < 4; ++r)
                for (int c2 = 0; c2 < 4; ++c2)
                    gram_max = std::max(gram_max,
                                        std::abs(dot(frame[r], frame[c2]) - (r == c2 ? diag[r] : 0.0)));

            const FrenetMatrixResult fm = frenet_matrix(f);
            pattern_max = std::max(pattern_max, fm.pattern_residual);
            skew_max = std::max(skew_max, fm.skew_residual);

            const PositionDecomposition d = decompose_position(f, jets);
            reconstruction_max = std::max(reconstruction_max, d.reconstruction_error);
            mu1_dev_max = std::max(mu1_dev_max, std::abs(d.mu[0][1] - 1.0));
            dist_rate_max = std::max(dist_rate_max, std::abs(distance_rate_residual(f, d)));
            for (int k = 0; k < 4; ++k) {
                runtime_sys[k] = std::max(runtime_sys[k], std::abs(d.residual_runtime[k]));
                paper_sys[k] = std::max(paper_sys[k], std::abs(d.residual_paper[k]));
            }

            if (std::abs(f.sigma.value()) < 1e-6) {
                sigma_ok = false;
            } else {
                const Vec4 r4 = fourth_order_residual(f, SignConvention::RuntimeSigns);
                const Vec4 p4 = fourth_order_residual(f, SignConvention::PaperLiteral);
                fourth_runtime = std::max(fourth_runtime, euclidean_norm(r4));
                fourth_paper = std::max(fourth_paper, euclidean_norm(p4));

                const SphereData sd = sphere_data(f, jets);
                sphere_analytic = std::max(sphere_analytic, std::abs(sd.residual_analytic));
                sphere_paper = std::max(sphere_paper, std::abs(sd.residual_paper));
                radius2_mean += sd.radius2;
            }
        } catch (const GeometryError&) {
            ++failures;
        } catch (const NotAdmissible&) {
            ++failures;
        } catch (const JetDomainError&) {
            ++failures;
        }
    }
    if (used == 0) throw ApparatusFailure("no valid apparatus anywhere on the grid");
    if (failures * 10 > copt.grid) throw ApparatusFailure("apparatus failed on more than 10% of the grid");

    // independent crosscheck of the sphere derivative when sigma != 0: the
    // analytic residual against a centered difference of radius^2.
    if (sigma_ok) {
        radius2_mean /= static_cast<double>(used);
        const double delta = 1e-5;
        for (size_t i = 0; i < valid_s.size(); i += 10) {
            const double s =
                std::clamp(valid_s[i], sampler.s_min() + 2 * delta, sampler.s_max() - 2 * delta);
            auto signed_r2 = [&](double at) {
                const ArclengthJets j = sampler.sample(at);
                return sphere_data(frame_jets(j), j).radius2_signed;
            };
            try {
                const ArclengthJets j = sampler.sample(s);
                const SphereData sd = sphere_data(frame_jets(j), j);
                const double centered = (signed_r2(s + delta) - signed_r2(s - delta)) / (2 * delta);
                sphere_fd = std::max(sphere_fd, std::abs(sd.residual_analytic - centered));
            } catch (const GeometryError&) {
            }
        }
    }

    json checks;
    checks["gram_residual_max"] = gram_max;
    checks["frenet_matrix"] =
        json{{"skew_residual_max", skew_max}, {"pattern_residual_max", pattern_max}};
    checks["decomposition"] = json{
        {"reconstruction_max", reconstruction_max},
        {"runtime", json::array({runtime_sys[0], runtime_sys[1], runtime_sys[2], runtime_sys[3]})},
        {"paper", json::array({paper_sys[0], paper_sys[1], paper_sys[2], paper_sys[3]})}};
    checks["mu1"] = json{{"prime_deviation_max", mu1_dev_max}};
    checks["distance_rate_residual_max"] = dist_rate_max;
    if (sigma_ok) {
        checks["fourth_order"] =
            json{{"applicable", true}, {"runtime_max", fourth_runtime}, {"paper_max", fourth_paper}};
        checks["sphere"] = json{{"applicable", true},
                                {"analytic_residual_max", sphere_analytic},
                                {"paper_residual_max", sphere_paper},
                                {"fd_crosscheck_max", sphere_fd},
                                {"radius2_mean", radius2_mean}};
        try {
            const BinormalAudit ba = binormal_nonexistence_audit(curve, copt.grid, copt);
            checks["binormal_audit"] =
                json{{"applicable", true}, {"score", ba.score}, {"w1", ba.w1}, {"w2", ba.w2}};
        } catch (const GeometryError&) {
            checks["binormal_audit"] = json{{"applicable", false}, {"note", "apparatus failure"}};
        }
    } else {
        const json na = json{{"applicable", false}, {"note", "not applicable: sigma = 0"}};
        checks["fourth_order"] = na;
        checks["sphere"] = na;
        checks["binormal_audit"] = na;
    }

    AuditSummary out;
    out.doc["curve"] = curve.label();
    out.doc["grid"] = copt.grid;
    out.doc["apparatus_failures"] = failures;
    out.doc["signs"] = signs_json(signs);
    out.doc["paper_sign_consistency"] = json{{"eps2_rule", eps2_flag}, {"eps3_rule", eps3_flag}};
    out.doc["checks"] = checks;

    out.worst_identity = std::max({gram_max, reconstruction_max, mu1_dev_max, dist_rate_max,
                                   runtime_sys[0], runtime_sys[1], runtime_sys[2], runtime_sys[3]});
    if (sigma_ok) out.worst_identity = std::max({out.worst_identity, fourth_runtime, sphere_fd});
    return out;
}

int cmd_audit_single(const std::string& curve_file, const CommonOptions& opt) {
    const CurveDef def = load_curve_file(curve_file);
    const ExpressionCurve curve(def);
    AuditSummary summary = audit_curve(curve, opt);
    json doc;
    doc["schema"] = kSchema;
    for (auto& [k, v] : summary.doc.items()) doc[k] = v;
    emit(doc.dump(2) + "\n", opt.out);
    return 0;
}

// Built-in identity suite: expression corpus plus synthesized curves; every
// runtime-sign identity must hold at its tolerance.
int cmd_audit_suite(const CommonOptions& opt) {
    std::string report;
    bool all_ok = true;
    auto check = [&](const std::string& name, double value, double tol) {
        const bool ok = value <= tol;
        all_ok = all_ok && ok;
        report += std::string(ok ? "PASS" : "FAIL") + " " + name + " residual=" + fmt3(value) +
                  " tol=" + fmt3(tol) + "\n";
    };

    std::vector<CurveDef> corpus = builtin_corpus();
    if (const char* dir = std::getenv("PG4_CORPUS")) {
        std::vector<std::string> files;
        for (const auto& entry : std::filesystem::directory_iterator(dir))
            if (entry.path().extension() == ".json") files.push_back(entry.path().string());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) corpus.push_back(load_curve_file(f));
    }

    for (const CurveDef& def : corpus) {
        const ExpressionCurve curve(def);
        const AuditSummary summary = audit_curve(curve, opt);
        const json& checks = summary.doc["checks"];
        // --paper-signs swaps the audited convention; only the computed-sign
        // residuals are identities, so that mode is exploratory.
        const char* conv = opt.paper_signs ? "paper" : "runtime";
        const char* conv4 = opt.paper_signs ? "paper_max" : "runtime_max";
        check(def.label + "/gram", checks["gram_residual_max"].get<double>(), 1e-10);
        check(def.label + "/reconstruction", checks["decomposition"]["reconstruction_max"].get<double>(), 1e-10);
        for (int k = 0; k < 4; ++k)
            check(def.label + "/system-" + std::string(1, char('a' + k)),
                  checks["decomposition"][conv][k].get<double>(), 1e-7);
        check(def.label + "/mu1-prime", checks["mu1"]["prime_deviation_max"].get<double>(), 1e-10);
        check(def.label + "/distance-rate", checks["distance_rate_residual_max"].get<double>(), 1e-7);
        if (checks["fourth_order"]["applicable"].get<bool>()) {
            check(def.label + "/fourth-order", checks["fourth_order"][conv4].get<double>(), 1e-6);
            check(def.label + "/sphere-fd", checks["sphere"]["fd_crosscheck_max"].get<double>(), 1e-6);
        }
        if (checks["binormal_audit"]["applicable"].get<bool>()) {
            const double score = checks["binormal_audit"]["score"].get<double>();
            check(def.label + "/binormal-score", score >= 0.1 ? 0.0 : 0.1 - score, 0.0);
        }
    }

    // W-curves: round trips and helix identities.
    SignTriple signs;
    signs.eps1 = -1;
    for (auto [k, t, g] : {std::array<double, 3>{1, 1, 2}, {1, 2, 4}, {1, 2, 3}}) {
        const CurvatureSpec spec = constant_curvature_spec(k, t, g, signs, 0.0, 1.0, opt.step);
        const FramePath path = integrate_frenet(spec, canonical_initial_frame(signs), Point4{});
        const TabulatedCurve curve = sample_to_curvedef(path);
        const ArclengthSampler sampler(curve, opt.jet_order);
        double round_trip = 0.0, slant = 0.0, corollary = 0.0;
        for (int i = 0; i < 21; ++i) {
            const double s = sampler.s_min() + (sampler.s_max() - sampler.s_min()) * i / 20.0;
            const FrameJets f = frame_jets(sampler.sample(s));
            round_trip = std::max({round_trip, std::abs(f.kappa.value() - k), std::abs(f.tau.value() - t),
                                   std::abs(f.sigma.value() - g)});
            slant = std::max(slant, slant_axis_derivative_norm(f));
            corollary = std::max(corollary, corollary_axis_derivative_norm(f));
        }
        check(spec.label + "/round-trip", round_trip, 1e-6);
        check(spec.label + "/slant-axis", slant, 1e-6);
        check(spec.label + "/corollary-axis", corollary, 1e-6);
    }

    // Synthesized rectifying curves, both sign branches.
    for (auto [e1, e2, e3, c] : {std::array<double, 4>{-1, 1, 1, 2}, {1, -1, 1, 1}}) {
        SignTriple rsigns;
        rsigns.eps1 = int(e1);
        rsigns.eps2 = int(e2);
        rsigns.eps3 = int(e3);
        const RectifyingRecipe recipe = synthesize_rectifying(rsigns, 0.0, 1.0, c, opt.step);
        const FramePath path =
            integrate_frenet(recipe.spec, canonical_initial_frame(rsigns), recipe.initial_position);
        double mu2 = 0.0;
        for (size_t i = 0; i < path.s.size(); ++i)
            mu2 = std::max(mu2, std::abs(position_components(path, i)[1]));
        const TabulatedCurve curve = sample_to_curvedef(path);
        const RectifyingChecks rc = rectifying_checks(curve, opt.grid, opt.classify());
        const std::string name = "rectifying(" + fmt3(c) + ")";
        check(name + "/mu2", mu2, 1e-7);
        check(name + "/quad-fit", rc.applicable ? rc.quad_fit_residual : 1.0, 1e-6);
        check(name + "/quad-leading", rc.applicable ? std::abs(rc.quad_s2 - 1.0) : 1.0, 1e-6);
        check(name + "/chi2", rc.mu3_residual, 1e-6);
        check(name + "/chi3", rc.mu4_residual, 1e-6);
    }

    emit(report, opt.out);
    return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// synthesize
// ---------------------------------------------------------------------------

std::string path_csv(const FramePath& path) {
    std::string csv =
        "s,x,y,z,w,T_x,T_y,T_z,T_w,N_x,N_y,N_z,N_w,B1_x,B1_y,B1_z,B1_w,B2_x,B2_y,B2_z,B2_w,"
        "kappa,tau,sigma,eps1,eps2,eps3\n";
    for (size_t i = 0; i < path.s.size(); ++i) {
        const double s = path.s[i];
        const Point4& p = path.position[i];
        const Frame& f = path.frame[i];
        std::vector<double> cells = {s,       p.x,     p.y,     p.z,     p.w,     f.T.x,  f.T.y,
                                     f.T.z,   f.T.w,   f.N.x,   f.N.y,   f.N.z,   f.N.w,  f.B1.x,
                                     f.B1.y,  f.B1.z,  f.B1.w,  f.B2.x,  f.B2.y,  f.B2.z, f.B2.w,
                                     eval_value(*path.spec.kappa, s),
                                     eval_value(*path.spec.tau, s),
                                     eval_value(*path.spec.sigma, s)};
        std::string line;
        for (double c : cells) line += fmt17(c) + ",";
        line += std::to_string(path.spec.signs.eps1) + "," + std::to_string(path.spec.signs.eps2) + "," +
                std::to_string(path.spec.signs.eps3);
        csv += line + "\n";
    }
    return csv;
}

json spec_echo(const CurvatureSpec& spec, const Point4& start) {
    json doc;
    doc["schema"] = kSchema;
    doc["label"] = spec.label;
    doc["kappa"] = print_expr(*spec.kappa, "s");
    doc["tau"] = print_expr(*spec.tau, "s");
    doc["sigma"] = print_expr(*spec.sigma, "s");
    doc["signs"] = signs_json(spec.signs);
    doc["interval"] = json::array({spec.s0, spec.s1});
    doc["step"] = spec.step;
    doc["initial_position"] = json::array({start.x, start.y, start.z, start.w});
    return doc;
}

int cmd_synthesize(const std::vector<double>& wcurve, bool rectifying, double c_const,
                   const std::vector<double>& interval, const CommonOptions& opt) {
    const SignTriple signs = opt.sign_triple();
    const double a = interval.at(0), b = interval.at(1);

    CurvatureSpec spec;
    Point4 start{};
    if (rectifying) {
        const RectifyingRecipe recipe = synthesize_rectifying(signs, a, b, c_const, opt.step);
        spec = recipe.spec;
        start = recipe.initial_position;
    } else {
        if (wcurve.size() != 3) throw SpecificationError("--wcurve needs kappa tau sigma");
        spec = constant_curvature_spec(wcurve[0], wcurve[1], wcurve[2], signs, a, b, opt.step);
        if (!(wcurve[0] > 0.0) || !(wcurve[1] > 0.0))
            throw SpecificationError("W-curve kappa and tau must be positive");
    }

    const FramePath path = integrate_frenet(spec, canonical_initial_frame(signs), start);
    emit(path_csv(path), opt.out);
    if (!opt.out.empty()) write_atomic(opt.out + ".json", spec_echo(spec, start).dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------------------
// reparam
// ---------------------------------------------------------------------------

int cmd_reparam(const std::string& curve_file, const CommonOptions& opt) {
    const CurveDef def = load_curve_file(curve_file);
    const ExpressionCurve curve(def);
    const ArclengthSampler sampler(curve, opt.jet_order);

    std::string csv = "s,y,z,w\n";
    for (int i = 0; i < opt.grid; ++i) {
        const double s = sampler.s_min() + (sampler.s_max() - sampler.s_min()) * i / (opt.grid - 1.0);
        const ArclengthJets jets = sampler.sample(s);
        csv += fmt17(s) + "," + fmt17(jets.coord[1].value()) + "," + fmt17(jets.coord[2].value()) + "," +
               fmt17(jets.coord[3].value()) + "\n";
    }
    emit(csv, opt.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"differential geometry of admissible curves in the pseudo-Galilean 4-space"};
    app.require_subcommand(1);

    CommonOptions opt;

    std::string curve_file;
    std::vector<double> s_values;
    auto* frenet = app.add_subcommand("frenet", "Frenet apparatus along a curve");
    frenet->add_option("curve", curve_file, "curve JSON file")->required();
    frenet->add_option("--s", s_values, "explicit parameter values");
    add_common_flags(frenet, opt);

    std::string classify_file;
    auto* classify = app.add_subcommand("classify", "special-curve classification report");
    classify->add_option("curve", classify_file, "curve JSON file")->required();
    add_common_flags(classify, opt);

    std::string audit_file;
    bool suite = false;
    auto* audit = app.add_subcommand("audit", "theorem residual audit");
    audit->add_option("curve", audit_file, "curve JSON file");
    audit->add_flag("--suite", suite, "run the built-in identity suite");
    add_common_flags(audit, opt);

    std::vector<double> wcurve;
    bool rectifying = false;
    double c_const = 2.0;
    std::vector<double> interval = {0.0, 1.0};
    auto* synth = app.add_subcommand("synthesize", "integrate a curve from prescribed curvatures");
    synth->add_option("--wcurve", wcurve, "constant curvatures kappa tau sigma")->expected(3);
    synth->add_flag("--rectifying", rectifying, "use the rectifying curvature recipe");
    synth->add_option("--c", c_const, "constant c of the rectifying recipe");
    synth->add_option("--interval", interval, "integration interval a b")->expected(2);
    add_common_flags(synth, opt);

    std::string reparam_file;
    auto* reparam = app.add_subcommand("reparam", "resample a curve by arclength");
    reparam->add_option("curve", reparam_file, "curve JSON file")->required();
    add_common_flags(reparam, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 4;
    }

    try {
        opt.validate();
        if (frenet->parsed()) return cmd_frenet(curve_file, s_values, opt);
        if (classify->parsed()) return cmd_classify(classify_file, opt);
        if (audit->parsed()) {
            if (suite) return cmd_audit_suite(opt);
            if (audit_file.empty()) throw SpecificationError("audit needs a curve file or --suite");
            return cmd_audit_single(audit_file, opt);
        }
        if (synth->parsed()) {
            if (rectifying == !wcurve.empty())
                throw SpecificationError("synthesize needs exactly one of --rectifying or --wcurve");
            return cmd_synthesize(wcurve, rectifying, c_const, interval, opt);
        }
        if (reparam->parsed()) return cmd_reparam(reparam_file, opt);
        return 4;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const SpecificationError& e) {
        std::cerr << "invalid specification: " << e.what() << "\n";
        return 4;
    } catch (const GeometryError& e) {
        std::cerr << "geometric degeneracy: " << e.what() << "\n";
        return 3;
    } catch (const NotAdmissible& e) {
        std::cerr << "geometric degeneracy: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
