#include "pg4/special.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pg4/errors.hpp"

namespace pg4 {

namespace {

constexpr double kSigmaFloor = 1e-6;  // below this the sigma-dividing theorems are not applicable

// --- small dense linear algebra -------------------------------------------

// Solve A x = b (n <= 4) by Gaussian elimination with partial pivoting.
bool gauss_solve(double A[4][4], double b[4], int n, double* x) {
    int perm[4] = {0, 1, 2, 3};
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A[perm[r]][col]) > std::abs(A[perm[piv]][col])) piv = r;
        std::swap(perm[col], perm[piv]);
        const double diag = A[perm[col]][col];
        if (std::abs(diag) < 1e-14) return false;
        for (int r = col + 1; r < n; ++r) {
            const double f = A[perm[r]][col] / diag;
            for (int c2 = col; c2 < n; ++c2) A[perm[r]][c2] -= f * A[perm[col]][c2];
            b[perm[r]] -= f * b[perm[col]];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[perm[r]];
        for (int c2 = r + 1; c2 < n; ++c2) acc -= A[perm[r]][c2] * x[c2];
        x[r] = acc / A[perm[r]][r];
    }
    return true;
}

// Smallest eigenvalue of a symmetric n x n matrix (n <= 4) by the cyclic
// Jacobi method.
double symmetric_min_eigenvalue(double M[4][4], int n) {
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += M[p][q] * M[p][q];
        if (off < 1e-28) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(M[p][q]) < 1e-300) continue;
                const double theta = 0.5 * std::atan2(2.0 * M[p][q], M[q][q] - M[p][p]);
                const double c = std::cos(theta), s = std::sin(theta);
                for (int k = 0; k < n; ++k) {
                    const double mp = M[k][p], mq = M[k][q];
                    M[k][p] = c * mp - s * mq;
                    M[k][q] = s * mp + c * mq;
                }
                for (int k = 0; k < n; ++k) {
                    const double mp = M[p][k], mq = M[q][k];
                    M[p][k] = c * mp - s * mq;
                    M[q][k] = s * mp + c * mq;
                }
            }
    }
    double lo = M[0][0];
    for (int k = 1; k < n; ++k) lo = std::min(lo, M[k][k]);
    return lo;
}

double mean(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// (max - min) / max(1, |mean|): the scale-free constancy measure.
double relative_variation(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return (*hi - *lo) / std::max(1.0, std::abs(mean(v)));
}

// --- grid scan shared by every audit ---------------------------------------

struct GridPoint {
    double s = 0.0;
    bool valid = false;
    ArclengthJets jets;
    FrameJets frame;
    PositionDecomposition decomp;
};

struct GridScan {
    std::vector<GridPoint> pts;
    int failures = 0;
    int used = 0;
    SignTriple signs;
    double scale = 1.0;

    template <typename F>
    std::vector<double> map(F&& fn) const {
        std::vector<double> out;
        out.reserve(pts.size());
        for (const GridPoint& p : pts)
            if (p.valid) out.push_back(fn(p));
        return out;
    }
};

double d_squared(const GridPoint& p) {
    const double m1 = p.decomp.mu[0].value(), m2 = p.decomp.mu[1].value(), m3 = p.decomp.mu[2].value(),
                 m4 = p.decomp.mu[3].value();
    return m1 * m1 + p.frame.signs.eps1 * m2 * m2 + p.frame.signs.eps2 * m3 * m3 +
           p.frame.signs.eps3 * m4 * m4;
}

GridScan scan_grid(const Curve& c, const ClassifyOptions& opt) {
    const ArclengthSampler sampler(c, opt.jet_order);
    const int n = std::max(2, opt.grid);
    GridScan scan;
    scan.pts.resize(n);
    bool have_signs = false;
    for (int i = 0; i < n; ++i) {
        GridPoint& p = scan.pts[i];
        p.s = sampler.s_min() + (sampler.s_max() - sampler.s_min()) * i / (n - 1.0);
        try {
            p.jets = sampler.sample(p.s);
            p.frame = frame_jets(p.jets, opt.frame_tol);
            p.decomp = decompose_position(p.frame, p.jets);
            p.valid = true;
            ++scan.used;
        } catch (const GeometryError&) {
            ++scan.failures;
        } catch (const NotAdmissible&) {
            ++scan.failures;
        } catch (const JetDomainError&) {
            ++scan.failures;
        }
        if (p.valid) {
            if (!have_signs) {
                scan.signs = p.frame.signs;
                have_signs = true;
            } else if (p.frame.signs.eps1 != scan.signs.eps1 || p.frame.signs.eps2 != scan.signs.eps2 ||
                       p.frame.signs.eps3 != scan.signs.eps3) {
                throw ApparatusFailure("causal type of the frame changes along the curve");
            }
        }
    }
    if (scan.failures * 10 > n) throw ApparatusFailure("apparatus failed on more than 10% of the grid");
    if (!have_signs) throw ApparatusFailure("no valid apparatus anywhere on the grid");
    for (const GridPoint& p : scan.pts)
        if (p.valid) scan.scale = std::max(scan.scale, std::sqrt(std::abs(d_squared(p))));
    return scan;
}

double min_abs_sigma(const GridScan& scan) {
    double m = 1e300;
    for (const GridPoint& p : scan.pts)
        if (p.valid) m = std::min(m, std::abs(p.frame.sigma.value()));
    return m;
}

// Shared sphere computation: alpha and the frame as values, curvatures as
// jets (at least order 2 for the analytic residual).
SphereData sphere_from(const Vec4& alpha, const Vec4 frame[4], const SignTriple& signs, const Jet& kappa,
                       const Jet& tau, const Jet& sigma, double tol_sigma) {
    if (std::abs(sigma.value()) < tol_sigma)
        throw DegenerateThirdCurvature("sigma ~ 0: no sphere data");
    const double e1 = signs.eps1, e2 = signs.eps2, e3 = signs.eps3;

    const Jet rho = 1.0 / kappa;
    const Jet a = rho.derivative() / tau;           // rho'/tau
    const Jet s1 = tau * rho + a.derivative();      // tau rho + (rho'/tau)'
    const Jet bracket = (rho * rho) * e1 + (a * a) * e2 + ((s1 * s1) / (sigma * sigma)) * e3;
    if (bracket.order() < 1) throw Error("jet order too low for the sphere residual");

    SphereData out;
    const double b2coef = e1 * e2 * s1.value() / sigma.value();
    const Vec4 offset = rho.value() * frame[1] + (e1 * a.value()) * frame[2] + b2coef * frame[3];
    out.center = Point4{alpha.x, alpha.y, alpha.z, alpha.w} + offset;
    out.radius2_signed = bracket.value();
    out.radius2 = std::abs(bracket.value());
    out.residual_analytic = bracket[1];

    const Jet t1 = (a * (tau * rho + a.derivative() * e2)) * (2.0 * e1);
    const Jet t2 = (s1 * s1) / (sigma * sigma);
    out.residual_paper = t1.value() + e3 * t2[1];

    const double cn = iso_polar(offset, frame[1]) / e1;
    const double cb1 = iso_polar(offset, frame[2]) / e2;
    const double cb2 = iso_polar(offset, frame[3]) / e3;
    out.frame_component_radius2 = std::abs(e1 * cn * cn + e2 * cb1 * cb1 + e3 * cb2 * cb2);
    return out;
}

}  // namespace

double distance_rate_residual(const FrameJets& f, const PositionDecomposition& d) {
    const double e1 = f.signs.eps1, e2 = f.signs.eps2, e3 = f.signs.eps3;
    const Jet d2 = d.mu[0] * d.mu[0] + (d.mu[1] * d.mu[1]) * e1 + (d.mu[2] * d.mu[2]) * e2 +
                   (d.mu[3] * d.mu[3]) * e3;
    const double m1 = d.mu[0].value(), m2 = d.mu[1].value();
    return d2[1] - 2.0 * m1 + 2.0 * e1 * f.kappa.value() * m1 * m2;
}

ClassificationReport classify_curve(const Curve& c, const ClassifyOptions& opt) {
    const GridScan scan = scan_grid(c, opt);
    ClassificationReport rep;
    rep.curve_label = c.label();
    rep.grid = static_cast<int>(scan.pts.size());
    rep.tol = opt.tol;
    rep.scale = scan.scale;
    rep.apparatus_failures = scan.failures;
    rep.points_used = scan.used;
    rep.signs = scan.signs;

    const double threshold = opt.tol * scan.scale;
    const bool sigma_ok = min_abs_sigma(scan) >= kSigmaFloor;

    auto component_flag = [&](int idx) {
        FlagReport f;
        f.applicable = true;
        f.residual = max_abs(scan.map([&](const GridPoint& p) { return p.decomp.mu[idx].value(); }));
        f.flag = f.residual <= threshold;
        const double offset = mean(scan.map([&](const GridPoint& p) { return p.decomp.mu[0].value() - p.s; }));
        f.fitted_constants = {offset};
        return f;
    };

    rep.rectifying = component_flag(1);
    rep.osculating_type1 = component_flag(2);
    rep.osculating_type2 = component_flag(3);
    rep.normal_curve = component_flag(0);
    rep.normal_curve.fitted_constants.clear();

    {
        FlagReport f;
        f.applicable = true;
        const auto ks = scan.map([](const GridPoint& p) { return p.frame.kappa.value(); });
        const auto ts = scan.map([](const GridPoint& p) { return p.frame.tau.value(); });
        const auto gs = scan.map([](const GridPoint& p) { return p.frame.sigma.value(); });
        f.residual = std::max({relative_variation(ks), relative_variation(ts), relative_variation(gs)});
        f.flag = f.residual <= opt.tol;
        f.fitted_constants = {mean(ks), mean(ts), mean(gs)};
        rep.w_curve = f;
    }

    {
        FlagReport f;
        if (sigma_ok) {
            f.applicable = true;
            const auto ratio =
                scan.map([](const GridPoint& p) { return p.frame.tau.value() / p.frame.sigma.value(); });
            f.residual = relative_variation(ratio);
            f.flag = f.residual <= opt.tol;
            f.fitted_constants = {mean(ratio)};
        } else {
            f.note = "sigma ~ 0 somewhere on the grid";
        }
        rep.slant_helix = f;
    }

    {
        FlagReport f;
        f.applicable = true;
        const auto ratio = scan.map([](const GridPoint& p) {
            const Jet g = p.frame.sigma / p.frame.tau;
            return g[1] / p.frame.kappa.value();
        });
        f.residual = relative_variation(ratio);
        f.flag = f.residual <= opt.tol;
        f.fitted_constants = {mean(ratio)};
        rep.three_type_slant_helix = f;
    }

    {
        FlagReport f;
        if (sigma_ok) {
            f.applicable = true;
            std::vector<double> res, rad;
            for (const GridPoint& p : scan.pts) {
                if (!p.valid) continue;
                const Vec4 frame[4] = {p.frame.frame_value(0), p.frame.frame_value(1),
                                       p.frame.frame_value(2), p.frame.frame_value(3)};
                const Vec4 alpha{p.jets.coord[0].value(), p.jets.coord[1].value(), p.jets.coord[2].value(),
                                 p.jets.coord[3].value()};
                const SphereData sd =
                    sphere_from(alpha, frame, p.frame.signs, p.frame.kappa, p.frame.tau, p.frame.sigma, kSigmaFloor);
                res.push_back(sd.residual_analytic);
                rad.push_back(sd.radius2);
            }
            f.residual = max_abs(res);
            f.flag = f.residual <= threshold;
            f.fitted_constants = {mean(rad)};
        } else {
            f.note = "sigma ~ 0 somewhere on the grid";
        }
        rep.spherical = f;
    }

    return rep;
}

Vec4 slant_helix_axis(const FrenetApparatus& app, double tol_sigma) {
    if (std::abs(app.sigma) < tol_sigma)
        throw DegenerateThirdCurvature("slant-helix axis needs sigma != 0");
    return app.N + (app.tau / app.sigma) * app.B2;
}

double slant_axis_derivative_norm(const FrameJets& f) {
    if (std::abs(f.sigma.value()) < kSigmaFloor)
        throw DegenerateThirdCurvature("slant-helix axis needs sigma != 0");
    const Jet ratio = f.tau / f.sigma;
    Vec4 deriv;
    for (int i = 0; i < 4; ++i) {
        const Jet u = f.N[i] + ratio * f.B2[i];
        deriv[i] = u[1];
    }
    return norm(deriv);
}

double corollary_axis_derivative_norm(const FrameJets& f) {
    if (f.tau.value() <= 0.0) throw DegenerateTorsion("axis needs tau != 0");
    const Jet ratio = f.sigma / f.tau;
    Vec4 deriv;
    for (int i = 0; i < 4; ++i) {
        const Jet u = ratio * f.N[i] + f.B2[i];
        deriv[i] = u[1];
    }
    return norm(deriv);
}

ThreeTypeAxis three_type_axis(const Curve& c, int grid, const ClassifyOptions& opt_in) {
    ClassifyOptions opt = opt_in;
    opt.grid = grid;
    const GridScan scan = scan_grid(c, opt);

    double num = 0.0, den = 0.0;
    for (const GridPoint& p : scan.pts) {
        if (!p.valid) continue;
        const Jet g = p.frame.sigma / p.frame.tau;
        const double k = p.frame.kappa.value();
        num += k * g[1];
        den += k * k;
    }
    if (den < 1e-20) throw IllConditionedFit("cannot fit the axis constants: kappa^2 sums to zero");

    ThreeTypeAxis out;
    out.a = num / den;
    out.b = -out.a;
    for (const GridPoint& p : scan.pts) {
        if (!p.valid) continue;
        const Jet g = p.frame.sigma / p.frame.tau;
        Vec4 axis, deriv;
        for (int i = 0; i < 4; ++i) {
            const Jet u = p.frame.T[i] * out.b + g * p.frame.N[i] + p.frame.B2[i];
            axis[i] = u.value();
            deriv[i] = u[1];
        }
        out.axis.push_back(axis);
        out.max_axis_derivative_norm = std::max(out.max_axis_derivative_norm, norm(deriv));
    }
    return out;
}

BinormalAudit binormal_nonexistence_audit(const Curve& c, int grid, const ClassifyOptions& opt_in) {
    ClassifyOptions opt = opt_in;
    opt.grid = grid;
    const GridScan scan = scan_grid(c, opt);
    if (min_abs_sigma(scan) < kSigmaFloor)
        throw DegenerateThirdCurvature("binormal audit needs sigma != 0 on the grid");

    // Rows of the constancy system for a constant vector U: the N and B2
    // frame components must vanish pointwise and the B1 component must not
    // vary. Each row is linear in the four components of U.
    auto component_row = [](const GridPoint& p, int which, double out_row[4]) {
        const Vec4 axis = p.frame.frame_value(which);
        const double eps = which == 1   ? p.frame.signs.eps1
                           : which == 2 ? p.frame.signs.eps2
                                        : p.frame.signs.eps3;
        const Vec4 t = p.frame.frame_value(0);
        out_row[0] = -(-axis.y * t.y + axis.z * t.z + axis.w * t.w) / eps;
        out_row[1] = -axis.y / eps;
        out_row[2] = axis.z / eps;
        out_row[3] = axis.w / eps;
    };

    std::vector<std::array<double, 4>> rows;
    std::vector<std::array<double, 4>> b1_rows;
    for (const GridPoint& p : scan.pts) {
        if (!p.valid) continue;
        std::array<double, 4> r{};
        component_row(p, 1, r.data());
        rows.push_back(r);
        component_row(p, 3, r.data());
        rows.push_back(r);
        component_row(p, 2, r.data());
        b1_rows.push_back(r);
    }
    // center the B1 rows: only the variation of <B1,U> matters
    std::array<double, 4> avg{};
    for (const auto& r : b1_rows)
        for (int k = 0; k < 4; ++k) avg[k] += r[k] / static_cast<double>(b1_rows.size());
    for (auto r : b1_rows) {
        for (int k = 0; k < 4; ++k) r[k] -= avg[k];
        rows.push_back(r);
    }

    double M[4][4] = {};
    for (const auto& r : rows)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) M[i][j] += r[i] * r[j];
    const double lambda = symmetric_min_eigenvalue(M, 4);

    BinormalAudit out;
    out.score = std::sqrt(std::max(lambda, 0.0));

    // The reduced system of the proof: w1 kappa - e1 e2 w2 tau = 0 and
    // e3 w2 sigma = 0, solved by unconstrained least squares; the normal
    // equations force both constants to zero.
    double A[4][4] = {};
    double rhs[4] = {};
    for (const GridPoint& p : scan.pts) {
        if (!p.valid) continue;
        const double row1[2] = {p.frame.kappa.value(),
                                -1.0 * p.frame.signs.eps1 * p.frame.signs.eps2 * p.frame.tau.value()};
        const double row2[2] = {0.0, static_cast<double>(p.frame.signs.eps3) * p.frame.sigma.value()};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) A[i][j] += row1[i] * row1[j] + row2[i] * row2[j];
    }
    double w[2] = {0.0, 0.0};
    double A2[4][4];
    std::copy(&A[0][0], &A[0][0] + 16, &A2[0][0]);
    if (gauss_solve(A2, rhs, 2, w)) {
        out.w1 = w[0];
        out.w2 = w[1];
    }
    return out;
}

SphereData sphere_data(const FrameJets& f, const ArclengthJets& c, double tol_sigma) {
    const Vec4 frame[4] = {f.frame_value(0), f.frame_value(1), f.frame_value(2), f.frame_value(3)};
    const Vec4 alpha{c.coord[0].value(), c.coord[1].value(), c.coord[2].value(), c.coord[3].value()};
    return sphere_from(alpha, frame, f.signs, f.kappa, f.tau, f.sigma, tol_sigma);
}

SphereData sphere_data_on_path(const FramePath& path, size_t node, double tol_sigma) {
    const double s = path.s[node];
    constexpr int order = 5;
    const Jet kappa = eval_jet(*path.spec.kappa, s, order);
    const Jet tau = eval_jet(*path.spec.tau, s, order);
    const Jet sigma = eval_jet(*path.spec.sigma, s, order);
    const Frame& fr = path.frame[node];
    const Vec4 frame[4] = {fr.T, fr.N, fr.B1, fr.B2};
    const Point4& p = path.position[node];
    return sphere_from({p.x, p.y, p.z, p.w}, frame, path.spec.signs, kappa, tau, sigma, tol_sigma);
}

OsculatingChecks osculating_checks(const Curve& c, int grid, const ClassifyOptions& opt_in) {
    ClassifyOptions opt = opt_in;
    opt.grid = grid;
    const GridScan scan = scan_grid(c, opt);
    const double threshold = opt.tol * scan.scale;

    OsculatingChecks out;
    const double mu3_max = max_abs(scan.map([](const GridPoint& p) { return p.decomp.mu[2].value(); }));
    const double mu4_max = max_abs(scan.map([](const GridPoint& p) { return p.decomp.mu[3].value(); }));
    const double sigma_min = min_abs_sigma(scan);
    const double sigma_max = max_abs(scan.map([](const GridPoint& p) { return p.frame.sigma.value(); }));
    const auto ks = scan.map([](const GridPoint& p) { return p.frame.kappa.value(); });
    const auto ts = scan.map([](const GridPoint& p) { return p.frame.tau.value(); });
    const double e1 = scan.signs.eps1, e2 = scan.signs.eps2;

    out.type1_applicable = mu3_max <= threshold && sigma_min >= kSigmaFloor;
    if (out.type1_applicable) {
        out.c13 = mean(scan.map([](const GridPoint& p) { return p.decomp.mu[0].value() - p.s; }));
        out.c14 = mean(scan.map([](const GridPoint& p) { return p.decomp.mu[3].value(); }));
        for (const GridPoint& p : scan.pts) {
            if (!p.valid) continue;
            const double ratio = p.frame.sigma.value() / p.frame.tau.value();
            out.type1_constraint_residual =
                std::max(out.type1_constraint_residual,
                         std::abs((p.s + out.c13) * p.frame.kappa.value() + out.c14 * ratio));
            out.type1_mu2_residual =
                std::max(out.type1_mu2_residual, std::abs(p.decomp.mu[1].value() - out.c14 * ratio));
        }
    }

    out.type2_applicable = mu4_max <= threshold && sigma_max <= kSigmaFloor &&
                           relative_variation(ks) <= opt.tol && relative_variation(ts) <= opt.tol;
    if (out.type2_applicable) {
        const double kbar = mean(ks), tbar = mean(ts);
        out.c15 = mean(scan.map([](const GridPoint& p) { return p.decomp.mu[0].value() - p.s; }));
        // least squares of mu3 minus the particular part over {sin, cos}
        double A[4][4] = {}, b[4] = {};
        for (const GridPoint& p : scan.pts) {
            if (!p.valid) continue;
            const double basis[2] = {std::sin(tbar * p.s), std::cos(tbar * p.s)};
            const double target =
                p.decomp.mu[2].value() - e1 * e2 * (kbar / tbar) * (p.s + out.c15);
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) A[i][j] += basis[i] * basis[j];
                b[i] += basis[i] * target;
            }
        }
        double coef[2] = {0, 0};
        if (!gauss_solve(A, b, 2, coef)) throw IllConditionedFit("sin/cos fit is singular");
        out.a1 = coef[0];
        out.a2 = coef[1];
        for (const GridPoint& p : scan.pts) {
            if (!p.valid) continue;
            const double fit = out.a1 * std::sin(tbar * p.s) + out.a2 * std::cos(tbar * p.s) +
                               e1 * e2 * (kbar / tbar) * (p.s + out.c15);
            out.type2_fit_residual = std::max(out.type2_fit_residual, std::abs(p.decomp.mu[2].value() - fit));
            out.type2_mu2_residual =
                std::max(out.type2_mu2_residual,
                         std::abs(p.decomp.mu[1].value() + e2 * p.decomp.mu[2][1] / p.frame.tau.value()));
        }
    }

    if (!out.type1_applicable && !out.type2_applicable)
        out.note = "not an osculating curve of either type (or the curvature preconditions fail)";
    return out;
}

RectifyingChecks rectifying_checks(const Curve& c, int grid, const ClassifyOptions& opt_in) {
    ClassifyOptions opt = opt_in;
    opt.grid = grid;
    const GridScan scan = scan_grid(c, opt);
    const double threshold = opt.tol * scan.scale;

    RectifyingChecks out;
    const double mu2_max = max_abs(scan.map([](const GridPoint& p) { return p.decomp.mu[1].value(); }));
    out.applicable = mu2_max <= threshold && min_abs_sigma(scan) >= kSigmaFloor;
    if (!out.applicable) return out;

    const double e1 = scan.signs.eps1, e2 = scan.signs.eps2;
    out.c = mean(scan.map([](const GridPoint& p) { return p.decomp.mu[0].value() - p.s; }));

    double A[4][4] = {}, b[4] = {};
    for (const GridPoint& p : scan.pts) {
        if (!p.valid) continue;
        // chi2 = e1 e2 (s+c) kappa/tau and chi3 = (e1/sigma) chi2' / (e1 e2) ... the
        // printed forms, with the jets providing the derivative.
        const Jet s_plus_c = Jet::variable(p.s, p.frame.kappa.order()) + out.c;
        const Jet ratio = s_plus_c * p.frame.kappa / p.frame.tau;
        const double chi2 = e1 * e2 * ratio.value();
        const double chi3 = e1 * ratio[1] / p.frame.sigma.value();
        out.mu3_residual = std::max(out.mu3_residual, std::abs(p.decomp.mu[2].value() - chi2));
        out.mu4_residual = std::max(out.mu4_residual, std::abs(p.decomp.mu[3].value() - chi3));

        const double d2 = d_squared(p);
        const double basis[3] = {p.s * p.s, p.s, 1.0};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) A[i][j] += basis[i] * basis[j];
            b[i] += basis[i] * d2;
        }
        out.normal_component_max =
            std::max(out.normal_component_max, std::abs(d2 - p.decomp.mu[0].value() * p.decomp.mu[0].value()));

        // for a rectifying curve mu2 = 0, so the rate identity pins (d^2)' = 2 mu1
        const Jet d2jet = p.decomp.mu[0] * p.decomp.mu[0] + (p.decomp.mu[1] * p.decomp.mu[1]) * e1 +
                          (p.decomp.mu[2] * p.decomp.mu[2]) * double(scan.signs.eps2) +
                          (p.decomp.mu[3] * p.decomp.mu[3]) * double(scan.signs.eps3);
        out.distance_rate_residual =
            std::max(out.distance_rate_residual, std::abs(d2jet[1] - 2.0 * p.decomp.mu[0].value()));
    }
    double q[3] = {};
    if (!gauss_solve(A, b, 3, q)) throw IllConditionedFit("quadratic fit of d^2 is singular");
    out.quad_s2 = q[0];
    out.quad_s1 = q[1];
    out.quad_s0 = q[2];
    for (const GridPoint& p : scan.pts) {
        if (!p.valid) continue;
        const double fit = q[0] * p.s * p.s + q[1] * p.s + q[2];
        out.quad_fit_residual = std::max(out.quad_fit_residual, std::abs(d_squared(p) - fit));
    }
    return out;
}

ScaledRectifyingAudit scaled_rectifying_audit(const Expr& rho, const Curve& beta, int grid,
                                              const ClassifyOptions& opt) {
    ScaledRectifyingAudit out;
    const RectifyingChecks base = rectifying_checks(beta, grid, opt);
    if (!base.applicable) return out;
    out.applicable = true;

    const ArclengthSampler sampler(beta, opt.jet_order);
    const int n = std::max(2, grid);
    for (int i = 0; i < n; ++i) {
        const double s = sampler.s_min() + (sampler.s_max() - sampler.s_min()) * i / (n - 1.0);
        const Jet r = eval_jet(rho, s, 3);
        if (!(r.value() > 0.0)) throw SpecificationError("rho must be positive on the grid");
        const Jet rd = r.derivative();
        const Jet v = sqrt(rd * rd + r * r);
        const Jet rd_over_v = rd / v;
        const Jet r_over_v = r / v;
        const double quad = base.quad_s2 * s * s + base.quad_s1 * s + base.quad_s0;
        const double lin = s + base.c;
        const double residual = r.value() * rd_over_v[1] * quad +
                                (rd_over_v.value() + r_over_v[1] + r_over_v.value()) * lin;
        out.residual.push_back(residual);
        out.max_residual = std::max(out.max_residual, std::abs(residual));
    }
    return out;
}

NormalAudit normal_nonexistence_audit(const Curve& c, int grid, const ClassifyOptions& opt_in) {
    ClassifyOptions opt = opt_in;
    opt.grid = grid;
    const GridScan scan = scan_grid(c, opt);
    NormalAudit out;
    double prev = 0.0;
    bool have_prev = false;
    for (const GridPoint& p : scan.pts) {
        if (!p.valid) continue;
        const double m1 = p.decomp.mu[0].value();
        out.mu1_prime_max_deviation = std::max(out.mu1_prime_max_deviation, std::abs(p.decomp.mu[0][1] - 1.0));
        out.mu1_abs_max = std::max(out.mu1_abs_max, std::abs(m1));
        if (have_prev && prev * m1 < 0.0) ++out.sign_changes;
        prev = m1;
        have_prev = true;
    }
    return out;
}

RectifyingRecipe synthesize_rectifying(const SignTriple& signs, double s0, double s1, double c,
                                       double step) {
    (void)canonical_initial_frame(signs);  // validates the signature
    if (!(s1 > s0)) throw SpecificationError("empty interval");
    const int e23 = signs.eps2 * signs.eps3;
    const bool circular = e23 == 1;  // f'' = -f, f = sin; otherwise f = sinh

    // the pole of kappa must stay outside the closed interval
    if (s0 + c <= 0.0 && s1 + c >= 0.0)
        throw DomainContainsSingularity("s + c vanishes inside the interval");
    // f may vanish at an endpoint (kappa -> 0 there) but not inside
    auto f0 = [&](double s) { return circular ? std::sin(s) : std::sinh(s); };
    for (int i = 1; i < 64; ++i) {
        const double sa = s0 + (s1 - s0) * i / 64.0;
        const double sb = s0 + (s1 - s0) * (i + 1) / 64.0;
        if (f0(sa) == 0.0 || f0(sa) * f0(std::min(sb, s1)) < 0.0)
            throw DomainContainsSingularity("f vanishes inside the interval");
        if (f0(sa) / (sa + c) <= 0.0) throw DomainContainsSingularity("kappa is not positive inside the interval");
    }

    char buf[80];
    std::snprintf(buf, sizeof buf, "%s(s)/(s%+.17g)", circular ? "sin" : "sinh", c);

    RectifyingRecipe recipe;
    recipe.c = c;
    recipe.spec.label = "rectifying";
    recipe.spec.kappa = parse_expression(buf, "s");
    recipe.spec.tau = parse_expression("1", "s");
    recipe.spec.sigma = parse_expression("1", "s");
    recipe.spec.signs = signs;
    recipe.spec.s0 = s0;
    recipe.spec.s1 = s1;
    recipe.spec.step = step;

    // Initial position that zeroes mu2 identically: mu = (s0 + c, 0,
    // e1 e2 f(s0), e1 f'(s0)) in the canonical frame.
    const Frame frame0 = canonical_initial_frame(signs);
    const double f_at = f0(s0);
    const double fp_at = circular ? std::cos(s0) : std::cosh(s0);
    const double mu1 = s0 + c;
    const double mu3 = signs.eps1 * signs.eps2 * f_at;
    const double mu4 = signs.eps1 * fp_at;
    const Vec4 pos = mu1 * frame0.T + mu3 * frame0.B1 + mu4 * frame0.B2;
    recipe.initial_position = Point4{pos.x, pos.y, pos.z, pos.w};
    return recipe;
}

}  // namespace pg4
