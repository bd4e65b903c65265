#include "pg4/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "pg4/errors.hpp"

namespace pg4 {

namespace {

std::string format_const(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// 12 isotropic frame components (T,N,B1,B2 in order, y/z/w each) plus 3
// isotropic position components.
struct State {
    double v[15];
};

State axpy(const State& a, double h, const State& d) {
    State r;
    for (int i = 0; i < 15; ++i) r.v[i] = a.v[i] + h * d.v[i];
    return r;
}

}  // namespace

CurvatureSpec constant_curvature_spec(double kappa, double tau, double sigma, SignTriple signs,
                                      double s0, double s1, double step) {
    CurvatureSpec spec;
    spec.label = "wcurve(" + format_const(kappa) + "," + format_const(tau) + "," + format_const(sigma) + ")";
    spec.kappa = parse_expression(format_const(kappa), "s");
    spec.tau = parse_expression(format_const(tau), "s");
    spec.sigma = parse_expression(format_const(sigma), "s");
    spec.signs = signs;
    spec.s0 = s0;
    spec.s1 = s1;
    spec.step = step;
    return spec;
}

Frame canonical_initial_frame(const SignTriple& signs) {
    const int negatives = (signs.eps1 == -1) + (signs.eps2 == -1) + (signs.eps3 == -1);
    if (negatives != 1)
        throw InconsistentSignature(
            "the isotropic slice is Minkowski: exactly one of eps1, eps2, eps3 must be -1");

    const Vec4 axes[3] = {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};  // y timelike, z, w spacelike
    const int eps[3] = {signs.eps1, signs.eps2, signs.eps3};

    Frame f;
    f.T = {1, 0, 0, 0};
    int next_spacelike = 1;
    for (int i = 0; i < 3; ++i) f[i + 1] = eps[i] == -1 ? axes[0] : axes[next_spacelike++];
    if (det4(f.T, f.N, f.B1, f.B2) < 0.0) f.B2 = -f.B2;
    return f;
}

double gram_residual(const Frame& f, const SignTriple& signs) {
    const double target[4] = {1.0, static_cast<double>(signs.eps1), static_cast<double>(signs.eps2),
                              static_cast<double>(signs.eps3)};
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            const double want = i == j ? target[i] : 0.0;
            worst = std::max(worst, std::abs(dot(f[i], f[j]) - want));
        }
    return worst;
}

namespace {

void renormalize_frame(Frame& f, const SignTriple& signs) {
    // Minkowski Gram-Schmidt on the isotropic triple; T needs no fixing
    // because its Gram entries are structural.
    const double eps[3] = {static_cast<double>(signs.eps1), static_cast<double>(signs.eps2),
                           static_cast<double>(signs.eps3)};
    Vec4* v[3] = {&f.N, &f.B1, &f.B2};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < i; ++j) *v[i] = *v[i] - (iso_polar(*v[i], *v[j]) / eps[j]) * *v[j];
        const double q = iso_form(*v[i]);
        *v[i] = (1.0 / std::sqrt(std::abs(q))) * *v[i];
    }
}

}  // namespace

FramePath integrate_frenet(const CurvatureSpec& spec, const Frame& frame0, const Point4& point0,
                           bool renormalize) {
    if (!spec.kappa || !spec.tau || !spec.sigma) throw SpecificationError("curvature functions missing");
    if (!(spec.s1 > spec.s0)) throw SpecificationError("empty integration interval");
    const double span = spec.s1 - spec.s0;
    if (!(spec.step > 0.0) || spec.step > span / 10.0 + 1e-15)
        throw SpecificationError("step must be positive and at most a tenth of the interval");
    if (gram_residual(frame0, spec.signs) > 1e-12)
        throw SpecificationError("initial frame does not satisfy the Gram conditions");
    if (frame0.T.x != 1.0 || frame0.N.x != 0.0 || frame0.B1.x != 0.0 || frame0.B2.x != 0.0)
        throw SpecificationError("initial frame first components must be (1,0,0,0)");

    // kappa and tau must not go negative; endpoint zeros are tolerated
    // (synthesized curvature families hit them).
    for (int i = 0; i <= 16; ++i) {
        const double s = spec.s0 + span * i / 16.0;
        if (eval_value(*spec.kappa, s) < 0.0 || eval_value(*spec.tau, s) < 0.0)
            throw SpecificationError("kappa and tau must be nonnegative on the domain");
    }

    const long n = std::max<long>(10, std::lround(span / spec.step));
    const double h = span / static_cast<double>(n);
    const double e1 = spec.signs.eps1, e2 = spec.signs.eps2, e3 = spec.signs.eps3;

    auto rhs = [&](double s, const State& u) {
        const double k = eval_value(*spec.kappa, s);
        const double t = eval_value(*spec.tau, s);
        const double sg = eval_value(*spec.sigma, s);
        State d;
        for (int i = 0; i < 3; ++i) {
            const double N = u.v[3 + i], B1 = u.v[6 + i], B2 = u.v[9 + i];
            d.v[0 + i] = k * N;
            d.v[3 + i] = t * B1;
            d.v[6 + i] = -e1 * e2 * t * N + e3 * sg * B2;
            d.v[9 + i] = -e2 * sg * B1;
            d.v[12 + i] = u.v[0 + i];  // position follows T
        }
        return d;
    };

    State u;
    for (int i = 0; i < 3; ++i) {
        u.v[0 + i] = frame0.T[1 + i];
        u.v[3 + i] = frame0.N[1 + i];
        u.v[6 + i] = frame0.B1[1 + i];
        u.v[9 + i] = frame0.B2[1 + i];
        u.v[12 + i] = (&point0.y)[i];
    }

    FramePath path;
    path.spec = spec;
    path.s.reserve(n + 1);

    auto record = [&](double s, const State& st) {
        Frame f;
        f.T = {1.0, st.v[0], st.v[1], st.v[2]};
        f.N = {0.0, st.v[3], st.v[4], st.v[5]};
        f.B1 = {0.0, st.v[6], st.v[7], st.v[8]};
        f.B2 = {0.0, st.v[9], st.v[10], st.v[11]};
        const double res = gram_residual(f, spec.signs);
        if (res > 1e-6)
            throw StepTooLarge("frame Gram residual " + std::to_string(res) +
                               " exceeds 1e-6; reduce the step");
        path.s.push_back(s);
        path.position.push_back({point0.x + (s - spec.s0), st.v[12], st.v[13], st.v[14]});
        path.frame.push_back(f);
        path.gram_residual.push_back(res);
        path.max_gram_residual = std::max(path.max_gram_residual, res);
    };

    record(spec.s0, u);
    for (long i = 0; i < n; ++i) {
        const double s = spec.s0 + h * static_cast<double>(i);
        const State k1 = rhs(s, u);
        const State k2 = rhs(s + 0.5 * h, axpy(u, 0.5 * h, k1));
        const State k3 = rhs(s + 0.5 * h, axpy(u, 0.5 * h, k2));
        const State k4 = rhs(s + h, axpy(u, h, k3));
        for (int j = 0; j < 15; ++j)
            u.v[j] += h / 6.0 * (k1.v[j] + 2.0 * k2.v[j] + 2.0 * k3.v[j] + k4.v[j]);
        if (renormalize) {
            Frame f;
            f.T = {1.0, u.v[0], u.v[1], u.v[2]};
            f.N = {0.0, u.v[3], u.v[4], u.v[5]};
            f.B1 = {0.0, u.v[6], u.v[7], u.v[8]};
            f.B2 = {0.0, u.v[9], u.v[10], u.v[11]};
            renormalize_frame(f, spec.signs);
            for (int c = 0; c < 3; ++c) {
                u.v[3 + c] = f.N[1 + c];
                u.v[6 + c] = f.B1[1 + c];
                u.v[9 + c] = f.B2[1 + c];
            }
        }
        record(spec.s0 + h * static_cast<double>(i + 1), u);
    }
    return path;
}

std::array<double, 4> position_components(const FramePath& path, size_t node) {
    const Frame& f = path.frame[node];
    const Point4& p = path.position[node];
    const Vec4 alpha{p.x, p.y, p.z, p.w};
    const double m1 = alpha.x;
    const Vec4 rest = alpha - m1 * f.T;  // isotropic
    return {m1, iso_polar(rest, f.N) / path.spec.signs.eps1, iso_polar(rest, f.B1) / path.spec.signs.eps2,
            iso_polar(rest, f.B2) / path.spec.signs.eps3};
}

namespace {

// Raw-derivative Leibniz term: (a b)^(m) from derivative arrays.
double leibniz(const std::vector<double>& a, const std::vector<double>& b, int m) {
    double acc = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= m; ++i) {
        acc += binom * a[i] * b[m - i];
        binom = binom * (m - i) / (i + 1);
    }
    return acc;
}

}  // namespace

TabulatedCurve::TabulatedCurve(const FramePath& path) {
    if (path.s.size() < 7) throw InsufficientSamples("tabulated curve needs at least 7 nodes");
    label_ = path.spec.label;
    // Parametrize by the absolute coordinate of the position, which is the
    // arclength; it differs from the integration parameter by the constant
    // x offset of the initial point.
    s_.reserve(path.s.size());
    for (const Point4& p : path.position) s_.push_back(p.x);
    node_.reserve(s_.size());

    const double e1 = path.spec.signs.eps1, e2 = path.spec.signs.eps2, e3 = path.spec.signs.eps3;
    constexpr int frame_order = 5;

    for (size_t idx = 0; idx < s_.size(); ++idx) {
        // curvature expressions live in the integration parameter
        const Jet kj = eval_jet(*path.spec.kappa, path.s[idx], frame_order);
        const Jet tj = eval_jet(*path.spec.tau, path.s[idx], frame_order);
        const Jet gj = eval_jet(*path.spec.sigma, path.s[idx], frame_order);

        // Frame component derivative arrays grown order by order from the
        // frame equations: T' = kN, N' = tB1, B1' = -e1e2 tN + e3 gB2,
        // B2' = -e2 gB1.
        std::vector<double> T[3], N[3], B1[3], B2[3];
        for (int c = 0; c < 3; ++c) {
            T[c].assign(frame_order + 1, 0.0);
            N[c].assign(frame_order + 1, 0.0);
            B1[c].assign(frame_order + 1, 0.0);
            B2[c].assign(frame_order + 1, 0.0);
            T[c][0] = path.frame[idx].T[1 + c];
            N[c][0] = path.frame[idx].N[1 + c];
            B1[c][0] = path.frame[idx].B1[1 + c];
            B2[c][0] = path.frame[idx].B2[1 + c];
        }
        for (int m = 0; m < frame_order; ++m) {
            for (int c = 0; c < 3; ++c) {
                T[c][m + 1] = leibniz(kj.raw(), N[c], m);
                N[c][m + 1] = leibniz(tj.raw(), B1[c], m);
                B1[c][m + 1] = -e1 * e2 * leibniz(tj.raw(), N[c], m) + e3 * leibniz(gj.raw(), B2[c], m);
                B2[c][m + 1] = -e2 * leibniz(gj.raw(), B1[c], m);
            }
        }

        std::array<Jet, 3> jets;
        for (int c = 0; c < 3; ++c) {
            std::vector<double> d(frame_order + 2, 0.0);
            d[0] = (&path.position[idx].y)[c];
            for (int k = 0; k <= frame_order; ++k) d[k + 1] = T[c][k];
            jets[c] = Jet::from_derivatives(std::move(d));
        }
        node_.push_back(jets);
    }
}

size_t TabulatedCurve::nearest_node(double t) const {
    const auto it = std::lower_bound(s_.begin(), s_.end(), t);
    if (it == s_.begin()) return 0;
    if (it == s_.end()) return s_.size() - 1;
    const size_t hi = static_cast<size_t>(it - s_.begin());
    return (t - s_[hi - 1] <= s_[hi] - t) ? hi - 1 : hi;
}

std::array<Jet, 4> TabulatedCurve::coordinate_jets(double t, int order) const {
    const size_t idx = nearest_node(t);
    const double delta = t - s_[idx];
    const int ord = std::min(order, node_[idx][0].order());
    return {Jet::variable(t, order), node_[idx][0].shifted(delta, ord), node_[idx][1].shifted(delta, ord),
            node_[idx][2].shifted(delta, ord)};
}

TabulatedCurve sample_to_curvedef(const FramePath& path) { return TabulatedCurve(path); }

}  // namespace pg4
