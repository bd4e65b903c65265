#include "pg4/frenet.hpp"

#include <algorithm>
#include <cmath>

#include "pg4/errors.hpp"

namespace pg4 {

namespace {

using JetVec = std::array<Jet, 4>;

// Minkowski product on the isotropic slice; valid whenever at least one
// argument has an identically zero first component.
Jet iso_dot(const JetVec& a, const JetVec& b) {
    return -(a[1] * b[1]) + a[2] * b[2] + a[3] * b[3];
}

JetVec shift_all(const JetVec& a) {
    return {a[0].derivative(), a[1].derivative(), a[2].derivative(), a[3].derivative()};
}

Vec4 values(const JetVec& a) {
    return {a[0].value(), a[1].value(), a[2].value(), a[3].value()};
}

Vec4 derivative_values(const JetVec& a) {
    return {a[0].derivative_at(1, 0.0), a[1].derivative_at(1, 0.0), a[2].derivative_at(1, 0.0),
            a[3].derivative_at(1, 0.0)};
}

JetVec scaled(const JetVec& a, const Jet& c) {
    return {a[0] * c, a[1] * c, a[2] * c, a[3] * c};
}

JetVec divided(const JetVec& a, const Jet& c) {
    return {a[0] / c, a[1] / c, a[2] / c, a[3] / c};
}

JetVec added(const JetVec& a, const JetVec& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

// Ternary cross product on jet vectors, first-row branch chosen from the
// component values exactly as in the scalar version.
JetVec cross3_jets(const JetVec& u, const JetVec& v, const JetVec& w) {
    using detail::first_row_minor;
    const bool first_branch = u[0].value() != 0.0 || v[0].value() != 0.0 || w[0].value() != 0.0;
    const int ord = std::min({u[1].order(), v[1].order(), w[1].order()});
    const Jet zero = Jet::constant(0.0, ord);
    if (first_branch) {
        return {zero, first_row_minor<JetVec, Jet>(u, v, w, 1), first_row_minor<JetVec, Jet>(u, v, w, 2),
                -first_row_minor<JetVec, Jet>(u, v, w, 3)};
    }
    return {-first_row_minor<JetVec, Jet>(u, v, w, 0), -first_row_minor<JetVec, Jet>(u, v, w, 1),
            first_row_minor<JetVec, Jet>(u, v, w, 2), -first_row_minor<JetVec, Jet>(u, v, w, 3)};
}

int min_order(const std::array<Jet, 4>& coord) {
    return std::min({coord[0].order(), coord[1].order(), coord[2].order(), coord[3].order()});
}

}  // namespace

Vec4 FrameJets::frame_value(int which) const {
    const JetVec* v[4] = {&T, &N, &B1, &B2};
    return values(*v[which]);
}

Vec4 FrameJets::frame_derivative(int which) const {
    const JetVec* v[4] = {&T, &N, &B1, &B2};
    return derivative_values(*v[which]);
}

ArclengthJets reparametrize_by_arclength(const Curve& c, double t0, int order) {
    const std::array<Jet, 4> j = c.coordinate_jets(t0, order);
    if (j[0].order() < 1 || std::abs(j[0][1]) < 1e-8)
        throw NotAdmissible("curve has x'(t) ~ 0 at t = " + std::to_string(t0));
    const Jet t_of_s = series_revert(j[0], t0);
    ArclengthJets out;
    out.s = j[0].value();
    out.coord[0] = Jet::variable(out.s, order);
    for (int i = 1; i < 4; ++i) out.coord[i] = compose(j[i], t_of_s);
    return out;
}

ArclengthSampler::ArclengthSampler(const Curve& c, int order) : curve_(c), order_(order) {
    const double a = c.domain_min();
    const double b = c.domain_max();
    identity_x_ = true;
    for (double t : {a, 0.5 * (a + b), b}) {
        const Jet x = c.coordinate_jets(t, 2)[0];
        if (std::abs(x.value() - t) > 1e-12 * std::max(1.0, std::abs(t)) || std::abs(x[1] - 1.0) > 1e-12 ||
            std::abs(x[2]) > 1e-12) {
            identity_x_ = false;
            break;
        }
    }
    const double xa = c.coordinate_jets(a, 0)[0].value();
    const double xb = c.coordinate_jets(b, 0)[0].value();
    if (xa == xb) throw NotAdmissible("x(t) is not monotone over the domain");
    increasing_ = xb > xa;
    s_min_ = std::min(xa, xb);
    s_max_ = std::max(xa, xb);
}

double ArclengthSampler::param_for_arclength(double s) const {
    s = std::clamp(s, s_min_, s_max_);
    if (identity_x_) return s;
    // safeguarded Newton on x(t) = s; [ta, tb] brackets the root in
    // parameter order, x(ta) on the same side of s as x(domain_min)
    double ta = curve_.domain_min();
    double tb = curve_.domain_max();
    const bool low_side_positive = !increasing_;  // sign of x(ta) - s
    double t = 0.5 * (ta + tb);
    for (int it = 0; it < 120; ++it) {
        const Jet x = curve_.coordinate_jets(t, 1)[0];
        const double f = x.value() - s;
        if (std::abs(f) <= 4e-16 * std::max(1.0, std::abs(s))) return t;
        if ((f > 0.0) == low_side_positive)
            ta = t;
        else
            tb = t;
        if (std::abs(x[1]) < 1e-8) throw NotAdmissible("x'(t) ~ 0 while inverting arclength");
        double next = t - f / x[1];
        if (!(next >= std::min(ta, tb) && next <= std::max(ta, tb))) next = 0.5 * (ta + tb);
        t = next;
    }
    return t;
}

ArclengthJets ArclengthSampler::sample(double s) const {
    return reparametrize_by_arclength(curve_, param_for_arclength(s), order_);
}

FrameJets frame_jets(const ArclengthJets& c, const Tolerances& tol) {
    const int K = min_order(c.coord);
    if (K < 5) throw Error("frenet apparatus needs coordinate jets of order >= 5");
    const Jet& x = c.coord[0];
    if (std::abs(x[1] - 1.0) > 1e-9 || std::abs(x[2]) > 1e-9)
        throw NotAdmissible("coordinate jets are not in arclength form");

    FrameJets f;
    f.s = c.s;

    f.T[0] = Jet::constant(1.0, K - 1);
    for (int i = 1; i < 4; ++i) f.T[i] = c.coord[i].derivative();

    JetVec Tdot = shift_all(f.T);
    Tdot[0] = Jet::constant(0.0, K - 2);

    const Jet qN = iso_dot(Tdot, Tdot);
    const Vec4 tv = values(Tdot);
    const double t_mag2 = tv.y * tv.y + tv.z * tv.z + tv.w * tv.w;
    if (t_mag2 <= tol.curvature * tol.curvature)
        throw DegenerateFirstCurvature("kappa ~ 0 (alpha'' vanishes) at s = " + std::to_string(c.s));
    if (std::abs(qN.value()) < tol.unit * t_mag2)
        throw LightlikeFrameVector("principal normal is lightlike at s = " + std::to_string(c.s));
    f.signs.eps1 = qN.value() > 0.0 ? 1 : -1;
    f.kappa = sqrt(qN * static_cast<double>(f.signs.eps1));
    if (f.kappa.value() < tol.curvature)
        throw DegenerateFirstCurvature("kappa below tolerance at s = " + std::to_string(c.s));

    f.N[0] = Jet::constant(0.0, K - 2);
    for (int i = 1; i < 4; ++i) f.N[i] = Tdot[i] / f.kappa;

    const JetVec Ndot = shift_all(f.N);
    const Jet qB = iso_dot(Ndot, Ndot);
    const Vec4 nv = values(Ndot);
    const double n_mag2 = nv.y * nv.y + nv.z * nv.z + nv.w * nv.w;
    if (n_mag2 <= tol.curvature * tol.curvature)
        throw DegenerateTorsion("tau ~ 0 (N' vanishes) at s = " + std::to_string(c.s));
    if (std::abs(qB.value()) < tol.unit * n_mag2)
        throw LightlikeFrameVector("first binormal is lightlike at s = " + std::to_string(c.s));
    f.signs.eps2 = qB.value() > 0.0 ? 1 : -1;
    f.tau = sqrt(qB * static_cast<double>(f.signs.eps2));
    if (f.tau.value() < tol.curvature)
        throw DegenerateTorsion("tau below tolerance at s = " + std::to_string(c.s));

    for (int i = 0; i < 4; ++i) f.B1[i] = Ndot[i] / f.tau;

    const JetVec crossed = cross3_jets(f.T, f.N, f.B1);
    const double det = det4(values(f.T), values(f.N), values(f.B1), values(crossed));
    if (std::abs(det) < tol.unit)
        throw LightlikeFrameVector("frame is degenerate (det ~ 0) at s = " + std::to_string(c.s));
    f.signs.mu = det > 0.0 ? 1 : -1;
    for (int i = 0; i < 4; ++i) f.B2[i] = crossed[i] * static_cast<double>(f.signs.mu);

    const double qB2 = iso_form(values(f.B2));
    if (std::abs(qB2) < tol.unit)
        throw LightlikeFrameVector("second binormal is lightlike at s = " + std::to_string(c.s));
    f.signs.eps3 = qB2 > 0.0 ? 1 : -1;

    const JetVec B1dot = shift_all(f.B1);
    f.sigma = iso_dot(B1dot, f.B2);

    f.paper_eps2_consistent = f.signs.eps2 == -f.signs.eps1;
    const int eps3_rule = (f.signs.eps1 == -1 || f.signs.eps2 == -1) ? 1 : -1;
    f.paper_eps3_consistent = f.signs.eps3 == eps3_rule;
    return f;
}

FrenetApparatus frenet_apparatus(const FrameJets& f) {
    FrenetApparatus a;
    a.s = f.s;
    a.T = values(f.T);
    a.N = values(f.N);
    a.B1 = values(f.B1);
    a.B2 = values(f.B2);
    a.kappa = f.kappa.value();
    a.tau = f.tau.value();
    a.sigma = f.sigma.value();
    a.signs = f.signs;
    a.paper_eps2_consistent = f.paper_eps2_consistent;
    a.paper_eps3_consistent = f.paper_eps3_consistent;
    return a;
}

FrenetApparatus frenet_apparatus(const ArclengthJets& c, const Tolerances& tol) {
    return frenet_apparatus(frame_jets(c, tol));
}

FrenetMatrixResult frenet_matrix(const FrameJets& f) {
    FrenetMatrixResult r;
    const double eps[4] = {1.0, static_cast<double>(f.signs.eps1), static_cast<double>(f.signs.eps2),
                           static_cast<double>(f.signs.eps3)};
    Vec4 value[4], deriv[4];
    for (int i = 0; i < 4; ++i) {
        value[i] = f.frame_value(i);
        deriv[i] = f.frame_derivative(i);
    }
    for (int i = 0; i < 4; ++i) {
        r.A[i][0] = deriv[i].x;
        for (int j = 1; j < 4; ++j) r.A[i][j] = iso_polar(deriv[i], value[j]) / eps[j];
    }

    // Printed template with the runtime signs substituted.
    const double k = f.kappa.value(), t = f.tau.value(), s = f.sigma.value();
    double tmpl[4][4] = {};
    tmpl[0][1] = eps[1] * k;
    tmpl[1][2] = eps[2] * t;
    tmpl[2][1] = -eps[2] * t;
    tmpl[2][3] = eps[3] * s;
    tmpl[3][2] = -eps[2] * s;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r.pattern_residual = std::max(r.pattern_residual, std::abs(r.A[i][j] - tmpl[i][j]));

    for (int i = 1; i < 4; ++i) {
        r.first_column_max = std::max(r.first_column_max, std::abs(r.A[i][0]));
        for (int j = 1; j < 4; ++j)
            r.skew_residual = std::max(r.skew_residual, std::abs(eps[j] * r.A[i][j] + eps[i] * r.A[j][i]));
    }
    r.first_column_max = std::max(r.first_column_max, std::abs(r.A[0][0]));
    return r;
}

PositionDecomposition decompose_position(const FrameJets& f, const ArclengthJets& c) {
    PositionDecomposition d;
    d.s = f.s;

    // mu1 is the absolute coordinate; the remaining components are metric
    // projections of the isotropic part onto N, B1, B2.
    d.mu[0] = c.coord[0];
    JetVec rest;
    rest[0] = Jet::constant(0.0, std::min(c.coord[0].order(), f.T[1].order()));
    for (int i = 1; i < 4; ++i) rest[i] = c.coord[i] - c.coord[0] * f.T[i];
    d.mu[1] = iso_dot(rest, f.N) * static_cast<double>(f.signs.eps1);
    d.mu[2] = iso_dot(rest, f.B1) * static_cast<double>(f.signs.eps2);
    d.mu[3] = iso_dot(rest, f.B2) * static_cast<double>(f.signs.eps3);

    const double e1 = f.signs.eps1, e2 = f.signs.eps2, e3 = f.signs.eps3;
    const double k = f.kappa.value(), t = f.tau.value(), s = f.sigma.value();
    const double m1 = d.mu[0].value(), m2 = d.mu[1].value(), m3 = d.mu[2].value(), m4 = d.mu[3].value();
    const double m1p = d.mu[0][1], m2p = d.mu[1][1], m3p = d.mu[2][1], m4p = d.mu[3][1];

    d.residual_runtime[0] = m1p - 1.0;
    d.residual_runtime[1] = m1 * k + m2p - e1 * e2 * t * m3;
    d.residual_runtime[2] = m2 * t + m3p - e2 * s * m4;
    d.residual_runtime[3] = e3 * s * m3 + m4p;

    d.residual_paper[0] = m1p - 1.0;
    d.residual_paper[1] = e1 * k * m1 + m2p - e2 * t * m3;
    d.residual_paper[2] = e2 * t * m2 + m3p - e2 * s * m4;
    d.residual_paper[3] = e3 * s * m3 + m4p;

    for (int i = 0; i < 4; ++i) {
        const double rebuilt = d.mu[0].value() * f.T[i].value() + d.mu[1].value() * f.N[i].value() +
                               d.mu[2].value() * f.B1[i].value() + d.mu[3].value() * f.B2[i].value();
        d.reconstruction_error = std::max(d.reconstruction_error, std::abs(rebuilt - c.coord[i].value()));
    }
    return d;
}

Vec4 fourth_order_residual(const FrameJets& f, SignConvention convention, const Tolerances& tol) {
    if (std::abs(f.sigma.value()) < tol.curvature)
        throw DegenerateThirdCurvature("sigma ~ 0 at s = " + std::to_string(f.s));
    if (f.tau.value() < tol.curvature) throw DegenerateTorsion("tau ~ 0 at s = " + std::to_string(f.s));

    const double e1 = f.signs.eps1, e2 = f.signs.eps2, e3 = f.signs.eps3;

    JetVec Tdot = shift_all(f.T);
    Tdot[0] = Jet::constant(0.0, std::max(f.T[1].order() - 1, 0));

    if (convention == SignConvention::RuntimeSigns) {
        // N = T'/kappa, B1 = N'/tau, B2 = (B1' + e1 e2 tau N)/(e3 sigma),
        // and the identity is B2' + e2 sigma B1 = 0.
        const JetVec F = divided(Tdot, f.kappa);
        const JetVec G = divided(shift_all(F), f.tau);
        const JetVec H = divided(added(shift_all(G), scaled(F, f.tau * (e1 * e2))), f.sigma * e3);
        const JetVec R = added(shift_all(H), scaled(G, f.sigma * e2));
        return values(R);
    }

    // Printed form, signs verbatim.
    const JetVec F = divided(Tdot, f.kappa * e1);
    const JetVec G = divided(shift_all(F), f.tau * e2);
    const JetVec H = divided(added(shift_all(G), scaled(F, f.tau * e2)), f.sigma * e2);
    const JetVec R = added(shift_all(H), scaled(shift_all(F), f.sigma / f.tau));
    return values(R);
}

}  // namespace pg4
