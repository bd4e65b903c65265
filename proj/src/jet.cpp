#include "pg4/jet.hpp"

#include <algorithm>
#include <cmath>

namespace pg4 {

namespace {

constexpr double kZeroValueGuard = 1e-300;

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;  // exact in double for k <= 16
}

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
    return b;
}

// Raw derivatives <-> Taylor coefficients.
std::vector<double> to_taylor(const std::vector<double>& d) {
    std::vector<double> a(d.size());
    for (size_t k = 0; k < d.size(); ++k) a[k] = d[k] / factorial(static_cast<int>(k));
    return a;
}

std::vector<double> from_taylor(const std::vector<double>& a) {
    std::vector<double> d(a.size());
    for (size_t k = 0; k < a.size(); ++k) d[k] = a[k] * factorial(static_cast<int>(k));
    return d;
}

// Truncated power-series product of Taylor coefficient vectors.
std::vector<double> series_mul(const std::vector<double>& a, const std::vector<double>& b, size_t n) {
    std::vector<double> c(n, 0.0);
    for (size_t i = 0; i < n && i < a.size(); ++i)
        for (size_t j = 0; i + j < n && j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

std::vector<double> series_div(const std::vector<double>& a, const std::vector<double>& b, size_t n) {
    std::vector<double> c(n, 0.0);
    for (size_t k = 0; k < n; ++k) {
        double acc = k < a.size() ? a[k] : 0.0;
        for (size_t j = 1; j <= k && j < b.size(); ++j) acc -= b[j] * c[k - j];
        c[k] = acc / b[0];
    }
    return c;
}

}  // namespace

Jet::Jet(int order) : d_(static_cast<size_t>(std::clamp(order, 0, kMaxOrder)) + 1, 0.0) {}

Jet Jet::constant(double v, int order) {
    Jet j(order);
    j.d_[0] = v;
    return j;
}

Jet Jet::variable(double v, int order) {
    Jet j(order);
    j.d_[0] = v;
    if (order >= 1) j.d_[1] = 1.0;
    return j;
}

Jet Jet::from_derivatives(std::vector<double> raw) {
    Jet j;
    if (raw.empty()) raw.push_back(0.0);
    j.d_ = std::move(raw);
    return j;
}

Jet Jet::derivative() const {
    Jet r(std::max(order() - 1, 0));
    for (int k = 0; k + 1 <= order() && k <= r.order(); ++k) r.d_[k] = d_[k + 1];
    if (order() == 0) r.d_[0] = 0.0;
    return r;
}

double Jet::derivative_at(int k, double delta) const {
    // Evaluate the k-th derivative of the truncated Taylor polynomial by
    // Horner's rule on the shifted coefficients.
    double acc = 0.0;
    for (int i = order(); i >= k; --i) acc = acc * delta / (i - k + 1) + d_[i];
    return acc;
}

Jet Jet::shifted(double delta, int new_order) const {
    Jet r(std::min(new_order, order()));
    for (int k = 0; k <= r.order(); ++k) r.d_[k] = derivative_at(k, delta);
    return r;
}

Jet Jet::operator-() const {
    Jet r = *this;
    for (double& v : r.d_) v = -v;
    return r;
}

Jet& Jet::operator+=(const Jet& rhs) { return *this = *this + rhs; }
Jet& Jet::operator-=(const Jet& rhs) { return *this = *this - rhs; }

Jet operator+(const Jet& a, const Jet& b) {
    Jet r(std::min(a.order(), b.order()));
    for (int k = 0; k <= r.order(); ++k) r.d_[k] = a.d_[k] + b.d_[k];
    return r;
}

Jet operator-(const Jet& a, const Jet& b) {
    Jet r(std::min(a.order(), b.order()));
    for (int k = 0; k <= r.order(); ++k) r.d_[k] = a.d_[k] - b.d_[k];
    return r;
}

// Leibniz rule on raw derivatives.
Jet operator*(const Jet& a, const Jet& b) {
    Jet r(std::min(a.order(), b.order()));
    for (int k = 0; k <= r.order(); ++k) {
        double acc = 0.0;
        for (int i = 0; i <= k; ++i) acc += binomial(k, i) * a.d_[i] * b.d_[k - i];
        r.d_[k] = acc;
    }
    return r;
}

Jet operator/(const Jet& a, const Jet& b) {
    if (std::abs(b.value()) <= kZeroValueGuard) throw JetDivisionByZero{};
    Jet r(std::min(a.order(), b.order()));
    for (int k = 0; k <= r.order(); ++k) {
        double acc = a.d_[k];
        for (int i = 0; i < k; ++i) acc -= binomial(k, i) * r.d_[i] * b.d_[k - i];
        r.d_[k] = acc / b.d_[0];
    }
    return r;
}

Jet operator+(const Jet& a, double c) {
    Jet r = a;
    r.d_[0] += c;
    return r;
}

Jet operator*(const Jet& a, double c) {
    Jet r = a;
    for (double& v : r.d_) v *= c;
    return r;
}

Jet operator/(double c, const Jet& a) {
    return Jet::constant(c, a.order()) / a;
}

namespace {

// sin/cos and sinh/cosh share the coupled first-order recurrence; `sign`
// is -1 for circular, +1 for hyperbolic.
std::pair<Jet, Jet> sincos_pair(const Jet& arg, double s0, double c0, double sign) {
    const size_t n = static_cast<size_t>(arg.order()) + 1;
    const std::vector<double> a = to_taylor(arg.raw());
    std::vector<double> s(n, 0.0), c(n, 0.0);
    s[0] = s0;
    c[0] = c0;
    for (size_t k = 1; k < n; ++k) {
        double sa = 0.0, ca = 0.0;
        for (size_t j = 1; j <= k; ++j) {
            sa += j * a[j] * c[k - j];
            ca += j * a[j] * s[k - j];
        }
        s[k] = sa / static_cast<double>(k);
        c[k] = sign * ca / static_cast<double>(k);
    }
    return {Jet::from_derivatives(from_taylor(s)), Jet::from_derivatives(from_taylor(c))};
}

}  // namespace

Jet sin(const Jet& a) { return sincos_pair(a, std::sin(a.value()), std::cos(a.value()), -1.0).first; }
Jet cos(const Jet& a) { return sincos_pair(a, std::sin(a.value()), std::cos(a.value()), -1.0).second; }
Jet sinh(const Jet& a) { return sincos_pair(a, std::sinh(a.value()), std::cosh(a.value()), 1.0).first; }
Jet cosh(const Jet& a) { return sincos_pair(a, std::sinh(a.value()), std::cosh(a.value()), 1.0).second; }

Jet exp(const Jet& arg) {
    const size_t n = static_cast<size_t>(arg.order()) + 1;
    const std::vector<double> a = to_taylor(arg.raw());
    std::vector<double> b(n, 0.0);
    b[0] = std::exp(a[0]);
    for (size_t k = 1; k < n; ++k) {
        double acc = 0.0;
        for (size_t j = 1; j <= k; ++j) acc += j * a[j] * b[k - j];
        b[k] = acc / static_cast<double>(k);
    }
    return Jet::from_derivatives(from_taylor(b));
}

Jet log(const Jet& arg) {
    if (!(arg.value() > 0.0)) throw JetDomainError{"log of a jet with non-positive value"};
    const size_t n = static_cast<size_t>(arg.order()) + 1;
    const std::vector<double> a = to_taylor(arg.raw());
    std::vector<double> da(n, 0.0);
    for (size_t k = 0; k + 1 < n; ++k) da[k] = (k + 1) * a[k + 1];
    const std::vector<double> q = series_div(da, a, n);  // (log a)' = a'/a
    std::vector<double> b(n, 0.0);
    b[0] = std::log(a[0]);
    for (size_t k = 1; k < n; ++k) b[k] = q[k - 1] / static_cast<double>(k);
    return Jet::from_derivatives(from_taylor(b));
}

Jet sqrt(const Jet& arg) {
    if (!(arg.value() > 0.0)) throw JetDomainError{"sqrt of a jet with non-positive value"};
    const size_t n = static_cast<size_t>(arg.order()) + 1;
    const std::vector<double> a = to_taylor(arg.raw());
    std::vector<double> b(n, 0.0);
    b[0] = std::sqrt(a[0]);
    for (size_t k = 1; k < n; ++k) {
        double acc = a[k];
        for (size_t j = 1; j < k; ++j) acc -= b[j] * b[k - j];
        b[k] = acc / (2.0 * b[0]);
    }
    return Jet::from_derivatives(from_taylor(b));
}

Jet pow_int(const Jet& a, long n) {
    if (n == 0) return Jet::constant(1.0, a.order());
    if (n < 0) return Jet::constant(1.0, a.order()) / pow_int(a, -n);
    Jet acc = Jet::constant(1.0, a.order());
    Jet base = a;
    long e = n;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

Jet pow_real(const Jet& arg, double r) {
    if (!(arg.value() > 0.0)) throw JetDomainError{"non-integer power of a jet with non-positive value"};
    const size_t n = static_cast<size_t>(arg.order()) + 1;
    const std::vector<double> a = to_taylor(arg.raw());
    std::vector<double> b(n, 0.0);
    b[0] = std::pow(a[0], r);
    for (size_t k = 1; k < n; ++k) {
        double acc = 0.0;
        for (size_t j = 1; j <= k; ++j) acc += ((r + 1.0) * j - static_cast<double>(k)) * a[j] * b[k - j];
        b[k] = acc / (static_cast<double>(k) * a[0]);
    }
    return Jet::from_derivatives(from_taylor(b));
}

Jet compose(const Jet& f, const Jet& g) {
    const size_t n = static_cast<size_t>(std::min(f.order(), g.order())) + 1;
    const std::vector<double> a = to_taylor(f.raw());
    std::vector<double> u = to_taylor(g.raw());
    u[0] = 0.0;  // inner increment g - g(s0); f is expanded at g(s0)
    // Horner in series space.
    std::vector<double> h(n, 0.0);
    h[0] = a.size() >= n ? a[n - 1] : 0.0;
    for (int k = static_cast<int>(n) - 2; k >= 0; --k) {
        h = series_mul(h, u, n);
        h[0] += a[k];
    }
    return Jet::from_derivatives(from_taylor(h));
}

Jet series_revert(const Jet& x, double t0) {
    if (x.order() < 1 || std::abs(x[1]) < 1e-8)
        throw NotAdmissible{"cannot invert a function with vanishing first derivative"};
    const int K = x.order();
    const double s0 = x.value();
    const Jet identity = Jet::variable(s0, K);

    // x' padded back to order K; the padding only influences coefficients
    // beyond the truncation order of the Newton correction.
    std::vector<double> dp = x.derivative().raw();
    dp.resize(static_cast<size_t>(K) + 1, 0.0);
    const Jet xprime = Jet::from_derivatives(std::move(dp));

    Jet t(K);
    t[0] = t0;
    t[1] = 1.0 / x[1];
    for (int it = 0; it < K; ++it) {
        const Jet residual = compose(x, t) - identity;
        t = t - residual / compose(xprime, t);
        t[0] = t0;  // the value is exact by construction
    }
    return t;
}

FdDerivatives fd_derivatives(const std::function<double(double)>& f, double s, int order, double h) {
    order = std::clamp(order, 0, 5);

    // Central O(h^2) stencils for derivatives 1..5, offsets -3..3.
    static const double stencil[5][7] = {
        {0, 0, -0.5, 0, 0.5, 0, 0},
        {0, 0, 1, -2, 1, 0, 0},
        {0, -0.5, 1, 0, -1, 0.5, 0},
        {0, 1, -4, 6, -4, 1, 0},
        {-0.5, 2, -2.5, 0, 2.5, -2, 0.5},
    };

    auto apply = [&](int k, double step) {
        double acc = 0.0;
        for (int i = -3; i <= 3; ++i) {
            const double c = stencil[k - 1][i + 3];
            if (c != 0.0) acc += c * f(s + i * step);
        }
        return acc / std::pow(step, k);
    };

    FdDerivatives out;
    out.value.assign(static_cast<size_t>(order) + 1, 0.0);
    out.error.assign(static_cast<size_t>(order) + 1, 0.0);
    out.value[0] = f(s);
    for (int k = 1; k <= order; ++k) {
        const double coarse = apply(k, h);
        const double fine = apply(k, h / 2.0);
        out.value[k] = (4.0 * fine - coarse) / 3.0;  // one Richardson step
        out.error[k] = std::abs(fine - coarse) / 3.0;
    }
    return out;
}

}  // namespace pg4
