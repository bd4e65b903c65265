#pragma once

#include <functional>
#include <vector>

#include "pg4/errors.hpp"

namespace pg4 {

/// Truncated Taylor expansion of one scalar function of one variable,
/// stored as raw derivatives d[k] = f^(k) at the expansion point (d[0] is
/// the value). Arithmetic on jets of unequal order truncates to the
/// smaller order.
class Jet {
  public:
    static constexpr int kMaxOrder = 16;

    Jet() : d_(1, 0.0) {}
    explicit Jet(int order);

    static Jet constant(double v, int order);
    /// The identity function at v: d = [v, 1, 0, ...].
    static Jet variable(double v, int order);
    static Jet from_derivatives(std::vector<double> raw);

    int order() const { return static_cast<int>(d_.size()) - 1; }
    double value() const { return d_[0]; }
    double operator[](int k) const { return d_[k]; }
    double& operator[](int k) { return d_[k]; }
    const std::vector<double>& raw() const { return d_; }

    /// Jet of f', one order lower.
    Jet derivative() const;

    /// Value of the k-th derivative of the truncated expansion at the
    /// offset point s0 + delta.
    double derivative_at(int k, double delta) const;

    /// Whole jet re-expanded at s0 + delta (order drops to new_order).
    Jet shifted(double delta, int new_order) const;

    Jet operator-() const;
    Jet& operator+=(const Jet& rhs);
    Jet& operator-=(const Jet& rhs);

    friend Jet operator+(const Jet& a, const Jet& b);
    friend Jet operator-(const Jet& a, const Jet& b);
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);

    friend Jet operator+(const Jet& a, double c);
    friend Jet operator+(double c, const Jet& a) { return a + c; }
    friend Jet operator-(const Jet& a, double c) { return a + (-c); }
    friend Jet operator-(double c, const Jet& a) { return -a + c; }
    friend Jet operator*(const Jet& a, double c);
    friend Jet operator*(double c, const Jet& a) { return a * c; }
    friend Jet operator/(const Jet& a, double c) { return a * (1.0 / c); }
    friend Jet operator/(double c, const Jet& a);

  private:
    std::vector<double> d_;
};

Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);   // requires a.value() > 0
Jet sqrt(const Jet& a);  // requires a.value() > 0
Jet pow_int(const Jet& a, long n);
Jet pow_real(const Jet& a, double r);  // requires a.value() > 0

/// Composition f(g(.)): f must be expanded at g.value().
Jet compose(const Jet& f, const Jet& g);

/// Jet of the inverse function t(s) at s0 = x.value(), given the jet of
/// x(t) at t0 (which becomes the inverse's value). Requires |x'| >= 1e-8.
Jet series_revert(const Jet& x, double t0);

/// Central finite differences with one Richardson extrapolation step per
/// order; the independent oracle for everything jet-based.
struct FdDerivatives {
    std::vector<double> value;  // value[k] ~= f^(k)(s), k = 0..order
    std::vector<double> error;  // stencil error estimates
};

FdDerivatives fd_derivatives(const std::function<double(double)>& f, double s, int order, double h);

}  // namespace pg4
