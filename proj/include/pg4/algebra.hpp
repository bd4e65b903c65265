#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <string>

#include "pg4/errors.hpp"

// The degenerate metric structure of the pseudo-Galilean 4-space: the first
// coordinate is the absolute (non-isotropic) direction, the remaining three
// carry a Minkowski form of signature (-,+,+).

namespace pg4 {

enum class CausalClass {
    NonIsotropic,
    SpacelikeIsotropic,
    TimelikeIsotropic,
    LightlikeIsotropic,
    Zero,
};

inline const char* to_string(CausalClass c) {
    switch (c) {
        case CausalClass::NonIsotropic: return "non-isotropic";
        case CausalClass::SpacelikeIsotropic: return "spacelike";
        case CausalClass::TimelikeIsotropic: return "timelike";
        case CausalClass::LightlikeIsotropic: return "lightlike";
        case CausalClass::Zero: return "zero";
    }
    return "?";
}

struct Vec4 {
    double x = 0.0;  // non-isotropic (absolute) coordinate
    double y = 0.0;
    double z = 0.0;
    double w = 0.0;

    double& operator[](int i) { return (&x)[i]; }
    double operator[](int i) const { return (&x)[i]; }

    friend Vec4 operator+(const Vec4& a, const Vec4& b) { return {a.x + b.x, a.y + b.y, a.z + b.z, a.w + b.w}; }
    friend Vec4 operator-(const Vec4& a, const Vec4& b) { return {a.x - b.x, a.y - b.y, a.z - b.z, a.w - b.w}; }
    friend Vec4 operator*(double c, const Vec4& a) { return {c * a.x, c * a.y, c * a.z, c * a.w}; }
    friend Vec4 operator*(const Vec4& a, double c) { return c * a; }
    friend Vec4 operator-(const Vec4& a) { return {-a.x, -a.y, -a.z, -a.w}; }
};

struct Point4 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double w = 0.0;

    friend Vec4 operator-(const Point4& p, const Point4& q) { return {p.x - q.x, p.y - q.y, p.z - q.z, p.w - q.w}; }
    friend Point4 operator+(const Point4& p, const Vec4& v) { return {p.x + v.x, p.y + v.y, p.z + v.z, p.w + v.w}; }
};

inline bool finite(const Vec4& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z) && std::isfinite(v.w);
}

/// Scalar product: u1*v1 when either first component is nonzero, otherwise
/// the Minkowski form -u2*v2 + u3*v3 + u4*v4 on the isotropic slice.
inline double dot(const Vec4& u, const Vec4& v) {
    if (u.x != 0.0 || v.x != 0.0) return u.x * v.x;
    return -u.y * v.y + u.z * v.z + u.w * v.w;
}

/// The isotropic quadratic form -y^2 + z^2 + w^2, ignoring the x component.
inline double iso_form(const Vec4& u) {
    return -u.y * u.y + u.z * u.z + u.w * u.w;
}

/// Polar form of iso_form: -a.y*b.y + a.z*b.z + a.w*b.w.
inline double iso_polar(const Vec4& a, const Vec4& b) {
    return -a.y * b.y + a.z * b.z + a.w * b.w;
}

inline double norm(const Vec4& u) {
    return std::sqrt(std::abs(dot(u, u)));
}

/// Euclidean magnitude of the component tuple; not a metric quantity, used
/// only to separate "vector is tiny" from "vector is lightlike".
inline double euclidean_norm(const Vec4& u) {
    return std::sqrt(u.x * u.x + u.y * u.y + u.z * u.z + u.w * u.w);
}

inline CausalClass classify_vector(const Vec4& u) {
    if (u.x != 0.0) return CausalClass::NonIsotropic;
    if (u.y == 0.0 && u.z == 0.0 && u.w == 0.0) return CausalClass::Zero;
    const double q = iso_form(u);
    if (q > 0.0) return CausalClass::SpacelikeIsotropic;
    if (q < 0.0) return CausalClass::TimelikeIsotropic;
    return CausalClass::LightlikeIsotropic;
}

/// Same contract with a relative tolerance on the lightlike test:
/// |q| <= tol * (y^2 + z^2 + w^2) counts as lightlike.
inline CausalClass classify_vector_tol(const Vec4& u, double tol) {
    if (u.x != 0.0) return CausalClass::NonIsotropic;
    const double mag2 = u.y * u.y + u.z * u.z + u.w * u.w;
    if (mag2 == 0.0) return CausalClass::Zero;
    const double q = iso_form(u);
    if (std::abs(q) <= tol * mag2) return CausalClass::LightlikeIsotropic;
    return q > 0.0 ? CausalClass::SpacelikeIsotropic : CausalClass::TimelikeIsotropic;
}

/// Distance between points: |dx| when the absolute coordinates differ,
/// otherwise the isotropic Minkowski length of the difference.
inline double point_distance(const Point4& p1, const Point4& p2) {
    const Vec4 d = p2 - p1;
    if (d.x != 0.0) return std::abs(d.x);
    return std::sqrt(std::abs(iso_form(d)));
}

/// Branch threshold |dx| <= 1e-12 * max(1, |p1.x|, |p2.x|) for sampled data.
inline double point_distance_tol(const Point4& p1, const Point4& p2) {
    const Vec4 d = p2 - p1;
    const double thresh = 1e-12 * std::max({1.0, std::abs(p1.x), std::abs(p2.x)});
    if (std::abs(d.x) > thresh) return std::abs(d.x);
    return std::sqrt(std::abs(iso_form(d)));
}

namespace detail {

// 3x3 determinant over any ring with +,-,*.
template <typename T>
T det3(const T& a00, const T& a01, const T& a02,
       const T& a10, const T& a11, const T& a12,
       const T& a20, const T& a21, const T& a22) {
    return a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20) + a02 * (a10 * a21 - a11 * a20);
}

// Minor of the 4x4 matrix whose rows 2..4 are (u,v,w), deleting row 1 and
// column `col`.
template <typename V, typename T = std::decay_t<decltype(std::declval<V>()[0])>>
T first_row_minor(const V& u, const V& v, const V& w, int col) {
    std::array<int, 3> cols{};
    int n = 0;
    for (int j = 0; j < 4; ++j)
        if (j != col) cols[n++] = j;
    return det3<T>(u[cols[0]], u[cols[1]], u[cols[2]],
                   v[cols[0]], v[cols[1]], v[cols[2]],
                   w[cols[0]], w[cols[1]], w[cols[2]]);
}

}  // namespace detail

/// Ternary cross product. The symbolic first row is (0,-e2,e3,e4) when any
/// argument has a nonzero first component, (-e1,e2,e3,e4) when all three are
/// isotropic.
inline Vec4 cross3(const Vec4& u, const Vec4& v, const Vec4& w) {
    using detail::first_row_minor;
    if (u.x != 0.0 || v.x != 0.0 || w.x != 0.0) {
        return {0.0,
                first_row_minor(u, v, w, 1),
                first_row_minor(u, v, w, 2),
                -first_row_minor(u, v, w, 3)};
    }
    return {-first_row_minor(u, v, w, 0),
            -first_row_minor(u, v, w, 1),
            first_row_minor(u, v, w, 2),
            -first_row_minor(u, v, w, 3)};
}

/// Plain 4x4 determinant of the component matrix with the given rows.
inline double det4(const Vec4& r0, const Vec4& r1, const Vec4& r2, const Vec4& r3) {
    using detail::first_row_minor;
    double det = 0.0;
    double sign = 1.0;
    for (int j = 0; j < 4; ++j) {
        if (r0[j] != 0.0) det += sign * r0[j] * first_row_minor(r1, r2, r3, j);
        sign = -sign;
    }
    return det;
}

}  // namespace pg4
