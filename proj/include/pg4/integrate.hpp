#pragma once

#include <string>
#include <vector>

#include "pg4/curve.hpp"
#include "pg4/expr.hpp"
#include "pg4/frenet.hpp"

namespace pg4 {

/// Prescribed curvature functions for the fundamental-theorem solver.
struct CurvatureSpec {
    std::string label = "synthesized";
    ExprPtr kappa, tau, sigma;  // expressions in s
    SignTriple signs;
    double s0 = 0.0, s1 = 1.0;
    double step = 1e-3;
};

CurvatureSpec constant_curvature_spec(double kappa, double tau, double sigma, SignTriple signs,
                                      double s0, double s1, double step = 1e-3);

struct Frame {
    Vec4 T, N, B1, B2;

    const Vec4& operator[](int i) const { return (&T)[i]; }
    Vec4& operator[](int i) { return (&T)[i]; }
};

/// Discrete solution of the frame system plus position. First components
/// are never integrated: T.x is 1 and N/B1/B2.x are 0 identically.
struct FramePath {
    CurvatureSpec spec;
    std::vector<double> s;
    std::vector<Point4> position;
    std::vector<Frame> frame;
    std::vector<double> gram_residual;
    double max_gram_residual = 0.0;
};

/// Axis-aligned frame realizing diag(1, eps1, eps2, eps3): the timelike
/// isotropic axis (y) goes to whichever vector carries eps = -1. Exactly
/// one of the three signs must be -1.
Frame canonical_initial_frame(const SignTriple& signs);

/// Deviation of the frame Gram matrix from diag(1, eps1, eps2, eps3).
double gram_residual(const Frame& f, const SignTriple& signs);

/// Classical fixed-step RK4 on the 12 isotropic frame components plus the
/// 3 isotropic position components; the absolute coordinate of the
/// position is set to s analytically.
FramePath integrate_frenet(const CurvatureSpec& spec, const Frame& frame0, const Point4& point0,
                           bool renormalize = false);

/// Frame components (mu1..mu4) of the position vector at a node, computed
/// with the integrated frame.
std::array<double, 4> position_components(const FramePath& path, size_t node);

/// Tabulated curve backed by per-node jets assembled from the integrated
/// frames and the prescribed curvature expressions; evaluation re-expands
/// the nearest node jet. Needs at least 7 nodes.
class TabulatedCurve : public Curve {
  public:
    explicit TabulatedCurve(const FramePath& path);

    std::array<Jet, 4> coordinate_jets(double t, int order) const override;
    double domain_min() const override { return s_.front(); }
    double domain_max() const override { return s_.back(); }
    const std::string& label() const override { return label_; }

    size_t nearest_node(double t) const;

  private:
    std::string label_;
    std::vector<double> s_;
    std::vector<std::array<Jet, 3>> node_;  // y,z,w jets, order 6
};

TabulatedCurve sample_to_curvedef(const FramePath& path);

}  // namespace pg4
