#pragma once

#include <array>

#include "pg4/algebra.hpp"
#include "pg4/curve.hpp"
#include "pg4/jet.hpp"

namespace pg4 {

/// Signs of the frame self-products and the cross-product orientation
/// factor. Always computed from the frame, never assumed.
struct SignTriple {
    int eps1 = 1;  // sgn <N,N>
    int eps2 = 1;  // sgn <B1,B1>
    int eps3 = 1;  // sgn <B2,B2>
    int mu = 1;    // makes det[T,N,B1,B2] = +1
};

/// Coordinate jets of an admissible curve in arclength form: the x jet is
/// the identity (s, 1, 0, ...).
struct ArclengthJets {
    double s = 0.0;
    std::array<Jet, 4> coord;
};

struct Tolerances {
    double curvature = 1e-8;  // minimum kappa and tau
    double unit = 1e-8;       // lightlike guard, relative to the Euclidean size
};

/// Frenet apparatus with every ingredient carried as a jet, so frame
/// derivatives and curvature derivatives come for free downstream.
struct FrameJets {
    double s = 0.0;
    std::array<Jet, 4> T, N, B1, B2;
    Jet kappa, tau, sigma;
    SignTriple signs;
    // Audited claims from the source construction: eps2 == -eps1, and the
    // printed eps3 selection rule. Violations are recorded, not "fixed".
    bool paper_eps2_consistent = false;
    bool paper_eps3_consistent = false;

    Vec4 frame_value(int which) const;       // 0=T 1=N 2=B1 3=B2
    Vec4 frame_derivative(int which) const;  // d/ds of the same
};

struct FrenetApparatus {
    double s = 0.0;
    Vec4 T, N, B1, B2;
    double kappa = 0.0, tau = 0.0, sigma = 0.0;
    SignTriple signs;
    bool paper_eps2_consistent = false;
    bool paper_eps3_consistent = false;
};

/// Frame-derivative matrix A with (T,N,B1,B2)' = A (T,N,B1,B2), extracted
/// by metric projection, plus residuals against the printed template.
struct FrenetMatrixResult {
    std::array<std::array<double, 4>, 4> A{};
    double pattern_residual = 0.0;  // max deviation from the printed matrix with runtime signs
    double skew_residual = 0.0;     // generalized skew-symmetry on the isotropic block
    double first_column_max = 0.0;  // structurally zero
};

/// Frame components mu_i of the position vector and the residuals of the
/// first-order system they satisfy.
struct PositionDecomposition {
    double s = 0.0;
    std::array<Jet, 4> mu;
    std::array<double, 4> residual_runtime{};  // coefficients from the computed frame equations
    std::array<double, 4> residual_paper{};    // coefficients as printed
    double reconstruction_error = 0.0;
};

enum class SignConvention { RuntimeSigns, PaperLiteral };

/// Compose the coordinate jets with the inverse of x(t) so that the first
/// coordinate becomes the parameter. Throws NotAdmissible when |x'| < 1e-8.
ArclengthJets reparametrize_by_arclength(const Curve& c, double t0, int order);

/// Samples a curve at prescribed arclength values, inverting x(t) by
/// Newton iteration when the curve is not already in arclength form.
class ArclengthSampler {
  public:
    explicit ArclengthSampler(const Curve& c, int order = 6);

    double s_min() const { return s_min_; }
    double s_max() const { return s_max_; }
    bool already_arclength() const { return identity_x_; }

    double param_for_arclength(double s) const;
    ArclengthJets sample(double s) const;

  private:
    const Curve& curve_;
    int order_;
    bool identity_x_ = false;
    bool increasing_ = true;
    double s_min_ = 0.0, s_max_ = 0.0;
};

FrameJets frame_jets(const ArclengthJets& c, const Tolerances& tol = {});
FrenetApparatus frenet_apparatus(const FrameJets& f);
FrenetApparatus frenet_apparatus(const ArclengthJets& c, const Tolerances& tol = {});

FrenetMatrixResult frenet_matrix(const FrameJets& f);

PositionDecomposition decompose_position(const FrameJets& f, const ArclengthJets& c);

/// Residual of the fourth-order tangent equation obtained by eliminating
/// N, B1, B2 from the frame equations. Under RuntimeSigns the elimination
/// uses the computed frame coefficients (a true identity); under
/// PaperLiteral the printed signs are used verbatim and the residual is
/// reported for audit.
Vec4 fourth_order_residual(const FrameJets& f, SignConvention convention, const Tolerances& tol = {});

}  // namespace pg4
