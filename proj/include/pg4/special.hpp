#pragma once

#include <string>
#include <vector>

#include "pg4/curve.hpp"
#include "pg4/frenet.hpp"
#include "pg4/integrate.hpp"

namespace pg4 {

struct FlagReport {
    bool applicable = false;
    bool flag = false;
    double residual = 0.0;
    std::vector<double> fitted_constants;
    std::string note;
};

struct ClassifyOptions {
    int grid = 101;
    double tol = 1e-6;
    int jet_order = 6;
    Tolerances frame_tol{};
};

struct ClassificationReport {
    std::string curve_label;
    int grid = 0;
    double tol = 0.0;
    double scale = 1.0;  // max(1, sup d(s))
    int apparatus_failures = 0;
    int points_used = 0;
    SignTriple signs;  // from the first valid sample

    FlagReport rectifying;
    FlagReport osculating_type1;  // no B1 component
    FlagReport osculating_type2;  // no B2 component
    FlagReport normal_curve;      // no T component (never holds)
    FlagReport w_curve;
    FlagReport slant_helix;
    FlagReport three_type_slant_helix;
    FlagReport spherical;
};

/// Grid classification of every special-curve property. Throws
/// ApparatusFailure when more than 10% of the grid has no valid apparatus.
ClassificationReport classify_curve(const Curve& c, const ClassifyOptions& opt = {});

/// Unnormalized invariant direction N + (tau/sigma) B2 of a slant helix.
Vec4 slant_helix_axis(const FrenetApparatus& app, double tol_sigma = 1e-8);

/// Norm of the derivative of the slant-helix axis field along the curve.
double slant_axis_derivative_norm(const FrameJets& f);
/// Same for the W-curve direction (sigma/tau) N + B2.
double corollary_axis_derivative_norm(const FrameJets& f);

struct ThreeTypeAxis {
    double a = 0.0;  // from (sigma/tau)' = a kappa
    double b = 0.0;  // T coefficient of the fitted direction
    double max_axis_derivative_norm = 0.0;
    std::vector<Vec4> axis;  // b T + (sigma/tau) N + B2 per grid point
};

ThreeTypeAxis three_type_axis(const Curve& c, int grid, const ClassifyOptions& opt = {});

struct BinormalAudit {
    /// Smallest singular value of the constancy system over unit vectors:
    /// bounded away from zero exactly because no fixed direction exists.
    double score = 0.0;
    double w1 = 0.0, w2 = 0.0;  // least-squares solution of the reduced system
};

BinormalAudit binormal_nonexistence_audit(const Curve& c, int grid, const ClassifyOptions& opt = {});

struct SphereData {
    Point4 center;
    double radius2 = 0.0;             // |bracket|
    double radius2_signed = 0.0;      // eps-weighted bracket before the absolute value
    double residual_analytic = 0.0;   // d/ds of the bracket, by jets
    double residual_paper = 0.0;      // printed curvature equation, verbatim signs
    double frame_component_radius2 = 0.0;  // oracle: projections of center - alpha
};

SphereData sphere_data(const FrameJets& f, const ArclengthJets& c, double tol_sigma = 1e-8);
SphereData sphere_data_on_path(const FramePath& path, size_t node, double tol_sigma = 1e-8);

struct OsculatingChecks {
    bool type1_applicable = false;
    double c13 = 0.0, c14 = 0.0;
    double type1_constraint_residual = 0.0;  // printed (s+c13)k + c14 sigma/tau
    double type1_mu2_residual = 0.0;         // mu2 - c14 sigma/tau
    bool type2_applicable = false;
    double c15 = 0.0, a1 = 0.0, a2 = 0.0;
    double type2_fit_residual = 0.0;  // mu3 vs a1 sin(tau s) + a2 cos(tau s) + e1e2 (k/t)(s+c15)
    double type2_mu2_residual = 0.0;  // mu2 + eps2 mu3'/tau
    std::string note;
};

OsculatingChecks osculating_checks(const Curve& c, int grid, const ClassifyOptions& opt = {});

struct RectifyingChecks {
    bool applicable = false;
    double c = 0.0;  // mu1 = s + c
    double mu3_residual = 0.0;
    double mu4_residual = 0.0;
    double quad_s2 = 0.0, quad_s1 = 0.0, quad_s0 = 0.0;  // fit of d^2(s)
    double quad_fit_residual = 0.0;
    double normal_component_max = 0.0;  // d^2 - mu1^2 (a squared quantity)
    double distance_rate_residual = 0.0;  // (d^2)' - 2 mu1 (zero when mu2 = 0)
};

/// Residual of the distance-rate identity (d^2)' = 2 mu1 - 2 eps1 kappa mu1 mu2,
/// which holds for every admissible curve with the computed frame equations.
double distance_rate_residual(const FrameJets& f, const PositionDecomposition& d);

RectifyingChecks rectifying_checks(const Curve& c, int grid, const ClassifyOptions& opt = {});

struct ScaledRectifyingAudit {
    bool applicable = false;
    double max_residual = 0.0;
    std::vector<double> residual;  // per grid point
};

/// Audit of the product-form rectifying identity: evaluates the printed
/// relation with the constants fitted from beta and reports the residual
/// as-is (it does not vanish for rho = 1).
ScaledRectifyingAudit scaled_rectifying_audit(const Expr& rho, const Curve& beta, int grid,
                                              const ClassifyOptions& opt = {});

struct NormalAudit {
    double mu1_prime_max_deviation = 0.0;  // |mu1' - 1|
    double mu1_abs_max = 0.0;
    int sign_changes = 0;
};

/// Structural witness that <alpha, T> = 0 cannot hold identically: mu1 is
/// affine in s with unit slope.
NormalAudit normal_nonexistence_audit(const Curve& c, int grid, const ClassifyOptions& opt = {});

struct RectifyingRecipe {
    CurvatureSpec spec;       // kappa = f(s)/(s+c), tau = sigma = 1
    Point4 initial_position;  // makes mu2 vanish identically
    double c = 0.0;
};

/// Curvature triple whose integrated curve is rectifying: sigma = tau = 1
/// and kappa = f/(s+c) with f'' = -eps2 eps3 f, unit initial data.
RectifyingRecipe synthesize_rectifying(const SignTriple& signs, double s0, double s1, double c,
                                       double step = 1e-3);

}  // namespace pg4
