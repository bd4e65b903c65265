#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "pg4/expr.hpp"
#include "pg4/jet.hpp"

namespace pg4 {

/// A curve that can produce coordinate jets at any parameter value. Both
/// expression-defined curves and tabulated (integrated) curves implement
/// this, so the analysis layer never cares where a curve came from.
class Curve {
  public:
    virtual ~Curve() = default;

    /// Jets of (x, y, z, w) at parameter value t, through `order`.
    virtual std::array<Jet, 4> coordinate_jets(double t, int order) const = 0;

    virtual double domain_min() const = 0;
    virtual double domain_max() const = 0;
    virtual const std::string& label() const = 0;
};

class ExpressionCurve : public Curve {
  public:
    explicit ExpressionCurve(CurveDef def) : def_(std::move(def)) {}

    std::array<Jet, 4> coordinate_jets(double t, int order) const override {
        return {eval_jet(*def_.x, t, order), eval_jet(*def_.y, t, order),
                eval_jet(*def_.z, t, order), eval_jet(*def_.w, t, order)};
    }

    double domain_min() const override { return def_.domain_min; }
    double domain_max() const override { return def_.domain_max; }
    const std::string& label() const override { return def_.label; }
    const CurveDef& def() const { return def_; }

  private:
    CurveDef def_;
};

/// Parse the JSON curve object
///   {"label": ..., "param": "s"|"t", "x": ..., "y": ..., "z": ..., "w": ...,
///    "domain": [a, b]}
/// where each component string is in the expression grammar.
CurveDef curve_from_json_text(const std::string& text);
std::string curve_to_json_text(const CurveDef& def);
CurveDef load_curve_file(const std::string& path);

/// The built-in test corpus of expression curves: every curve has a valid
/// apparatus on its whole domain; labels are stable.
std::vector<CurveDef> builtin_corpus();

}  // namespace pg4
