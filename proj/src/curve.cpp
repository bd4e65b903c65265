#include "pg4/curve.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pg4/errors.hpp"

namespace pg4 {

CurveDef curve_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid curve JSON: ") + e.what(), 0, 0);
    }
    try {
        CurveDef def;
        def.label = j.value("label", std::string("curve"));
        def.param = j.value("param", std::string("s"));
        if (def.param != "s" && def.param != "t")
            throw ParseError("curve parameter must be 's' or 't'", 0, 0);
        def.x = parse_expression(j.at("x").get<std::string>(), def.param);
        def.y = parse_expression(j.at("y").get<std::string>(), def.param);
        def.z = parse_expression(j.at("z").get<std::string>(), def.param);
        def.w = parse_expression(j.at("w").get<std::string>(), def.param);
        const auto& dom = j.at("domain");
        def.domain_min = dom.at(0).get<double>();
        def.domain_max = dom.at(1).get<double>();
        if (!(def.domain_min < def.domain_max)) throw ParseError("degenerate domain", 0, 0);
        return def;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid curve JSON: ") + e.what(), 0, 0);
    }
}

std::string curve_to_json_text(const CurveDef& def) {
    nlohmann::ordered_json j;
    j["label"] = def.label;
    j["param"] = def.param;
    j["x"] = print_expr(*def.x, def.param);
    j["y"] = print_expr(*def.y, def.param);
    j["z"] = print_expr(*def.z, def.param);
    j["w"] = print_expr(*def.w, def.param);
    j["domain"] = {def.domain_min, def.domain_max};
    return j.dump(2);
}

CurveDef load_curve_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open curve file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return curve_from_json_text(buf.str());
}

namespace {

CurveDef curve(const std::string& label, const std::string& text) {
    CurveDef def = parse_curve(text);
    def.label = label;
    return def;
}

}  // namespace

std::vector<CurveDef> builtin_corpus() {
    // Hand-picked so the apparatus is non-degenerate (kappa, tau bounded
    // away from zero, no lightlike frame vectors) on the whole domain.
    return {
        curve("hyperbolic-plane", "x=s; y=cosh(s); z=sinh(s); w=0 on [0,1]"),
        curve("circle-b0", "x=s; y=0; z=cos(s); w=sin(s) on [0,1]"),
        curve("circle-b1", "x=s; y=s; z=cos(s); w=sin(s) on [0,1]"),
        curve("cosh-sinh-quartic", "x=s; y=2*cosh(s); z=sinh(s); w=s^4/24 on [0,1]"),
        curve("trig-poly-1", "x=s; y=2*cosh(s); z=sinh(s)+s^3/6; w=sin(s) on [0,1]"),
        curve("flat-spiral", "x=s; y=s^2/2+s^3/9; z=s+sin(s)/2; w=cos(s)/3+s^2/5 on [0.1,1.1]"),
        curve("cosh-blend", "x=s; y=3*cosh(s); z=sinh(s)+cos(s); w=s^2/2+sin(s) on [0,1]"),
        curve("poly-trig-4", "x=s; y=s^2/2+s^4/12; z=sin(s)+s^3/6; w=cos(s)+s^2/3 on [0.1,1.1]"),
        curve("exp-pair", "x=s; y=2*exp(s); z=exp(s)+sin(s); w=s^2/2+cos(s) on [0,1]"),
        curve("cosh-wave", "x=s; y=2*cosh(s)+sin(s)/2; z=sinh(s)+s^2/4; w=s+cos(s)/2 on [0,1]"),
        curve("cosh-quartic-blend", "x=s; y=2*cosh(s)+s^4/48; z=sinh(s)+sin(s)/4; w=s^2/4+s^3/18 on [0,1]"),
        curve("cosh-shear", "x=s; y=2*cosh(s)+sinh(s)/3; z=sinh(s)+s^2/5+s^4/60; w=s+cos(s)/4 on [0,1]"),
    };
}

}  // namespace pg4
