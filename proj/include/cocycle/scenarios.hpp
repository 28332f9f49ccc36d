#pragma once

#include "cocycle/base_flow.hpp"
#include "cocycle/cocycle.hpp"
#include "cocycle/discretizer.hpp"
#include "cocycle/types.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace cocycle {

/// A named, fully wired system: driving flow plus fiber map (explicit) or
/// ODE right-hand side (continuous, shipped with its discretization).
/// Building is deterministic, and the registry's smoke samples are re-checked
/// on every build so a miswired definition cannot go unnoticed.
struct Scenario {
    enum class Kind { explicit_map, continuous_flow };

    std::string name;
    Kind kind = Kind::explicit_map;
    BaseFlow base;
    FlowField field;      // continuous_flow only
    IntegratorConfig integrator;
    CocycleDef cocycle;   // the unit-time map in both kinds
    nlohmann::json params;

    struct Smoke {
        Vec y;
        Vec u;
        Vec expect;
    };
    std::vector<Smoke> smoke;
};

/// Registry lookup; unknown names raise RegistryError listing the registry.
/// Unknown parameter keys are rejected, defaults are filled into params.
Scenario build(const std::string& name, const nlohmann::json& params = {},
               const IntegratorConfig& integrator = {});

std::vector<std::string> registry_names();

/// The planar counterexample field over the 2-torus, in shifted coordinates
/// a = u - sin t, b = v - sin sqrt(2) t with t = 2*pi*y1, sqrt(2) t = 2*pi*y2:
///   u' = (a^2 (2b - a) + 2 b^5) / D + cos t
///   v' = 8 b^2 (b - a) / D + sqrt(2) cos sqrt(2) t,  D = (a^2+b^2)(1+(a^2+b^2)^2).
/// The rational parts extend by 0 across a = b = 0 (they are O(r) there);
/// a guard takes the limit branch once a^2 + b^2 < 1e-24.
Vec wc2_field(const BasePoint& y, const Vec& uv);

/// The same field with the printed inner factor 2v - u + 2 sin sqrt(2) t - sin t
/// kept verbatim in the u-equation; discontinuous at a = b = 0, kept for
/// side-by-side comparison behind the wc2-raw-signs flag.
Vec wc2_field_raw_signs(const BasePoint& y, const Vec& uv);

/// The autonomous part of wc2 in the shifted coordinates themselves:
/// d(a,b)/dt = wc2_deviation(a,b). The forcing cancels identically, so this
/// is the equation the wc2 cocycle integrates; in (u,v) form the decaying
/// deviation is a difference of O(1) quantities and float cancellation near
/// the saddle at a = b = 0 re-excites the unstable direction forever.
Vec wc2_deviation(const Vec& ab);

}  // namespace cocycle
