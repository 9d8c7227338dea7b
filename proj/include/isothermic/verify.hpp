#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isothermic/surface.hpp"
#include "isothermic/transforms.hpp"

// Invariant suites used by the `verify` subcommand.
namespace isothermic::verify {

struct Check {
    std::string name;
    // Fixture, curve or edge the residual belongs to.
    std::string where;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct Options {
    // curve, darboux, bianchi, transforms, surface, cmc or all.
    std::string suite = "all";
    std::map<std::string, double> tolerance_overrides;
    unsigned seed = 1;
    darboux::IntegrationOptions integration;
    transforms::MetricCorrection correction;
    bool parallel = true;
};

// Input data; suites fall back to generated fixtures for whatever is missing. Suites that
// need constructed configurations (bianchi, transforms) always use fixtures.
struct Input {
    std::optional<surface::SemiDiscreteSurface> surface;
    std::optional<curves::PolarizedCurve> curve;
};

std::vector<std::string> suite_names();
// Every check name with its default tolerance.
const std::map<std::string, double>& default_tolerances();

// Results sorted by (name, where). Throws InvalidArgument for unknown suites or
// overrides naming unknown checks.
std::vector<Check> run(const Options& options, const Input& input = {});

inline bool all_pass(const std::vector<Check>& checks) {
    for (const auto& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

}  // namespace isothermic::verify
