#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "isothermic/errors.hpp"
#include "isothermic/surface.hpp"

namespace isothermic::io {

using curves::PolarizedCurve;
using surface::SemiDiscreteSurface;

// Malformed or unreadable input files.
class DataError : public GeometryError {
public:
    using GeometryError::GeometryError;
};

// { "n", "grid": {"s0", "s1", "N"}, "x": [[...]; N], "m": [...], "xprime": [[...]; N] }
nlohmann::json curve_to_json(const PolarizedCurve& c, bool with_xprime = true);
// Derivatives by finite differences when "xprime" is absent.
PolarizedCurve curve_from_json(const nlohmann::json& j);

// { "curves": [curve...], "mu": [...] }
nlohmann::json surface_to_json(const SemiDiscreteSurface& s, bool with_xprime = true);
SemiDiscreteSurface surface_from_json(const nlohmann::json& j);

inline bool is_surface_json(const nlohmann::json& j) { return j.is_object() && j.contains("curves"); }

// Canonical text: two-space indentation, shortest round-trip doubles, trailing newline.
std::string dump(const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);
void write_json(const std::string& path, const nlohmann::json& j);
void write_text(const std::string& path, const std::string& text);

// Quads joining curve i samples k, k+1 with curve i+1 samples k+1, k. n = 2 is padded with
// z = 0; n = 4 is rejected.
void write_obj(std::ostream& out, const SemiDiscreteSurface& s, const std::string& name = "surface");

struct CsvRow {
    std::string check;
    std::string where;
    double residual;
    double tolerance;
    bool pass;
};
void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);

}  // namespace isothermic::io
