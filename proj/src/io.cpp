#include "isothermic/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace isothermic::io {

using nlohmann::json;

namespace {

double number(const json& j, const std::string& what) {
    if (!j.is_number()) throw DataError(what + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw DataError(what + ": non-finite value");
    return v;
}

int integer(const json& j, const std::string& what) {
    if (!j.is_number_integer()) throw DataError(what + ": expected an integer");
    return j.get<int>();
}

const json& field(const json& j, const char* key, const std::string& what) {
    if (!j.is_object() || !j.contains(key)) throw DataError(what + ": missing \"" + key + "\"");
    return j.at(key);
}

Eigen::MatrixXd points(const json& j, int n, int count, const std::string& what) {
    if (!j.is_array() || static_cast<int>(j.size()) != count) {
        throw DataError(what + ": expected " + std::to_string(count) + " samples");
    }
    Eigen::MatrixXd out(n, count);
    for (int k = 0; k < count; ++k) {
        const json& p = j[static_cast<std::size_t>(k)];
        if (!p.is_array() || static_cast<int>(p.size()) != n) {
            throw DataError(what + ": sample " + std::to_string(k) + " must have " + std::to_string(n) + " coordinates");
        }
        for (int a = 0; a < n; ++a) out(a, k) = number(p[static_cast<std::size_t>(a)], what);
    }
    return out;
}

json columns(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (int k = 0; k < m.cols(); ++k) {
        json p = json::array();
        for (int a = 0; a < m.rows(); ++a) p.push_back(m(a, k));
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace

json curve_to_json(const PolarizedCurve& c, bool with_xprime) {
    json j;
    j["n"] = c.dim();
    j["grid"] = {{"s0", c.grid().s0()}, {"s1", c.grid().s1()}, {"N", c.grid().size()}};
    j["x"] = columns(c.x());
    j["m"] = std::vector<double>(c.m().data(), c.m().data() + c.m().size());
    if (with_xprime) j["xprime"] = columns(c.xprime());
    return j;
}

PolarizedCurve curve_from_json(const json& j) {
    const std::string what = "curve";
    const int n = integer(field(j, "n", what), what + ".n");
    if (n < 2 || n > 4) throw DataError("curve.n must be 2, 3 or 4");
    const json& g = field(j, "grid", what);
    const double s0 = number(field(g, "s0", what + ".grid"), what + ".grid.s0");
    const double s1 = number(field(g, "s1", what + ".grid"), what + ".grid.s1");
    const int count = integer(field(g, "N", what + ".grid"), what + ".grid.N");
    try {
        const curves::Grid grid(s0, s1, count);
        Eigen::MatrixXd x = points(field(j, "x", what), n, count, what + ".x");
        const json& mj = field(j, "m", what);
        if (!mj.is_array() || static_cast<int>(mj.size()) != count) throw DataError("curve.m: expected one value per sample");
        Eigen::VectorXd m(count);
        for (int k = 0; k < count; ++k) m[k] = number(mj[static_cast<std::size_t>(k)], what + ".m");
        if (j.contains("xprime")) {
            Eigen::MatrixXd dx = points(j.at("xprime"), n, count, what + ".xprime");
            return PolarizedCurve(grid, std::move(x), std::move(dx), std::move(m));
        }
        return PolarizedCurve::from_samples(grid, std::move(x), std::move(m));
    } catch (const DataError&) {
        throw;
    } catch (const GeometryError& e) {
        throw DataError(std::string("curve: ") + e.what());
    }
}

json surface_to_json(const SemiDiscreteSurface& s, bool with_xprime) {
    json j;
    j["curves"] = json::array();
    for (const auto& c : s.curves()) j["curves"].push_back(curve_to_json(c, with_xprime));
    j["mu"] = s.mu();
    return j;
}

SemiDiscreteSurface surface_from_json(const json& j) {
    const json& cj = field(j, "curves", "surface");
    const json& mj = field(j, "mu", "surface");
    if (!cj.is_array() || cj.empty()) throw DataError("surface.curves: expected a non-empty array");
    if (!mj.is_array()) throw DataError("surface.mu: expected an array");
    std::vector<PolarizedCurve> curves;
    for (const auto& c : cj) curves.push_back(curve_from_json(c));
    std::vector<double> mu;
    for (const auto& v : mj) mu.push_back(number(v, "surface.mu"));
    for (const auto& c : curves) {
        if (!(c.grid() == curves.front().grid())) throw DataError("surface: curves must share one grid");
    }
    try {
        return SemiDiscreteSurface(std::move(curves), std::move(mu));
    } catch (const GeometryError& e) {
        throw DataError(e.what());
    }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << text;
    if (!out) throw DataError("write failed: " + path);
}

void write_json(const std::string& path, const json& j) { write_text(path, dump(j)); }

void write_obj(std::ostream& out, const SemiDiscreteSurface& s, const std::string& name) {
    if (s.dim() == 4) throw InvalidArgument("write_obj: R^4 surfaces cannot be exported");
    const int count = s.grid().size();
    std::ostringstream text;
    text.precision(17);
    text << "o " << name << "\n";
    for (const auto& c : s.curves()) {
        for (int k = 0; k < count; ++k) {
            const Eigen::VectorXd p = c.point(k);
            text << "v " << p[0] << " " << p[1] << " " << (s.dim() == 3 ? p[2] : 0.0) << "\n";
        }
    }
    for (int i = 0; i + 1 < s.curve_count(); ++i) {
        for (int k = 0; k + 1 < count; ++k) {
            const long a = static_cast<long>(i) * count + k + 1;
            const long b = static_cast<long>(i + 1) * count + k + 1;
            text << "f " << a << " " << a + 1 << " " << b + 1 << " " << b << "\n";
        }
    }
    out << text.str();
}

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
    std::ostringstream text;
    text.precision(6);
    text << "check,edge_or_curve,max_residual,tolerance,pass\n";
    for (const auto& r : rows) {
        text << r.check << "," << r.where << "," << std::scientific << r.residual << "," << r.tolerance
             << std::defaultfloat << "," << (r.pass ? "true" : "false") << "\n";
    }
    out << text.str();
}

}  // namespace isothermic::io
