#pragma once

#include <stdexcept>
#include <string>

namespace isothermic {

// All library failures derive from GeometryError so callers can catch one type.
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public GeometryError {
public:
    using GeometryError::GeometryError;
};

// A secant or vector is too short to invert.
class DegenerateSecant : public GeometryError {
public:
    using GeometryError::GeometryError;
};

class PointAtInfinity : public GeometryError {
public:
    using GeometryError::GeometryError;
};

// Two lightlike lines with (xi, xi_hat) == 0 do not split R^{n+1,1}.
class NonComplementary : public GeometryError {
public:
    using GeometryError::GeometryError;
};

// An integration ran into a configuration where its right-hand side blows up.
class SingularEncounter : public GeometryError {
public:
    SingularEncounter(const std::string& what, double s)
        : GeometryError(what + " at s = " + std::to_string(s)), s_(s) {}
    double s() const { return s_; }

private:
    double s_;
};

class InvalidArgument : public GeometryError {
public:
    using GeometryError::GeometryError;
};

}  // namespace isothermic
