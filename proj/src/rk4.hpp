#pragma once

#include <vector>

namespace isothermic::detail {

// Position on a uniform grid: interval index k plus fraction theta in [0, 1].
// Stage evaluations that land on a node are reported with theta == 0 so callers
// can use exact node data instead of interpolating.
struct GridPosition {
    int k;
    double theta;
};

// Classical RK4 over a grid with `count` nodes and spacing h, each interval split
// into `substeps` equal steps. `rhs(pos, y)` evaluates the vector field, `after_step(y)`
// may project the state after each step. Returns the state at every node.
template <class State, class Rhs, class AfterStep>
std::vector<State> rk4_on_grid(int count, double h, int substeps, State y, Rhs&& rhs, AfterStep&& after_step) {
    std::vector<State> out;
    out.reserve(count);
    out.push_back(y);
    const double dt = h / substeps;
    auto position = [&](int k, double theta) {
        if (theta >= 1.0) return GridPosition{k + 1, 0.0};
        return GridPosition{k, theta};
    };
    for (int k = 0; k + 1 < count; ++k) {
        for (int j = 0; j < substeps; ++j) {
            const double a = static_cast<double>(j) / substeps;
            const double mid = (j + 0.5) / substeps;
            const double b = static_cast<double>(j + 1) / substeps;
            const State k1 = rhs(position(k, a), y);
            const State k2 = rhs(position(k, mid), State(y + (0.5 * dt) * k1));
            const State k3 = rhs(position(k, mid), State(y + (0.5 * dt) * k2));
            const State k4 = rhs(position(k, b), State(y + dt * k3));
            y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            after_step(y);
        }
        out.push_back(y);
    }
    return out;
}

}  // namespace isothermic::detail
