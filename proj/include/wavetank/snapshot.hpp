#pragma once

#include <string>

#include "wavetank/galerkin.hpp"

namespace wavetank {

// State snapshot: JSON header {grid, family, bc, t, params} plus flat
// coefficient arrays at full double precision.
void save_state(const std::string& path, const SemidiscreteSystem& sys, const State& s);

struct LoadedState {
    Grid grid;
    Family family = Family::Lagrange;
    int order = 2;
    SystemParams params;
    State state;
};

LoadedState load_state(const std::string& path);

}  // namespace wavetank
