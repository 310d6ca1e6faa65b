#pragma once

#include "wavetank/galerkin.hpp"

namespace wavetank {

// Manufactured solution on (0,1):
//   eta = e^{2t} cos(pi x),  u = e^t x^2 (x-1)^2 sin(pi x),
// with closed-form sources so that the pair satisfies the forced system for
// the given (a, b, d). u, u_xx and eta_x vanish at both ends.
struct ManufacturedCase {
    SystemParams params;

    double eta(double x, double t) const;
    double eta_x(double x, double t) const;
    double u(double x, double t) const;
    double u_x(double x, double t) const;
    Forcing forcing() const;
};

// The paper-default setup: a = -1, b = d = 1 on (0,1).
ManufacturedCase mms_default();

}  // namespace wavetank
