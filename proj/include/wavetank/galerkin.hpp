#pragma once

#include <functional>
#include <optional>
#include <string>

#include "wavetank/assembly.hpp"

namespace wavetank {

// Model coefficients of the generalized Nwogu family (c = 0):
//   eta_t + u_x + eps(eta u)_x + eps(a u_xxx - b eta_xxt) = 0
//   u_t + eta_x + eps u u_x - eps d u_xxt = 0
// With theta_sq set, a = theta^2 - 2/3 and b = d = (1 - theta^2)/2,
// the energy-conserving subfamily with a + b + d = 1/3.
struct SystemParams {
    double a = 0.0;
    double b = 0.0;
    double d = 0.0;
    double epsilon = 1.0;
    std::optional<double> theta_sq;

    static SystemParams from_theta_sq(double theta_sq, double epsilon = 1.0);
    static SystemParams from_abd(double a, double b, double d, double epsilon = 1.0);

    double alpha() const { return -a * epsilon; }
    double beta() const { return b * epsilon; }
    double delta() const { return d * epsilon; }

    void validate() const;  // throws std::invalid_argument
};

// Coefficients of (eta, u) in S_h x S_h^0 at time t.
struct State {
    std::vector<double> eta;
    std::vector<double> u;
    double t = 0.0;
};

// Optional source terms for manufactured-solution runs.
struct Forcing {
    std::function<double(double, double)> s_eta;  // (x, t)
    std::function<double(double, double)> s_u;
    bool empty() const { return !s_eta && !s_u; }
};

using Observer = std::function<void(const State&)>;

// The modified Galerkin semidiscretization on a shared uniform grid:
//   eta_t = f_h[u + eta*u + a lap_h u],  u_t = g_h[eta + u^2/2]
// with eta in S_h (Free) and u in S_h^0 (DirichletZero), integrated in time
// by the classical four-stage Runge-Kutta method.
class SemidiscreteSystem {
public:
    SemidiscreteSystem(Grid grid, Family family, int order, SystemParams params,
                       int quad_order = 5);

    const FemSpace& eta_space() const { return eta_space_; }
    const FemSpace& u_space() const { return u_space_; }
    const SystemParams& params() const { return params_; }
    const BasisTable& eta_table() const { return eta_tab_; }
    const BasisTable& u_table() const { return u_tab_; }
    const BandedSymMatrix& ab() const { return ab_; }
    const BandedSymMatrix& ad() const { return ad_; }
    const BandedSymMatrix& mass_eta() const { return mass_eta_; }
    const BandedSymMatrix& mass0() const { return mass0_; }

    // If linear, the products eta*u and u^2/2 are dropped.
    void set_linear(bool linear) { linear_ = linear; }

    State make_state() const;

    // Initial data by elliptic projection (R_h eta0, R_h^0 u0); u0 must vanish
    // at the walls.
    State project_initial(const ScalarFn& eta0, const ScalarFn& eta0_x,
                          const ScalarFn& u0, const ScalarFn& u0_x) const;

    void rhs(const State& s, const Forcing& forcing, State& out) const;
    State rhs(const State& s, const Forcing& forcing = {}) const;

    // One classical RK4 step; throws std::runtime_error("nonfinite-state") on blow-up.
    void rk4_step(State& s, double dt, const Forcing& forcing = {}) const;

    // Fixed-step march to t0+T; the last step is shortened to land on t0+T.
    State evolve(State s, double T, double dt, const Forcing& forcing = {},
                 const Observer& observer = {}) const;

    double mass_of_eta(const State& s) const;
    double mass_of_u(const State& s) const;
    double energy(const State& s) const;

    double eval_eta(const State& s, double x, int deriv = 0) const;
    double eval_u(const State& s, double x, int deriv = 0) const;

    // Normalized errors against exact fields at s.t: ||v_h - v||_q / ||v||_q.
    struct Errors {
        double l2_eta, l2_u, h1_eta, h1_u;
    };
    Errors errors_against(const State& s, const ScalarFn& eta_ex, const ScalarFn& eta_ex_x,
                          const ScalarFn& u_ex, const ScalarFn& u_ex_x) const;

private:
    FemSpace eta_space_;
    FemSpace u_space_;
    SystemParams params_;
    QuadratureRule rule_;
    BasisTable eta_tab_;
    BasisTable u_tab_;
    BandedSymMatrix ab_;        // A_b on S_h
    BandedSymMatrix ad_;        // A_d on S_h^0
    BandedSymMatrix mass_eta_;  // mass on S_h (diagnostics)
    BandedSymMatrix mass0_;     // mass on S_h^0
    bool linear_ = false;
};

}  // namespace wavetank
