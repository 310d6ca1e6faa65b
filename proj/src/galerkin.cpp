#include "wavetank/galerkin.hpp"

#include <cmath>
#include <stdexcept>

namespace wavetank {

SystemParams SystemParams::from_theta_sq(double theta_sq, double epsilon) {
    SystemParams p;
    p.theta_sq = theta_sq;
    p.a = theta_sq - 2.0 / 3.0;
    p.b = p.d = 0.5 * (1.0 - theta_sq);
    p.epsilon = epsilon;
    p.validate();
    return p;
}

SystemParams SystemParams::from_abd(double a, double b, double d, double epsilon) {
    SystemParams p;
    p.a = a;
    p.b = b;
    p.d = d;
    p.epsilon = epsilon;
    p.validate();
    return p;
}

void SystemParams::validate() const {
    if (a > 0.0) throw std::invalid_argument("SystemParams: a must be <= 0");
    if (b < 0.0) throw std::invalid_argument("SystemParams: b must be >= 0");
    if (!(d > 0.0)) throw std::invalid_argument("SystemParams: d must be > 0");
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw std::invalid_argument("SystemParams: epsilon must be in (0,1]");
    if (theta_sq) {
        const double sum = a + b + d;
        if (std::abs(sum - 1.0 / 3.0) > 1e-12)
            throw std::invalid_argument("SystemParams: theta parameterization requires a+b+d=1/3");
    }
}

SemidiscreteSystem::SemidiscreteSystem(Grid grid, Family family, int order,
                                       SystemParams params, int quad_order)
    : eta_space_(grid, family, order, Bc::Free),
      u_space_(grid, family, order, Bc::DirichletZero),
      params_(params),
      rule_(gauss_legendre(quad_order)),
      eta_tab_(tabulate(eta_space_, rule_)),
      u_tab_(tabulate(u_space_, rule_)),
      ab_(assemble_aq(eta_space_, params.b, eta_tab_)),
      ad_(assemble_aq(u_space_, params.d, u_tab_)),
      mass_eta_(assemble_aq(eta_space_, 0.0, eta_tab_)),
      mass0_(assemble_aq(u_space_, 0.0, u_tab_)) {
    params_.validate();
}

State SemidiscreteSystem::make_state() const {
    State s;
    s.eta.assign(eta_space_.dof_count(), 0.0);
    s.u.assign(u_space_.dof_count(), 0.0);
    return s;
}

State SemidiscreteSystem::project_initial(const ScalarFn& eta0, const ScalarFn& eta0_x,
                                          const ScalarFn& u0, const ScalarFn& u0_x) const {
    State s;
    s.eta = elliptic_project(eta_space_, eta_tab_, ab_, params_.b, eta0, eta0_x);
    s.u = elliptic_project(u_space_, u_tab_, ad_, params_.d, u0, u0_x);
    s.t = 0.0;
    return s;
}

void SemidiscreteSystem::rhs(const State& s, const Forcing& forcing, State& out) const {
    const size_t nq_total = eta_tab_.points.size();
    std::vector<double> eta_v(nq_total), u_v(nq_total);
    eval_at_quad(eta_space_, eta_tab_, s.eta, eta_v);
    eval_at_quad(u_space_, u_tab_, s.u, u_v);

    // lap = discrete Laplacian of u in S_h^0
    auto lap = discrete_laplacian(u_space_, u_tab_, s.u, u_space_, u_tab_, mass0_);
    std::vector<double> lap_v(nq_total);
    eval_at_quad(u_space_, u_tab_, lap, lap_v);

    // eta_t = f_h[u + eta*u + a*lap]
    std::vector<double> integrand(nq_total);
    const double a = params_.a;
    for (size_t i = 0; i < nq_total; ++i) {
        double w = u_v[i] + a * lap_v[i];
        if (!linear_) w += eta_v[i] * u_v[i];
        integrand[i] = w;
    }
    auto rhs_eta = assemble_load_dx(eta_space_, eta_tab_, integrand);
    if (forcing.s_eta) {
        const double t = s.t;
        std::vector<double> f(nq_total);
        for (size_t i = 0; i < nq_total; ++i) f[i] = forcing.s_eta(eta_tab_.points[i], t);
        const auto fl = assemble_load(eta_space_, eta_tab_, f);
        for (size_t i = 0; i < rhs_eta.size(); ++i) rhs_eta[i] += fl[i];
    }
    out.eta = ab_.solve(rhs_eta);

    // u_t = g_h[eta + u^2/2]
    for (size_t i = 0; i < nq_total; ++i) {
        double w = eta_v[i];
        if (!linear_) w += 0.5 * u_v[i] * u_v[i];
        integrand[i] = w;
    }
    auto rhs_u = assemble_load_dx(u_space_, u_tab_, integrand);
    if (forcing.s_u) {
        const double t = s.t;
        std::vector<double> f(nq_total);
        for (size_t i = 0; i < nq_total; ++i) f[i] = forcing.s_u(u_tab_.points[i], t);
        const auto fl = assemble_load(u_space_, u_tab_, f);
        for (size_t i = 0; i < rhs_u.size(); ++i) rhs_u[i] += fl[i];
    }
    out.u = ad_.solve(rhs_u);
    out.t = s.t;
}

State SemidiscreteSystem::rhs(const State& s, const Forcing& forcing) const {
    State out = make_state();
    rhs(s, forcing, out);
    return out;
}

namespace {
void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
    for (size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}
}  // namespace

void SemidiscreteSystem::rk4_step(State& s, double dt, const Forcing& forcing) const {
    State k1 = make_state(), k2 = make_state(), k3 = make_state(), k4 = make_state();
    State tmp = s;

    rhs(s, forcing, k1);
    tmp.eta = s.eta;
    tmp.u = s.u;
    axpy(tmp.eta, 0.5 * dt, k1.eta);
    axpy(tmp.u, 0.5 * dt, k1.u);
    tmp.t = s.t + 0.5 * dt;
    rhs(tmp, forcing, k2);
    tmp.eta = s.eta;
    tmp.u = s.u;
    axpy(tmp.eta, 0.5 * dt, k2.eta);
    axpy(tmp.u, 0.5 * dt, k2.u);
    rhs(tmp, forcing, k3);
    tmp.eta = s.eta;
    tmp.u = s.u;
    axpy(tmp.eta, dt, k3.eta);
    axpy(tmp.u, dt, k3.u);
    tmp.t = s.t + dt;
    rhs(tmp, forcing, k4);

    const double c = dt / 6.0;
    double check = 0.0;
    for (size_t i = 0; i < s.eta.size(); ++i) {
        s.eta[i] += c * (k1.eta[i] + 2.0 * (k2.eta[i] + k3.eta[i]) + k4.eta[i]);
        check += s.eta[i];
    }
    for (size_t i = 0; i < s.u.size(); ++i) {
        s.u[i] += c * (k1.u[i] + 2.0 * (k2.u[i] + k3.u[i]) + k4.u[i]);
        check += s.u[i];
    }
    s.t += dt;
    if (!std::isfinite(check))
        throw std::runtime_error("rk4_step: nonfinite-state at t=" + std::to_string(s.t));
}

State SemidiscreteSystem::evolve(State s, double T, double dt, const Forcing& forcing,
                                 const Observer& observer) const {
    if (T < 0.0 || !(dt > 0.0)) throw std::invalid_argument("evolve: need T >= 0, dt > 0");
    const double t_end = s.t + T;
    if (observer) observer(s);
    while (s.t < t_end - 1e-14 * (1.0 + std::abs(t_end))) {
        const double step = std::min(dt, t_end - s.t);
        rk4_step(s, step, forcing);
        if (observer) observer(s);
    }
    s.t = t_end;
    return s;
}

double SemidiscreteSystem::mass_of_eta(const State& s) const {
    std::vector<double> v(eta_tab_.points.size());
    eval_at_quad(eta_space_, eta_tab_, s.eta, v);
    double m = 0.0;
    for (int e = 0; e < eta_tab_.n_elem; ++e)
        for (int q = 0; q < eta_tab_.nq; ++q) m += eta_tab_.weight(q) * v[e * eta_tab_.nq + q];
    return m;
}

double SemidiscreteSystem::mass_of_u(const State& s) const {
    std::vector<double> v(u_tab_.points.size());
    eval_at_quad(u_space_, u_tab_, s.u, v);
    double m = 0.0;
    for (int e = 0; e < u_tab_.n_elem; ++e)
        for (int q = 0; q < u_tab_.nq; ++q) m += u_tab_.weight(q) * v[e * u_tab_.nq + q];
    return m;
}

double SemidiscreteSystem::energy(const State& s) const {
    const size_t n = eta_tab_.points.size();
    std::vector<double> ev(n), uv(n), ux(n);
    eval_at_quad(eta_space_, eta_tab_, s.eta, ev);
    eval_at_quad(u_space_, u_tab_, s.u, uv, ux);
    const double eps = params_.epsilon, a = params_.a;
    double total = 0.0;
    for (int e = 0; e < eta_tab_.n_elem; ++e) {
        for (int q = 0; q < eta_tab_.nq; ++q) {
            const size_t i = e * eta_tab_.nq + q;
            total += eta_tab_.weight(q) *
                     (ev[i] * ev[i] + (1.0 + eps * ev[i]) * uv[i] * uv[i] - eps * a * ux[i] * ux[i]);
        }
    }
    return 0.5 * total;
}

double SemidiscreteSystem::eval_eta(const State& s, double x, int deriv) const {
    return eta_space_.eval(s.eta, x, deriv);
}

double SemidiscreteSystem::eval_u(const State& s, double x, int deriv) const {
    return u_space_.eval(s.u, x, deriv);
}

SemidiscreteSystem::Errors SemidiscreteSystem::errors_against(
    const State& s, const ScalarFn& eta_ex, const ScalarFn& eta_ex_x, const ScalarFn& u_ex,
    const ScalarFn& u_ex_x) const {
    const size_t n = eta_tab_.points.size();
    std::vector<double> ev(n), ex(n), uv(n), ux(n);
    eval_at_quad(eta_space_, eta_tab_, s.eta, ev, ex);
    eval_at_quad(u_space_, u_tab_, s.u, uv, ux);
    double e0 = 0, e1 = 0, n0 = 0, n1 = 0;  // eta: error/norm accumulators
    double f0 = 0, f1 = 0, m0 = 0, m1 = 0;  // u
    for (int e = 0; e < eta_tab_.n_elem; ++e) {
        for (int q = 0; q < eta_tab_.nq; ++q) {
            const size_t i = e * eta_tab_.nq + q;
            const double x = eta_tab_.points[i];
            const double w = eta_tab_.weight(q);
            const double de = ev[i] - eta_ex(x), dex = ex[i] - eta_ex_x(x);
            const double du = uv[i] - u_ex(x), dux = ux[i] - u_ex_x(x);
            e0 += w * de * de;
            e1 += w * dex * dex;
            f0 += w * du * du;
            f1 += w * dux * dux;
            const double ee = eta_ex(x), eex = eta_ex_x(x), uu = u_ex(x), uux = u_ex_x(x);
            n0 += w * ee * ee;
            n1 += w * eex * eex;
            m0 += w * uu * uu;
            m1 += w * uux * uux;
        }
    }
    Errors r;
    r.l2_eta = std::sqrt(e0 / n0);
    r.l2_u = std::sqrt(f0 / m0);
    r.h1_eta = std::sqrt((e0 + e1) / (n0 + n1));
    r.h1_u = std::sqrt((f0 + f1) / (m0 + m1));
    return r;
}

}  // namespace wavetank
