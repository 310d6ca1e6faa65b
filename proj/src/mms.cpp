#include "wavetank/mms.hpp"

#include <cmath>
#include <numbers>

namespace wavetank {

namespace {
constexpr double PI = std::numbers::pi;

double p(double x) { return x * x * (x - 1.0) * (x - 1.0); }
double pd(double x) { return 4.0 * x * x * x - 6.0 * x * x + 2.0 * x; }
double pdd(double x) { return 12.0 * x * x - 12.0 * x + 2.0; }
double pddd(double x) { return 24.0 * x - 12.0; }
}  // namespace

double ManufacturedCase::eta(double x, double t) const {
    return std::exp(2.0 * t) * std::cos(PI * x);
}

double ManufacturedCase::eta_x(double x, double t) const {
    return -PI * std::exp(2.0 * t) * std::sin(PI * x);
}

double ManufacturedCase::u(double x, double t) const {
    return std::exp(t) * p(x) * std::sin(PI * x);
}

double ManufacturedCase::u_x(double x, double t) const {
    return std::exp(t) * (pd(x) * std::sin(PI * x) + PI * p(x) * std::cos(PI * x));
}

Forcing ManufacturedCase::forcing() const {
    const double a = params.a, b = params.b, d = params.d;
    auto s_eta = [a, b](double x, double t) {
        const double E1 = std::exp(t), E2 = std::exp(2.0 * t);
        const double S = std::sin(PI * x), C = std::cos(PI * x);
        const double eta = E2 * C;
        const double eta_t = 2.0 * eta;
        const double eta_x = -PI * E2 * S;
        const double u = E1 * p(x) * S;
        const double u_x = E1 * (pd(x) * S + PI * p(x) * C);
        const double u_xxx = E1 * (pddd(x) * S + 3.0 * PI * pdd(x) * C -
                                   3.0 * PI * PI * pd(x) * S - PI * PI * PI * p(x) * C);
        // -b*eta_xxt = 2*b*pi^2*e^{2t}cos(pi x)
        return eta_t + u_x + (eta_x * u + eta * u_x) + a * u_xxx + 2.0 * b * PI * PI * E2 * C;
    };
    auto s_u = [d](double x, double t) {
        const double E1 = std::exp(t), E2 = std::exp(2.0 * t);
        const double S = std::sin(PI * x), C = std::cos(PI * x);
        const double eta_x = -PI * E2 * S;
        const double u = E1 * p(x) * S;
        const double u_x = E1 * (pd(x) * S + PI * p(x) * C);
        const double u_xx = E1 * (pdd(x) * S + 2.0 * PI * pd(x) * C - PI * PI * p(x) * S);
        return u + eta_x + u * u_x - d * u_xx;  // u_t = u, u_xxt = u_xx
    };
    return Forcing{s_eta, s_u};
}

ManufacturedCase mms_default() {
    ManufacturedCase c;
    c.params = SystemParams::from_abd(-1.0, 1.0, 1.0);
    return c;
}

}  // namespace wavetank
