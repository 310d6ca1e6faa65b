#include "wavetank/greens.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wavetank {
namespace greens {

GreensKernel::GreensKernel(Kind kind_, double coeff_, double L_)
    : kind(kind_), coeff(coeff_), L(L_) {
    if (!(coeff > 0.0))
        throw std::invalid_argument("GreensKernel: requires a positive coefficient (b > 0)");
    if (!(L > 0.0)) throw std::invalid_argument("GreensKernel: L must be > 0");
    if (2.0 * L / std::sqrt(coeff) > 650.0)
        throw std::invalid_argument("GreensKernel: 2L/sqrt(coeff) too large, cosh overflow");
}

double GreensKernel::omega1(double x) const {
    const double s = std::sqrt(coeff);
    return kind == Kind::Neumann ? std::cosh((L + x) / s) : std::sinh((L + x) / s);
}

double GreensKernel::omega2(double x) const {
    const double s = std::sqrt(coeff);
    return kind == Kind::Neumann ? std::cosh((L - x) / s) : std::sinh((L - x) / s);
}

double GreensKernel::wronskian() const {
    const double s = std::sqrt(coeff);
    return -std::sinh(2.0 * L / s) / s;
}

double GreensKernel::green(double x, double xi) const {
    const double c = -1.0 / (coeff * wronskian());
    return xi <= x ? c * omega1(xi) * omega2(x) : c * omega1(x) * omega2(xi);
}

double GreensKernel::fxi(double x, double xi) const {
    const double s = std::sqrt(coeff);
    const double c = -1.0 / (coeff * wronskian());
    if (xi < x) {
        const double d1 = (kind == Kind::Neumann ? std::sinh((L + xi) / s)
                                                 : std::cosh((L + xi) / s)) / s;
        return c * d1 * omega2(x);
    }
    const double d2 = (kind == Kind::Neumann ? -std::sinh((L - xi) / s)
                                             : -std::cosh((L - xi) / s)) / s;
    return c * omega1(x) * d2;
}

std::vector<double> cumulative_integral(std::span<const double> f, double h) {
    const int n = static_cast<int>(f.size());
    if (n < 4) throw std::invalid_argument("cumulative_integral: need at least 4 samples");
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n - 1; ++i) {
        double seg;
        if (i == 0)
            seg = h * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) / 24.0;
        else if (i == n - 2)
            seg = h * (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]) / 24.0;
        else
            seg = h * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]) / 24.0;
        out[i + 1] = out[i] + seg;
    }
    return out;
}

std::vector<double> derivative(std::span<const double> f, double h) {
    const int n = static_cast<int>(f.size());
    if (n < 5) throw std::invalid_argument("derivative: need at least 5 samples");
    std::vector<double> out(n);
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    for (int i = 2; i < n - 2; ++i)
        out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    out[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] -
                  f[n - 5]) / (12.0 * h);
    out[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] +
                  3.0 * f[n - 5]) / (12.0 * h);
    return out;
}

std::vector<double> apply_serial(const GreensKernel& k, std::span<const double> f) {
    const int n = static_cast<int>(f.size());
    const double h = 2.0 * k.L / (n - 1);
    const double s = std::sqrt(k.coeff);
    std::vector<double> g1(n), g2(n);
    for (int i = 0; i < n; ++i) {
        const double xi = -k.L + i * h;
        const double d1 = (k.kind == Kind::Neumann ? std::sinh((k.L + xi) / s)
                                                   : std::cosh((k.L + xi) / s)) / s;
        const double d2 = (k.kind == Kind::Neumann ? -std::sinh((k.L - xi) / s)
                                                   : -std::cosh((k.L - xi) / s)) / s;
        g1[i] = d1 * f[i];
        g2[i] = d2 * f[i];
    }
    const auto pre = cumulative_integral(g1, h);
    // suffix integral of g2 without cancellation: reverse, accumulate, flip sign
    std::vector<double> g2r(g2.rbegin(), g2.rend());
    const auto sufr = cumulative_integral(g2r, h);
    const double c = -1.0 / (k.coeff * k.wronskian());
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = c * (k.omega2(-k.L + i * h) * pre[i] + k.omega1(-k.L + i * h) * sufr[n - 1 - i]);
    return out;
}

namespace {

// 4th-order integral of samples g[0..m] on spacing h (self-contained stencils).
double integrate_range(const double* g, int m, double h) {
    if (m <= 0) return 0.0;
    if (m == 1) return 0.5 * h * (g[0] + g[1]);
    if (m == 2) return h / 3.0 * (g[0] + 4.0 * g[1] + g[2]);
    if (m == 3) return 3.0 * h / 8.0 * (g[0] + 3.0 * g[1] + 3.0 * g[2] + g[3]);
    double total = h * (9.0 * g[0] + 19.0 * g[1] - 5.0 * g[2] + g[3]) / 24.0;
    for (int j = 1; j < m - 1; ++j)
        total += h * (-g[j - 1] + 13.0 * g[j] + 13.0 * g[j + 1] - g[j + 2]) / 24.0;
    total += h * (g[m - 3] - 5.0 * g[m - 2] + 19.0 * g[m - 1] + 9.0 * g[m]) / 24.0;
    return total;
}

}  // namespace

std::vector<double> apply_omp(const GreensKernel& k, std::span<const double> f) {
    const int n = static_cast<int>(f.size());
    const double h = 2.0 * k.L / (n - 1);
    const double s = std::sqrt(k.coeff);
    std::vector<double> g1(n), g2(n);
    for (int i = 0; i < n; ++i) {
        const double xi = -k.L + i * h;
        const double d1 = (k.kind == Kind::Neumann ? std::sinh((k.L + xi) / s)
                                                   : std::cosh((k.L + xi) / s)) / s;
        const double d2 = (k.kind == Kind::Neumann ? -std::sinh((k.L - xi) / s)
                                                   : -std::cosh((k.L - xi) / s)) / s;
        g1[i] = d1 * f[i];
        g2[i] = d2 * f[i];
    }
    const double c = -1.0 / (k.coeff * k.wronskian());
    std::vector<double> out(n);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const double x = -k.L + i * h;
        const double left = integrate_range(g1.data(), i, h);
        const double right = integrate_range(g2.data() + i, n - 1 - i, h);
        out[i] = c * (k.omega2(x) * left + k.omega1(x) * right);
    }
    return out;
}

PicardResult picard_solve(std::span<const double> eta0, std::span<const double> u0,
                          double a, double b, double d, double L, double T, int time_steps,
                          int max_iter, double tol) {
    if (eta0.size() != u0.size()) throw std::invalid_argument("picard_solve: size mismatch");
    const int n = static_cast<int>(eta0.size());
    const int nt = time_steps;
    const double h = 2.0 * L / (n - 1);
    const double dtau = T / nt;
    const GreensKernel kn(Kind::Neumann, b, L);  // rejects b <= 0
    const GreensKernel kd(Kind::Dirichlet, d, L);

    auto levels = [&](auto&& init) {
        std::vector<std::vector<double>> v(nt + 1);
        for (auto& lv : v) lv = init;
        return v;
    };
    std::vector<double> e0(eta0.begin(), eta0.end()), v0(u0.begin(), u0.end());
    auto eta = levels(e0), u = levels(v0);

    PicardResult res;
    for (int it = 0; it < max_iter; ++it) {
        // integrands per time level from the current iterate
        std::vector<std::vector<double>> f1(nt + 1), f2(nt + 1);
        for (int m = 0; m <= nt; ++m) {
            std::vector<double> w(n);
            for (int i = 0; i < n; ++i) w[i] = (a + b) / b * u[m][i] + eta[m][i] * u[m][i];
            auto ln = apply_omp(kn, w);
            const auto ux = derivative(u[m], h);
            f1[m].resize(n);
            for (int i = 0; i < n; ++i) f1[m][i] = ln[i] + a / b * ux[i];
            for (int i = 0; i < n; ++i) w[i] = eta[m][i] + 0.5 * u[m][i] * u[m][i];
            f2[m] = apply_omp(kd, w);
        }
        // trapezoid in time, accumulated over levels
        auto eta_new = levels(e0);
        auto u_new = levels(v0);
        for (int m = 1; m <= nt; ++m) {
            for (int i = 0; i < n; ++i) {
                eta_new[m][i] = eta_new[m - 1][i] + 0.5 * dtau * (f1[m - 1][i] + f1[m][i]);
                u_new[m][i] = u_new[m - 1][i] + 0.5 * dtau * (f2[m - 1][i] + f2[m][i]);
            }
        }
        double diff = 0.0;
        for (int m = 0; m <= nt; ++m) {
            for (int i = 0; i < n; ++i) {
                diff = std::max(diff, std::abs(eta_new[m][i] - eta[m][i]));
                diff = std::max(diff, std::abs(u_new[m][i] - u[m][i]));
            }
        }
        eta.swap(eta_new);
        u.swap(u_new);
        res.diff_history.push_back(diff);
        res.iterations = it + 1;
        if (diff < tol) {
            res.converged = true;
            break;
        }
        const int nh = static_cast<int>(res.diff_history.size());
        if (nh >= 4 && res.diff_history[nh - 1] > res.diff_history[nh - 2] &&
            res.diff_history[nh - 2] > res.diff_history[nh - 3] &&
            res.diff_history[nh - 3] > res.diff_history[nh - 4])
            throw std::runtime_error("picard_solve: no-contraction (diverging iterates)");
    }
    if (!res.converged) throw std::runtime_error("picard_solve: max-iter-exceeded");
    res.trajectory.resize(nt + 1);
    for (int m = 0; m <= nt; ++m) {
        res.trajectory[m].eta = eta[m];
        res.trajectory[m].u = u[m];
        res.trajectory[m].t = m * dtau;
    }
    return res;
}

AutoPicard picard_auto_time(std::span<const double> eta0, std::span<const double> u0,
                            double a, double b, double d, double L, double T0,
                            int time_steps, int max_iter, double tol, double target_ratio) {
    double T = T0;
    for (int attempt = 0; attempt < 24; ++attempt) {
        bool ok = true;
        PicardResult r;
        try {
            r = picard_solve(eta0, u0, a, b, d, L, T, time_steps, max_iter, tol);
            for (size_t i = 2; i + 1 < r.diff_history.size(); ++i) {
                const double prev = r.diff_history[i - 1];
                if (prev > 1e6 * tol && r.diff_history[i] / prev > target_ratio) ok = false;
            }
        } catch (const std::runtime_error&) {
            ok = false;
        }
        if (ok) return AutoPicard{T, std::move(r)};
        T *= 0.5;
    }
    throw std::runtime_error("picard_auto_time: no-contraction even at tiny T");
}

}  // namespace greens
}  // namespace wavetank
