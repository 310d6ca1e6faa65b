#pragma once

#include <span>
#include <vector>

namespace wavetank {
namespace greens {

enum class Kind { Neumann, Dirichlet };

// Green's kernel of w - q w_xx = -f_x on (-L, L) with Neumann (q = b) or
// Dirichlet (q = d) ends. Neumann hyperbolic pair: omega1 = cosh((L+x)/sqrt(b)),
// omega2 = cosh((L-x)/sqrt(b)), W = -sinh(2L/sqrt(b))/sqrt(b); Dirichlet uses
// the sinh analogues with sqrt(d).
struct GreensKernel {
    Kind kind;
    double coeff;  // b or d, must be > 0
    double L;

    GreensKernel(Kind kind, double coeff, double L);

    // dF/dxi (x, xi): the convolution kernel of L_N / L_D.
    double fxi(double x, double xi) const;

    // Two-branch Green's function itself; continuous at xi = x.
    double green(double x, double xi) const;

    double omega1(double x) const;
    double omega2(double x) const;
    double wronskian() const;
};

// Sampled pair (eta, u) on a uniform grid of m points spanning [-L, L].
struct GridFunctionPair {
    std::vector<double> eta;
    std::vector<double> u;
    double t = 0.0;
};

// (L f)(x_i) on the kernel's uniform m-point grid. The convolution splits at
// xi = x where the kernel derivative jumps.
//
// Serial reference: O(m) prefix/suffix cumulative integrals (4th order).
// Parallel kernel: per-point composite quadrature, OpenMP over output points.
std::vector<double> apply_serial(const GreensKernel& k, std::span<const double> f);
std::vector<double> apply_omp(const GreensKernel& k, std::span<const double> f);

inline std::vector<double> apply_ln(const GreensKernel& k, std::span<const double> f) {
    return apply_omp(k, f);
}
inline std::vector<double> apply_ld(const GreensKernel& k, std::span<const double> f) {
    return apply_omp(k, f);
}

// 4th-order cumulative integral of uniformly sampled data: out[i] = int_{x_0}^{x_i} f.
std::vector<double> cumulative_integral(std::span<const double> f, double h);

// 4th-order first derivative of uniformly sampled data (one-sided at the ends).
std::vector<double> derivative(std::span<const double> f, double h);

struct PicardResult {
    std::vector<GridFunctionPair> trajectory;  // time levels 0..n_steps
    std::vector<double> diff_history;          // successive sup-norm differences
    int iterations = 0;
    bool converged = false;
};

// Fixed-point iteration of the integral-equation map
//   eta = eta0 + int_0^t [ L_N((a+b)/b u + eta u) + (a/b) u_x ] dtau
//   u   = u0   + int_0^t L_D(eta + u^2/2) dtau
// with the composite trapezoid rule in time. Requires b > 0.
// Throws "no-contraction" when successive differences grow three times in a
// row, "max-iter-exceeded" when the budget runs out.
PicardResult picard_solve(std::span<const double> eta0, std::span<const double> u0,
                          double a, double b, double d, double L, double T, int time_steps,
                          int max_iter, double tol);

// Halve T until the observed contraction ratio is <= target (default 0.8).
struct AutoPicard {
    double T;
    PicardResult result;
};
AutoPicard picard_auto_time(std::span<const double> eta0, std::span<const double> u0,
                            double a, double b, double d, double L, double T0,
                            int time_steps, int max_iter, double tol,
                            double target_ratio = 0.8);

}  // namespace greens
}  // namespace wavetank
