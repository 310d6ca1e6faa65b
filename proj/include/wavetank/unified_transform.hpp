#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace wavetank {
namespace ut {

using Complex = std::complex<double>;
using RealFn = std::function<double(double)>;

// Linearized generalized Nwogu coefficients: alpha = -a*eps, beta = b*eps,
// delta = d*eps on (-L, L). beta > max(alpha, delta) is rejected (the branch
// cut would change shape).
struct DispersionSpec {
    double alpha;
    double beta;
    double delta;
    double L;

    DispersionSpec(double alpha, double beta, double delta, double L);
};

enum class CutKind { Inner, Outer };

// Single-valued square root of 1 + coeff*k^2.
// Inner: cut on i[-1/sqrt(c), 1/sqrt(c)], odd along the real axis.
// Outer: cuts i(-inf, -1/sqrt(c)] and i[1/sqrt(c), inf), even on the real axis.
// Throws "on-branch-cut" for k exactly on the respective cut.
Complex mu(Complex k, double coeff, CutKind kind);

// omega(k) = k mu_alpha / (mu_delta mu_beta); equals k when alpha = delta, beta = 0.
Complex omega(Complex k, const DispersionSpec& spec);

// Finite-interval Fourier transform int_{-L}^{L} e^{-ikx} f(x) dx by composite
// Gauss-Legendre with `panels` subintervals.
Complex hat_transform(const RealFn& f, Complex k, double L, int panels = 64);

// Time signal with the derivatives the solution formulas need.
struct TimeSignal {
    RealFn f, df, ddf;
    bool is_zero = false;
    static TimeSignal zero();
};

struct LinearData {
    RealFn eta0, u0;
    TimeSignal g0 = TimeSignal::zero();  // u(-L, t)
    TimeSignal h0 = TimeSignal::zero();  // u(+L, t)
    TimeSignal g2 = TimeSignal::zero();  // u_xx(-L, t)
    TimeSignal h2 = TimeSignal::zero();  // u_xx(+L, t)
};

// B^{+-}_f(omega, t) = e^{i w t} int_0^t e^{-i w tau} f dtau
//                     +- e^{-i w t} int_0^t e^{i w tau} f dtau.
Complex b_transform(const RealFn& f, Complex w, double t, int sign);

// Contour discretization: the real line and L^{+-} with semicircular detours
// of radius pi/(6L) around k_n = n pi / (2L).
struct ContourSpec {
    double k_max;           // truncation radius
    double points_per_unit; // quadrature density along the contour
    int gl_order = 8;
};
ContourSpec default_contour(double L);

// Precomputed node tables for one (spec, data, contour) triple; evaluation at
// (x, t) points is independent per point and OpenMP-parallel in batches.
class Evaluator {
public:
    Evaluator(const DispersionSpec& spec, const LinearData& data, const ContourSpec& contour);

    struct Value {
        double value;
        double imag_err;  // |Im| of the assembled integral, a quadrature estimate
    };
    Value eta(double x, double t) const;
    Value u(double x, double t) const;

    // Batch evaluation over x at fixed t (B-transform tables shared, OpenMP over points).
    void batch(std::span<const double> xs, double t, std::span<Value> eta_out,
               std::span<Value> u_out) const;
    std::vector<Value> eta_batch(std::span<const double> xs, double t) const;
    std::vector<Value> u_batch(std::span<const double> xs, double t) const;

    // min over contour nodes of |1 - e^{-+4ikL}| on the half-plane where each
    // denominator is used; Proposition bound is 1 - e^{-2pi/3}.
    double min_denominator() const;

    const DispersionSpec& spec() const { return spec_; }

private:
    struct Node {
        Complex k, w;           // position, quadrature weight (includes direction)
        Complex ma, md, mb, om;
        Complex hat_eta_p, hat_eta_m, hat_u_p, hat_u_m;  // fial(+-k)
    };
    struct BTable;  // per-(contour,t) boundary transform cache

    DispersionSpec spec_;
    LinearData data_;
    ContourSpec contour_;
    std::vector<Node> real_axis_, lplus_, lminus_;
    bool bc_zero_;

    void fill(std::vector<Node>& nodes, std::vector<Complex>&& ks, std::vector<Complex>&& ws);
    BTable btable(const std::vector<Node>& nodes, double t) const;
};

// Adaptive driver: doubles k_max (and grows density) until two successive
// evaluations agree within tol; throws "truncation-unconverged" otherwise.
struct Result {
    double value;
    double est_error;
};
Result eval_eta(double x, double t, const DispersionSpec& spec, const LinearData& data,
                ContourSpec contour, double tol, int max_rounds = 4);
Result eval_u(double x, double t, const DispersionSpec& spec, const LinearData& data,
              ContourSpec contour, double tol, int max_rounds = 4);

// |int over L^{+-} of the four Proposition integrand variants|; all tend to 0.
//   variant 0: L^+, e^{ik(x+L)}/Delta(k) * fhat(k)
//   variant 1: L^+, e^{ik(x+L)}/Delta(k) * e^{2ikL} fhat(-k)
//   variant 2: L^-, e^{ik(x-L)}/conj(Delta(conj k)) * fhat(k)
//   variant 3: L^-, e^{ik(x-L)}/conj(Delta(conj k)) * e^{-2ikL} fhat(-k)
double jordan_check(const RealFn& f, double x, int variant, double L,
                    const ContourSpec& contour);

}  // namespace ut
}  // namespace wavetank
