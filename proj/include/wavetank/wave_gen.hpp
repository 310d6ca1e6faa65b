#pragma once

#include <complex>
#include <string>

#include "wavetank/galerkin.hpp"

namespace wavetank {
namespace waves {

using Complex = std::complex<double>;

// Pseudo-spectral traveling-wave profile on the periodic box [-ell, ell] with
// `modes` collocation points; spectra are the rfft half-spectrum (modes/2 + 1).
// Profiles are even about x = 0 and decay below 1e-10 at the box ends.
struct SolitaryWave {
    double speed = 0.0;      // c_s > 1
    double amplitude = 0.0;  // A = eta(0)
    double ell = 50.0;
    int modes = 512;
    std::vector<Complex> fourier_eta, fourier_u;
    double residual_norm = 0.0;
    SystemParams params;

    double eval_eta(double x, int deriv = 0) const;
    double eval_u(double x, int deriv = 0) const;
};

// Residuals of the once-integrated traveling-wave system
//   -c eta + u + eta u + a u'' + b c eta'' = 0
//   -c u + eta + u^2/2 + c d u'' = 0
// evaluated at the full collocation grid (2*M values, first eta then u blocks).
std::vector<double> traveling_residual_grid(std::span<const double> eta,
                                            std::span<const double> u, double c,
                                            const SystemParams& params, double ell);
std::vector<double> traveling_residual(const SolitaryWave& wave, const SystemParams& params);

// Levenberg-Marquardt on the even-restricted pseudo-spectral residuals with the
// amplitude constraint eta(0) = amplitude; the speed is solved simultaneously.
// Requires a < 0, d > 0, 0 < amplitude <= 0.8. Throws "no-convergence".
SolitaryWave solve_solitary_nwogu(double amplitude, const SystemParams& params,
                                  double ell = 50.0, int modes = 512,
                                  double tol = 1e-12, int max_iter = 100);

// Petviashvili iteration (stabilizing exponent 2) for the BBM-BBM system a = 0.
SolitaryWave solve_solitary_bbm_petviashvili(double speed, const SystemParams& params,
                                             double ell = 50.0, int modes = 512,
                                             double tol = 1e-13, int max_iter = 500);

// Secant iteration on the speed to hit a target amplitude with the
// Petviashvili solver.
SolitaryWave solve_bbm_by_amplitude(double amplitude, const SystemParams& params,
                                    double ell = 50.0, int modes = 512);

// L2-project the shifted profile into S_h x S_h^0. Throws "support-overflow"
// when the shifted tails exceed 1e-8 at the FEM domain ends.
State sample_to_fem(const SolitaryWave& wave, double shift, const SemidiscreteSystem& sys);

// Wave files: JSON {c_s, A, ell, M, params} plus coefficient arrays.
void save_wave(const std::string& path, const SolitaryWave& wave);
SolitaryWave load_wave(const std::string& path);

}  // namespace waves
}  // namespace wavetank
