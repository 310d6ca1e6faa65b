#pragma once

#include <functional>
#include <span>

#include "wavetank/banded.hpp"
#include "wavetank/fem_space.hpp"

namespace wavetank {

using ScalarFn = std::function<double(double)>;

// Matrix of the bilinear form A_q(u,v) = (u,v) + q(u_x,v_x), q >= 0.
// Assembled with the given rule and factorized before return.
BandedSymMatrix assemble_aq(const FemSpace& space, double q, const BasisTable& tab);

// Load vector (w, phi_i) from integrand values sampled at the table's
// quadrature nodes (layout elem-major, n_elem*nq entries).
std::vector<double> assemble_load(const FemSpace& space, const BasisTable& tab,
                                  std::span<const double> w_at_quad);

// Load vector (w, phi_i') from sampled integrand values.
std::vector<double> assemble_load_dx(const FemSpace& space, const BasisTable& tab,
                                     std::span<const double> w_at_quad);

// Values (and optionally x-derivatives) of a coefficient vector at all
// quadrature nodes of the table.
void eval_at_quad(const FemSpace& space, const BasisTable& tab,
                  std::span<const double> coeffs, std::span<double> values,
                  std::span<double> derivs = {});

// Sample a callable at the table's quadrature nodes.
std::vector<double> sample_at_quad(const BasisTable& tab, const ScalarFn& f);

// L2 projection P_h f (or P_h^0 f on a DirichletZero space).
std::vector<double> l2_project(const FemSpace& space, const BasisTable& tab,
                               const BandedSymMatrix& mass, const ScalarFn& f);

// Elliptic projection R_h f through A_q: A_q(R_h f, chi) = A_q(f, chi).
// For DirichletZero spaces f must vanish at the interval ends
// (tolerance 1e-10, else "boundary-mismatch").
std::vector<double> elliptic_project(const FemSpace& space, const BasisTable& tab,
                                     const BandedSymMatrix& aq, double q,
                                     const ScalarFn& f, const ScalarFn& fprime);

// Discrete Laplacian: the S_h^0 function with (lap, phi) = -(u_x, phi_x).
// u lives on u_space (same grid as the Dirichlet target space).
std::vector<double> discrete_laplacian(const FemSpace& u_space, const BasisTable& u_tab,
                                       std::span<const double> u,
                                       const FemSpace& space0, const BasisTable& tab0,
                                       const BandedSymMatrix& mass0);

// f_h[w] on S_h: A_b(f_h[w], chi) = (w, chi_x); w sampled at quadrature nodes.
std::vector<double> apply_fh(const FemSpace& space, const BasisTable& tab,
                             const BandedSymMatrix& ab, std::span<const double> w_at_quad);

// g_h[w] on S_h^0: A_d(g_h[w], phi) = (w, phi_x).
std::vector<double> apply_gh(const FemSpace& space0, const BasisTable& tab0,
                             const BandedSymMatrix& ad, std::span<const double> w_at_quad);

}  // namespace wavetank
