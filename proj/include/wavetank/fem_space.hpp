#pragma once

#include <span>
#include <vector>

#include "wavetank/quadrature.hpp"

namespace wavetank {

// Uniform grid of N elements on [x_min, x_max].
struct Grid {
    double x_min = 0.0;
    double x_max = 1.0;
    int n_elem = 0;
    double h = 0.0;

    double node(int i) const { return x_min + i * h; }
    double length() const { return x_max - x_min; }
};

// Throws std::invalid_argument on x_min >= x_max ("invalid-interval")
// or n_elem < 2 ("too-few-elements").
Grid make_grid(double x_min, double x_max, int n_elem);

enum class Family { Lagrange, CubicSpline };
enum class Bc { Free, DirichletZero };

// Piecewise-polynomial space S_h(mu, r) on a uniform grid:
//   Lagrange(mu=0, r in {2,3,4}) with equispaced nodes per element,
//   CubicSpline(mu=2, r=4) in the clamped B-spline basis.
// Bc::DirichletZero removes the two end degrees of freedom so that
// every member vanishes at x_min and x_max.
class FemSpace {
public:
    FemSpace(Grid grid, Family family, int order, Bc bc);

    const Grid& grid() const { return grid_; }
    Family family() const { return family_; }
    Bc bc() const { return bc_; }
    int order() const { return order_; }            // r: local degree is r-1
    int smoothness() const { return mu_; }          // mu
    int dof_count() const { return dof_count_; }
    int local_dim() const { return order_; }        // basis functions per element
    int half_bandwidth() const { return order_ - 1; }

    // Global dof of local basis j on element e; -1 for dofs removed by the bc.
    int global_index(int elem, int j) const;

    // Values and x-derivatives of the local_dim() basis functions supported on
    // element `elem` at local coordinate t in [0,1].
    void eval_local(int elem, double t, std::span<double> values,
                    std::span<double> derivs) const;

    // Evaluate a coefficient vector at a point inside the domain.
    double eval(std::span<const double> coeffs, double x, int deriv = 0) const;

    // Element index containing x (clamped to the last element at x_max).
    int locate(double x) const;

private:
    Grid grid_;
    Family family_;
    Bc bc_;
    int order_;
    int mu_;
    int dof_count_;
    std::vector<double> knots_;  // clamped knot vector (splines only)
};

// Basis values/derivatives tabulated at the quadrature nodes of every element.
// Layout: value(elem, q, j) with j the local basis index.
struct BasisTable {
    int n_elem = 0;
    int nq = 0;
    int nloc = 0;
    std::vector<double> values;
    std::vector<double> derivs;
    std::vector<double> points;   // physical coordinates of the quad nodes
    std::vector<double> weights;  // quadrature weights times the Jacobian h/2

    double value(int e, int q, int j) const { return values[(e * nq + q) * nloc + j]; }
    double deriv(int e, int q, int j) const { return derivs[(e * nq + q) * nloc + j]; }
    double point(int e, int q) const { return points[e * nq + q]; }
    double weight(int q) const { return weights[q]; }
};

BasisTable tabulate(const FemSpace& space, const QuadratureRule& rule);

}  // namespace wavetank
