#include "wavetank/fem_space.hpp"

#include <cmath>
#include <stdexcept>

namespace wavetank {

Grid make_grid(double x_min, double x_max, int n_elem) {
    if (!(x_min < x_max))
        throw std::invalid_argument("make_grid: invalid-interval [" + std::to_string(x_min) +
                                    ", " + std::to_string(x_max) + "]");
    if (n_elem < 2)
        throw std::invalid_argument("make_grid: too-few-elements (" + std::to_string(n_elem) + ")");
    Grid g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.n_elem = n_elem;
    g.h = (x_max - x_min) / n_elem;
    return g;
}

FemSpace::FemSpace(Grid grid, Family family, int order, Bc bc)
    : grid_(grid), family_(family), bc_(bc), order_(order) {
    if (family_ == Family::Lagrange) {
        if (order_ < 2 || order_ > 4)
            throw std::invalid_argument("FemSpace: unsupported-family Lagrange r=" +
                                        std::to_string(order_));
        mu_ = 0;
        dof_count_ = grid_.n_elem * (order_ - 1) + 1;
    } else {
        if (order_ != 4)
            throw std::invalid_argument("FemSpace: unsupported-family CubicSpline r=" +
                                        std::to_string(order_));
        mu_ = 2;
        dof_count_ = grid_.n_elem + 3;
        // clamped knot vector: 4 copies of each end, interior grid nodes between
        knots_.resize(grid_.n_elem + 7);
        for (int i = 0; i < 4; ++i) knots_[i] = grid_.x_min;
        for (int i = 1; i < grid_.n_elem; ++i) knots_[i + 3] = grid_.node(i);
        for (int i = 0; i < 4; ++i) knots_[grid_.n_elem + 3 + i] = grid_.x_max;
    }
    if (bc_ == Bc::DirichletZero) dof_count_ -= 2;
}

int FemSpace::global_index(int elem, int j) const {
    int gi = (family_ == Family::Lagrange) ? elem * (order_ - 1) + j : elem + j;
    if (bc_ == Bc::Free) return gi;
    const int n_free = (family_ == Family::Lagrange) ? grid_.n_elem * (order_ - 1) + 1
                                                     : grid_.n_elem + 3;
    if (gi == 0 || gi == n_free - 1) return -1;
    return gi - 1;
}

namespace {

// Lagrange basis on [0,1] with equispaced nodes tau_m = m/(r-1).
void lagrange_local(int r, double t, std::span<double> vals, std::span<double> ders) {
    const double dn = r - 1.0;
    for (int m = 0; m < r; ++m) {
        const double tm = m / dn;
        double v = 1.0;
        for (int l = 0; l < r; ++l) {
            if (l == m) continue;
            v *= (t - l / dn) / (tm - l / dn);
        }
        vals[m] = v;
        double dv = 0.0;
        for (int l = 0; l < r; ++l) {
            if (l == m) continue;
            double p = 1.0 / (tm - l / dn);
            for (int q = 0; q < r; ++q) {
                if (q == m || q == l) continue;
                p *= (t - q / dn) / (tm - q / dn);
            }
            dv += p;
        }
        ders[m] = dv;
    }
}

// Nonzero cubic B-splines and first derivatives at x in knot span i
// (t[i] <= x <= t[i+1]); vals[r] is the basis with global index i-3+r.
void cubic_bspline_local(const std::vector<double>& t, int i, double x,
                         std::span<double> vals, std::span<double> ders) {
    constexpr int p = 3;
    double ndu[p + 1][p + 1];
    double left[p + 1], right[p + 1];
    ndu[0][0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = x - t[i + 1 - j];
        right[j] = t[i + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            const double temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }
    for (int r = 0; r <= p; ++r) vals[r] = ndu[r][p];
    // N'_{j,p} = p*( N_{j,p-1}/(t[j+p]-t[j]) - N_{j+1,p-1}/(t[j+p+1]-t[j+1]) )
    for (int r = 0; r <= p; ++r) {
        const int j = i - p + r;
        double d = 0.0;
        if (r >= 1) {
            const double den = t[j + p] - t[j];
            if (den > 0.0) d += ndu[r - 1][p - 1] / den;
        }
        if (r <= p - 1) {
            const double den = t[j + p + 1] - t[j + 1];
            if (den > 0.0) d -= ndu[r][p - 1] / den;
        }
        ders[r] = p * d;
    }
}

}  // namespace

void FemSpace::eval_local(int elem, double t, std::span<double> values,
                          std::span<double> derivs) const {
    if (elem < 0 || elem >= grid_.n_elem)
        throw std::invalid_argument("eval_local: element index out of range");
    if (family_ == Family::Lagrange) {
        lagrange_local(order_, t, values, derivs);
        for (int j = 0; j < order_; ++j) derivs[j] /= grid_.h;
    } else {
        const double x = grid_.node(elem) + t * grid_.h;
        cubic_bspline_local(knots_, elem + 3, x, values, derivs);
    }
}

int FemSpace::locate(double x) const {
    const double tol = 1e-12 * (1.0 + std::abs(grid_.length()));
    if (x < grid_.x_min - tol || x > grid_.x_max + tol)
        throw std::invalid_argument("eval: point-outside-domain x=" + std::to_string(x));
    int e = static_cast<int>(std::floor((x - grid_.x_min) / grid_.h));
    if (e < 0) e = 0;
    if (e >= grid_.n_elem) e = grid_.n_elem - 1;
    return e;
}

double FemSpace::eval(std::span<const double> coeffs, double x, int deriv) const {
    const int e = locate(x);
    const double t = (x - grid_.node(e)) / grid_.h;
    double vals[8], ders[8];
    eval_local(e, t, {vals, vals + order_}, {ders, ders + order_});
    const double* src = (deriv == 0) ? vals : ders;
    double out = 0.0;
    for (int j = 0; j < order_; ++j) {
        const int gi = global_index(e, j);
        if (gi >= 0) out += coeffs[gi] * src[j];
    }
    return out;
}

BasisTable tabulate(const FemSpace& space, const QuadratureRule& rule) {
    BasisTable tab;
    tab.n_elem = space.grid().n_elem;
    tab.nq = rule.size();
    tab.nloc = space.local_dim();
    tab.values.resize(static_cast<size_t>(tab.n_elem) * tab.nq * tab.nloc);
    tab.derivs.resize(tab.values.size());
    tab.points.resize(static_cast<size_t>(tab.n_elem) * tab.nq);
    tab.weights.resize(tab.nq);
    const double h = space.grid().h;
    for (int q = 0; q < tab.nq; ++q) tab.weights[q] = 0.5 * h * rule.weights[q];
    for (int e = 0; e < tab.n_elem; ++e) {
        for (int q = 0; q < tab.nq; ++q) {
            const double t = 0.5 * (rule.nodes[q] + 1.0);
            tab.points[e * tab.nq + q] = space.grid().node(e) + t * h;
            double* v = &tab.values[(e * tab.nq + q) * tab.nloc];
            double* d = &tab.derivs[(e * tab.nq + q) * tab.nloc];
            space.eval_local(e, t, {v, v + tab.nloc}, {d, d + tab.nloc});
        }
    }
    return tab;
}

}  // namespace wavetank
