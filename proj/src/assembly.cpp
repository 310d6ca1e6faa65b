#include "wavetank/assembly.hpp"

#include <cmath>
#include <stdexcept>

namespace wavetank {

BandedSymMatrix assemble_aq(const FemSpace& space, double q, const BasisTable& tab) {
    BandedSymMatrix m(space.dof_count(), space.half_bandwidth());
    for (int e = 0; e < tab.n_elem; ++e) {
        for (int iq = 0; iq < tab.nq; ++iq) {
            const double w = tab.weight(iq);
            for (int j = 0; j < tab.nloc; ++j) {
                const int gj = space.global_index(e, j);
                if (gj < 0) continue;
                for (int i = j; i < tab.nloc; ++i) {
                    const int gi = space.global_index(e, i);
                    if (gi < 0) continue;
                    const double v = tab.value(e, iq, i) * tab.value(e, iq, j) +
                                     q * tab.deriv(e, iq, i) * tab.deriv(e, iq, j);
                    if (gi >= gj)
                        m.add(gi, gj, w * v);
                    else
                        m.add(gj, gi, w * v);
                }
            }
        }
    }
    m.factorize();
    return m;
}

std::vector<double> assemble_load(const FemSpace& space, const BasisTable& tab,
                                  std::span<const double> w_at_quad) {
    std::vector<double> rhs(space.dof_count(), 0.0);
    for (int e = 0; e < tab.n_elem; ++e) {
        for (int iq = 0; iq < tab.nq; ++iq) {
            const double ww = tab.weight(iq) * w_at_quad[e * tab.nq + iq];
            for (int j = 0; j < tab.nloc; ++j) {
                const int gj = space.global_index(e, j);
                if (gj >= 0) rhs[gj] += ww * tab.value(e, iq, j);
            }
        }
    }
    return rhs;
}

std::vector<double> assemble_load_dx(const FemSpace& space, const BasisTable& tab,
                                     std::span<const double> w_at_quad) {
    std::vector<double> rhs(space.dof_count(), 0.0);
    for (int e = 0; e < tab.n_elem; ++e) {
        for (int iq = 0; iq < tab.nq; ++iq) {
            const double ww = tab.weight(iq) * w_at_quad[e * tab.nq + iq];
            for (int j = 0; j < tab.nloc; ++j) {
                const int gj = space.global_index(e, j);
                if (gj >= 0) rhs[gj] += ww * tab.deriv(e, iq, j);
            }
        }
    }
    return rhs;
}

void eval_at_quad(const FemSpace& space, const BasisTable& tab,
                  std::span<const double> coeffs, std::span<double> values,
                  std::span<double> derivs) {
    const bool want_d = !derivs.empty();
    for (int e = 0; e < tab.n_elem; ++e) {
        for (int iq = 0; iq < tab.nq; ++iq) {
            double v = 0.0, d = 0.0;
            for (int j = 0; j < tab.nloc; ++j) {
                const int gj = space.global_index(e, j);
                if (gj < 0) continue;
                v += coeffs[gj] * tab.value(e, iq, j);
                if (want_d) d += coeffs[gj] * tab.deriv(e, iq, j);
            }
            values[e * tab.nq + iq] = v;
            if (want_d) derivs[e * tab.nq + iq] = d;
        }
    }
}

std::vector<double> sample_at_quad(const BasisTable& tab, const ScalarFn& f) {
    std::vector<double> out(tab.points.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = f(tab.points[i]);
    return out;
}

std::vector<double> l2_project(const FemSpace& space, const BasisTable& tab,
                               const BandedSymMatrix& mass, const ScalarFn& f) {
    return mass.solve(assemble_load(space, tab, sample_at_quad(tab, f)));
}

std::vector<double> elliptic_project(const FemSpace& space, const BasisTable& tab,
                                     const BandedSymMatrix& aq, double q,
                                     const ScalarFn& f, const ScalarFn& fprime) {
    if (space.bc() == Bc::DirichletZero) {
        const double fa = f(space.grid().x_min), fb = f(space.grid().x_max);
        if (std::abs(fa) > 1e-10 || std::abs(fb) > 1e-10)
            throw std::invalid_argument("elliptic_project: boundary-mismatch, f(ends)=(" +
                                        std::to_string(fa) + ", " + std::to_string(fb) + ")");
    }
    auto rhs = assemble_load(space, tab, sample_at_quad(tab, f));
    const auto rhs_dx = assemble_load_dx(space, tab, sample_at_quad(tab, fprime));
    for (size_t i = 0; i < rhs.size(); ++i) rhs[i] += q * rhs_dx[i];
    return aq.solve(rhs);
}

std::vector<double> discrete_laplacian(const FemSpace& u_space, const BasisTable& u_tab,
                                       std::span<const double> u,
                                       const FemSpace& space0, const BasisTable& tab0,
                                       const BandedSymMatrix& mass0) {
    std::vector<double> ux(u_tab.points.size()), uv(u_tab.points.size());
    eval_at_quad(u_space, u_tab, u, uv, ux);
    auto rhs = assemble_load_dx(space0, tab0, ux);
    for (auto& v : rhs) v = -v;
    return mass0.solve(rhs);
}

std::vector<double> apply_fh(const FemSpace& space, const BasisTable& tab,
                             const BandedSymMatrix& ab, std::span<const double> w_at_quad) {
    return ab.solve(assemble_load_dx(space, tab, w_at_quad));
}

std::vector<double> apply_gh(const FemSpace& space0, const BasisTable& tab0,
                             const BandedSymMatrix& ad, std::span<const double> w_at_quad) {
    return ad.solve(assemble_load_dx(space0, tab0, w_at_quad));
}

}  // namespace wavetank
