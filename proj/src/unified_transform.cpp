#include "wavetank/unified_transform.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wavetank/quadrature.hpp"

namespace wavetank {
namespace ut {

namespace {
constexpr double PI = std::numbers::pi;
const Complex I(0.0, 1.0);

double angle_in(Complex z, double lo) {
    double a = std::arg(z);
    while (a < lo) a += 2.0 * PI;
    while (a >= lo + 2.0 * PI) a -= 2.0 * PI;
    return a;
}
}  // namespace

DispersionSpec::DispersionSpec(double alpha_, double beta_, double delta_, double L_)
    : alpha(alpha_), beta(beta_), delta(delta_), L(L_) {
    if (!(alpha > 0.0) || !(delta > 0.0) || !(L > 0.0))
        throw std::invalid_argument("DispersionSpec: alpha, delta, L must be > 0");
    if (beta < 0.0) throw std::invalid_argument("DispersionSpec: beta must be >= 0");
    if (beta > std::max(alpha, delta) * (1.0 + 1e-12))
        throw std::invalid_argument(
            "DispersionSpec: beta > max(alpha, delta) needs a different branch cut");
}

Complex mu(Complex k, double coeff, CutKind kind) {
    if (coeff == 0.0) return Complex(1.0, 0.0);
    const double bp = 1.0 / std::sqrt(coeff);
    if (k.real() == 0.0) {
        const double ai = std::abs(k.imag());
        const bool on_cut = (kind == CutKind::Inner) ? (ai <= bp) : (ai >= bp);
        if (on_cut) throw std::invalid_argument("mu: on-branch-cut");
    }
    const Complex z1 = k + I * bp;  // from the lower branch point
    const Complex z2 = k - I * bp;  // from the upper branch point
    // Local-angle windows chosen so the inner cut joins the branch points and
    // the outer cut runs to +-i infinity; both give mu(1) = sqrt(1+coeff).
    const double t1 = angle_in(z1, -PI / 2.0);
    const double t2 = angle_in(z2, kind == CutKind::Inner ? -PI / 2.0 : -3.0 * PI / 2.0);
    return std::sqrt(coeff) * std::sqrt(std::abs(z1) * std::abs(z2)) *
           std::exp(I * 0.5 * (t1 + t2));
}

Complex omega(Complex k, const DispersionSpec& spec) {
    if (spec.beta == 0.0 && std::abs(spec.alpha - spec.delta) < 1e-15) return k;
    return k * mu(k, spec.alpha, CutKind::Inner) /
           (mu(k, spec.delta, CutKind::Inner) * mu(k, spec.beta, CutKind::Outer));
}

Complex hat_transform(const RealFn& f, Complex k, double L, int panels) {
    static const QuadratureRule rule = gauss_legendre(10);
    Complex total(0.0, 0.0);
    for (int p = 0; p < panels; ++p) {
        const double a = -L + 2.0 * L * p / panels;
        const double b = -L + 2.0 * L * (p + 1) / panels;
        const double mid = 0.5 * (a + b), hl = 0.5 * (b - a);
        for (int q = 0; q < rule.size(); ++q) {
            const double x = mid + hl * rule.nodes[q];
            total += hl * rule.weights[q] * std::exp(-I * k * x) * f(x);
        }
    }
    return total;
}

TimeSignal TimeSignal::zero() {
    TimeSignal s;
    s.f = s.df = s.ddf = [](double) { return 0.0; };
    s.is_zero = true;
    return s;
}

namespace {

// P = int_0^t e^{-iw tau} f dtau and M = int_0^t e^{+iw tau} f dtau.
void b_pair(const RealFn& f, Complex w, double t, Complex& P, Complex& M) {
    static const QuadratureRule rule = gauss_legendre(10);
    const int panels = std::max(4, static_cast<int>(std::abs(w) * t / 3.0) + 4);
    P = M = Complex(0.0, 0.0);
    for (int p = 0; p < panels; ++p) {
        const double a = t * p / panels, b = t * (p + 1) / panels;
        const double mid = 0.5 * (a + b), hl = 0.5 * (b - a);
        for (int q = 0; q < rule.size(); ++q) {
            const double tau = mid + hl * rule.nodes[q];
            const double fv = f(tau) * hl * rule.weights[q];
            P += fv * std::exp(-I * w * tau);
            M += fv * std::exp(I * w * tau);
        }
    }
}

}  // namespace

Complex b_transform(const RealFn& f, Complex w, double t, int sign) {
    Complex P, M;
    b_pair(f, w, t, P, M);
    return std::exp(I * w * t) * P + double(sign) * std::exp(-I * w * t) * M;
}

ContourSpec default_contour(double L) {
    ContourSpec c;
    c.k_max = 40.0 / L;
    c.points_per_unit = std::max(8.0, 16.0 * L);
    return c;
}

namespace {

struct NodeList {
    std::vector<Complex> k, w;
};

void add_segment(NodeList& out, Complex a, Complex b, double ppu, const QuadratureRule& rule) {
    const double len = std::abs(b - a);
    if (len <= 0.0) return;
    const int panels = std::max(1, static_cast<int>(std::ceil(len * ppu / rule.size())));
    for (int p = 0; p < panels; ++p) {
        const Complex za = a + (b - a) * (double(p) / panels);
        const Complex zb = a + (b - a) * (double(p + 1) / panels);
        const Complex mid = 0.5 * (za + zb), hl = 0.5 * (zb - za);
        for (int q = 0; q < rule.size(); ++q) {
            out.k.push_back(mid + hl * rule.nodes[q]);
            out.w.push_back(hl * rule.weights[q]);
        }
    }
}

void add_arc(NodeList& out, double center, double r, double th0, double th1, double ppu,
             const QuadratureRule& rule) {
    const double len = std::abs(th1 - th0) * r;
    const int panels = std::max(1, static_cast<int>(std::ceil(len * ppu / rule.size())));
    for (int p = 0; p < panels; ++p) {
        const double ta = th0 + (th1 - th0) * p / panels;
        const double tb = th0 + (th1 - th0) * (p + 1) / panels;
        const double mid = 0.5 * (ta + tb), hl = 0.5 * (tb - ta);
        for (int q = 0; q < rule.size(); ++q) {
            const double th = mid + hl * rule.nodes[q];
            const Complex pos = center + r * std::exp(I * th);
            out.k.push_back(pos);
            out.w.push_back(hl * rule.weights[q] * I * r * std::exp(I * th));
        }
    }
}

// L^+ (side > 0) dips above each k_n = n pi/(2L); L^- below. Both run left to right.
NodeList deformed_contour(double L, double k_max, double ppu, int side, int gl_order) {
    const QuadratureRule rule = gauss_legendre(gl_order);
    const double dk = PI / (2.0 * L);
    const double r = PI / (6.0 * L);
    const int nmax = static_cast<int>(std::floor(k_max / dk));
    NodeList out;
    double prev = -k_max;
    for (int n = -nmax; n <= nmax; ++n) {
        const double kn = n * dk;
        add_segment(out, prev, kn - r, ppu, rule);
        if (side > 0)
            add_arc(out, kn, r, PI, 0.0, ppu, rule);
        else
            add_arc(out, kn, r, PI, 2.0 * PI, ppu, rule);
        prev = kn + r;
    }
    add_segment(out, prev, k_max, ppu, rule);
    return out;
}

NodeList real_line(double k_max, double ppu, int gl_order) {
    const QuadratureRule rule = gauss_legendre(gl_order);
    NodeList out;
    add_segment(out, -k_max, k_max, ppu, rule);
    return out;
}

}  // namespace

struct Evaluator::BTable {
    std::vector<Complex> ep, em;              // e^{+-i omega t} per node
    std::array<std::vector<Complex>, 10> P, M;  // slots, empty when bc data are zero
    bool has_bc = false;
};

Evaluator::Evaluator(const DispersionSpec& spec, const LinearData& data,
                     const ContourSpec& contour)
    : spec_(spec), data_(data), contour_(contour) {
    bc_zero_ = data.g0.is_zero && data.h0.is_zero && data.g2.is_zero && data.h2.is_zero;
    auto rl = real_line(contour.k_max, contour.points_per_unit, contour.gl_order);
    fill(real_axis_, std::move(rl.k), std::move(rl.w));
    auto lp = deformed_contour(spec.L, contour.k_max, contour.points_per_unit, +1,
                               contour.gl_order);
    fill(lplus_, std::move(lp.k), std::move(lp.w));
    auto lm = deformed_contour(spec.L, contour.k_max, contour.points_per_unit, -1,
                               contour.gl_order);
    fill(lminus_, std::move(lm.k), std::move(lm.w));
}

void Evaluator::fill(std::vector<Node>& nodes, std::vector<Complex>&& ks,
                     std::vector<Complex>&& ws) {
    const int n = static_cast<int>(ks.size());
    nodes.resize(n);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        Node& nd = nodes[i];
        nd.k = ks[i];
        nd.w = ws[i];
        nd.ma = mu(nd.k, spec_.alpha, CutKind::Inner);
        nd.md = mu(nd.k, spec_.delta, CutKind::Inner);
        nd.mb = mu(nd.k, spec_.beta, CutKind::Outer);
        nd.om = (spec_.beta == 0.0 && std::abs(spec_.alpha - spec_.delta) < 1e-15)
                    ? nd.k
                    : nd.k * nd.ma / (nd.md * nd.mb);
        const int panels = 16 + static_cast<int>(std::abs(nd.k.real()) * spec_.L / 2.0);
        nd.hat_eta_p = hat_transform(data_.eta0, nd.k, spec_.L, panels);
        nd.hat_eta_m = hat_transform(data_.eta0, -nd.k, spec_.L, panels);
        nd.hat_u_p = hat_transform(data_.u0, nd.k, spec_.L, panels);
        nd.hat_u_m = hat_transform(data_.u0, -nd.k, spec_.L, panels);
    }
}

Evaluator::BTable Evaluator::btable(const std::vector<Node>& nodes, double t) const {
    BTable bt;
    const int n = static_cast<int>(nodes.size());
    bt.ep.resize(n);
    bt.em.resize(n);
    for (int i = 0; i < n; ++i) {
        bt.ep[i] = std::exp(I * nodes[i].om * t);
        bt.em[i] = std::exp(-I * nodes[i].om * t);
    }
    if (bc_zero_ || t == 0.0) return bt;
    bt.has_bc = true;
    // slots: g0,g0',g0'' | h0,h0',h0'' | g2,g2'' | h2,h2''
    const std::array<const RealFn*, 10> fns = {
        &data_.g0.f, &data_.g0.df, &data_.g0.ddf, &data_.h0.f, &data_.h0.df, &data_.h0.ddf,
        &data_.g2.f, &data_.g2.ddf, &data_.h2.f, &data_.h2.ddf};
    for (auto& v : bt.P) v.resize(n);
    for (auto& v : bt.M) v.resize(n);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        for (int s = 0; s < 10; ++s) {
            Complex P, M;
            b_pair(*fns[s], nodes[i].om, t, P, M);
            bt.P[s][i] = P;
            bt.M[s][i] = M;
        }
    }
    return bt;
}

namespace {
// slot ids
constexpr int G0 = 0, G0D = 1, G0DD = 2, H0 = 3, H0D = 4, H0DD = 5, G2 = 6, G2DD = 7,
              H2 = 8, H2DD = 9;
}

void Evaluator::batch(std::span<const double> xs, double t, std::span<Value> eta_out,
                      std::span<Value> u_out) const {
    const BTable br = btable(real_axis_, t);
    const BTable bpP = btable(lplus_, t);
    const BTable bmM = btable(lminus_, t);
    const double A = spec_.alpha, B = spec_.beta, D = spec_.delta, L = spec_.L;

    auto eval_point = [&](double x) -> std::array<Complex, 2> {
        Complex eta_sum(0.0, 0.0), u_sum(0.0, 0.0);
        // I1/J1: plain real-axis inversion of the initial data part
        for (size_t i = 0; i < real_axis_.size(); ++i) {
            const Node& nd = real_axis_[i];
            const Complex ep = br.ep[i], em = br.em[i];
            const Complex ph = std::exp(I * nd.k * x);
            const Complex cphi = ep + em, sphi = ep - em;
            eta_sum += nd.w * ph * 0.5 *
                       (cphi * nd.hat_eta_p - (nd.ma * nd.md / nd.mb) * sphi * nd.hat_u_p);
            u_sum += nd.w * ph * 0.5 *
                     (-(nd.mb / (nd.ma * nd.md)) * sphi * nd.hat_eta_p + cphi * nd.hat_u_p);
        }
        auto bval = [](const BTable& bt, int slot, size_t i, int sign) {
            return bt.ep[i] * bt.P[slot][i] + double(sign) * bt.em[i] * bt.M[slot][i];
        };
        // L^- : I2/J2 (initial data), I4/J4 (h terms), I6/J6 (g terms)
        for (size_t i = 0; i < lminus_.size(); ++i) {
            const Node& nd = lminus_[i];
            const Complex k = nd.k;
            const Complex ep = bmM.ep[i], em = bmM.em[i];
            const Complex cphi = ep + em, sphi = ep - em;
            const Complex dm = 1.0 - std::exp(-4.0 * I * k * L);
            const Complex e3 = std::exp(-3.0 * I * k * L), e1 = std::exp(-I * k * L);
            const Complex phm = std::exp(I * k * (x - L));
            eta_sum += nd.w * phm / (2.0 * dm) *
                       (cphi * (e3 * nd.hat_eta_p + e1 * nd.hat_eta_m) -
                        (nd.ma * nd.md / nd.mb) * sphi * (e3 * nd.hat_u_p - e1 * nd.hat_u_m));
            u_sum += nd.w * phm / (2.0 * dm) *
                     (-(nd.mb / (nd.ma * nd.md)) * sphi * (e3 * nd.hat_eta_p + e1 * nd.hat_eta_m) +
                      cphi * (e3 * nd.hat_u_p - e1 * nd.hat_u_m));
            if (!bmM.has_bc) continue;
            const Complex ak2 = 1.0 + A * k * k, bk2 = 1.0 + B * k * k, dk2 = 1.0 + D * k * k;
            const Complex dp = 1.0 - std::exp(4.0 * I * k * L);
            const Complex php = std::exp(I * k * (x + L));
            const Complex cmu = nd.ma / (nd.md * nd.mb);          // mu_a/(mu_d mu_b)
            const Complex cmu3 = 1.0 / (nd.ma * nd.md * nd.mb);   // 1/(mu_a mu_d mu_b)
            eta_sum += nd.w * phm / dm *
                       (-(ak2 / bk2) * bval(bmM, H0, i, +1) + (A / bk2) * bval(bmM, H2, i, +1) +
                        (B * D / bk2) * bval(bmM, H2DD, i, +1) - (B / bk2) * bval(bmM, H0DD, i, +1) -
                        I * D * k * cmu * bval(bmM, H0D, i, -1));
            u_sum += nd.w * phm / dm *
                     (cmu * bval(bmM, H0, i, -1) + I * D * k / dk2 * bval(bmM, H0D, i, +1) +
                      B * cmu3 * bval(bmM, H0DD, i, -1) - A * cmu3 * bval(bmM, H2, i, -1) -
                      B * D * cmu3 * bval(bmM, H2DD, i, -1));
            eta_sum += nd.w * php / dp *
                       (-(ak2 / bk2) * bval(bmM, G0, i, +1) - I * D * k * cmu * bval(bmM, G0D, i, -1) -
                        (B / bk2) * bval(bmM, G0DD, i, +1) + (A / bk2) * bval(bmM, G2, i, +1) +
                        (B * D / bk2) * bval(bmM, G2DD, i, +1));
            u_sum += nd.w * php / dp *
                     (cmu * bval(bmM, G0, i, -1) + I * D * k / dk2 * bval(bmM, G0D, i, +1) +
                      B * cmu3 * bval(bmM, G0DD, i, -1) - A * cmu3 * bval(bmM, G2, i, -1) -
                      B * D * cmu3 * bval(bmM, G2DD, i, -1));
        }
        // L^+ : I3/J3 (initial data), I5/J5 (g terms), I7/J7 (h terms)
        for (size_t i = 0; i < lplus_.size(); ++i) {
            const Node& nd = lplus_[i];
            const Complex k = nd.k;
            const Complex ep = bpP.ep[i], em = bpP.em[i];
            const Complex cphi = ep + em, sphi = ep - em;
            const Complex dp = 1.0 - std::exp(4.0 * I * k * L);
            const Complex e3 = std::exp(3.0 * I * k * L), e1 = std::exp(I * k * L);
            const Complex php = std::exp(I * k * (x + L));
            eta_sum += nd.w * php / (2.0 * dp) *
                       (cphi * (e3 * nd.hat_eta_p + e1 * nd.hat_eta_m) -
                        (nd.ma * nd.md / nd.mb) * sphi * (e3 * nd.hat_u_p - e1 * nd.hat_u_m));
            u_sum += nd.w * php / (2.0 * dp) *
                     (-(nd.mb / (nd.ma * nd.md)) * sphi * (e3 * nd.hat_eta_p + e1 * nd.hat_eta_m) +
                      cphi * (e3 * nd.hat_u_p - e1 * nd.hat_u_m));
            if (!bpP.has_bc) continue;
            const Complex ak2 = 1.0 + A * k * k, bk2 = 1.0 + B * k * k, dk2 = 1.0 + D * k * k;
            const Complex dm = 1.0 - std::exp(-4.0 * I * k * L);
            const Complex phm = std::exp(I * k * (x - L));
            const Complex cmu = nd.ma / (nd.md * nd.mb);
            const Complex cmu3 = 1.0 / (nd.ma * nd.md * nd.mb);
            eta_sum += nd.w * php / dp *
                       ((ak2 / bk2) * bval(bpP, G0, i, +1) - (A / bk2) * bval(bpP, G2, i, +1) -
                        (B * D / bk2) * bval(bpP, G2DD, i, +1) + (B / bk2) * bval(bpP, G0DD, i, +1) +
                        I * D * k * cmu * bval(bpP, G0D, i, -1));
            u_sum += nd.w * php / dp *
                     (-cmu * bval(bpP, G0, i, -1) - I * D * k / dk2 * bval(bpP, G0D, i, +1) -
                      B * cmu3 * bval(bpP, G0DD, i, -1) + A * cmu3 * bval(bpP, G2, i, -1) +
                      B * D * cmu3 * bval(bpP, G2DD, i, -1));
            eta_sum += nd.w * phm / dm *
                       ((ak2 / bk2) * bval(bpP, H0, i, +1) + I * D * k * cmu * bval(bpP, H0D, i, -1) +
                        (B / bk2) * bval(bpP, H0DD, i, +1) - (A / bk2) * bval(bpP, H2, i, +1) -
                        (B * D / bk2) * bval(bpP, H2DD, i, +1));
            u_sum += nd.w * phm / dm *
                     (-cmu * bval(bpP, H0, i, -1) - I * D * k / dk2 * bval(bpP, H0D, i, +1) -
                      B * cmu3 * bval(bpP, H0DD, i, -1) + A * cmu3 * bval(bpP, H2, i, -1) +
                      B * D * cmu3 * bval(bpP, H2DD, i, -1));
        }
        const Complex scale(1.0 / (2.0 * PI), 0.0);
        return {scale * eta_sum, scale * u_sum};
    };

    const int n = static_cast<int>(xs.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        const auto v = eval_point(xs[i]);
        eta_out[i] = Value{v[0].real(), std::abs(v[0].imag())};
        u_out[i] = Value{v[1].real(), std::abs(v[1].imag())};
    }
}

std::vector<Evaluator::Value> Evaluator::eta_batch(std::span<const double> xs, double t) const {
    std::vector<Value> eta_out(xs.size()), u_out(xs.size());
    batch(xs, t, eta_out, u_out);
    return eta_out;
}

std::vector<Evaluator::Value> Evaluator::u_batch(std::span<const double> xs, double t) const {
    std::vector<Value> eta_out(xs.size()), u_out(xs.size());
    batch(xs, t, eta_out, u_out);
    return u_out;
}

Evaluator::Value Evaluator::eta(double x, double t) const {
    return eta_batch(std::span<const double>(&x, 1), t)[0];
}

Evaluator::Value Evaluator::u(double x, double t) const {
    return u_batch(std::span<const double>(&x, 1), t)[0];
}

double Evaluator::min_denominator() const {
    double mn = 1e300;
    const double L = spec_.L;
    for (const auto& nd : lplus_) {
        mn = std::min(mn, std::abs(1.0 - std::exp(4.0 * I * nd.k * L)));
        mn = std::min(mn, std::abs(1.0 - std::exp(-4.0 * I * nd.k * L)));
    }
    for (const auto& nd : lminus_) {
        mn = std::min(mn, std::abs(1.0 - std::exp(4.0 * I * nd.k * L)));
        mn = std::min(mn, std::abs(1.0 - std::exp(-4.0 * I * nd.k * L)));
    }
    return mn;
}

namespace {

Result adaptive_eval(double x, double t, const DispersionSpec& spec, const LinearData& data,
                     ContourSpec contour, double tol, int max_rounds, bool want_eta) {
    Evaluator ev(spec, data, contour);
    auto cur = want_eta ? ev.eta(x, t) : ev.u(x, t);
    for (int round = 0; round < max_rounds; ++round) {
        ContourSpec next = contour;
        next.k_max *= 2.0;
        next.points_per_unit *= 1.5;
        Evaluator ev2(spec, data, next);
        const auto ref = want_eta ? ev2.eta(x, t) : ev2.u(x, t);
        const double diff = std::abs(ref.value - cur.value);
        if (diff < tol) return Result{ref.value, std::max(diff, ref.imag_err)};
        contour = next;
        cur = ref;
    }
    throw std::runtime_error("unified-transform: truncation-unconverged at x=" +
                             std::to_string(x));
}

}  // namespace

Result eval_eta(double x, double t, const DispersionSpec& spec, const LinearData& data,
                ContourSpec contour, double tol, int max_rounds) {
    return adaptive_eval(x, t, spec, data, contour, tol, max_rounds, true);
}

Result eval_u(double x, double t, const DispersionSpec& spec, const LinearData& data,
              ContourSpec contour, double tol, int max_rounds) {
    return adaptive_eval(x, t, spec, data, contour, tol, max_rounds, false);
}

double jordan_check(const RealFn& f, double x, int variant, double L,
                    const ContourSpec& contour) {
    if (variant < 0 || variant > 3) throw std::invalid_argument("jordan_check: variant 0..3");
    const int side = (variant < 2) ? +1 : -1;
    NodeList nodes = deformed_contour(L, contour.k_max, contour.points_per_unit, side,
                                      contour.gl_order);
    const int n = static_cast<int>(nodes.k.size());
    std::vector<Complex> vals(n);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const Complex k = nodes.k[i];
        const int panels = 16 + static_cast<int>(std::abs(k.real()) * L / 2.0);
        Complex val;
        if (side > 0) {
            const Complex delta = std::exp(I * k * L) - std::exp(-3.0 * I * k * L);
            const Complex fh = (variant == 0)
                                   ? hat_transform(f, k, L, panels)
                                   : std::exp(2.0 * I * k * L) * hat_transform(f, -k, L, panels);
            val = std::exp(I * k * (x + L)) / delta * fh;
        } else {
            const Complex deltac = std::exp(-I * k * L) - std::exp(3.0 * I * k * L);
            const Complex fh = (variant == 2)
                                   ? hat_transform(f, k, L, panels)
                                   : std::exp(-2.0 * I * k * L) * hat_transform(f, -k, L, panels);
            val = std::exp(I * k * (x - L)) / deltac * fh;
        }
        vals[i] = nodes.w[i] * val;
    }
    Complex total(0.0, 0.0);
    for (const auto& v : vals) total += v;
    return std::abs(total);
}

}  // namespace ut
}  // namespace wavetank
