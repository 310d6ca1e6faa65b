#include "wavetank/wave_gen.hpp"

#include <fftw3.h>

#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace wavetank {
namespace waves {

namespace {

constexpr double PI = std::numbers::pi;

std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

// Real transform pair of fixed size; FFTW plan creation is serialized.
class RealFft {
public:
    explicit RealFft(int n) : n_(n) {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        re_ = fftw_alloc_real(n);
        cx_ = fftw_alloc_complex(n / 2 + 1);
        fwd_ = fftw_plan_dft_r2c_1d(n, re_, cx_, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_c2r_1d(n, cx_, re_, FFTW_ESTIMATE);
    }
    ~RealFft() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
        fftw_free(re_);
        fftw_free(cx_);
    }
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::vector<Complex> forward(std::span<const double> in) {
        for (int i = 0; i < n_; ++i) re_[i] = in[i];
        fftw_execute(fwd_);
        std::vector<Complex> out(n_ / 2 + 1);
        for (int i = 0; i <= n_ / 2; ++i) out[i] = Complex(cx_[i][0], cx_[i][1]);
        return out;
    }
    // unnormalized inverse; caller divides by n
    std::vector<double> inverse(std::span<const Complex> in) {
        for (int i = 0; i <= n_ / 2; ++i) {
            cx_[i][0] = in[i].real();
            cx_[i][1] = in[i].imag();
        }
        fftw_execute(inv_);
        return std::vector<double>(re_, re_ + n_);
    }

private:
    int n_;
    double* re_;
    fftw_complex* cx_;
    fftw_plan fwd_, inv_;
};

// Spectral second derivative on the periodic box.
std::vector<double> spectral_d2(RealFft& fft, std::span<const double> f, double ell) {
    auto F = fft.forward(f);
    const int n = static_cast<int>(f.size());
    for (int m = 0; m <= n / 2; ++m) {
        const double km = PI * m / ell;
        F[m] *= -km * km;
    }
    auto g = fft.inverse(F);
    for (auto& v : g) v /= n;
    return g;
}

// Dense symmetric positive definite solve (Cholesky), used by the LM step.
void spd_solve(std::vector<double>& a, std::vector<double>& rhs, int n) {
    for (int j = 0; j < n; ++j) {
        double diag = a[j * n + j];
        for (int k = 0; k < j; ++k) diag -= a[j * n + k] * a[j * n + k];
        if (!(diag > 0.0)) throw std::runtime_error("solve_solitary: LM step not SPD");
        const double ljj = std::sqrt(diag);
        a[j * n + j] = ljj;
        for (int i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (int k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / ljj;
        }
    }
    for (int i = 0; i < n; ++i) {
        double s = rhs[i];
        for (int j = 0; j < i; ++j) s -= a[i * n + j] * rhs[j];
        rhs[i] = s / a[i * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = rhs[i];
        for (int j = i + 1; j < n; ++j) s -= a[j * n + i] * rhs[j];
        rhs[i] = s / a[i * n + i];
    }
}

// Even extension helpers: the unknowns are samples on y_i = i*h, i = 0..M/2,
// mirrored to the full periodic grid x_j = (j - M/2)*h.
std::vector<double> mirror(std::span<const double> s, int M) {
    std::vector<double> f(M);
    const int Mh = M / 2;
    for (int j = 0; j < M; ++j) f[j] = s[std::abs(j - Mh)];
    return f;
}

std::vector<double> restrict_half(std::span<const double> f, int M) {
    const int Mh = M / 2;
    std::vector<double> s(Mh + 1);
    for (int i = 0; i < Mh; ++i) s[i] = f[Mh + i];
    s[Mh] = f[0];  // x = +ell aliases the periodic point x = -ell
    return s;
}

}  // namespace

double spectrum_eval(const std::vector<Complex>& F, int M, double ell, double x, int deriv) {
    // trig interpolation of the rfft half-spectrum; grid starts at -ell
    const double xt = x + ell;
    double out = 0.0;
    for (int m = 0; m <= M / 2; ++m) {
        const double km = PI * m / ell;
        Complex c = F[m] * std::exp(Complex(0.0, km * xt));
        if (deriv == 1) c *= Complex(0.0, km);
        else if (deriv == 2) c *= -km * km;
        const double scale = (m == 0 || m == M / 2) ? 1.0 : 2.0;
        out += scale * c.real();
    }
    return out / M;
}

double SolitaryWave::eval_eta(double x, int deriv) const {
    return spectrum_eval(fourier_eta, modes, ell, x, deriv);
}

double SolitaryWave::eval_u(double x, int deriv) const {
    return spectrum_eval(fourier_u, modes, ell, x, deriv);
}

std::vector<double> traveling_residual_grid(std::span<const double> eta,
                                            std::span<const double> u, double c,
                                            const SystemParams& params, double ell) {
    const int M = static_cast<int>(eta.size());
    RealFft fft(M);
    const auto d2e = spectral_d2(fft, eta, ell);
    const auto d2u = spectral_d2(fft, u, ell);
    std::vector<double> r(2 * M);
    const double a = params.a, b = params.b, d = params.d;
    for (int i = 0; i < M; ++i) {
        r[i] = -c * eta[i] + u[i] + eta[i] * u[i] + a * d2u[i] + b * c * d2e[i];
        r[M + i] = -c * u[i] + eta[i] + 0.5 * u[i] * u[i] + c * d * d2u[i];
    }
    return r;
}

std::vector<double> traveling_residual(const SolitaryWave& wave, const SystemParams& params) {
    const int M = wave.modes;
    RealFft fft(M);
    auto eta = fft.inverse(wave.fourier_eta);
    auto u = fft.inverse(wave.fourier_u);
    for (auto& v : eta) v /= M;
    for (auto& v : u) v /= M;
    return traveling_residual_grid(eta, u, wave.speed, params, wave.ell);
}

SolitaryWave solve_solitary_nwogu(double amplitude, const SystemParams& params, double ell,
                                  int modes, double tol, int max_iter) {
    if (!(amplitude > 0.0) || amplitude > 0.8)
        throw std::invalid_argument("solve_solitary_nwogu: amplitude must be in (0, 0.8]");
    if (!(params.a < 0.0))
        throw std::invalid_argument("solve_solitary_nwogu: Nwogu family needs a < 0");
    if (modes < 8 || (modes & (modes - 1)) != 0)
        throw std::invalid_argument("solve_solitary_nwogu: modes must be a power of two");

    const int M = modes, Mh = M / 2, n1 = Mh + 1, n = 2 * n1 + 1;
    const double h = 2.0 * ell / M;
    const double a = params.a, b = params.b, d = params.d;
    RealFft fft(M);

    // even-restricted spectral second-derivative matrix
    std::vector<double> D2(static_cast<size_t>(n1) * n1);
    {
        std::vector<double> e(n1, 0.0);
        for (int j = 0; j < n1; ++j) {
            e[j] = 1.0;
            const auto col = restrict_half(spectral_d2(fft, mirror(e, M), ell), M);
            for (int i = 0; i < n1; ++i) D2[static_cast<size_t>(i) * n1 + j] = col[i];
            e[j] = 0.0;
        }
    }
    auto apply_d2 = [&](std::span<const double> s, std::vector<double>& out) {
        out.assign(n1, 0.0);
        for (int i = 0; i < n1; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n1; ++j) acc += D2[static_cast<size_t>(i) * n1 + j] * s[j];
            out[i] = acc;
        }
    };

    // sech^2 initial guess with the linear-tail decay rate
    const double c0 = std::sqrt(1.0 + amplitude);
    const double kap2 = (c0 * c0 - 1.0) / (c0 * c0 * (b + d) + a);
    const double kap = std::sqrt(std::max(kap2, 1e-8));
    std::vector<double> eta(n1), u(n1);
    for (int i = 0; i < n1; ++i) {
        const double y = i * h;
        eta[i] = amplitude / std::pow(std::cosh(0.5 * kap * y), 2);
        u[i] = eta[i] / c0;
    }
    double c = c0;

    std::vector<double> d2e(n1), d2u(n1);
    auto residual = [&](const std::vector<double>& ev, const std::vector<double>& uv, double cv,
                        std::vector<double>& R) {
        apply_d2(ev, d2e);
        apply_d2(uv, d2u);
        R.resize(n);
        for (int i = 0; i < n1; ++i) {
            R[i] = -cv * ev[i] + uv[i] + ev[i] * uv[i] + a * d2u[i] + b * cv * d2e[i];
            R[n1 + i] = -cv * uv[i] + ev[i] + 0.5 * uv[i] * uv[i] + cv * d * d2u[i];
        }
        R[2 * n1] = ev[0] - amplitude;
    };

    std::vector<double> R, Rn, J(static_cast<size_t>(n) * n), JTJ(static_cast<size_t>(n) * n),
        g(n), H, step;
    residual(eta, u, c, R);
    double f2 = 0.0;
    for (double v : R) f2 += v * v;
    double lambda = 1e-3;
    bool done = false;
    for (int it = 0; it < max_iter && !done; ++it) {
        // analytic Jacobian blocks
        std::fill(J.begin(), J.end(), 0.0);
        apply_d2(eta, d2e);
        apply_d2(u, d2u);
        for (int i = 0; i < n1; ++i) {
            for (int j = 0; j < n1; ++j) {
                const double d2ij = D2[static_cast<size_t>(i) * n1 + j];
                J[static_cast<size_t>(i) * n + j] = b * c * d2ij;
                J[static_cast<size_t>(i) * n + n1 + j] = a * d2ij;
                J[static_cast<size_t>(n1 + i) * n + n1 + j] = c * d * d2ij;
            }
            J[static_cast<size_t>(i) * n + i] += -c + u[i];
            J[static_cast<size_t>(i) * n + n1 + i] += 1.0 + eta[i];
            J[static_cast<size_t>(i) * n + 2 * n1] = -eta[i] + b * d2e[i];
            J[static_cast<size_t>(n1 + i) * n + i] = 1.0;
            J[static_cast<size_t>(n1 + i) * n + n1 + i] += -c + u[i];
            J[static_cast<size_t>(n1 + i) * n + 2 * n1] = -u[i] + d * d2u[i];
        }
        J[static_cast<size_t>(2 * n1) * n + 0] = 1.0;

        for (int i = 0; i < n; ++i) {
            g[i] = 0.0;
            for (int r = 0; r < n; ++r) g[i] += J[static_cast<size_t>(r) * n + i] * R[r];
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                double s = 0.0;
                for (int r = 0; r < n; ++r)
                    s += J[static_cast<size_t>(r) * n + i] * J[static_cast<size_t>(r) * n + j];
                JTJ[static_cast<size_t>(i) * n + j] = s;
                JTJ[static_cast<size_t>(j) * n + i] = s;
            }

        bool accepted = false;
        for (int tries = 0; tries < 40; ++tries) {
            H = JTJ;
            for (int i = 0; i < n; ++i)
                H[static_cast<size_t>(i) * n + i] += lambda * (JTJ[static_cast<size_t>(i) * n + i] + 1e-14);
            step.assign(g.begin(), g.end());
            for (auto& v : step) v = -v;
            try {
                spd_solve(H, step, n);
            } catch (const std::runtime_error&) {
                lambda *= 10.0;
                continue;
            }
            std::vector<double> eta_n(eta), u_n(u);
            for (int i = 0; i < n1; ++i) {
                eta_n[i] += step[i];
                u_n[i] += step[n1 + i];
            }
            const double c_n = c + step[2 * n1];
            residual(eta_n, u_n, c_n, Rn);
            double f2n = 0.0;
            for (double v : Rn) f2n += v * v;
            if (f2n < f2) {
                eta.swap(eta_n);
                u.swap(u_n);
                c = c_n;
                R.swap(Rn);
                f2 = f2n;
                lambda = std::max(lambda * 0.1, 1e-14);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted) throw std::runtime_error("solve_solitary_nwogu: no-convergence (LM stalled)");
        double rmax = 0.0;
        for (int i = 0; i < 2 * n1; ++i) rmax = std::max(rmax, std::abs(R[i]));
        if (rmax < tol && std::abs(R[2 * n1]) < tol) done = true;
    }
    if (!done) throw std::runtime_error("solve_solitary_nwogu: no-convergence (max iterations)");

    SolitaryWave w;
    w.speed = c;
    w.amplitude = amplitude;
    w.ell = ell;
    w.modes = M;
    w.params = params;
    w.fourier_eta = fft.forward(mirror(eta, M));
    w.fourier_u = fft.forward(mirror(u, M));
    double rmax = 0.0;
    for (int i = 0; i < 2 * n1; ++i) rmax = std::max(rmax, std::abs(R[i]));
    w.residual_norm = rmax;
    return w;
}

SolitaryWave solve_solitary_bbm_petviashvili(double speed, const SystemParams& params,
                                             double ell, int modes, double tol, int max_iter) {
    if (std::abs(params.a) > 1e-14)
        throw std::invalid_argument("petviashvili: BBM-BBM requires a = 0");
    if (!(speed > 1.0)) throw std::invalid_argument("petviashvili: requires speed > 1");
    const int M = modes;
    const double b = params.b, d = params.d, c = speed;
    RealFft fft(M);
    const double h = 2.0 * ell / M;

    std::vector<double> eta(M), u(M);
    const double kap = std::sqrt((c * c - 1.0) / (c * c * (b + d)));
    for (int j = 0; j < M; ++j) {
        const double x = -ell + j * h;
        eta[j] = 1.5 * (c * c - 1.0) / std::pow(std::cosh(0.5 * kap * x), 2);
        u[j] = eta[j] / c;
    }
    double S = 0.0;
    bool done = false;
    for (int it = 0; it < max_iter && !done; ++it) {
        std::vector<double> N1(M), N2(M);
        for (int j = 0; j < M; ++j) {
            N1[j] = -(eta[j] * u[j]);
            N2[j] = -(0.5 * u[j] * u[j]);
        }
        auto He = fft.forward(eta);
        auto Hu = fft.forward(u);
        auto F1 = fft.forward(N1);
        auto F2 = fft.forward(N2);
        double num = 0.0, den = 0.0;
        std::vector<Complex> He_n(M / 2 + 1), Hu_n(M / 2 + 1);
        for (int m = 0; m <= M / 2; ++m) {
            const double km = PI * m / ell;
            const double l11 = -c * (1.0 + b * km * km);
            const double l22 = -c * (1.0 + d * km * km);
            const double scale = (m == 0 || m == M / 2) ? 1.0 : 2.0;
            num += scale * (std::conj(He[m]) * (l11 * He[m] + Hu[m]) +
                            std::conj(Hu[m]) * (He[m] + l22 * Hu[m])).real();
            den += scale * (std::conj(He[m]) * F1[m] + std::conj(Hu[m]) * F2[m]).real();
            const double det = l11 * l22 - 1.0;
            He_n[m] = (l22 * F1[m] - F2[m]) / det;
            Hu_n[m] = (-F1[m] + l11 * F2[m]) / det;
        }
        S = num / den;
        const double S2 = S * S;
        for (int m = 0; m <= M / 2; ++m) {
            He_n[m] *= S2;
            Hu_n[m] *= S2;
        }
        auto eta_n = fft.inverse(He_n);
        auto u_n = fft.inverse(Hu_n);
        double diff = 0.0;
        for (int j = 0; j < M; ++j) {
            eta_n[j] /= M;
            u_n[j] /= M;
            diff = std::max(diff, std::abs(eta_n[j] - eta[j]));
        }
        eta.swap(eta_n);
        u.swap(u_n);
        if (diff < tol) done = true;
    }
    if (!done) throw std::runtime_error("petviashvili: no-convergence");

    SolitaryWave w;
    w.speed = speed;
    w.ell = ell;
    w.modes = M;
    w.params = params;
    w.fourier_eta = fft.forward(eta);
    w.fourier_u = fft.forward(u);
    double amp = 0.0;
    for (int j = 0; j < M; ++j) amp = std::max(amp, eta[j]);
    w.amplitude = amp;
    const auto r = traveling_residual_grid(eta, u, speed, params, ell);
    double rmax = 0.0;
    for (double v : r) rmax = std::max(rmax, std::abs(v));
    w.residual_norm = rmax;
    return w;
}

SolitaryWave solve_bbm_by_amplitude(double amplitude, const SystemParams& params, double ell,
                                    int modes) {
    double c1 = std::sqrt(1.0 + amplitude);
    auto amp_of = [&](double c) {
        return solve_solitary_bbm_petviashvili(c, params, ell, modes).amplitude;
    };
    double a1 = amp_of(c1);
    double c2 = c1 * 1.03;
    double a2 = amp_of(c2);
    for (int it = 0; it < 50; ++it) {
        if (std::abs(a2 - amplitude) < 1e-11 * std::max(1.0, amplitude)) break;
        const double cn = c2 + (amplitude - a2) * (c2 - c1) / (a2 - a1);
        c1 = c2;
        a1 = a2;
        c2 = std::max(1.0 + 1e-8, cn);
        a2 = amp_of(c2);
    }
    return solve_solitary_bbm_petviashvili(c2, params, ell, modes);
}

State sample_to_fem(const SolitaryWave& wave, double shift, const SemidiscreteSystem& sys) {
    const auto& g = sys.eta_space().grid();
    const double tail = std::max(std::abs(wave.eval_eta(g.x_min - shift)),
                                 std::abs(wave.eval_eta(g.x_max - shift)));
    if (tail > 1e-8)
        throw std::invalid_argument("sample_to_fem: support-overflow, tail " +
                                    std::to_string(tail));
    State s;
    s.eta = l2_project(sys.eta_space(), sys.eta_table(), sys.mass_eta(),
                       [&](double x) { return wave.eval_eta(x - shift); });
    s.u = l2_project(sys.u_space(), sys.u_table(), sys.mass0(),
                     [&](double x) { return wave.eval_u(x - shift); });
    s.t = 0.0;
    return s;
}

void save_wave(const std::string& path, const SolitaryWave& w) {
    nlohmann::json j;
    j["c_s"] = w.speed;
    j["A"] = w.amplitude;
    j["ell"] = w.ell;
    j["M"] = w.modes;
    j["params"] = {{"a", w.params.a}, {"b", w.params.b}, {"d", w.params.d},
                   {"epsilon", w.params.epsilon}};
    j["residual_norm"] = w.residual_norm;
    auto dump = [](const std::vector<Complex>& v) {
        std::vector<std::array<double, 2>> out(v.size());
        for (size_t i = 0; i < v.size(); ++i) out[i] = {v[i].real(), v[i].imag()};
        return out;
    };
    j["fourier_eta"] = dump(w.fourier_eta);
    j["fourier_u"] = dump(w.fourier_u);
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_wave: cannot open " + path);
    f << j.dump(1) << "\n";
}

SolitaryWave load_wave(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_wave: cannot open " + path);
    nlohmann::json j;
    f >> j;
    SolitaryWave w;
    w.speed = j["c_s"];
    w.amplitude = j["A"];
    w.ell = j["ell"];
    w.modes = j["M"];
    w.params = SystemParams::from_abd(j["params"]["a"], j["params"]["b"], j["params"]["d"],
                                      j["params"]["epsilon"]);
    w.residual_norm = j["residual_norm"];
    auto read = [](const nlohmann::json& arr) {
        std::vector<Complex> out;
        out.reserve(arr.size());
        for (const auto& p : arr) out.emplace_back(double(p[0]), double(p[1]));
        return out;
    };
    w.fourier_eta = read(j["fourier_eta"]);
    w.fourier_u = read(j["fourier_u"]);
    return w;
}

}  // namespace waves
}  // namespace wavetank
