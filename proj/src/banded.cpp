#include "wavetank/banded.hpp"

#include <cmath>
#include <stdexcept>

namespace wavetank {

BandedSymMatrix::BandedSymMatrix(int n, int half_bandwidth)
    : n_(n), bw_(half_bandwidth), data_(static_cast<size_t>(n) * (half_bandwidth + 1), 0.0) {}

double& BandedSymMatrix::at(int i, int j) {
    factorized_ = false;
    return data_[static_cast<size_t>(j) * (bw_ + 1) + (i - j)];
}

double BandedSymMatrix::get(int i, int j) const {
    if (i < j) std::swap(i, j);
    if (i - j > bw_) return 0.0;
    return data_[static_cast<size_t>(j) * (bw_ + 1) + (i - j)];
}

void BandedSymMatrix::add(int i, int j, double v) {
    data_[static_cast<size_t>(j) * (bw_ + 1) + (i - j)] += v;
    factorized_ = false;
}

void BandedSymMatrix::factorize() {
    chol_ = data_;
    auto L = [&](int i, int j) -> double& {
        return chol_[static_cast<size_t>(j) * (bw_ + 1) + (i - j)];
    };
    for (int j = 0; j < n_; ++j) {
        double diag = L(j, j);
        const int kmin = std::max(0, j - bw_);
        for (int k = kmin; k < j; ++k) {
            const double ljk = L(j, k);
            diag -= ljk * ljk;
        }
        if (!(diag > 0.0))
            throw std::runtime_error("BandedSymMatrix: not-positive-definite at row " +
                                     std::to_string(j));
        const double ljj = std::sqrt(diag);
        L(j, j) = ljj;
        const int imax = std::min(n_ - 1, j + bw_);
        for (int i = j + 1; i <= imax; ++i) {
            double s = L(i, j);
            const int k0 = std::max({0, i - bw_, j - bw_});
            for (int k = k0; k < j; ++k) s -= L(i, k) * L(j, k);
            L(i, j) = s / ljj;
        }
    }
    factorized_ = true;
}

void BandedSymMatrix::solve(std::span<const double> rhs, std::span<double> x) const {
    if (!factorized_) throw std::logic_error("BandedSymMatrix::solve before factorize");
    auto L = [&](int i, int j) {
        return chol_[static_cast<size_t>(j) * (bw_ + 1) + (i - j)];
    };
    // forward: L y = rhs
    for (int i = 0; i < n_; ++i) {
        double s = rhs[i];
        const int j0 = std::max(0, i - bw_);
        for (int j = j0; j < i; ++j) s -= L(i, j) * x[j];
        x[i] = s / L(i, i);
    }
    // backward: L^T x = y
    for (int i = n_ - 1; i >= 0; --i) {
        double s = x[i];
        const int jmax = std::min(n_ - 1, i + bw_);
        for (int j = i + 1; j <= jmax; ++j) s -= L(j, i) * x[j];
        x[i] = s / L(i, i);
    }
}

std::vector<double> BandedSymMatrix::solve(std::span<const double> rhs) const {
    std::vector<double> x(n_);
    solve(rhs, x);
    return x;
}

void BandedSymMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        const int j0 = std::max(0, i - bw_);
        const int j1 = std::min(n_ - 1, i + bw_);
        for (int j = j0; j <= j1; ++j) s += get(i, j) * x[j];
        y[i] = s;
    }
}

}  // namespace wavetank
