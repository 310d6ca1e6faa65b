#pragma once

#include <span>
#include <vector>

namespace wavetank {

// Symmetric banded matrix, lower-triangle storage by column:
// entry(i,j) with i >= j, i-j <= bw stored at data[j*(bw+1) + (i-j)].
// A Cholesky factor is cached by factorize(); solve() requires it.
class BandedSymMatrix {
public:
    BandedSymMatrix(int n, int half_bandwidth);

    int size() const { return n_; }
    int half_bandwidth() const { return bw_; }
    bool factorized() const { return factorized_; }

    double& at(int i, int j);          // i >= j within the band
    double get(int i, int j) const;    // symmetric access, 0 outside the band
    void add(int i, int j, double v);  // accumulate at (i,j), i >= j

    // Banded Cholesky A = L L^T. Throws std::runtime_error("not-positive-definite")
    // if a pivot is not strictly positive.
    void factorize();

    void solve(std::span<const double> rhs, std::span<double> x) const;
    std::vector<double> solve(std::span<const double> rhs) const;

    void multiply(std::span<const double> x, std::span<double> y) const;

private:
    int n_;
    int bw_;
    std::vector<double> data_;
    std::vector<double> chol_;
    bool factorized_ = false;
};

}  // namespace wavetank
