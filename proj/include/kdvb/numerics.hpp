#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace kdvb {

// Uniform double in [0,1) from the top 53 bits of the generator output.
// Used instead of std::uniform_real_distribution so that streams are
// reproducible independent of the standard library implementation.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

enum class Quadrature { trapezoid, simpson };

// Weights for cumulative integrals over a uniform grid t_j = j*h.
// weights(j) returns w such that  int_0^{t_j} f dt ~= sum_i w[i] f(t_i).
// For the Simpson rule the j==1 row has length 3 (it borrows node 2 to keep
// fourth order near the origin); all other rows have length j+1.
class CumulativeWeights {
public:
    CumulativeWeights(int intervals, double h, Quadrature rule);

    const std::vector<double>& row(int j) const { return rows_.at(j); }
    int intervals() const { return static_cast<int>(rows_.size()) - 1; }
    double step() const { return h_; }
    Quadrature rule() const { return rule_; }

private:
    std::vector<std::vector<double>> rows_;
    double h_ = 0.0;
    Quadrature rule_ = Quadrature::simpson;
};

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};

// Least squares fit of log(y) against log(x).  Requires >= 2 positive points;
// callers enforce their own stronger minimums.
LogLogFit loglog_fit(std::span<const double> x, std::span<const double> y);

// FNV-1a 64-bit digest, used for artifact content fingerprints.
std::uint64_t fnv1a64(std::span<const char> bytes);
std::uint64_t fnv1a64(const std::string& s);

}  // namespace kdvb
