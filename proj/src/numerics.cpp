#include "kdvb/numerics.hpp"

#include <cmath>
#include <cstring>
#include <string>

namespace kdvb {

CumulativeWeights::CumulativeWeights(int intervals, double h, Quadrature rule)
    : h_(h), rule_(rule) {
    if (intervals < 2) throw std::invalid_argument("CumulativeWeights: need at least 2 intervals");
    if (!(h > 0.0)) throw std::invalid_argument("CumulativeWeights: step must be positive");
    rows_.resize(intervals + 1);
    rows_[0] = {};
    for (int j = 1; j <= intervals; ++j) {
        auto& w = rows_[j];
        if (rule == Quadrature::trapezoid) {
            w.assign(j + 1, h);
            w.front() = 0.5 * h;
            w.back() = 0.5 * h;
            continue;
        }
        if (j == 1) {
            // Quadratic through nodes {0,1,2} integrated over [t0, t1];
            // keeps the composite rule fourth order near the origin.
            w = {5.0 * h / 12.0, 8.0 * h / 12.0, -1.0 * h / 12.0};
        } else if (j % 2 == 0) {
            w.assign(j + 1, 0.0);
            for (int i = 0; i < j; i += 2) {
                w[i] += h / 3.0;
                w[i + 1] += 4.0 * h / 3.0;
                w[i + 2] += h / 3.0;
            }
        } else {
            // Simpson over [0, t_{j-1}] plus the quadratic end panel on
            // nodes {j-2, j-1, j} integrated over [t_{j-1}, t_j].
            w.assign(j + 1, 0.0);
            for (int i = 0; i + 2 <= j - 1; i += 2) {
                w[i] += h / 3.0;
                w[i + 1] += 4.0 * h / 3.0;
                w[i + 2] += h / 3.0;
            }
            w[j - 2] += -1.0 * h / 12.0;
            w[j - 1] += 8.0 * h / 12.0;
            w[j] += 5.0 * h / 12.0;
        }
    }
}

LogLogFit loglog_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("loglog_fit: need >= 2 matching points");
    const std::size_t n = x.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("loglog_fit: points must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double xm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xm += lx[i];
        ym += ly[i];
    }
    xm /= static_cast<double>(n);
    ym /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - xm) * (lx[i] - xm);
        sxy += (lx[i] - xm) * (ly[i] - ym);
    }
    if (sxx == 0.0) throw std::invalid_argument("loglog_fit: degenerate abscissae");
    LogLogFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ym - fit.slope * xm;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = fit.intercept + fit.slope * lx[i];
        ss_res += (ly[i] - pred) * (ly[i] - pred);
        ss_tot += (ly[i] - ym) * (ly[i] - ym);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    if (fit.r_squared < 0.0) fit.r_squared = 0.0;
    if (fit.r_squared > 1.0) fit.r_squared = 1.0;
    return fit;
}

std::uint64_t fnv1a64(std::span<const char> bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a64(const std::string& s) {
    return fnv1a64(std::span<const char>(s.data(), s.size()));
}

}  // namespace kdvb
