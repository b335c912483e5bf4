#include "kdvb/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kdvb/numerics.hpp"

namespace kdvb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

GridSpec::GridSpec(int K, int dealias) : band_limit(K), dealias_limit(dealias < 0 ? K : dealias) {
    require(band_limit >= 4, "GridSpec: band limit must be >= 4");
    require(dealias_limit >= 1 && dealias_limit <= band_limit,
            "GridSpec: dealias limit must lie in [1, band_limit]");
}

SobolevIndex::SobolevIndex(double s_, bool homogeneous_) : s(s_), homogeneous(homogeneous_) {
    require(s >= 0.0, "SobolevIndex: s must be >= 0");
}

SpectralField::SpectralField(const GridSpec& grid, Gauge gauge)
    : grid_(grid), gauge_(gauge), pos_(static_cast<std::size_t>(grid.band_limit), cplx{0.0, 0.0}) {}

SpectralField::SpectralField(const GridSpec& grid, std::vector<cplx> positive_modes, Gauge gauge)
    : grid_(grid), gauge_(gauge), pos_(std::move(positive_modes)) {
    require(pos_.size() == static_cast<std::size_t>(grid.band_limit),
            "SpectralField: positive mode count must equal the band limit");
    for (const cplx& c : pos_)
        require(std::isfinite(c.real()) && std::isfinite(c.imag()),
                "SpectralField: non-finite amplitude");
}

cplx SpectralField::coeff(int k) const {
    if (k == 0 || std::abs(k) > grid_.band_limit) return {0.0, 0.0};
    if (k > 0) return pos_[static_cast<std::size_t>(k - 1)];
    return std::conj(pos_[static_cast<std::size_t>(-k - 1)]);
}

bool SpectralField::is_zero() const {
    for (const cplx& c : pos_)
        if (c != cplx{0.0, 0.0}) return false;
    return true;
}

SpectralField make_field(const std::map<int, cplx>& coeffs, const GridSpec& grid) {
    std::vector<cplx> pos(static_cast<std::size_t>(grid.band_limit), cplx{0.0, 0.0});
    for (const auto& [k, c] : coeffs) {
        require(std::abs(k) <= grid.band_limit,
                "make_field: wavenumber " + std::to_string(k) + " outside band");
        require(std::isfinite(c.real()) && std::isfinite(c.imag()),
                "make_field: non-finite amplitude at k=" + std::to_string(k));
    }
    auto lookup = [&](int k) -> cplx {
        auto it = coeffs.find(k);
        return it == coeffs.end() ? cplx{0.0, 0.0} : it->second;
    };
    for (int k = 1; k <= grid.band_limit; ++k)
        pos[static_cast<std::size_t>(k - 1)] = 0.5 * (lookup(k) + std::conj(lookup(-k)));
    return SpectralField(grid, std::move(pos));
}

SpectralField random_sobolev_field(std::uint64_t seed, const GridSpec& grid, double s,
                                   double amplitude) {
    return random_annulus_field(seed, grid, s, amplitude, 0, grid.band_limit);
}

SpectralField random_annulus_field(std::uint64_t seed, const GridSpec& grid, double s,
                                   double amplitude, int lo, int hi) {
    require(amplitude >= 0.0, "random field: amplitude must be >= 0");
    require(lo >= 0 && hi <= grid.band_limit && lo < hi, "random field: bad annulus bounds");
    std::mt19937_64 gen(seed);
    std::vector<cplx> pos(static_cast<std::size_t>(grid.band_limit), cplx{0.0, 0.0});
    for (int k = lo + 1; k <= hi; ++k) {
        const double theta = kTwoPi * uniform01(gen);
        const double mag = amplitude * std::pow(static_cast<double>(k), -(s + 1.0));
        pos[static_cast<std::size_t>(k - 1)] = std::polar(mag, theta);
    }
    return SpectralField(grid, std::move(pos));
}

double sobolev_norm(const SpectralField& f, const SobolevIndex& idx) {
    double sum = 0.0;
    const auto pos = f.positive_modes();
    for (int k = 1; k <= f.grid().band_limit; ++k) {
        const double kk = static_cast<double>(k) * static_cast<double>(k);
        const double w = idx.homogeneous ? std::pow(kk, idx.s) : std::pow(1.0 + kk, idx.s);
        sum += w * std::norm(pos[static_cast<std::size_t>(k - 1)]);
    }
    return std::sqrt(kTwoPi * 2.0 * sum);
}

double sobolev_distance(const SpectralField& a, const SpectralField& b, const SobolevIndex& idx) {
    const int K = std::max(a.grid().band_limit, b.grid().band_limit);
    double sum = 0.0;
    for (int k = 1; k <= K; ++k) {
        const double kk = static_cast<double>(k) * static_cast<double>(k);
        const double w = idx.homogeneous ? std::pow(kk, idx.s) : std::pow(1.0 + kk, idx.s);
        sum += w * std::norm(a.coeff(k) - b.coeff(k));
    }
    return std::sqrt(kTwoPi * 2.0 * sum);
}

SpectralField project_band(const SpectralField& f, BandMode mode, int N) {
    require(N >= 0 && N <= f.grid().band_limit, "project_band: N must lie in [0, band_limit]");
    std::vector<cplx> pos(f.positive_modes().begin(), f.positive_modes().end());
    for (int k = 1; k <= f.grid().band_limit; ++k) {
        const bool keep = (mode == BandMode::low) ? (k <= N) : (k > N);
        if (!keep) pos[static_cast<std::size_t>(k - 1)] = {0.0, 0.0};
    }
    return SpectralField(f.grid(), std::move(pos), f.gauge());
}

SpectralField derivative(const SpectralField& f, int order) {
    std::vector<cplx> pos(f.positive_modes().begin(), f.positive_modes().end());
    for (int k = 1; k <= f.grid().band_limit; ++k) {
        const cplx ik{0.0, static_cast<double>(k)};
        cplx mult{1.0, 0.0};
        if (order >= 0)
            for (int j = 0; j < order; ++j) mult *= ik;
        else
            for (int j = 0; j < -order; ++j) mult /= ik;
        pos[static_cast<std::size_t>(k - 1)] *= mult;
    }
    return SpectralField(f.grid(), std::move(pos), f.gauge());
}

SpectralField inv_derivative(const SpectralField& f) { return derivative(f, -1); }

SpectralField semigroup(const SpectralField& f, double t, double epsilon, Direction dir,
                        SemigroupParts parts) {
    require(epsilon >= 0.0, "semigroup: epsilon must be >= 0");
    const int K = f.grid().band_limit;
    const double sign = (dir == Direction::forward) ? 1.0 : -1.0;
    const bool has_heat = parts != SemigroupParts::dispersive_only;
    // Heat exponent per mode: dissipative_only forward decays (e^{-t eps k^2});
    // full forward is the twist e^{t(dx^3 - eps dx^2)} whose heat factor grows.
    double heat_sign = 0.0;
    if (has_heat) heat_sign = (parts == SemigroupParts::dissipative_only) ? -sign : +sign;
    if (has_heat && heat_sign * t > 0.0) {
        const double worst = heat_sign * t * epsilon * static_cast<double>(K) * K;
        if (worst > 700.0)
            throw std::domain_error(
                "semigroup: growing factor e^{t eps k^2} overflows (t=" + std::to_string(t) +
                ", eps=" + std::to_string(epsilon) + ", K=" + std::to_string(K) + ")");
    }
    std::vector<cplx> pos(f.positive_modes().begin(), f.positive_modes().end());
    for (int k = 1; k <= K; ++k) {
        const double kd = static_cast<double>(k);
        double re = 0.0, im = 0.0;
        if (parts != SemigroupParts::dissipative_only) im = -sign * t * kd * kd * kd;
        if (has_heat) re = heat_sign * t * epsilon * kd * kd;
        pos[static_cast<std::size_t>(k - 1)] *= std::exp(cplx{re, im});
    }
    return SpectralField(f.grid(), std::move(pos), f.gauge());
}

namespace {

// Output fields live on a grid wide enough to satisfy the GridSpec minimum;
// modes beyond out_band stay zero.
SpectralField wrap_band(std::vector<cplx> pos, int out_band, Gauge gauge) {
    const int K = std::max(out_band, 4);
    pos.resize(static_cast<std::size_t>(K), cplx{0.0, 0.0});
    return SpectralField(GridSpec(K), std::move(pos), gauge);
}

}  // namespace

SpectralField convolve(const SpectralField& a, const SpectralField& b, int out_band) {
    require(out_band >= 1, "convolve: output band must be >= 1");
    const int Ka = a.grid().band_limit, Kb = b.grid().band_limit;
    const auto da = dense_coeffs(a);
    const auto db = dense_coeffs(b);
    std::vector<cplx> pos(static_cast<std::size_t>(out_band), cplx{0.0, 0.0});
    for (int k = 1; k <= out_band; ++k) {
        cplx acc{0.0, 0.0};
        const int lo = std::max(-Ka, k - Kb);
        const int hi = std::min(Ka, k + Kb);
        for (int k1 = lo; k1 <= hi; ++k1) {
            const cplx va = da[static_cast<std::size_t>(Ka + k1)];
            const cplx vb = db[static_cast<std::size_t>(Kb + k - k1)];
            acc += cplx(va.real() * vb.real() - va.imag() * vb.imag(),
                        va.real() * vb.imag() + va.imag() * vb.real());
        }
        pos[static_cast<std::size_t>(k - 1)] = acc;
    }
    return wrap_band(std::move(pos), out_band, a.gauge());
}

namespace {

// Iterative radix-2 complex FFT (power-of-two length).
void fft_inplace(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 1.0 : -1.0) * kTwoPi / static_cast<double>(len);
        const cplx wl = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            cplx w{1.0, 0.0};
            for (std::size_t j2 = 0; j2 < len / 2; ++j2) {
                const cplx u = a[i + j2];
                const cplx v = a[i + j2 + len / 2] * w;
                a[i + j2] = u + v;
                a[i + j2 + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& c : a) c /= static_cast<double>(n);
}

}  // namespace

SpectralField convolve_fft(const SpectralField& a, const SpectralField& b, int out_band) {
    require(out_band >= 1, "convolve_fft: output band must be >= 1");
    const int Ka = a.grid().band_limit, Kb = b.grid().band_limit;
    // The product has modes up to Ka+Kb; a grid of n > Ka+Kb+out_band keeps the
    // retained band alias-free (the 2/3 rule when all three bands coincide).
    std::size_t n = 1;
    while (n < static_cast<std::size_t>(Ka + Kb + out_band + 1)) n <<= 1;
    auto grid_values = [&](const SpectralField& f, int K) {
        std::vector<cplx> g(n, cplx{0.0, 0.0});
        for (int k = 1; k <= K; ++k) {
            g[static_cast<std::size_t>(k)] = f.coeff(k);
            g[n - static_cast<std::size_t>(k)] = f.coeff(-k);
        }
        fft_inplace(g, true);  // inverse transform: coefficients -> samples/<n scale>
        for (auto& c : g) c *= static_cast<double>(n);
        return g;
    };
    auto ga = grid_values(a, Ka);
    auto gb = grid_values(b, Kb);
    for (std::size_t i = 0; i < n; ++i) ga[i] *= gb[i];
    fft_inplace(ga, false);
    for (auto& c : ga) c /= static_cast<double>(n);
    std::vector<cplx> pos(static_cast<std::size_t>(out_band), cplx{0.0, 0.0});
    for (int k = 1; k <= out_band; ++k) pos[static_cast<std::size_t>(k - 1)] = ga[static_cast<std::size_t>(k)];
    return wrap_band(std::move(pos), out_band, a.gauge());
}

SpectralField field_power(const SpectralField& u, int alpha, int out_band) {
    require(alpha == 2 || alpha == 3, "field_power: alpha must be 2 or 3");
    const int K = u.grid().band_limit;
    if (alpha == 2) return convolve(u, u, out_band);
    SpectralField sq = convolve(u, u, 2 * K);  // exact intermediate band
    return convolve(sq, u, out_band);
}

double evaluate(const SpectralField& f, double x) {
    cplx acc{0.0, 0.0};
    for (int k = 1; k <= f.grid().band_limit; ++k)
        acc += f.coeff(k) * std::exp(cplx{0.0, static_cast<double>(k) * x});
    return 2.0 * acc.real();
}

std::vector<double> evaluate_grid(const SpectralField& f, int n) {
    require(n >= 1, "evaluate_grid: need n >= 1");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = evaluate(f, kTwoPi * i / n);
    return out;
}

std::vector<cplx> dense_coeffs(const SpectralField& f) {
    const int K = f.grid().band_limit;
    std::vector<cplx> d(static_cast<std::size_t>(2 * K + 1), cplx{0.0, 0.0});
    for (int k = 1; k <= K; ++k) {
        d[static_cast<std::size_t>(K + k)] = f.coeff(k);
        d[static_cast<std::size_t>(K - k)] = f.coeff(-k);
    }
    return d;
}

SpectralField field_from_dense(const GridSpec& grid, std::span<const cplx> dense, Gauge gauge) {
    const int K = grid.band_limit;
    require(dense.size() == static_cast<std::size_t>(2 * K + 1),
            "field_from_dense: dense size must equal 2K+1");
    std::vector<cplx> pos(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k) pos[static_cast<std::size_t>(k - 1)] = dense[static_cast<std::size_t>(K + k)];
    return SpectralField(grid, std::move(pos), gauge);
}

}  // namespace kdvb
