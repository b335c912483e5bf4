#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace kdvb {

using cplx = std::complex<double>;

// Band-limited grid on the 2*pi torus.  Modes |k| <= band_limit are retained;
// nonlinear products are truncated to dealias_limit (defaults to band_limit).
struct GridSpec {
    int band_limit = 16;
    int dealias_limit = 16;

    GridSpec() = default;
    explicit GridSpec(int K, int dealias = -1);

    bool operator==(const GridSpec&) const = default;
};

struct SobolevIndex {
    double s = 0.0;
    bool homogeneous = false;

    SobolevIndex() = default;
    explicit SobolevIndex(double s_, bool homogeneous_ = false);
};

enum class Gauge { physical, twisted };

// Real-valued mean-zero periodic field stored as Fourier coefficients for
// k = 1..K.  Negative modes are the conjugates, the zero mode is absent, so
// conjugate symmetry and zero mean hold by construction for every operation.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(const GridSpec& grid, Gauge gauge = Gauge::physical);
    SpectralField(const GridSpec& grid, std::vector<cplx> positive_modes,
                  Gauge gauge = Gauge::physical);

    const GridSpec& grid() const { return grid_; }
    Gauge gauge() const { return gauge_; }
    void set_gauge(Gauge g) { gauge_ = g; }

    // Coefficient at any wavenumber: conj for k < 0, zero for k == 0 or |k| > K.
    cplx coeff(int k) const;
    std::span<const cplx> positive_modes() const { return pos_; }

    bool is_zero() const;

private:
    GridSpec grid_{};
    Gauge gauge_ = Gauge::physical;
    std::vector<cplx> pos_;  // pos_[i] = coefficient of mode i+1
};

// Builds a field from an arbitrary wavenumber->coefficient map.  Conjugate
// symmetry is enforced by u_k <- (u_k + conj(u_{-k}))/2 and the zero mode is
// dropped.  Rejects |k| > K and non-finite amplitudes.
SpectralField make_field(const std::map<int, cplx>& coeffs, const GridSpec& grid);

// Deterministic random field with |u_k| = amplitude * k^-(s+1) and uniformly
// random phases.  H^s norms stay O(1) while H^{s+1} grows with the band.
SpectralField random_sobolev_field(std::uint64_t seed, const GridSpec& grid,
                                   double s, double amplitude);

// Same spectrum profile restricted to the annulus lo < k <= hi (used by the
// estimate probes, which stress operators with data concentrated above a cut).
SpectralField random_annulus_field(std::uint64_t seed, const GridSpec& grid,
                                   double s, double amplitude, int lo, int hi);

// (2*pi * sum (1+k^2)^s |u_k|^2)^(1/2), or |k|^(2s) weights when homogeneous.
double sobolev_norm(const SpectralField& f, const SobolevIndex& idx = SobolevIndex{});
double sobolev_distance(const SpectralField& a, const SpectralField& b,
                        const SobolevIndex& idx = SobolevIndex{});

enum class BandMode { low, high };

// low keeps |k| <= N, high keeps |k| > N; the two parts always sum to f.
SpectralField project_band(const SpectralField& f, BandMode mode, int N);

// Multiplies coefficients by (ik)^order; negative orders invert (zero mode
// stays absent, so this is exact on the stored class of fields).
SpectralField derivative(const SpectralField& f, int order);
SpectralField inv_derivative(const SpectralField& f);

enum class SemigroupParts { dispersive_only, dissipative_only, full };
enum class Direction { forward, inverse };

// Exact linear propagators in coefficient space.  forward dispersive_only is
// e^{t dx^3} (multiplier e^{-i t k^3}), forward dissipative_only is the heat
// semigroup e^{t eps dx^2} (multiplier e^{-t eps k^2}), full combines both as
// e^{t(dx^3 - eps dx^2)}.  Requests whose multiplier grows like e^{t eps k^2}
// are rejected once t*eps*K^2 > 700 to avoid overflow.
SpectralField semigroup(const SpectralField& f, double t, double epsilon,
                        Direction dir, SemigroupParts parts);

// Exact coefficient convolution of two fields, truncated to out_band.
SpectralField convolve(const SpectralField& a, const SpectralField& b, int out_band);

// Pointwise-product fast path on a padded grid (2/3-rule style truncation);
// agrees with convolve on the retained band.
SpectralField convolve_fft(const SpectralField& a, const SpectralField& b, int out_band);

// u^alpha with exact intermediate bands, truncated to out_band.
SpectralField field_power(const SpectralField& u, int alpha, int out_band);

double evaluate(const SpectralField& f, double x);
std::vector<double> evaluate_grid(const SpectralField& f, int n);

// Dense coefficient view c[K+k] for k in [-K, K]; mirror of the storage,
// convenient for kernels and bindings.
std::vector<cplx> dense_coeffs(const SpectralField& f);
SpectralField field_from_dense(const GridSpec& grid, std::span<const cplx> dense,
                               Gauge gauge = Gauge::physical);

}  // namespace kdvb
