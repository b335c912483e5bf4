#pragma once

#include <optional>

#include "kdvb/spectral.hpp"

namespace kdvb {

// Every operator below is evaluated in the bounded delivery gauge: the raw
// kernels carry oscillatory factors e^{-i t Q} whose imaginary parts produce
// real exponentials, and the output is delivered as e^{t eps dx^2} * (op), so
// the combined real exponent of every stored factor is <= 0 for t, eps >= 0.
//
// InputGauge::raw_twisted treats the argument coefficient arrays as the
// twisted variable itself: the delivered damping e^{-t eps sum k_i^2} is
// applied term by term.  InputGauge::bounded treats the arguments as already
// heat-damped states (b_k = e^{-t eps k^2} v_k); all dissipative factors then
// cancel exactly and only the oscillation remains.  The solver uses bounded.
enum class InputGauge { raw_twisted, bounded };

// Optional cap on intermediate wavenumbers (the pair/cascade sums that a
// band-truncated evolution generates).  Absent = every intermediate the input
// bands allow, which is the literal operator on band-limited data.
using ModeLimit = std::optional<int>;

// Quadratic boundary operator:
//   A2(u,v)_k = sum_{k1+k2=k} k / Q1(k,k1,k2) e^{-i t Q1} u_{k1} v_{k2}.
SpectralField a2(const SpectralField& u, const SpectralField& v, double t,
                 double epsilon, InputGauge gauge = InputGauge::raw_twisted);

// Cubic boundary operator over Gamma(k) (all pair sums nonzero):
//   A3(u,v,w)_k = sum k (k1+k2) e^{-i t Q2} / (Q1(k,k1+k2,k3) Q2(k,k1,k2,k3))
//                 u_{k1} v_{k2} w_{k3}.
SpectralField a3(const SpectralField& u, const SpectralField& v,
                 const SpectralField& w, double t, double epsilon,
                 InputGauge gauge = InputGauge::raw_twisted, ModeLimit limit = {});

// Resonant cubic term over Gamma0(k) with k1+k2 != 0:
//   R3_0(u,v,w)_k = sum i k (k1+k2) e^{t eps (k^2 - sum k_i^2)} / Q1(k,k1+k2,k3)
//                   u_{k1} v_{k2} w_{k3}.
SpectralField r3_0(const SpectralField& u, const SpectralField& v,
                   const SpectralField& w, double t, double epsilon,
                   InputGauge gauge = InputGauge::raw_twisted, ModeLimit limit = {});

// Quartic cascade operators (k = k1+k2+k3+k4, quadruples with vanishing
// denominators excluded by integer predicate):
//   A4_1: kernel i k (k1+k2+k3)(k1+k2) e^{-i t Q3} /
//                (Q1(k,k1+k2+k3,k4) Q2(k,k1+k2,k3,k4)),
//         Q3 = Q2(k,k1+k2,k3,k4) + Q1(k1+k2,k1,k2)
//   A4_2: kernel i k (k1+k2)(k3+k4) e^{-i t Q3} /
//                (Q1(k,k1+k2,k3+k4) Q2(k,k1,k2,k3+k4)),
//         Q3 = Q2(k,k1,k2,k3+k4) + Q1(k3+k4,k3,k4).
SpectralField a4_1(const SpectralField& u, const SpectralField& v,
                   const SpectralField& w, const SpectralField& z, double t,
                   double epsilon, InputGauge gauge = InputGauge::raw_twisted,
                   ModeLimit limit = {});
SpectralField a4_2(const SpectralField& u, const SpectralField& v,
                   const SpectralField& w, const SpectralField& z, double t,
                   double epsilon, InputGauge gauge = InputGauge::raw_twisted,
                   ModeLimit limit = {});

// R3_0(v,v,v) + 2 A4_1(v,v,v,v) + A4_2(v,v,v,v).
SpectralField b_total(const SpectralField& v, double t, double epsilon,
                      InputGauge gauge = InputGauge::raw_twisted, ModeLimit limit = {});

// Diagonal cubic resonant term -i k |v_k|^2 v_k with its dissipative factor.
SpectralField mkdv_resonant(const SpectralField& v, double t, double epsilon,
                            InputGauge gauge = InputGauge::raw_twisted);

// Full Gamma0(k) cubic sum (the three zero-pair pairings, inclusion-exclusion
// on the diagonal); this is the resonant part that makes the cubic split
// exact: twisted_rhs_cubic = Gamma part + mkdv_resonant_total.
SpectralField mkdv_resonant_total(const SpectralField& v, double t, double epsilon,
                                  InputGauge gauge = InputGauge::raw_twisted);

// Cubic boundary operator over Gamma(k): kernel k / Q2(k,k1,k2,k3).
SpectralField mkdv_n1(const SpectralField& v, double t, double epsilon,
                      InputGauge gauge = InputGauge::raw_twisted);

// Quintic cascade: outer Gamma(k) sum with kernel i k k1 / Q2(k,k1,k2,k3),
// inner unrestricted cubic over j1+j2+j3 = k1, phase Q3 = Q2(k,..) + Q2(k1,j..).
// Evaluated as two nested cubic passes.
SpectralField mkdv_n2(const SpectralField& v, double t, double epsilon,
                      InputGauge gauge = InputGauge::raw_twisted, ModeLimit limit = {});

// Twisted-equation right-hand sides (the plain Duhamel integrands):
//   quadratic: i k sum_{k1+k2=k}       e^{-i t Q1} v_{k1} v_{k2}
//   cubic:     i k sum_{k1+k2+k3=k}    e^{-i t Q2} v_{k1} v_{k2} v_{k3}.
SpectralField twisted_rhs_quadratic(const SpectralField& v, double t, double epsilon,
                                    InputGauge gauge = InputGauge::raw_twisted);
SpectralField twisted_rhs_cubic(const SpectralField& v, double t, double epsilon,
                                InputGauge gauge = InputGauge::raw_twisted);

}  // namespace kdvb
