#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kdvb/numerics.hpp"
#include "kdvb/spectral.hpp"

namespace kdvb {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Method { reference, picard };

struct SolverConfig {
    int alpha = 2;              // nonlinearity power: 2 (quadratic) or 3 (cubic)
    double epsilon = 0.0;       // diffusion coefficient in [0, 1]
    double s = 0.0;             // Sobolev index for gates and distances
    double T = 1.0;             // horizon
    GridSpec grid{16};
    int split_N = 0;            // 0 -> ceil(T^(-2/5)) clamped to the band
    int time_steps = 256;       // reference: integration steps; picard: quadrature intervals
    int save_nodes = 0;         // reference: stored nodes (0 -> auto, <= 1024); must divide time_steps
    Quadrature quadrature = Quadrature::simpson;
    int picard_max_iters = 32;
    double picard_tol = 1e-9;
    double gate_c = 0.01;       // smallness gate: T^(2/5) ||phi||_{H^s}^2 <= gate_c
    bool disable_nonlinearity = false;  // test switch: pure linear evolution
    double blowup_guard = 1e6;

    void validate() const;
    int effective_split_N() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralField> states;
    SolverConfig config;
    Gauge gauge = Gauge::physical;
};

struct ContractionDiagnostics {
    std::vector<double> iterate_distances;   // sup-in-time H^s distance between successive iterates
    std::vector<double> contraction_ratios;  // successive quotients
    bool converged = false;
    int iterations = 0;
    double data_norm = 0.0;             // r = ||phi||_{H^s}
    double empirical_C = 0.0;           // sup_m ||iterate||_{sup H^s} / (2r)
    bool smallness_quadratic = false;   // T^(2/5) (2C)^2 r   <= 1/4
    bool smallness_quartic = false;     // T^(2/5) (2C)^4 r^3 <= 1/4
};

struct PicardResult {
    Trajectory trajectory;  // physical gauge
    ContractionDiagnostics diagnostics;
};

// Fourth-order integrating-factor Runge-Kutta reference solver for
//   u_t + u_xxx - eps u_xx = d_x(u^alpha)
// on the band-truncated system; the linear propagator is applied exactly.
Trajectory reference_solve(const SpectralField& phi, const SolverConfig& config);

// One application of the normal-form fixed-point map at node time t.  history
// holds the current iterate in the bounded twisted gauge on the uniform
// quadrature nodes; the result is the twisted state at t.  Modes |k| > N use
// the boundary-term form, modes |k| <= N the plain Duhamel integrand.
SpectralField phi_map(const Trajectory& history, const SpectralField& phi,
                      double t, const SolverConfig& config);
SpectralField mkdv_phi_map(const Trajectory& history, const SpectralField& phi,
                           double t, const SolverConfig& config);

// Picard iteration of the fixed-point map from the constant-in-time seed.
// Throws SolverError if the data violate the smallness gate or if three
// consecutive iterate ratios are >= 1 (declared non-contraction).
PicardResult picard_solve(const SpectralField& phi, const SolverConfig& config);
PicardResult mkdv_picard_solve(const SpectralField& phi, const SolverConfig& config);

// Dispatch; for picard with T beyond the gate horizon the solve is chained:
// solve on [0, T1], restart from u(T1).
Trajectory solve(const SpectralField& phi, const SolverConfig& config, Method method);

// Sup over shared nodes of the H^s distance between two trajectories.
double trajectory_distance(const Trajectory& a, const Trajectory& b, const SobolevIndex& idx);

}  // namespace kdvb
