#pragma once

#include <string>
#include <vector>

#include "kdvb/solver.hpp"

namespace kdvb {

struct SweepRecord {
    double epsilon = 0.0;
    double distance = 0.0;  // sup_t || S^eps(phi) - S(phi) ||_{H^s} over shared nodes
    double s = 0.0;
    std::string config_fingerprint;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<double> epsilons_used;
    std::vector<double> epsilons_excluded;  // zero-distance points dropped from the fit
};

// Solves the viscous and inviscid problems from identical data on identical
// grids and nodes (reference integrator) and measures the sup-node distance.
SweepRecord run_pair(const SpectralField& phi, double epsilon, const SolverConfig& config);

// run_pair over a list of epsilons; the inviscid leg is solved once and shared.
std::vector<SweepRecord> epsilon_sweep(const SpectralField& phi,
                                       const std::vector<double>& epsilons,
                                       const SolverConfig& config);

// Least squares fit of log(distance) against log(epsilon).  Requires >= 3
// usable (positive-distance) points spanning the input list.
RateFit fit_rate(const std::vector<SweepRecord>& records);

struct TruncationRow {
    int cutoff = 0;
    double data_tail = 0.0;             // || P_{>cutoff} phi ||
    double leg_viscous_continuity = 0.0;   // || S^eps(phi) - S^eps(P_{<=cutoff} phi) ||
    double leg_truncated_gap = 0.0;        // || S^eps(P phi) - S(P phi) ||
    double leg_inviscid_continuity = 0.0;  // || S(P phi) - S(phi) ||
    double legs_sum = 0.0;
    double direct = 0.0;                   // || S^eps(phi) - S(phi) ||
};

// Measures the three legs of the frequency-truncation triangle argument for
// each cutoff, in L^2 (s = 0 unless the config says otherwise).
std::vector<TruncationRow> truncation_study(const SpectralField& phi,
                                            const std::vector<int>& cutoffs,
                                            double epsilon, const SolverConfig& config);

}  // namespace kdvb
