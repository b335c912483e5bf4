#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kdvb/spectral.hpp"

namespace kdvb {

enum class OperatorTag { A2, A3, R3_0, A4_1, A4_2, B_total, mR, mN1, mN2 };

const char* operator_tag_name(OperatorTag tag);
OperatorTag operator_tag_from_name(const std::string& name);

struct OperatorKind {
    OperatorTag tag = OperatorTag::A2;
    double t = 0.25;
    double epsilon = 0.5;
};

// Empirical Sobolev-bound probe.  For each N the first input slot is a random
// field concentrated on the annulus (N, 2N] (diagonal operators get a generic
// field plus that annulus) and the remaining slots are generic random fields;
// the recorded constant is the max over trials of
//   || P_{>N} op(inputs) ||_{H^s} / prod_i || e^{t eps dx^2} input_i ||_{H^s}.
// unrestricted_constants repeats the measurement with full-band inputs only.
// fitted_N_exponent is the log-log least squares slope of the constants.
struct ProbeReport {
    OperatorKind kind;
    double s = 0.0;
    int trials = 0;
    std::vector<int> N_values;
    std::vector<double> empirical_constants;
    std::vector<double> unrestricted_constants;
    double fitted_N_exponent = 0.0;
};

ProbeReport estimate_probe(const OperatorKind& kind, double s, int trials,
                           const std::vector<int>& N_values, std::uint64_t seed,
                           const GridSpec& grid);

// Difference-form probe: max over trials of
//   || P_{>N} (op(v1) - op(v2)) ||_{H^s} /
//   ((||u1|| + ||u2||)^{deg-1} ||u1 - u2||)_{H^s}
// for tag in {A2, A3}.
double difference_probe(OperatorTag tag, double s, int trials, int N,
                        std::uint64_t seed, const GridSpec& grid);

// N-free constant max_trials ||op(v)||_{H^s} / ||v||^deg_{H^s}; used for the
// quintic stability check across band limits.
double plain_constant_probe(const OperatorKind& kind, double s, int trials,
                            std::uint64_t seed, const GridSpec& grid);

}  // namespace kdvb
