#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace kdvb {

// Pins the comparison constants behind the <<, >~ and ~ relations so that
// resonance classification is a concrete predicate:
//   a << b   iff  a <= c_much_less * b
//   a >~ b   iff  a >= c_gtrsim * b
//   a ~ b    iff  b / c_sim <= a <= c_sim * b
struct ThresholdConvention {
    double c_much_less = 0.1;
    double c_gtrsim = 1.0;
    double c_sim = 4.0;

    void validate() const;
};

enum class TripleClass { Gamma0, Gamma1, Gamma21, Gamma22 };

const char* triple_class_name(TripleClass c);

struct TripleReport {
    std::int64_t k1 = 0, k2 = 0, k3 = 0;
    std::int64_t k = 0;            // k1 + k2 + k3
    std::int64_t phase_tilde = 0;  // k^3 - k1^3 - k2^3 - k3^3
    std::int64_t k_m = 0;          // max(|k|, |k1|, |k2|, |k3|)
    std::int64_t lambda_big = 0;   // min pairwise product of |pair sums|
    std::int64_t lambda_min = 0;   // min |pair sum|
    TripleClass cls = TripleClass::Gamma0;
};

// 3(k1+k2)(k2+k3)(k1+k3), computed in widened arithmetic; equals
// k^3 - k1^3 - k2^3 - k3^3 with k = k1+k2+k3.  Throws on int64 overflow.
std::int64_t phase_tilde(std::int64_t k1, std::int64_t k2, std::int64_t k3);

// Quadratic phase 3 k k1 k2 + i eps (k^2 - k1^2 - k2^2); requires k = k1+k2.
std::complex<double> q1(std::int64_t k, std::int64_t k1, std::int64_t k2, double epsilon);

// Cubic phase: real part is exactly phase_tilde, imaginary part
// eps (k^2 - k1^2 - k2^2 - k3^2); requires k = k1+k2+k3.
std::complex<double> q2(std::int64_t k, std::int64_t k1, std::int64_t k2,
                        std::int64_t k3, double epsilon);

// Iterated phases.  The quadratic-cascade variant is
//   Q2(k, k1+k2, k3, k4) + Q1(k1+k2, k1, k2)   with k = k1+k2+k3+k4;
// the cubic-cascade variant is
//   Q2(k, k1, k2, k3) + Q2(k1, j1, j2, j3)     with k = k1+k2+k3, k1 = j1+j2+j3.
std::complex<double> q3_kdv(std::int64_t k, std::int64_t k1, std::int64_t k2,
                            std::int64_t k3, std::int64_t k4, double epsilon);
std::complex<double> q3_mkdv(std::int64_t k, std::int64_t k1, std::int64_t k2,
                             std::int64_t k3, std::int64_t j1, std::int64_t j2,
                             std::int64_t j3, double epsilon);

// Resonance classification:
//   Gamma0  iff (k1+k2)(k1+k3)(k2+k3) == 0
//   Gamma1  iff |phase_tilde| <= c_much_less * k_m^2 / 4
//   Gamma21 iff |phase_tilde| <  k_m^(15/7)
//   Gamma22 otherwise.
TripleReport classify_triple(std::int64_t k1, std::int64_t k2, std::int64_t k3,
                             const ThresholdConvention& conv = ThresholdConvention{});

// Streams every triple with k1+k2+k3 = k and |ki| <= K through the callback.
// Requires |k| <= 3K.
void enumerate_triples(std::int64_t k, int K, const ThresholdConvention& conv,
                       const std::function<void(const TripleReport&)>& sink);
std::vector<TripleReport> enumerate_triples(std::int64_t k, int K,
                                            const ThresholdConvention& conv = ThresholdConvention{});

struct LemmaViolation {
    std::int64_t k1 = 0, k2 = 0, k3 = 0;
    double epsilon = 0.0;
    double detail = 0.0;
};

struct LemmaClaim {
    std::string name;
    std::uint64_t checked = 0;
    std::uint64_t violation_count = 0;
    std::vector<LemmaViolation> violations;  // at most a fixed sample
    double extremal = 0.0;                   // claim-specific worst ratio
    std::string extremal_desc;
};

struct LemmaReport {
    ThresholdConvention convention;
    int K = 0;
    std::vector<double> epsilons;
    std::vector<LemmaClaim> claims;
    std::vector<std::string> notes;
};

// Exhaustive checks over the box |ki| <= K (K <= 128):
//   phase_lower_on_gamma   |phase_tilde| >= c_gtrsim * k_m on Gamma
//   q1_lower_bound         |Q1| >= 3 |k k1 k2| on all pairs, every epsilon
//   q2_dominates_phase     |Q2| >= |phase_tilde|, every epsilon
//   gamma21_small_pair_sum lambda_min <= c_much_less * k_m^(5/7) on Gamma21
//   gamma1_comparability   k_m / min nonzero |k_i| <= c_sim on Gamma1
LemmaReport verify_phase_lemmas(int K, const ThresholdConvention& conv,
                                const std::vector<double>& epsilons);

}  // namespace kdvb
