#include "kdvb/phase.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace kdvb {

namespace {

using i64 = std::int64_t;
using i128 = __int128;

i64 narrow(i128 v, const char* what) {
    if (v > static_cast<i128>(std::numeric_limits<i64>::max()) ||
        v < static_cast<i128>(std::numeric_limits<i64>::min()))
        throw std::overflow_error(std::string("phase arithmetic overflow in ") + what);
    return static_cast<i64>(v);
}

i64 abs64(i64 v) { return v < 0 ? -v : v; }

double sq(i64 v) { return static_cast<double>(v) * static_cast<double>(v); }

constexpr std::size_t kMaxStoredViolations = 20;

void record_violation(LemmaClaim& claim, i64 k1, i64 k2, i64 k3, double eps, double detail) {
    ++claim.violation_count;
    if (claim.violations.size() < kMaxStoredViolations)
        claim.violations.push_back({k1, k2, k3, eps, detail});
}

}  // namespace

void ThresholdConvention::validate() const {
    if (!(c_much_less > 0.0 && c_much_less <= 0.1))
        throw std::invalid_argument("ThresholdConvention: c_much_less must lie in (0, 1/10]");
    if (!(c_gtrsim > 0.0 && c_gtrsim <= 1.0))
        throw std::invalid_argument("ThresholdConvention: c_gtrsim must lie in (0, 1]");
    if (!(c_sim >= 2.0))
        throw std::invalid_argument("ThresholdConvention: c_sim must be >= 2");
}

const char* triple_class_name(TripleClass c) {
    switch (c) {
        case TripleClass::Gamma0: return "Gamma0";
        case TripleClass::Gamma1: return "Gamma1";
        case TripleClass::Gamma21: return "Gamma21";
        case TripleClass::Gamma22: return "Gamma22";
    }
    return "?";
}

std::int64_t phase_tilde(i64 k1, i64 k2, i64 k3) {
    const i128 a = static_cast<i128>(k1) + k2;
    const i128 b = static_cast<i128>(k2) + k3;
    const i128 c = static_cast<i128>(k1) + k3;
    return narrow(3 * a * b * c, "phase_tilde");
}

std::complex<double> q1(i64 k, i64 k1, i64 k2, double epsilon) {
    if (k != k1 + k2) throw std::invalid_argument("q1: requires k = k1 + k2");
    const i128 re = 3 * static_cast<i128>(k) * k1 * k2;
    const i128 im = static_cast<i128>(k) * k - static_cast<i128>(k1) * k1 - static_cast<i128>(k2) * k2;
    return {static_cast<double>(narrow(re, "q1")), epsilon * static_cast<double>(narrow(im, "q1"))};
}

std::complex<double> q2(i64 k, i64 k1, i64 k2, i64 k3, double epsilon) {
    if (k != k1 + k2 + k3) throw std::invalid_argument("q2: requires k = k1 + k2 + k3");
    const i64 re = phase_tilde(k1, k2, k3);
    const i128 im = static_cast<i128>(k) * k - static_cast<i128>(k1) * k1 -
                    static_cast<i128>(k2) * k2 - static_cast<i128>(k3) * k3;
    return {static_cast<double>(re), epsilon * static_cast<double>(narrow(im, "q2"))};
}

std::complex<double> q3_kdv(i64 k, i64 k1, i64 k2, i64 k3, i64 k4, double epsilon) {
    if (k != k1 + k2 + k3 + k4) throw std::invalid_argument("q3_kdv: requires k = k1+k2+k3+k4");
    return q2(k, k1 + k2, k3, k4, epsilon) + q1(k1 + k2, k1, k2, epsilon);
}

std::complex<double> q3_mkdv(i64 k, i64 k1, i64 k2, i64 k3, i64 j1, i64 j2, i64 j3,
                             double epsilon) {
    if (k != k1 + k2 + k3) throw std::invalid_argument("q3_mkdv: requires k = k1 + k2 + k3");
    if (k1 != j1 + j2 + j3) throw std::invalid_argument("q3_mkdv: requires k1 = j1 + j2 + j3");
    if (k1 == 0 || k2 == 0 || k3 == 0 || j1 == 0 || j2 == 0 || j3 == 0)
        throw std::invalid_argument("q3_mkdv: zero index is degenerate for mean-zero fields");
    return q2(k, k1, k2, k3, epsilon) + q2(k1, j1, j2, j3, epsilon);
}

TripleReport classify_triple(i64 k1, i64 k2, i64 k3, const ThresholdConvention& conv) {
    conv.validate();
    TripleReport r;
    r.k1 = k1;
    r.k2 = k2;
    r.k3 = k3;
    r.k = k1 + k2 + k3;
    r.phase_tilde = phase_tilde(k1, k2, k3);
    r.k_m = std::max(std::max(abs64(r.k), abs64(k1)), std::max(abs64(k2), abs64(k3)));
    const i64 a = abs64(k1 + k2), b = abs64(k2 + k3), c = abs64(k1 + k3);
    r.lambda_min = std::min(a, std::min(b, c));
    const i128 ab = static_cast<i128>(a) * b, bc = static_cast<i128>(b) * c,
               ca = static_cast<i128>(c) * a;
    r.lambda_big = narrow(std::min(ab, std::min(bc, ca)), "Lambda");
    const i64 phi = abs64(r.phase_tilde);
    if (a == 0 || b == 0 || c == 0) {
        r.cls = TripleClass::Gamma0;
    } else if (static_cast<double>(phi) <= conv.c_much_less * 0.25 * sq(r.k_m)) {
        r.cls = TripleClass::Gamma1;
    } else if (static_cast<long double>(phi) <
               std::pow(static_cast<long double>(r.k_m), 15.0L / 7.0L)) {
        r.cls = TripleClass::Gamma21;
    } else {
        r.cls = TripleClass::Gamma22;
    }
    return r;
}

void enumerate_triples(i64 k, int K, const ThresholdConvention& conv,
                       const std::function<void(const TripleReport&)>& sink) {
    if (abs64(k) > 3 * static_cast<i64>(K))
        throw std::invalid_argument("enumerate_triples: |k| must be <= 3K");
    for (i64 k1 = -K; k1 <= K; ++k1) {
        const i64 lo = std::max<i64>(-K, k - k1 - K);
        const i64 hi = std::min<i64>(K, k - k1 + K);
        for (i64 k2 = lo; k2 <= hi; ++k2) sink(classify_triple(k1, k2, k - k1 - k2, conv));
    }
}

std::vector<TripleReport> enumerate_triples(i64 k, int K, const ThresholdConvention& conv) {
    std::vector<TripleReport> out;
    enumerate_triples(k, K, conv, [&](const TripleReport& r) { out.push_back(r); });
    return out;
}

LemmaReport verify_phase_lemmas(int K, const ThresholdConvention& conv,
                                const std::vector<double>& epsilons) {
    conv.validate();
    if (K < 1 || K > 128)
        throw std::invalid_argument("verify_phase_lemmas: exhaustive mode supports 1 <= K <= 128");
    LemmaReport report;
    report.convention = conv;
    report.K = K;
    report.epsilons = epsilons;
    report.notes = {
        "much-less: a << b iff a <= c_much_less*b; comparable: a ~ b iff b/c_sim <= a <= c_sim*b",
        "Gamma21/Gamma22 boundaries compare |phase_tilde| (= k^3 - sum k_i^3) against k_m^(15/7)",
    };

    LemmaClaim phase_lower{.name = "phase_lower_on_gamma"};
    LemmaClaim q1_lower{.name = "q1_lower_bound"};
    LemmaClaim q2_dom{.name = "q2_dominates_phase"};
    LemmaClaim g21{.name = "gamma21_small_pair_sum"};
    LemmaClaim g1{.name = "gamma1_comparability"};
    double min_phase_ratio = std::numeric_limits<double>::infinity();
    double min_q1_ratio = std::numeric_limits<double>::infinity();
    double max_g21_ratio = 0.0;
    double max_g1_ratio = 0.0;

    for (i64 k1 = -K; k1 <= K; ++k1) {
        for (i64 k2 = -K; k2 <= K; ++k2) {
            for (i64 k3 = -K; k3 <= K; ++k3) {
                const TripleReport r = classify_triple(k1, k2, k3, conv);
                const double phi = static_cast<double>(abs64(r.phase_tilde));
                if (r.cls != TripleClass::Gamma0) {
                    ++phase_lower.checked;
                    const double ratio = phi / static_cast<double>(r.k_m);
                    min_phase_ratio = std::min(min_phase_ratio, ratio);
                    if (ratio < conv.c_gtrsim) record_violation(phase_lower, k1, k2, k3, 0.0, ratio);
                }
                for (double eps : epsilons) {
                    ++q2_dom.checked;
                    const auto Q2 = q2(r.k, k1, k2, k3, eps);
                    // |Q2|^2 = phase^2 + Im^2 >= phase^2 holds exactly; recorded
                    // as a checked claim so violations would surface.
                    const double lhs2 = Q2.real() * Q2.real() + Q2.imag() * Q2.imag();
                    if (lhs2 < phi * phi) record_violation(q2_dom, k1, k2, k3, eps, std::sqrt(lhs2) - phi);
                }
                if (r.cls == TripleClass::Gamma21) {
                    ++g21.checked;
                    const double bound =
                        conv.c_much_less *
                        static_cast<double>(std::pow(static_cast<long double>(r.k_m), 5.0L / 7.0L));
                    const double ratio = static_cast<double>(r.lambda_min) /
                                         static_cast<double>(std::pow(static_cast<long double>(r.k_m), 5.0L / 7.0L));
                    max_g21_ratio = std::max(max_g21_ratio, ratio);
                    if (static_cast<double>(r.lambda_min) > bound)
                        record_violation(g21, k1, k2, k3, 0.0, ratio);
                }
                if (r.cls == TripleClass::Gamma1) {
                    ++g1.checked;
                    i64 mn = std::numeric_limits<i64>::max();
                    for (i64 v : {r.k, k1, k2, k3})
                        if (v != 0) mn = std::min(mn, abs64(v));
                    const double ratio = static_cast<double>(r.k_m) / static_cast<double>(mn);
                    max_g1_ratio = std::max(max_g1_ratio, ratio);
                    if (ratio > conv.c_sim) record_violation(g1, k1, k2, k3, 0.0, ratio);
                }
            }
        }
    }

    for (i64 k1 = -K; k1 <= K; ++k1) {
        for (i64 k2 = -K; k2 <= K; ++k2) {
            const i64 k = k1 + k2;
            if (k == 0 || k1 == 0 || k2 == 0) continue;
            const double denom = 3.0 * static_cast<double>(abs64(k) * abs64(k1)) * static_cast<double>(abs64(k2));
            for (double eps : epsilons) {
                ++q1_lower.checked;
                const auto Q1 = q1(k, k1, k2, eps);
                const double lhs2 = Q1.real() * Q1.real() + Q1.imag() * Q1.imag();
                const double ratio = std::sqrt(lhs2) / (denom / 3.0);
                min_q1_ratio = std::min(min_q1_ratio, ratio);
                if (lhs2 < denom * denom) record_violation(q1_lower, k1, k2, 0, eps, ratio);
            }
        }
    }

    phase_lower.extremal = phase_lower.checked ? min_phase_ratio : 0.0;
    phase_lower.extremal_desc = "min |phase_tilde| / k_m over Gamma";
    q1_lower.extremal = q1_lower.checked ? min_q1_ratio : 0.0;
    q1_lower.extremal_desc = "min |Q1| / |k k1 k2|";
    q2_dom.extremal = 0.0;
    q2_dom.extremal_desc = "|Q2| >= |phase_tilde| holds exactly";
    g21.extremal = max_g21_ratio;
    g21.extremal_desc = "max lambda_min / k_m^(5/7) over Gamma21";
    g1.extremal = max_g1_ratio;
    g1.extremal_desc = "max k_m / min nonzero |k_i| over Gamma1";

    report.claims = {phase_lower, q1_lower, q2_dom, g21, g1};
    return report;
}

}  // namespace kdvb
