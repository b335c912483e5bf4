#include "kdvb/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace kdvb {

namespace detail {
// Rows at least this long use the incremental phase recurrence; shorter rows
// evaluate each oscillatory factor directly.  Tests flip this both ways to
// check the two paths against each other.
int phase_direct_row_threshold = 48;
}  // namespace detail

namespace {

using std::size_t;

inline cplx cmul(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(),
            a.real() * b.imag() + a.imag() * b.real()};
}

inline cplx cdiv(cplx a, cplx b) {
    const double d = b.real() * b.real() + b.imag() * b.imag();
    return {(a.real() * b.real() + a.imag() * b.imag()) / d,
            (a.imag() * b.real() - a.real() * b.imag()) / d};
}

// Unit-modulus sequence z_n = exp(i theta(n)) for quadratic integer phases:
// two complex multiplications per step.
struct PhaseIter {
    cplx z, d, r;
    PhaseIter(double theta0, double dtheta0, double ddtheta)
        : z(std::polar(1.0, theta0)), d(std::polar(1.0, dtheta0)), r(std::polar(1.0, ddtheta)) {}
    void advance() {
        z = cmul(z, d);
        d = cmul(d, r);
    }
};

struct Ctx {
    int K = 0;
    double t = 0.0;
    double eps = 0.0;
    bool raw = false;  // apply the delivered damping e^{-t eps k_i^2} per input
    std::vector<double> damp;  // damp[i] = e^{-t eps i^2}
    double D(long long i) const { return raw ? damp[static_cast<size_t>(i < 0 ? -i : i)] : 1.0; }
};

Ctx make_ctx(const GridSpec& grid, double t, double eps, InputGauge gauge, int max_index = -1) {
    if (!(t >= 0.0)) throw std::invalid_argument("operator: t must be >= 0");
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("operator: epsilon must lie in [0, 1]");
    Ctx c;
    c.K = grid.band_limit;
    c.t = t;
    c.eps = eps;
    c.raw = gauge == InputGauge::raw_twisted;
    const int top = max_index < 0 ? c.K : max_index;
    c.damp.resize(static_cast<size_t>(top) + 1);
    for (int i = 0; i <= top; ++i) {
        const double re = -t * eps * static_cast<double>(i) * static_cast<double>(i);
        // Bounded-delivery invariant: stored exponents never grow.
        if (re > 0.0) throw std::logic_error("operator kernel: positive real exponent");
        c.damp[static_cast<size_t>(i)] = std::exp(re);
    }
    return c;
}

void require_same_grid(const SpectralField& a, const SpectralField& b) {
    if (a.grid().band_limit != b.grid().band_limit)
        throw std::invalid_argument("operator: inputs must share one band limit");
}

SpectralField output_field(const GridSpec& grid, std::vector<cplx> pos) {
    return SpectralField(grid, std::move(pos), Gauge::twisted);
}

inline bool use_direct(long long row_len) {
    return row_len < detail::phase_direct_row_threshold;
}

// ---------------------------------------------------------------------------
// A2(u,v)_k = sum_{k1+k2=k} k / Q1 * e^{-i t Q1} u_{k1} v_{k2}
// delivered: oscillation e^{-3 i t k k1 k2}, damping e^{-t eps (k1^2+k2^2)}.
// ---------------------------------------------------------------------------
SpectralField a2_impl(const SpectralField& u, const SpectralField& v, const Ctx& c) {
    const int K = c.K;
    const auto du = dense_coeffs(u);
    const auto dv = dense_coeffs(v);
    std::vector<cplx> out(static_cast<size_t>(K), cplx{0.0, 0.0});
    for (int k = 1; k <= K; ++k) {
        const int lo = std::max(-K, k - K), hi = K;
        const bool direct = use_direct(hi - lo + 1);
        const double tk3 = -3.0 * c.t * static_cast<double>(k);
        // theta(k1) = -3 t k k1 (k - k1)
        PhaseIter ph(tk3 * lo * static_cast<double>(k - lo),
                     tk3 * static_cast<double>(k - 2 * lo - 1), 6.0 * c.t * k);
        cplx acc{0.0, 0.0};
        for (int k1 = lo; k1 <= hi; ++k1, ph.advance()) {
            const int k2 = k - k1;
            if (k1 == 0 || k2 == 0) continue;
            const long long re = 3ll * k * k1 * k2;
            const cplx q1v{static_cast<double>(re), c.eps * 2.0 * k1 * k2};
            const cplx osc = direct ? std::polar(1.0, -c.t * static_cast<double>(re)) : ph.z;
            const cplx amp = cmul(du[static_cast<size_t>(K + k1)], dv[static_cast<size_t>(K + k2)]);
            const double damp = c.D(k1) * c.D(k2);
            acc += cmul(cdiv(cplx{static_cast<double>(k), 0.0}, q1v), cmul(osc, amp)) * damp;
        }
        out[static_cast<size_t>(k - 1)] = acc;
    }
    return output_field(u.grid(), std::move(out));
}

// ---------------------------------------------------------------------------
// A3 over Gamma(k): kernel k (k1+k2) / (Q1(k,k1+k2,k3) Q2(k,k1,k2,k3)),
// oscillation e^{-i t phase_tilde}.
// ---------------------------------------------------------------------------
SpectralField a3_impl(const SpectralField& u, const SpectralField& v, const SpectralField& w,
                      const Ctx& c, ModeLimit limit) {
    const int K = c.K;
    const int L = limit.value_or(2 * K);
    const auto du = dense_coeffs(u);
    const auto dv = dense_coeffs(v);
    const auto dw = dense_coeffs(w);
    std::vector<cplx> out(static_cast<size_t>(K), cplx{0.0, 0.0});
    const cplx three_k_eps{0.0, 2.0 * c.eps};  // Q1(k,m,k3) = m k3 (3k + 2 i eps)
    for (int k = 1; k <= K; ++k) {
        const cplx q1base = cplx{3.0 * k, 0.0} + three_k_eps;
        cplx acc{0.0, 0.0};
        for (int k1 = -K; k1 <= K; ++k1) {
            if (k1 == 0) continue;
            const int a = k - k1;  // = k2 + k3
            if (a == 0) continue;
            const cplx u1 = du[static_cast<size_t>(K + k1)];
            if (u1.real() == 0.0 && u1.imag() == 0.0) continue;
            const int lo = std::max(-K, k - k1 - K), hi = std::min(K, k - k1 + K);
            const bool direct = use_direct(hi - lo + 1);
            // phase_tilde = 3 (k1+k2) a (k-k2); theta = -t * phase_tilde
            const double ta = -3.0 * c.t * static_cast<double>(a);
            auto f = [&](int k2) { return static_cast<double>(k1 + k2) * static_cast<double>(k - k2); };
            PhaseIter ph(ta * f(lo), ta * static_cast<double>(k - k1 - 2 * lo - 1), 6.0 * c.t * a);
            const double u1damp = c.D(k1);
            for (int k2 = lo; k2 <= hi; ++k2, ph.advance()) {
                const int k3 = k - k1 - k2;
                const int m = k1 + k2;
                if (k2 == 0 || k3 == 0 || m == 0 || k == k2) continue;  // k==k2 <=> k1+k3==0
                if (std::abs(m) > L) continue;
                const long long phi = 3ll * m * a * (k - k2);
                const long long dsum = static_cast<long long>(k) * k - static_cast<long long>(k1) * k1 -
                                       static_cast<long long>(k2) * k2 - static_cast<long long>(k3) * k3;
                const cplx q1v = cmul(cplx{static_cast<double>(m) * k3, 0.0}, q1base);
                const cplx q2v{static_cast<double>(phi), c.eps * static_cast<double>(dsum)};
                const cplx osc = direct ? std::polar(1.0, -c.t * static_cast<double>(phi)) : ph.z;
                const cplx amp = cmul(dv[static_cast<size_t>(K + k2)], dw[static_cast<size_t>(K + k3)]);
                const double damp = u1damp * c.D(k2) * c.D(k3);
                const cplx kern = cdiv(cplx{static_cast<double>(k) * m, 0.0}, cmul(q1v, q2v));
                acc += cmul(kern, cmul(osc, cmul(u1, amp))) * damp;
            }
        }
        out[static_cast<size_t>(k - 1)] = acc;
    }
    return output_field(u.grid(), std::move(out));
}

// ---------------------------------------------------------------------------
// R3_0 over Gamma0(k) with k1+k2 != 0: the two pairings k1+k3=0 / k2+k3=0,
// inclusion-exclusion on their common triple (k,k,-k).  No oscillation.
// ---------------------------------------------------------------------------
SpectralField r3_0_impl(const SpectralField& u, const SpectralField& v, const SpectralField& w,
                        const Ctx& c, ModeLimit limit) {
    const int K = c.K;
    const int L = limit.value_or(2 * K);
    const auto du = dense_coeffs(u);
    const auto dv = dense_coeffs(v);
    const auto dw = dense_coeffs(w);
    std::vector<cplx> out(static_cast<size_t>(K), cplx{0.0, 0.0});
    auto term = [&](int k, int k1, int k2, int k3) -> cplx {
        const int m = k1 + k2;
        const cplx q1v{3.0 * k * m * k3, c.eps * 2.0 * m * k3};
        const cplx kern = cdiv(cplx{0.0, static_cast<double>(k) * m}, q1v);
        const cplx amp = cmul(du[static_cast<size_t>(K + k1)],
                              cmul(dv[static_cast<size_t>(K + k2)], dw[static_cast<size_t>(K + k3)]));
        return cmul(kern, amp) * (c.D(k1) * c.D(k2) * c.D(k3));
    };
    for (int k = 1; k <= K; ++k) {
        cplx acc{0.0, 0.0};
        // pairing k1+k3 = 0: triples (a, k, -a)
        for (int a = -K; a <= K; ++a) {
            if (a == 0 || a + k == 0 || std::abs(a + k) > L) continue;
            acc += term(k, a, k, -a);
        }
        // pairing k2+k3 = 0: triples (k, b, -b)
        for (int b = -K; b <= K; ++b) {
            if (b == 0 || b + k == 0 || std::abs(b + k) > L) continue;
            acc += term(k, k, b, -b);
        }
        // both pairings meet at (k, k, -k)
        if (std::abs(2 * k) <= L) acc -= term(k, k, k, -k);
        out[static_cast<size_t>(k - 1)] = acc;
    }
    return output_field(u.grid(), std::move(out));
}

// Inner pair table P[m] = sum_{k1+k2=m} e^{-3 i t m k1 k2} (damp) x_{k1} y_{k2},
// shared by the quartic cascades.
std::vector<cplx> pair_table(const std::vector<cplx>& dx, const std::vector<cplx>& dy,
                             const Ctx& c, int mrange) {
    const int K = c.K;
    std::vector<cplx> P(static_cast<size_t>(2 * mrange + 1), cplx{0.0, 0.0});
    for (int m = -mrange; m <= mrange; ++m) {
        if (m == 0) continue;
        const int lo = std::max(-K, m - K), hi = std::min(K, m + K);
        const bool direct = use_direct(hi - lo + 1);
        const double tm3 = -3.0 * c.t * static_cast<double>(m);
        PhaseIter ph(tm3 * lo * static_cast<double>(m - lo),
                     tm3 * static_cast<double>(m - 2 * lo - 1), 6.0 * c.t * m);
        cplx acc{0.0, 0.0};
        for (int k1 = lo; k1 <= hi; ++k1, ph.advance()) {
            const int k2 = m - k1;
            if (k1 == 0 || k2 == 0) continue;
            const cplx osc = direct
                                 ? std::polar(1.0, -3.0 * c.t * static_cast<double>(m) *
                                                       static_cast<double>(k1) * static_cast<double>(k2))
                                 : ph.z;
            const cplx amp = cmul(dx[static_cast<size_t>(K + k1)], dy[static_cast<size_t>(K + k2)]);
            acc += cmul(osc, amp) * (c.D(k1) * c.D(k2));
        }
        P[static_cast<size_t>(mrange + m)] = acc;
    }
    return P;
}

// ---------------------------------------------------------------------------
// A4_1: sum over m = k1+k2 (inner pair) and k3, k4 = k - m - k3 with
//   kernel i k (m+k3) m / (Q1(k, m+k3, k4) Q2(k, m, k3, k4)),
//   outer oscillation e^{-3 i t (m+k3)(m+k4)(k3+k4)}.
// ---------------------------------------------------------------------------
SpectralField a4_1_impl(const SpectralField& u, const SpectralField& v, const SpectralField& w,
                        const SpectralField& z, const Ctx& c, ModeLimit limit) {
    const int K = c.K;
    const int mrange = std::min(2 * K, limit.value_or(2 * K));
    const int L = limit.value_or(3 * K);  // cap on |k1+k2+k3|
    const auto dw = dense_coeffs(w);
    const auto dz = dense_coeffs(z);
    const auto P = pair_table(dense_coeffs(u), dense_coeffs(v), c, mrange);
    std::vector<cplx> out(static_cast<size_t>(K), cplx{0.0, 0.0});
    const cplx q1base_im{0.0, 2.0 * c.eps};
    for (int k = 1; k <= K; ++k) {
        const cplx q1base = cplx{3.0 * k, 0.0} + q1base_im;
        cplx acc{0.0, 0.0};
        for (int m = -mrange; m <= mrange; ++m) {
            if (m == 0) continue;
            const cplx pm = P[static_cast<size_t>(mrange + m)];
            if (pm.real() == 0.0 && pm.imag() == 0.0) continue;
            const int b = k - m;  // = k3 + k4
            if (b == 0) continue;
            const int lo = std::max(-K, k - m - K), hi = std::min(K, k - m + K);
            const bool direct = use_direct(hi - lo + 1);
            const double tb = -3.0 * c.t * static_cast<double>(b);
            // theta(k3) = -3 t b (m+k3)(k-k3)
            PhaseIter ph(tb * static_cast<double>(m + lo) * static_cast<double>(k - lo),
                         tb * static_cast<double>(k - m - 2 * lo - 1), 6.0 * c.t * b);
            for (int k3 = lo; k3 <= hi; ++k3, ph.advance()) {
                const int k4 = k - m - k3;
                const int M = m + k3;               // k1+k2+k3
                const int mk4 = k - k3;             // m + k4 = k1+k2+k4
                if (k3 == 0 || k4 == 0 || M == 0 || mk4 == 0) continue;
                if (std::abs(M) > L) continue;
                const long long phi = 3ll * M * mk4 * b;
                const long long dsum = static_cast<long long>(k) * k - static_cast<long long>(m) * m -
                                       static_cast<long long>(k3) * k3 - static_cast<long long>(k4) * k4;
                const cplx q1v = cmul(cplx{static_cast<double>(M) * k4, 0.0}, q1base);
                const cplx q2v{static_cast<double>(phi), c.eps * static_cast<double>(dsum)};
                const cplx osc = direct ? std::polar(1.0, -c.t * static_cast<double>(phi)) : ph.z;
                const cplx kern =
                    cdiv(cplx{0.0, static_cast<double>(k) * M * static_cast<double>(m)}, cmul(q1v, q2v));
                const cplx amp = cmul(dw[static_cast<size_t>(K + k3)], dz[static_cast<size_t>(K + k4)]);
                acc += cmul(kern, cmul(osc, cmul(pm, amp))) * (c.D(k3) * c.D(k4));
            }
        }
        out[static_cast<size_t>(k - 1)] = acc;
    }
    return output_field(u.grid(), std::move(out));
}

// ---------------------------------------------------------------------------
// A4_2: sum over k1, k2 and the inner pair n = k3+k4 with
//   kernel i k (k1+k2) n / (Q1(k, k1+k2, n) Q2(k, k1, k2, n)),
//   outer oscillation e^{-3 i t (k1+k2)(k1+n)(k2+n)}.
// ---------------------------------------------------------------------------
SpectralField a4_2_impl(const SpectralField& u, const SpectralField& v, const SpectralField& w,
                        const SpectralField& z, const Ctx& c, ModeLimit limit) {
    const int K = c.K;
    const int nrange = std::min(2 * K, limit.value_or(2 * K));
    const int L = limit.value_or(2 * K);  // cap on |k1+k2|
    const auto du = dense_coeffs(u);
    const auto dv = dense_coeffs(v);
    const auto P = pair_table(dense_coeffs(w), dense_coeffs(z), c, nrange);
    std::vector<cplx> out(static_cast<size_t>(K), cplx{0.0, 0.0});
    const cplx q1base_im{0.0, 2.0 * c.eps};
    for (int k = 1; k <= K; ++k) {
        const cplx q1base = cplx{3.0 * k, 0.0} + q1base_im;
        cplx acc{0.0, 0.0};
        for (int k1 = -K; k1 <= K; ++k1) {
            if (k1 == 0) continue;
            const int a = k - k1;  // = k2 + n
            if (a == 0) continue;
            const cplx u1 = du[static_cast<size_t>(K + k1)];
            if (u1.real() == 0.0 && u1.imag() == 0.0) continue;
            const int lo = std::max(-K, k - k1 - nrange), hi = std::min(K, k - k1 + nrange);
            const bool direct = use_direct(hi - lo + 1);
            const double ta = -3.0 * c.t * static_cast<double>(a);
            PhaseIter ph(ta * static_cast<double>(k1 + lo) * static_cast<double>(k - lo),
                         ta * static_cast<double>(k - k1 - 2 * lo - 1), 6.0 * c.t * a);
            const double u1damp = c.D(k1);
            for (int k2 = lo; k2 <= hi; ++k2, ph.advance()) {
                const int n = k - k1 - k2;  // inner pair sum
                const int m = k1 + k2;
                if (k2 == 0 || n == 0 || m == 0 || k == k2) continue;  // k==k2 <=> k1+n==0
                if (std::abs(m) > L) continue;
                const cplx pn = P[static_cast<size_t>(nrange + n)];
                if (pn.real() == 0.0 && pn.imag() == 0.0) continue;
                const long long phi = 3ll * m * a * (k - k2);
                const long long dsum = static_cast<long long>(k) * k - static_cast<long long>(k1) * k1 -
                                       static_cast<long long>(k2) * k2 - static_cast<long long>(n) * n;
                const cplx q1v = cmul(cplx{static_cast<double>(m) * n, 0.0}, q1base);
                const cplx q2v{static_cast<double>(phi), c.eps * static_cast<double>(dsum)};
                const cplx osc = direct ? std::polar(1.0, -c.t * static_cast<double>(phi)) : ph.z;
                const cplx kern =
                    cdiv(cplx{0.0, static_cast<double>(k) * m * static_cast<double>(n)}, cmul(q1v, q2v));
                acc += cmul(kern, cmul(osc, cmul(u1, cmul(dv[static_cast<size_t>(K + k2)], pn)))) *
                       (u1damp * c.D(k2));
            }
        }
        out[static_cast<size_t>(k - 1)] = acc;
    }
    return output_field(u.grid(), std::move(out));
}

// Full cubic sum with kernel factor ik (Gamma and Gamma0 together).
SpectralField rhs_cubic_impl(const SpectralField& v, const Ctx& c) {
    const int K = c.K;
    const auto dv = dense_coeffs(v);
    std::vector<cplx> out(static_cast<size_t>(K), cplx{0.0, 0.0});
    for (int k = 1; k <= K; ++k) {
        cplx acc{0.0, 0.0};
        for (int k1 = -K; k1 <= K; ++k1) {
            if (k1 == 0) continue;
            const int a = k - k1;
            const cplx u1 = dv[static_cast<size_t>(K + k1)];
            if (u1.real() == 0.0 && u1.imag() == 0.0) continue;
            const int lo = std::max(-K, k - k1 - K), hi = std::min(K, k - k1 + K);
            const bool direct = use_direct(hi - lo + 1);
            const double ta = -3.0 * c.t * static_cast<double>(a);
            PhaseIter ph(ta * static_cast<double>(k1 + lo) * static_cast<double>(k - lo),
                         ta * static_cast<double>(k - k1 - 2 * lo - 1), 6.0 * c.t * a);
            const double u1damp = c.D(k1);
            for (int k2 = lo; k2 <= hi; ++k2, ph.advance()) {
                const int k3 = k - k1 - k2;
                if (k2 == 0 || k3 == 0) continue;
                const long long phi = 3ll * (k1 + k2) * a * (k - k2);
                const cplx osc = direct ? std::polar(1.0, -c.t * static_cast<double>(phi)) : ph.z;
                const cplx amp = cmul(dv[static_cast<size_t>(K + k2)], dv[static_cast<size_t>(K + k3)]);
                acc += cmul(osc, cmul(u1, amp)) * (u1damp * c.D(k2) * c.D(k3));
            }
        }
        out[static_cast<size_t>(k - 1)] = cmul(cplx{0.0, static_cast<double>(k)}, acc);
    }
    return output_field(v.grid(), std::move(out));
}

// Cubic over Gamma(k) with kernel k / Q2.
SpectralField mkdv_n1_impl(const SpectralField& v, const Ctx& c) {
    const int K = c.K;
    const auto dv = dense_coeffs(v);
    std::vector<cplx> out(static_cast<size_t>(K), cplx{0.0, 0.0});
    for (int k = 1; k <= K; ++k) {
        cplx acc{0.0, 0.0};
        for (int k1 = -K; k1 <= K; ++k1) {
            if (k1 == 0 || k == k1) continue;  // k==k1 <=> k2+k3==0
            const int a = k - k1;
            const cplx u1 = dv[static_cast<size_t>(K + k1)];
            if (u1.real() == 0.0 && u1.imag() == 0.0) continue;
            const int lo = std::max(-K, k - k1 - K), hi = std::min(K, k - k1 + K);
            const bool direct = use_direct(hi - lo + 1);
            const double ta = -3.0 * c.t * static_cast<double>(a);
            PhaseIter ph(ta * static_cast<double>(k1 + lo) * static_cast<double>(k - lo),
                         ta * static_cast<double>(k - k1 - 2 * lo - 1), 6.0 * c.t * a);
            const double u1damp = c.D(k1);
            for (int k2 = lo; k2 <= hi; ++k2, ph.advance()) {
                const int k3 = k - k1 - k2;
                if (k2 == 0 || k3 == 0 || k1 + k2 == 0 || k == k2) continue;
                const long long phi = 3ll * (k1 + k2) * a * (k - k2);
                const long long dsum = static_cast<long long>(k) * k - static_cast<long long>(k1) * k1 -
                                       static_cast<long long>(k2) * k2 - static_cast<long long>(k3) * k3;
                const cplx q2v{static_cast<double>(phi), c.eps * static_cast<double>(dsum)};
                const cplx osc = direct ? std::polar(1.0, -c.t * static_cast<double>(phi)) : ph.z;
                const cplx amp = cmul(dv[static_cast<size_t>(K + k2)], dv[static_cast<size_t>(K + k3)]);
                acc += cmul(cdiv(cplx{static_cast<double>(k), 0.0}, q2v), cmul(osc, cmul(u1, amp))) *
                       (u1damp * c.D(k2) * c.D(k3));
            }
        }
        out[static_cast<size_t>(k - 1)] = acc;
    }
    return output_field(v.grid(), std::move(out));
}

// Inner cubic table C[m] = sum_{j1+j2+j3=m} e^{-i t phase_tilde(m;j)} (damp) v v v.
std::vector<cplx> cubic_table(const std::vector<cplx>& dv, const Ctx& c, int mrange) {
    const int K = c.K;
    std::vector<cplx> C(static_cast<size_t>(2 * mrange + 1), cplx{0.0, 0.0});
    for (int m = -mrange; m <= mrange; ++m) {
        if (m == 0) continue;
        cplx acc{0.0, 0.0};
        for (int j1 = std::max(-K, m - 2 * K); j1 <= std::min(K, m + 2 * K); ++j1) {
            if (j1 == 0) continue;
            const int a = m - j1;
            const cplx u1 = dv[static_cast<size_t>(K + j1)];
            if (u1.real() == 0.0 && u1.imag() == 0.0) continue;
            const int lo = std::max(-K, m - j1 - K), hi = std::min(K, m - j1 + K);
            if (lo > hi) continue;
            const bool direct = use_direct(hi - lo + 1);
            const double ta = -3.0 * c.t * static_cast<double>(a);
            PhaseIter ph(ta * static_cast<double>(j1 + lo) * static_cast<double>(m - lo),
                         ta * static_cast<double>(m - j1 - 2 * lo - 1), 6.0 * c.t * a);
            const double u1damp = c.D(j1);
            for (int j2 = lo; j2 <= hi; ++j2, ph.advance()) {
                const int j3 = m - j1 - j2;
                if (j2 == 0 || j3 == 0) continue;
                const long long phi = 3ll * (j1 + j2) * a * (m - j2);
                const cplx osc = direct ? std::polar(1.0, -c.t * static_cast<double>(phi)) : ph.z;
                const cplx amp = cmul(dv[static_cast<size_t>(K + j2)], dv[static_cast<size_t>(K + j3)]);
                acc += cmul(osc, cmul(u1, amp)) * (u1damp * c.D(j2) * c.D(j3));
            }
        }
        C[static_cast<size_t>(mrange + m)] = acc;
    }
    return C;
}

// Quintic cascade: outer Gamma(k) sum with kernel i k k1 / Q2(k,k1,k2,k3).
SpectralField mkdv_n2_impl(const SpectralField& v, const Ctx& c, ModeLimit limit) {
    const int K = c.K;
    const int mrange = std::min(3 * K, limit.value_or(3 * K));
    const auto dv = dense_coeffs(v);
    const auto C = cubic_table(dv, c, mrange);
    std::vector<cplx> out(static_cast<size_t>(K), cplx{0.0, 0.0});
    for (int k = 1; k <= K; ++k) {
        cplx acc{0.0, 0.0};
        for (int k1 = -mrange; k1 <= mrange; ++k1) {
            if (k1 == 0 || k == k1) continue;
            const cplx c1 = C[static_cast<size_t>(mrange + k1)];
            if (c1.real() == 0.0 && c1.imag() == 0.0) continue;
            const int a = k - k1;
            const int lo = std::max(-K, k - k1 - K), hi = std::min(K, k - k1 + K);
            if (lo > hi) continue;
            const bool direct = use_direct(hi - lo + 1);
            const double ta = -3.0 * c.t * static_cast<double>(a);
            PhaseIter ph(ta * static_cast<double>(k1 + lo) * static_cast<double>(k - lo),
                         ta * static_cast<double>(k - k1 - 2 * lo - 1), 6.0 * c.t * a);
            for (int k2 = lo; k2 <= hi; ++k2, ph.advance()) {
                const int k3 = k - k1 - k2;
                if (k2 == 0 || k3 == 0 || k1 + k2 == 0 || k == k2) continue;
                const long long phi = 3ll * (k1 + k2) * static_cast<long long>(a) * (k - k2);
                const long long dsum = static_cast<long long>(k) * k - static_cast<long long>(k1) * k1 -
                                       static_cast<long long>(k2) * k2 - static_cast<long long>(k3) * k3;
                const cplx q2v{static_cast<double>(phi), c.eps * static_cast<double>(dsum)};
                const cplx osc = direct ? std::polar(1.0, -c.t * static_cast<double>(phi)) : ph.z;
                const cplx kern = cdiv(cplx{0.0, static_cast<double>(k) * static_cast<double>(k1)}, q2v);
                const cplx amp = cmul(dv[static_cast<size_t>(K + k2)], dv[static_cast<size_t>(K + k3)]);
                acc += cmul(kern, cmul(osc, cmul(c1, amp))) * (c.D(k2) * c.D(k3));
            }
        }
        out[static_cast<size_t>(k - 1)] = acc;
    }
    return output_field(v.grid(), std::move(out));
}

}  // namespace

SpectralField a2(const SpectralField& u, const SpectralField& v, double t, double epsilon,
                 InputGauge gauge) {
    require_same_grid(u, v);
    return a2_impl(u, v, make_ctx(u.grid(), t, epsilon, gauge));
}

SpectralField a3(const SpectralField& u, const SpectralField& v, const SpectralField& w, double t,
                 double epsilon, InputGauge gauge, ModeLimit limit) {
    require_same_grid(u, v);
    require_same_grid(u, w);
    return a3_impl(u, v, w, make_ctx(u.grid(), t, epsilon, gauge), limit);
}

SpectralField r3_0(const SpectralField& u, const SpectralField& v, const SpectralField& w, double t,
                   double epsilon, InputGauge gauge, ModeLimit limit) {
    require_same_grid(u, v);
    require_same_grid(u, w);
    return r3_0_impl(u, v, w, make_ctx(u.grid(), t, epsilon, gauge), limit);
}

SpectralField a4_1(const SpectralField& u, const SpectralField& v, const SpectralField& w,
                   const SpectralField& z, double t, double epsilon, InputGauge gauge,
                   ModeLimit limit) {
    require_same_grid(u, v);
    require_same_grid(u, w);
    require_same_grid(u, z);
    return a4_1_impl(u, v, w, z, make_ctx(u.grid(), t, epsilon, gauge), limit);
}

SpectralField a4_2(const SpectralField& u, const SpectralField& v, const SpectralField& w,
                   const SpectralField& z, double t, double epsilon, InputGauge gauge,
                   ModeLimit limit) {
    require_same_grid(u, v);
    require_same_grid(u, w);
    require_same_grid(u, z);
    return a4_2_impl(u, v, w, z, make_ctx(u.grid(), t, epsilon, gauge), limit);
}

SpectralField b_total(const SpectralField& v, double t, double epsilon, InputGauge gauge,
                      ModeLimit limit) {
    const SpectralField r = r3_0(v, v, v, t, epsilon, gauge, limit);
    const SpectralField a1 = a4_1(v, v, v, v, t, epsilon, gauge, limit);
    const SpectralField a2q = a4_2(v, v, v, v, t, epsilon, gauge, limit);
    std::vector<cplx> pos(static_cast<size_t>(v.grid().band_limit));
    for (int k = 1; k <= v.grid().band_limit; ++k)
        pos[static_cast<size_t>(k - 1)] = r.coeff(k) + 2.0 * a1.coeff(k) + a2q.coeff(k);
    return SpectralField(v.grid(), std::move(pos), Gauge::twisted);
}

SpectralField mkdv_resonant(const SpectralField& v, double t, double epsilon, InputGauge gauge) {
    const Ctx c = make_ctx(v.grid(), t, epsilon, gauge);
    const int K = c.K;
    std::vector<cplx> pos(static_cast<size_t>(K));
    for (int k = 1; k <= K; ++k) {
        const cplx vk = v.coeff(k);
        const double damp = c.D(k) * c.D(k) * c.D(k);
        pos[static_cast<size_t>(k - 1)] =
            cmul(cplx{0.0, -static_cast<double>(k)}, vk) * (std::norm(vk) * damp);
    }
    return SpectralField(v.grid(), std::move(pos), Gauge::twisted);
}

SpectralField mkdv_resonant_total(const SpectralField& v, double t, double epsilon,
                                  InputGauge gauge) {
    const Ctx c = make_ctx(v.grid(), t, epsilon, gauge);
    const int K = c.K;
    double sigma = 0.0;  // sum_{j != 0} damp(j)^2 |v_j|^2
    for (int j = 1; j <= K; ++j) sigma += 2.0 * c.D(j) * c.D(j) * std::norm(v.coeff(j));
    std::vector<cplx> pos(static_cast<size_t>(K));
    for (int k = 1; k <= K; ++k) {
        const cplx vk = v.coeff(k);
        const double dk = c.D(k);
        const double diag = dk * dk * std::norm(vk);
        pos[static_cast<size_t>(k - 1)] =
            cmul(cplx{0.0, 3.0 * static_cast<double>(k)}, vk) * (dk * (sigma - diag));
    }
    return SpectralField(v.grid(), std::move(pos), Gauge::twisted);
}

SpectralField mkdv_n1(const SpectralField& v, double t, double epsilon, InputGauge gauge) {
    return mkdv_n1_impl(v, make_ctx(v.grid(), t, epsilon, gauge));
}

SpectralField mkdv_n2(const SpectralField& v, double t, double epsilon, InputGauge gauge,
                      ModeLimit limit) {
    return mkdv_n2_impl(v, make_ctx(v.grid(), t, epsilon, gauge), limit);
}

SpectralField twisted_rhs_quadratic(const SpectralField& v, double t, double epsilon,
                                    InputGauge gauge) {
    const Ctx c = make_ctx(v.grid(), t, epsilon, gauge);
    const int K = c.K;
    const auto dv = dense_coeffs(v);
    std::vector<cplx> out(static_cast<size_t>(K), cplx{0.0, 0.0});
    for (int k = 1; k <= K; ++k) {
        const int lo = std::max(-K, k - K), hi = K;
        const bool direct = use_direct(hi - lo + 1);
        const double tk3 = -3.0 * c.t * static_cast<double>(k);
        PhaseIter ph(tk3 * lo * static_cast<double>(k - lo),
                     tk3 * static_cast<double>(k - 2 * lo - 1), 6.0 * c.t * k);
        cplx acc{0.0, 0.0};
        for (int k1 = lo; k1 <= hi; ++k1, ph.advance()) {
            const int k2 = k - k1;
            if (k1 == 0 || k2 == 0) continue;
            const cplx osc = direct ? std::polar(1.0, -3.0 * c.t * static_cast<double>(k) *
                                                          static_cast<double>(k1) * static_cast<double>(k2))
                                    : ph.z;
            const cplx amp = cmul(dv[static_cast<size_t>(K + k1)], dv[static_cast<size_t>(K + k2)]);
            acc += cmul(osc, amp) * (c.D(k1) * c.D(k2));
        }
        out[static_cast<size_t>(k - 1)] = cmul(cplx{0.0, static_cast<double>(k)}, acc);
    }
    return output_field(v.grid(), std::move(out));
}

SpectralField twisted_rhs_cubic(const SpectralField& v, double t, double epsilon,
                                InputGauge gauge) {
    return rhs_cubic_impl(v, make_ctx(v.grid(), t, epsilon, gauge));
}

}  // namespace kdvb
