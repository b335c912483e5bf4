#include "kdvb/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kdvb/operators.hpp"

namespace kdvb {

namespace {

using std::size_t;

inline cplx cmul(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(),
            a.real() * b.imag() + a.imag() * b.real()};
}

std::vector<cplx> positive_copy(const SpectralField& f) {
    return {f.positive_modes().begin(), f.positive_modes().end()};
}

// d_x(u^alpha) on the band, exploiting conjugate symmetry (k >= 1 only).
class NonlinearRhs {
public:
    NonlinearRhs(int K, int dealias, int alpha, bool disabled)
        : K_(K), D_(std::min(dealias, K)), alpha_(alpha), disabled_(disabled),
          dense_(static_cast<size_t>(2 * K + 1)), dense2_(static_cast<size_t>(2 * K + 1)) {}

    void operator()(const std::vector<cplx>& pos, std::vector<cplx>& out) {
        out.assign(static_cast<size_t>(K_), cplx{0.0, 0.0});
        if (disabled_) return;
        const int K = K_;
        for (int k = 1; k <= K; ++k) {
            dense_[static_cast<size_t>(K + k)] = pos[static_cast<size_t>(k - 1)];
            dense_[static_cast<size_t>(K - k)] = std::conj(pos[static_cast<size_t>(k - 1)]);
        }
        dense_[static_cast<size_t>(K)] = {0.0, 0.0};
        if (alpha_ == 2) {
            for (int k = 1; k <= D_; ++k) {
                cplx acc{0.0, 0.0};
                for (int k1 = std::max(-K, k - K); k1 <= K; ++k1)
                    acc += cmul(dense_[static_cast<size_t>(K + k1)],
                                dense_[static_cast<size_t>(K + k - k1)]);
                out[static_cast<size_t>(k - 1)] = cmul(cplx{0.0, static_cast<double>(k)}, acc);
            }
            return;
        }
        // alpha == 3: square on the doubled band (m >= 0, conjugates implicit),
        // then one more pass against u.
        const int K2 = 2 * K;
        if (dense2_.size() != static_cast<size_t>(2 * K2 + 1))
            dense2_.assign(static_cast<size_t>(2 * K2 + 1), cplx{0.0, 0.0});
        for (int m = 0; m <= K2; ++m) {
            cplx acc{0.0, 0.0};
            for (int k1 = std::max(-K, m - K); k1 <= std::min(K, m + K); ++k1)
                acc += cmul(dense_[static_cast<size_t>(K + k1)],
                            dense_[static_cast<size_t>(K + m - k1)]);
            dense2_[static_cast<size_t>(K2 + m)] = acc;
            dense2_[static_cast<size_t>(K2 - m)] = std::conj(acc);
        }
        for (int k = 1; k <= D_; ++k) {
            cplx acc{0.0, 0.0};
            for (int m = std::max(-K2, k - K); m <= std::min(K2, k + K); ++m)
                acc += cmul(dense2_[static_cast<size_t>(K2 + m)],
                            dense_[static_cast<size_t>(K + k - m)]);
            out[static_cast<size_t>(k - 1)] = cmul(cplx{0.0, static_cast<double>(k)}, acc);
        }
    }

private:
    int K_, D_, alpha_;
    bool disabled_;
    std::vector<cplx> dense_, dense2_;
};

double l2_of_positive(const std::vector<cplx>& pos) {
    double s = 0.0;
    for (const cplx& c : pos) s += std::norm(c);
    return std::sqrt(4.0 * std::numbers::pi * s);
}

int auto_save_nodes(int steps, int requested) {
    if (requested > 0) return requested;
    int save = std::min(steps, 1024);
    while (steps % save != 0) --save;
    return save;
}

// --- Picard fixed-point machinery -----------------------------------------

struct FixedPointParts {
    // Bounded-gauge evaluations per node of the current iterate.
    std::vector<std::vector<cplx>> integrand;  // high-band time integrand
    std::vector<std::vector<cplx>> low;        // plain Duhamel integrand, modes <= N
    std::vector<std::vector<cplx>> boundary;   // boundary operator A (or N1)
};

std::vector<cplx> combine_boundary_kdv(const SpectralField& b, double t, double eps, int K) {
    const SpectralField p2 = a2(b, b, t, eps, InputGauge::bounded);
    const SpectralField p3 = a3(b, b, b, t, eps, InputGauge::bounded, K);
    std::vector<cplx> out(static_cast<size_t>(K));
    for (int k = 1; k <= K; ++k)
        out[static_cast<size_t>(k - 1)] = p2.coeff(k) + 2.0 * p3.coeff(k);
    return out;
}

std::vector<cplx> combine_integrand_kdv(const SpectralField& b, double t, double eps, int K) {
    return positive_copy(b_total(b, t, eps, InputGauge::bounded, K));
}

std::vector<cplx> combine_boundary_mkdv(const SpectralField& b, double t, double eps, int K) {
    (void)K;
    return positive_copy(mkdv_n1(b, t, eps, InputGauge::bounded));
}

std::vector<cplx> combine_integrand_mkdv(const SpectralField& b, double t, double eps, int K) {
    const SpectralField r = mkdv_resonant_total(b, t, eps, InputGauge::bounded);
    const SpectralField n2 = mkdv_n2(b, t, eps, InputGauge::bounded, K);
    std::vector<cplx> out(static_cast<size_t>(K));
    for (int k = 1; k <= K; ++k)
        out[static_cast<size_t>(k - 1)] = r.coeff(k) + 3.0 * n2.coeff(k);
    return out;
}

// Low-band Duhamel integrand i k sum e^{-i t ...} b b (b b b for the cubic),
// evaluated for 1 <= k <= N only.
std::vector<cplx> low_band_integrand(const SpectralField& b, double t, int N, int alpha) {
    const int K = b.grid().band_limit;
    const auto d = dense_coeffs(b);
    std::vector<cplx> out(static_cast<size_t>(std::min(N, K)), cplx{0.0, 0.0});
    for (int k = 1; k <= std::min(N, K); ++k) {
        cplx acc{0.0, 0.0};
        if (alpha == 2) {
            for (int k1 = std::max(-K, k - K); k1 <= K; ++k1) {
                const int k2 = k - k1;
                if (k1 == 0 || k2 == 0) continue;
                const double theta =
                    -3.0 * t * static_cast<double>(k) * static_cast<double>(k1) * static_cast<double>(k2);
                acc += cmul(std::polar(1.0, theta), cmul(d[static_cast<size_t>(K + k1)],
                                                         d[static_cast<size_t>(K + k2)]));
            }
        } else {
            for (int k1 = -K; k1 <= K; ++k1) {
                if (k1 == 0) continue;
                const cplx u1 = d[static_cast<size_t>(K + k1)];
                if (u1.real() == 0.0 && u1.imag() == 0.0) continue;
                const double a = static_cast<double>(k - k1);
                for (int k2 = std::max(-K, k - k1 - K); k2 <= std::min(K, k - k1 + K); ++k2) {
                    const int k3 = k - k1 - k2;
                    if (k2 == 0 || k3 == 0) continue;
                    const double phi = 3.0 * static_cast<double>(k1 + k2) * a * static_cast<double>(k - k2);
                    acc += cmul(std::polar(1.0, -t * phi),
                                cmul(u1, cmul(d[static_cast<size_t>(K + k2)],
                                              d[static_cast<size_t>(K + k3)])));
                }
            }
        }
        out[static_cast<size_t>(k - 1)] = cmul(cplx{0.0, static_cast<double>(k)}, acc);
    }
    return out;
}

struct MapSetup {
    int K = 0;
    int N = 0;
    int M = 0;  // quadrature intervals
    double h = 0.0;
    double eps = 0.0;
    int alpha = 2;
    double integral_scale = 2.0;  // 2 for the quadratic equation, 1 for the cubic
    CumulativeWeights weights{2, 1.0, Quadrature::simpson};
    std::vector<std::vector<double>> rho_pow;  // rho_pow[d][k] = e^{-d h eps k^2}
};

MapSetup make_setup(const SolverConfig& cfg, int alpha) {
    MapSetup s;
    s.K = cfg.grid.band_limit;
    s.N = cfg.effective_split_N();
    s.M = cfg.time_steps;
    s.h = cfg.T / cfg.time_steps;
    s.eps = cfg.epsilon;
    s.alpha = alpha;
    s.integral_scale = alpha == 2 ? 2.0 : 1.0;
    s.weights = CumulativeWeights(s.M, s.h, cfg.quadrature);
    s.rho_pow.assign(static_cast<size_t>(s.M) + 1, std::vector<double>(static_cast<size_t>(s.K) + 1, 1.0));
    for (int k = 0; k <= s.K; ++k) {
        const double rho = std::exp(-s.h * s.eps * static_cast<double>(k) * static_cast<double>(k));
        for (int d = 1; d <= s.M; ++d)
            s.rho_pow[static_cast<size_t>(d)][static_cast<size_t>(k)] =
                s.rho_pow[static_cast<size_t>(d - 1)][static_cast<size_t>(k)] * rho;
    }
    return s;
}

FixedPointParts evaluate_parts(const std::vector<SpectralField>& states,
                               const std::vector<double>& times, const MapSetup& s,
                               int max_node, const std::vector<int>& boundary_nodes) {
    FixedPointParts parts;
    parts.integrand.resize(static_cast<size_t>(max_node) + 1);
    parts.low.resize(static_cast<size_t>(max_node) + 1);
    parts.boundary.assign(states.size(), {});
    for (int i = 0; i <= max_node; ++i) {
        const double t = times[static_cast<size_t>(i)];
        parts.integrand[static_cast<size_t>(i)] =
            s.alpha == 2 ? combine_integrand_kdv(states[static_cast<size_t>(i)], t, s.eps, s.K)
                         : combine_integrand_mkdv(states[static_cast<size_t>(i)], t, s.eps, s.K);
        parts.low[static_cast<size_t>(i)] =
            low_band_integrand(states[static_cast<size_t>(i)], t, s.N, s.alpha);
    }
    for (int j : boundary_nodes) {
        const double t = times[static_cast<size_t>(j)];
        parts.boundary[static_cast<size_t>(j)] =
            s.alpha == 2 ? combine_boundary_kdv(states[static_cast<size_t>(j)], t, s.eps, s.K)
                         : combine_boundary_mkdv(states[static_cast<size_t>(j)], t, s.eps, s.K);
    }
    if (parts.boundary[0].empty()) {
        parts.boundary[0] = s.alpha == 2 ? combine_boundary_kdv(states[0], 0.0, s.eps, s.K)
                                         : combine_boundary_mkdv(states[0], 0.0, s.eps, s.K);
    }
    return parts;
}

// Heat-propagated cumulative quadrature sum_i w[i] e^{-(t_j - t_i) eps k^2} g_i(k).
cplx heat_quadrature(const FixedPointParts& parts, const MapSetup& s, int j, int k, bool low) {
    auto value = [&](int i) -> cplx {
        const auto& v = low ? parts.low[static_cast<size_t>(i)] : parts.integrand[static_cast<size_t>(i)];
        return v[static_cast<size_t>(k - 1)];
    };
    if (j == 0) return {0.0, 0.0};
    const auto& w = s.weights.row(j);
    const auto pw = [&](int d) { return s.rho_pow[static_cast<size_t>(d)][static_cast<size_t>(k)]; };
    if (s.weights.rule() == Quadrature::simpson && j == 1) {
        // The j==1 row borrows node 2; its heat factor grows, so fall back to
        // the trapezoid panel for stiff modes.
        const double grow = s.h * s.eps * static_cast<double>(k) * static_cast<double>(k);
        if (grow <= 1.0) {
            return w[0] * pw(1) * value(0) + w[1] * value(1) +
                   w[2] * (1.0 / pw(1)) * value(2);
        }
        return 0.5 * s.h * (pw(1) * value(0) + value(1));
    }
    cplx acc{0.0, 0.0};
    for (int i = 0; i <= j; ++i) acc += w[static_cast<size_t>(i)] * pw(j - i) * value(i);
    return acc;
}

std::vector<SpectralField> apply_fixed_point(const std::vector<SpectralField>& states,
                                             const std::vector<double>& times,
                                             const SpectralField& phi, const MapSetup& s,
                                             const std::vector<int>& targets) {
    const int max_target = *std::max_element(targets.begin(), targets.end());
    FixedPointParts parts = evaluate_parts(states, times, s, max_target, targets);
    const auto& a0 = parts.boundary[0];
    std::vector<SpectralField> out;
    out.reserve(targets.size());
    for (int j : targets) {
        std::vector<cplx> pos(static_cast<size_t>(s.K));
        const auto& aj = parts.boundary[static_cast<size_t>(j)];
        for (int k = 1; k <= s.K; ++k) {
            const double decay = s.rho_pow[static_cast<size_t>(j)][static_cast<size_t>(k)];
            cplx val;
            if (k > s.N) {
                val = decay * (phi.coeff(k) + a0[static_cast<size_t>(k - 1)]) -
                      aj[static_cast<size_t>(k - 1)] +
                      s.integral_scale * heat_quadrature(parts, s, j, k, false);
            } else {
                val = decay * phi.coeff(k) + heat_quadrature(parts, s, j, k, true);
            }
            pos[static_cast<size_t>(k - 1)] = val;
        }
        out.emplace_back(phi.grid(), std::move(pos), Gauge::twisted);
    }
    return out;
}

std::vector<int> all_nodes(int M) {
    std::vector<int> v(static_cast<size_t>(M) + 1);
    for (int i = 0; i <= M; ++i) v[static_cast<size_t>(i)] = i;
    return v;
}

PicardResult picard_core(const SpectralField& phi, const SolverConfig& cfg, int alpha) {
    cfg.validate();
    if (cfg.alpha != alpha)
        throw std::invalid_argument("picard: config alpha does not match the requested equation");
    if (phi.grid().band_limit != cfg.grid.band_limit)
        throw std::invalid_argument("picard: datum band does not match the config grid");
    const SobolevIndex idx(cfg.s);
    const double r = sobolev_norm(phi, idx);
    if (std::pow(cfg.T, 0.4) * r * r > cfg.gate_c * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "picard: data outside the smallness gate: T^(2/5) ||phi||_{H^s}^2 = "
           << std::pow(cfg.T, 0.4) * r * r << " > gate_c = " << cfg.gate_c
           << " (use solve(), which re-steps the horizon)";
        throw SolverError(os.str());
    }
    const MapSetup setup = make_setup(cfg, alpha);
    const int M = setup.M;
    std::vector<double> times(static_cast<size_t>(M) + 1);
    for (int j = 0; j <= M; ++j) times[static_cast<size_t>(j)] = setup.h * j;

    // Constant-in-time seed for the twisted variable; in the bounded gauge the
    // nodes carry the free heat decay of the datum.
    std::vector<SpectralField> states;
    states.reserve(static_cast<size_t>(M) + 1);
    for (int j = 0; j <= M; ++j) {
        SpectralField b = semigroup(phi, times[static_cast<size_t>(j)], cfg.epsilon,
                                    Direction::forward, SemigroupParts::dissipative_only);
        b.set_gauge(Gauge::twisted);
        states.push_back(std::move(b));
    }

    ContractionDiagnostics diag;
    diag.data_norm = r;
    double sup_iterate = 0.0;
    const auto targets = all_nodes(M);
    for (int m = 1; m <= cfg.picard_max_iters; ++m) {
        std::vector<SpectralField> next = apply_fixed_point(states, times, phi, setup, targets);
        double dist = 0.0, sup_norm = 0.0;
        for (int j = 0; j <= M; ++j) {
            dist = std::max(dist, sobolev_distance(next[static_cast<size_t>(j)],
                                                   states[static_cast<size_t>(j)], idx));
            sup_norm = std::max(sup_norm, sobolev_norm(next[static_cast<size_t>(j)], idx));
        }
        sup_iterate = std::max(sup_iterate, sup_norm);
        if (!diag.iterate_distances.empty() && diag.iterate_distances.back() > 0.0)
            diag.contraction_ratios.push_back(dist / diag.iterate_distances.back());
        diag.iterate_distances.push_back(dist);
        diag.iterations = m;
        states = std::move(next);
        if (dist < cfg.picard_tol) {
            diag.converged = true;
            break;
        }
        const auto& ratios = diag.contraction_ratios;
        if (ratios.size() >= 3 && ratios[ratios.size() - 1] >= 1.0 &&
            ratios[ratios.size() - 2] >= 1.0 && ratios[ratios.size() - 3] >= 1.0) {
            std::ostringstream os;
            os << "picard: no contraction (three consecutive iterate ratios >= 1); distances:";
            for (double d : diag.iterate_distances) os << ' ' << d;
            throw SolverError(os.str());
        }
    }
    diag.empirical_C = r > 0.0 ? sup_iterate / (2.0 * r) : 0.0;
    const double t25 = std::pow(cfg.T, 0.4);
    const double twoC = 2.0 * diag.empirical_C;
    diag.smallness_quadratic = t25 * twoC * twoC * r <= 0.25;
    diag.smallness_quartic = t25 * twoC * twoC * twoC * twoC * r * r * r <= 0.25;

    PicardResult result;
    result.diagnostics = diag;
    result.trajectory.config = cfg;
    result.trajectory.gauge = Gauge::physical;
    result.trajectory.times = times;
    result.trajectory.states.reserve(states.size());
    for (int j = 0; j <= M; ++j) {
        SpectralField u = semigroup(states[static_cast<size_t>(j)], times[static_cast<size_t>(j)],
                                    0.0, Direction::inverse, SemigroupParts::dispersive_only);
        u.set_gauge(Gauge::physical);
        result.trajectory.states.push_back(std::move(u));
    }
    return result;
}

SpectralField phi_map_core(const Trajectory& history, const SpectralField& phi, double t,
                           const SolverConfig& cfg, int alpha) {
    cfg.validate();
    if (history.gauge != Gauge::twisted)
        throw std::invalid_argument("phi_map: history must be in the twisted gauge");
    if (history.states.empty() || history.times.size() != history.states.size())
        throw std::invalid_argument("phi_map: malformed history");
    const MapSetup setup = make_setup(cfg, alpha);
    const double tol = 1e-9 * std::max(1.0, cfg.T);
    int j = -1;
    for (size_t i = 0; i < history.times.size(); ++i) {
        if (std::abs(history.times[i] - setup.h * static_cast<double>(i)) > tol)
            throw std::invalid_argument("phi_map: history nodes must be the uniform quadrature nodes");
        if (std::abs(history.times[i] - t) <= tol) j = static_cast<int>(i);
    }
    if (j < 0)
        throw std::invalid_argument("phi_map: requested time is not a quadrature node of the history");
    auto out = apply_fixed_point(history.states, history.times, phi, setup, {j});
    return out.front();
}

}  // namespace

void SolverConfig::validate() const {
    if (alpha != 2 && alpha != 3) throw std::invalid_argument("SolverConfig: alpha must be 2 or 3");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("SolverConfig: epsilon must lie in [0, 1]");
    if (!(s >= 0.0)) throw std::invalid_argument("SolverConfig: s must be >= 0");
    if (alpha == 3 && s < 0.5)
        throw std::invalid_argument("SolverConfig: the cubic equation requires s >= 1/2");
    if (!(T > 0.0)) throw std::invalid_argument("SolverConfig: T must be positive");
    if (time_steps < 2) throw std::invalid_argument("SolverConfig: need at least 2 time steps");
    if (save_nodes < 0 || save_nodes > time_steps || (save_nodes > 0 && time_steps % save_nodes != 0))
        throw std::invalid_argument("SolverConfig: save_nodes must divide time_steps");
    if (split_N < 0 || split_N > grid.band_limit)
        throw std::invalid_argument("SolverConfig: split_N must lie in [0, band_limit]");
    if (picard_max_iters < 1) throw std::invalid_argument("SolverConfig: picard_max_iters >= 1");
    if (!(picard_tol > 0.0)) throw std::invalid_argument("SolverConfig: picard_tol must be positive");
    if (!(gate_c > 0.0)) throw std::invalid_argument("SolverConfig: gate_c must be positive");
    if (!(blowup_guard > 0.0)) throw std::invalid_argument("SolverConfig: blowup_guard must be positive");
    GridSpec check = grid;  // re-validates the invariants
    (void)check;
}

int SolverConfig::effective_split_N() const {
    if (split_N > 0) return std::min(split_N, grid.band_limit);
    const int n = static_cast<int>(std::ceil(std::pow(T, -0.4) - 1e-12));
    return std::clamp(n, 1, grid.band_limit);
}

Trajectory reference_solve(const SpectralField& phi, const SolverConfig& config) {
    config.validate();
    if (phi.grid().band_limit != config.grid.band_limit)
        throw std::invalid_argument("reference_solve: datum band does not match the config grid");
    const int K = config.grid.band_limit;
    const int steps = config.time_steps;
    const double h = config.T / steps;
    const int save = auto_save_nodes(steps, config.save_nodes);
    const int stride = steps / save;

    // Half-step propagator e^{(h/2)(i k^3 - eps k^2)}; decaying for eps >= 0.
    std::vector<cplx> E(static_cast<size_t>(K) + 1), E2(static_cast<size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) {
        const double kd = static_cast<double>(k);
        E[static_cast<size_t>(k)] =
            std::exp(cplx{-0.5 * h * config.epsilon * kd * kd, 0.5 * h * kd * kd * kd});
        E2[static_cast<size_t>(k)] = cmul(E[static_cast<size_t>(k)], E[static_cast<size_t>(k)]);
    }

    NonlinearRhs rhs(K, config.grid.dealias_limit, config.alpha, config.disable_nonlinearity);
    std::vector<cplx> u = positive_copy(phi);
    std::vector<cplx> a, b, c, d, stage(static_cast<size_t>(K));

    Trajectory traj;
    traj.config = config;
    traj.gauge = Gauge::physical;
    traj.times.reserve(static_cast<size_t>(save) + 1);
    traj.states.reserve(static_cast<size_t>(save) + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(phi);

    const SobolevIndex guard_idx(config.s);
    auto apply = [&](const std::vector<cplx>& E_, const std::vector<cplx>& x, std::vector<cplx>& y) {
        y.resize(static_cast<size_t>(K));
        for (int k = 1; k <= K; ++k)
            y[static_cast<size_t>(k - 1)] = cmul(E_[static_cast<size_t>(k)], x[static_cast<size_t>(k - 1)]);
    };

    std::vector<cplx> eu, e2u, tmp;
    for (int n = 0; n < steps; ++n) {
        rhs(u, a);
        stage = u;
        for (int k = 0; k < K; ++k) stage[static_cast<size_t>(k)] += 0.5 * h * a[static_cast<size_t>(k)];
        apply(E, stage, tmp);
        rhs(tmp, b);
        apply(E, u, eu);
        stage = eu;
        for (int k = 0; k < K; ++k) stage[static_cast<size_t>(k)] += 0.5 * h * b[static_cast<size_t>(k)];
        rhs(stage, c);
        apply(E2, u, e2u);
        stage = e2u;
        apply(E, c, tmp);
        for (int k = 0; k < K; ++k) stage[static_cast<size_t>(k)] += h * tmp[static_cast<size_t>(k)];
        rhs(stage, d);
        apply(E2, a, tmp);
        for (int k = 0; k < K; ++k) {
            const cplx mid = b[static_cast<size_t>(k)] + c[static_cast<size_t>(k)];
            u[static_cast<size_t>(k)] = e2u[static_cast<size_t>(k)] +
                                        (h / 6.0) * (tmp[static_cast<size_t>(k)] +
                                                     2.0 * cmul(E[static_cast<size_t>(k)], mid) +
                                                     d[static_cast<size_t>(k)]);
        }
        if ((n + 1) % stride == 0) {
            SpectralField state(config.grid, u, Gauge::physical);
            const double l2 = l2_of_positive(u);
            const double hs = sobolev_norm(state, guard_idx);
            if (!(l2 < config.blowup_guard) || !(hs < config.blowup_guard) || !std::isfinite(l2)) {
                std::ostringstream os;
                os << "reference_solve: blow-up guard tripped at t=" << h * (n + 1)
                   << " (L2=" << l2 << ", H^s=" << hs << "); the time step is too large";
                throw SolverError(os.str());
            }
            traj.times.push_back(h * (n + 1));
            traj.states.push_back(std::move(state));
        }
    }
    return traj;
}

SpectralField phi_map(const Trajectory& history, const SpectralField& phi, double t,
                      const SolverConfig& config) {
    return phi_map_core(history, phi, t, config, 2);
}

SpectralField mkdv_phi_map(const Trajectory& history, const SpectralField& phi, double t,
                           const SolverConfig& config) {
    return phi_map_core(history, phi, t, config, 3);
}

PicardResult picard_solve(const SpectralField& phi, const SolverConfig& config) {
    return picard_core(phi, config, 2);
}

PicardResult mkdv_picard_solve(const SpectralField& phi, const SolverConfig& config) {
    return picard_core(phi, config, 3);
}

Trajectory solve(const SpectralField& phi, const SolverConfig& config, Method method) {
    config.validate();
    if (method == Method::reference) return reference_solve(phi, config);

    Trajectory out;
    out.config = config;
    out.gauge = Gauge::physical;
    SpectralField current = phi;
    const SobolevIndex idx(config.s);
    double done = 0.0;
    int segments = 0;
    while (done < config.T * (1.0 - 1e-12)) {
        const double r = sobolev_norm(current, idx);
        double gate_T = std::numeric_limits<double>::infinity();
        if (r > 0.0) gate_T = 0.999 * std::pow(config.gate_c / (r * r), 2.5);
        SolverConfig seg = config;
        seg.T = std::min(config.T - done, gate_T);
        PicardResult res = config.alpha == 2 ? picard_solve(current, seg)
                                             : mkdv_picard_solve(current, seg);
        if (!res.diagnostics.converged)
            throw SolverError("solve: picard segment did not converge within max iterations");
        const size_t start = out.times.empty() ? 0 : 1;  // drop the duplicated restart node
        for (size_t i = start; i < res.trajectory.times.size(); ++i) {
            out.times.push_back(done + res.trajectory.times[i]);
            out.states.push_back(res.trajectory.states[i]);
        }
        current = res.trajectory.states.back();
        done += seg.T;
        if (++segments > 100000) throw SolverError("solve: segment limit exceeded");
    }
    return out;
}

double trajectory_distance(const Trajectory& a, const Trajectory& b, const SobolevIndex& idx) {
    const double tol = 1e-9 * std::max(1.0, std::max(a.times.empty() ? 0.0 : a.times.back(),
                                                     b.times.empty() ? 0.0 : b.times.back()));
    double dist = 0.0;
    size_t shared = 0, ib = 0;
    for (size_t ia = 0; ia < a.times.size(); ++ia) {
        while (ib < b.times.size() && b.times[ib] < a.times[ia] - tol) ++ib;
        if (ib >= b.times.size()) break;
        if (std::abs(b.times[ib] - a.times[ia]) <= tol) {
            dist = std::max(dist, sobolev_distance(a.states[ia], b.states[ib], idx));
            ++shared;
        }
    }
    if (shared == 0) throw std::invalid_argument("trajectory_distance: no shared time nodes");
    return dist;
}

}  // namespace kdvb
