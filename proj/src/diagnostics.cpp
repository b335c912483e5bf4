#include "kdvb/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kdvb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double l2_sq(const SpectralField& u) {
    double s = 0.0;
    for (int k = 1; k <= u.grid().band_limit; ++k) s += std::norm(u.coeff(k));
    return 2.0 * kTwoPi * s;
}

// || dx^m u ||_{L2}^2 = 2 pi sum k^{2m} |u_k|^2 (both signs).
double dx_norm_sq(const SpectralField& u, int m) {
    double s = 0.0;
    for (int k = 1; k <= u.grid().band_limit; ++k)
        s += std::pow(static_cast<double>(k), 2.0 * m) * std::norm(u.coeff(k));
    return 2.0 * kTwoPi * s;
}

double hs_norm_sq(const SpectralField& u, double s_idx) {
    double s = 0.0;
    for (int k = 1; k <= u.grid().band_limit; ++k)
        s += std::pow(1.0 + static_cast<double>(k) * k, s_idx) * std::norm(u.coeff(k));
    return 2.0 * kTwoPi * s;
}

CumulativeWeights traj_weights(const Trajectory& traj) {
    if (traj.times.size() < 3)
        throw std::invalid_argument("diagnostics: trajectory needs at least 3 nodes");
    const double h = traj.times[1] - traj.times[0];
    return CumulativeWeights(static_cast<int>(traj.times.size()) - 1, h,
                             traj.config.quadrature);
}

// Cumulative integral of a sampled scalar over the trajectory nodes.
std::vector<double> cumulative_integral(const std::vector<double>& samples,
                                        const CumulativeWeights& weights) {
    const int M = static_cast<int>(samples.size()) - 1;
    std::vector<double> out(samples.size(), 0.0);
    for (int j = 1; j <= M; ++j) {
        const auto& w = weights.row(j);
        double acc = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * samples[i];
        out[static_cast<std::size_t>(j)] = acc;
    }
    return out;
}

}  // namespace

std::vector<double> l2_identity_residual(const Trajectory& traj, double epsilon) {
    if (traj.states.empty()) throw std::invalid_argument("l2_identity_residual: empty trajectory");
    const auto weights = traj_weights(traj);
    std::vector<double> dx2(traj.states.size());
    for (std::size_t i = 0; i < traj.states.size(); ++i) dx2[i] = dx_norm_sq(traj.states[i], 1);
    const auto integral = cumulative_integral(dx2, weights);
    const double half0 = 0.5 * l2_sq(traj.states.front());
    std::vector<double> res(traj.states.size(), 0.0);
    if (half0 == 0.0) return res;  // zero datum: identity is 0 = 0
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const double lhs = 0.5 * l2_sq(traj.states[i]) + epsilon * integral[i];
        res[i] = std::abs(lhs - half0) / half0;
    }
    return res;
}

double energy_H(const SpectralField& u) {
    const double quad = dx_norm_sq(u, 1) + l2_sq(u);
    // int u^3 = 2 pi sum_{k1+k2+k3=0} u_{k1} u_{k2} u_{k3}
    const int K = u.grid().band_limit;
    const auto d = dense_coeffs(u);
    cplx cubic{0.0, 0.0};
    for (int k1 = -K; k1 <= K; ++k1) {
        if (k1 == 0) continue;
        for (int k2 = std::max(-K, -k1 - K); k2 <= std::min(K, -k1 + K); ++k2) {
            const int k3 = -k1 - k2;
            if (k2 == 0 || k3 == 0) continue;
            cubic += d[static_cast<std::size_t>(K + k1)] * d[static_cast<std::size_t>(K + k2)] *
                     d[static_cast<std::size_t>(K + k3)];
        }
    }
    return quad + (2.0 / 3.0) * kTwoPi * cubic.real();
}

BudgetReport h1_budget(const Trajectory& traj, double epsilon) {
    if (traj.states.empty()) return {};
    BudgetReport rep;
    for (const auto& u : traj.states)
        rep.sup_norm = std::max(rep.sup_norm, std::sqrt(hs_norm_sq(u, 1.0)));
    const auto weights = traj_weights(traj);
    std::vector<double> dxx(traj.states.size());
    for (std::size_t i = 0; i < traj.states.size(); ++i) dxx[i] = dx_norm_sq(traj.states[i], 2);
    rep.dissipation_term = std::sqrt(epsilon) * std::sqrt(cumulative_integral(dxx, weights).back());
    return rep;
}

BudgetReport h2_budget_mkdv(const Trajectory& traj, double epsilon) {
    if (traj.states.empty()) return {};
    BudgetReport rep;
    for (const auto& u : traj.states)
        rep.sup_norm = std::max(rep.sup_norm, std::sqrt(hs_norm_sq(u, 2.0)));
    const auto weights = traj_weights(traj);
    std::vector<double> h3(traj.states.size());
    for (std::size_t i = 0; i < traj.states.size(); ++i) h3[i] = hs_norm_sq(traj.states[i], 3.0);
    rep.dissipation_term = std::sqrt(epsilon) * std::sqrt(cumulative_integral(h3, weights).back());
    return rep;
}

EnergyReport energy_report(const Trajectory& traj, double epsilon) {
    EnergyReport rep;
    rep.times = traj.times;
    rep.identity_residuals = l2_identity_residual(traj, epsilon);
    const auto weights = traj_weights(traj);
    std::vector<double> dx2(traj.states.size());
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        rep.l2_norms.push_back(std::sqrt(l2_sq(traj.states[i])));
        rep.H_values.push_back(energy_H(traj.states[i]));
        dx2[i] = dx_norm_sq(traj.states[i], 1);
    }
    rep.dissipation_integral = cumulative_integral(dx2, weights);
    for (auto& v : rep.dissipation_integral) v *= 2.0 * epsilon;
    rep.h1 = h1_budget(traj, epsilon);
    return rep;
}

std::vector<LipschitzRow> lipschitz_probe(const SpectralField& phi1, const SpectralField& phi2,
                                          const std::vector<double>& epsilons,
                                          const SolverConfig& config) {
    const SobolevIndex idx(config.s);
    const double denom = sobolev_distance(phi1, phi2, idx);
    std::vector<LipschitzRow> rows;
    for (double eps : epsilons) {
        SolverConfig cfg = config;
        cfg.epsilon = eps;
        LipschitzRow row;
        row.epsilon = eps;
        if (denom == 0.0) {
            row.exact_zero = true;  // identical data evolve identically
            rows.push_back(row);
            continue;
        }
        const Trajectory u1 = reference_solve(phi1, cfg);
        const Trajectory u2 = reference_solve(phi2, cfg);
        row.ratio = trajectory_distance(u1, u2, idx) / denom;
        rows.push_back(row);
    }
    return rows;
}

BurgersTermReport burgers_term(const Trajectory& u_traj, const Trajectory& w_traj) {
    if (u_traj.times.size() != w_traj.times.size())
        throw std::invalid_argument("burgers_term: trajectories have different node counts");
    const double tol = 1e-9 * std::max(1.0, u_traj.times.back());
    for (std::size_t i = 0; i < u_traj.times.size(); ++i)
        if (std::abs(u_traj.times[i] - w_traj.times[i]) > tol)
            throw std::invalid_argument("burgers_term: time nodes are not aligned");

    const auto weights = traj_weights(u_traj);
    std::vector<double> samples(u_traj.times.size(), 0.0);
    double sup_w_sq = 0.0;
    for (std::size_t i = 0; i < u_traj.times.size(); ++i) {
        const auto& u = u_traj.states[i];
        const auto& w = w_traj.states[i];
        const int K = std::max(u.grid().band_limit, w.grid().band_limit);
        const auto du = dense_coeffs(u);
        const auto dw = dense_coeffs(w);
        const int Ku = u.grid().band_limit, Kw = w.grid().band_limit;
        cplx acc{0.0, 0.0};
        for (int k1 = -Ku; k1 <= Ku; ++k1) {
            if (k1 == 0) continue;
            for (int k2 = std::max(-Kw, -k1 - Kw); k2 <= std::min(Kw, -k1 + Kw); ++k2) {
                const int k3 = -k1 - k2;
                if (k2 == 0 || k3 == 0 || std::abs(k3) > Kw) continue;
                acc += cplx{0.0, static_cast<double>(k1)} * du[static_cast<std::size_t>(Ku + k1)] *
                       dw[static_cast<std::size_t>(Kw + k2)] * dw[static_cast<std::size_t>(Kw + k3)];
            }
        }
        samples[i] = kTwoPi * acc.real();
        sup_w_sq = std::max(sup_w_sq, l2_sq(w));
        (void)K;
    }
    BurgersTermReport rep;
    rep.integral = cumulative_integral(samples, weights).back();

    std::vector<double> dxu(u_traj.times.size());
    for (std::size_t i = 0; i < u_traj.times.size(); ++i) dxu[i] = dx_norm_sq(u_traj.states[i], 1);
    const double eps = u_traj.config.epsilon;
    rep.budget = eps * eps * cumulative_integral(dxu, weights).back() + sup_w_sq;
    rep.ratio = rep.budget > 0.0 ? std::abs(rep.integral) / rep.budget : 0.0;
    return rep;
}

Trajectory difference_trajectory(const Trajectory& a, const Trajectory& b) {
    if (a.times.size() != b.times.size())
        throw std::invalid_argument("difference_trajectory: node counts differ");
    Trajectory out;
    out.config = a.config;
    out.gauge = a.gauge;
    out.times = a.times;
    out.states.reserve(a.states.size());
    const int K = std::max(a.config.grid.band_limit, b.config.grid.band_limit);
    for (std::size_t i = 0; i < a.states.size(); ++i) {
        std::vector<cplx> pos(static_cast<std::size_t>(K));
        for (int k = 1; k <= K; ++k)
            pos[static_cast<std::size_t>(k - 1)] = a.states[i].coeff(k) - b.states[i].coeff(k);
        out.states.emplace_back(GridSpec(K), std::move(pos), a.gauge);
    }
    return out;
}

}  // namespace kdvb
