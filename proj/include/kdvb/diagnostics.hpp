#pragma once

#include <vector>

#include "kdvb/solver.hpp"

namespace kdvb {

// Relative residual of the dissipation identity
//   1/2 ||u(t)||^2 + eps int_0^t ||dx u||^2 dtau = 1/2 ||phi||^2
// at every node, time integral by the trajectory's quadrature rule.
std::vector<double> l2_identity_residual(const Trajectory& traj, double epsilon);

// H[u] = int (u_x)^2 + (2/3) u^3 + u^2 dx; quadratic parts by Plancherel,
// cubic by the triple convolution at zero total frequency.
double energy_H(const SpectralField& u);

struct BudgetReport {
    double sup_norm = 0.0;           // sup_t ||u||_{H^m}
    double dissipation_term = 0.0;   // eps^(1/2) (int ||.||^2 dtau)^(1/2)
    double total() const { return sup_norm + dissipation_term; }
};

// m = 1 budget: sup_t ||u||_{H^1} and eps^(1/2) (int ||dx^2 u||^2)^(1/2).
BudgetReport h1_budget(const Trajectory& traj, double epsilon);
// m = 2 budget: sup_t ||u||_{H^2} and eps^(1/2) (int ||u||_{H^3}^2)^(1/2).
BudgetReport h2_budget_mkdv(const Trajectory& traj, double epsilon);

struct EnergyReport {
    std::vector<double> times;
    std::vector<double> l2_norms;
    std::vector<double> dissipation_integral;  // cumulative 2 eps int ||dx u||^2
    std::vector<double> identity_residuals;
    std::vector<double> H_values;
    BudgetReport h1;
};

EnergyReport energy_report(const Trajectory& traj, double epsilon);

struct LipschitzRow {
    double epsilon = 0.0;
    double ratio = 0.0;     // sup_t ||u1 - u2||_{H^s} / ||phi1 - phi2||_{H^s}
    bool exact_zero = false;
};

// Solution-map Lipschitz probe across a list of epsilons (reference solves).
std::vector<LipschitzRow> lipschitz_probe(const SpectralField& phi1,
                                          const SpectralField& phi2,
                                          const std::vector<double>& epsilons,
                                          const SolverConfig& config);

struct BurgersTermReport {
    double integral = 0.0;  // int_0^T int dx(u) w^2 dx dtau
    double budget = 0.0;    // eps^2 int ||dx u||^2 dtau + ||w||^2_{Linf L2}
    double ratio = 0.0;     // |integral| / budget (0 when budget vanishes)
};

// Requires aligned time nodes between the two trajectories.
BurgersTermReport burgers_term(const Trajectory& u_traj, const Trajectory& w_traj);

// Node-wise difference of two trajectories on identical nodes.
Trajectory difference_trajectory(const Trajectory& a, const Trajectory& b);

}  // namespace kdvb
