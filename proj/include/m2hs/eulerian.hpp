#pragma once

#include <span>

#include "m2hs/parallel.hpp"
#include "m2hs/types.hpp"
#include "m2hs/weakflow.hpp"

namespace m2hs::eulerian {

// (u, u_x, rho) on the uniform grid, pulled back from a Lagrangian state
// through the generalized inverse of phi.  on_plateau marks samples whose
// preimage falls on the discrete degenerate set (u_x is set to 0 there).
struct EulerianState {
    Grid grid;
    double t = 0.0;
    std::vector<double> u, u_x, rho;
    std::vector<double> preimage;  // x* = generalized inverse of phi at each target
    std::vector<unsigned char> on_plateau;
    int plateau_samples = 0;
};

// Left-continuous inverse of a nondecreasing map sampled on n+1 points of
// [0,1]: inf{x : phi(x) >= y} with linear interpolation inside the bracketing
// cell; plateaus resolve to their left endpoint.  Throws NonMonotone when a
// decreasing pair beyond round-off is present.
double generalized_inverse(std::span<const double> phi, double y);

EulerianState reconstruct(const weakflow::LagrangianState& state, const SimParams& params,
                          Exec exec = Exec::OpenMP);

struct ResidualReport {
    std::vector<double> residual;      // per grid point
    double sup = 0.0;
    double l2 = 0.0;
    double consistency_state = 0.0;    // full-circle integrand mean vs the state's own (c2, delta)
    double consistency_params = 0.0;   // same vs the trajectory parameters
};

// Residual of the gauged antiderivative form of the u-equation:
// u_t + u u_x - int_0^x (u_x^2/2 + rho^2/2 - s rho) dy + 2x (c2 - s delta).
ResidualReport residual_u(const EulerianState& state, std::span<const double> u_t,
                          const SimParams& params);

// Residual of rho_t + (rho u)_x - s u_x with the fixed fourth-order central
// stencil for every spatial derivative.
ResidualReport residual_rho(const EulerianState& state, std::span<const double> rho_t,
                            const SimParams& params);

struct ConservationRow {
    double t = 0.0;
    double energy = 0.0;
    double angle = 0.0;
    double energy_dev = 0.0;
    double angle_dev = 0.0;
    bool degenerate = false;  // within the degeneracy window of a detected blow-up
};

std::vector<ConservationRow> conservation_report(std::span<const EulerianState> trajectory,
                                                 const SimParams& params,
                                                 std::span<const double> blowup_times,
                                                 double window = 1e-3);

}  // namespace m2hs::eulerian
