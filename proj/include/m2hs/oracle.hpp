#pragma once

#include <functional>
#include <span>

#include "m2hs/eulerian.hpp"
#include "m2hs/parallel.hpp"
#include "m2hs/types.hpp"
#include "m2hs/weakflow.hpp"

namespace m2hs::oracle {

// Brute-force solvers certifying the closed forms.  None of them calls into
// the lagrangian/weakflow evaluation paths: the right-hand sides are coded
// here from the evolution equations directly.

struct OdeRunConfig {
    double dt = 1e-4;
    double t_end = 1.0;
    int stride = 1;  // store every stride-th step (t = 0 and the final step always stored)
};

// Classical fixed-step RK4 on the per-point Lagrangian system
// U' = -U^2/2 + P^2/2 - (sP + 2(c2 - s delta)),  P' = (s - P) U.
struct UpTrajectory {
    Grid grid;
    std::vector<double> times;
    std::vector<std::vector<double>> u, p;      // [time][point]
    std::vector<unsigned char> overflow;        // per point: |(U,P)| exceeded 1e12
    int overflowed = 0;
};
UpTrajectory rk4_up(const InitialData& data, const SimParams& params, const OdeRunConfig& cfg,
                    Exec exec = Exec::OpenMP);

// RK4 on the second-order complex sphere equation written as a first-order
// system (gamma, gamma_dot)' = (gamma_dot, i s gamma_dot - (c2 - s delta) gamma).
struct GammaTrajectory {
    Grid grid;
    std::vector<double> times;
    std::vector<weakflow::GammaField> fields;
};
GammaTrajectory rk4_gamma(const InitialData& data, const SimParams& params,
                          const OdeRunConfig& cfg, Exec exec = Exec::OpenMP);

// Method of lines for the Eulerian system in the gauged antiderivative form:
// spectral differentiation in x (FFT, even n), RK4 in time.  c2 and delta are
// recomputed along the run as diagnostics only.
struct MolTrajectory {
    std::vector<double> times;
    std::vector<eulerian::EulerianState> states;
    double max_energy_drift = 0.0;
    double max_angle_drift = 0.0;
    bool unstable = false;  // energy drift beyond 1e-3; integration stops there
};
MolTrajectory mol_m2hs(const InitialData& data, const SimParams& params, const OdeRunConfig& cfg);

// Least-squares slope of log(error) vs log(step).  Throws InsufficientDecay
// when the errors sit at the round-off floor.
double richardson_order(const std::function<double(double)>& error_at_step,
                        std::span<const double> steps);

}  // namespace m2hs::oracle
