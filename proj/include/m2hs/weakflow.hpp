#pragma once

#include <span>

#include "m2hs/parallel.hpp"
#include "m2hs/types.hpp"

namespace m2hs::weakflow {

// Complex samples of the Hilbert-sphere geodesic gamma(t, x_j) and its time
// derivative.  gamma(0,.) = 1 and gamma_dot(0,.) = (u0x + i rho0)/2.
struct GammaField {
    Grid grid;
    double t = 0.0;
    std::vector<cplx> gamma;
    std::vector<cplx> gamma_dot;
};

// A point of the relaxed configuration space together with its velocity:
// phi, phi_t on the n+1 points of [0,1]; phi_x, phi_tx, tau, tau_t sampled
// periodically (slot n mirrors slot 0).  tau is empty unless the time
// quadrature was requested.
struct LagrangianState {
    Grid grid;
    double t = 0.0;
    TauVariant tau_variant = TauVariant::OdeConsistent;
    std::vector<double> phi, phi_t;
    std::vector<double> phi_x, phi_tx;
    std::vector<double> tau, tau_t;
    int tangency_zeroed = 0;  // phi_tx entries forced to 0 on the degenerate set
    int tau_clamped = 0;      // degenerate-set hits during tau evaluation
};

struct TauField {
    std::vector<double> tau, tau_t;  // n+1 samples, slot n mirrors slot 0
    int clamped = 0;
};

// gamma via the bracket form [theta2 e^{i theta1 t} - theta1 e^{i theta2 t}
// + (i/2) Z0 (e^{i theta1 t} - e^{i theta2 t})] / (theta2 - theta1);
// gamma_dot by analytic differentiation (no finite differencing).
GammaField gamma_closed_form(const InitialData& data, const SimParams& params, double t,
                             Exec exec = Exec::OpenMP);

// The same field via the spectral representation e^{i theta1 t} p1 +
// e^{i theta2 t} p2; algebraically identical to the bracket form, kept as an
// independent grouping for regression.
GammaField gamma_pq_form(const InitialData& data, const SimParams& params, double t,
                         Exec exec = Exec::OpenMP);

// Second time derivative from the exponential form (direct -theta^2
// coefficients, not the ODE right-hand side).
std::vector<cplx> gamma_second_derivative(const InitialData& data, const SimParams& params,
                                          double t);

// sup_j |gdd_j - i s gamma_dot_j + (c2 - s delta) gamma_j|.
double sphere_ode_residual(const GammaField& g, std::span<const cplx> gamma_ddot,
                           const SimParams& params);

// Trapezoid L2 norm of gamma(t, .); equals 1 for unit-speed data.
double gamma_l2_norm(const GammaField& g);

// phi = cumulative integral of |gamma|^2, phi_x = |gamma|^2,
// phi_t = cumulative integral of 2 Re(conj(gamma) gamma_dot), phi_tx its
// integrand.  phi_tx is zeroed on the discrete degenerate set (tangency
// condition at plateaus); the count is recorded.
LagrangianState build_phi(const GammaField& g, const SimParams& params);

// tau_t at time t for the chosen variant (n+1 samples).  Degenerate-set hits
// are counted through `clamped` when non-null.
std::vector<double> tau_rate(const InitialData& data, const SimParams& params, double t,
                             TauVariant variant, int* clamped = nullptr);

// Midpoint-rule time integral of tau_t on uniform substeps of width <= dt_tau,
// fixed summation order, plus the rate at the endpoint.
TauField build_tau(const InitialData& data, const SimParams& params, double t, double dt_tau,
                   TauVariant variant);

// Full state assembly: gamma -> phi parts -> tau parts.
LagrangianState lagrangian_state(const InitialData& data, const SimParams& params, double t,
                                 TauVariant variant, bool with_tau_integral = false,
                                 Exec exec = Exec::OpenMP);

// (1/4) int_{phi_x > eps} (phi_tx^2 / phi_x + tau_t^2 phi_x) dx.
double relaxed_energy(const LagrangianState& state, double eps);

// Trapezoid integral of |gamma_dot|^2 over {|gamma|^2 > eps}; with the
// ode-consistent tau this equals relaxed_energy by pointwise algebra.
double restricted_kinetic_energy(const GammaField& g, double eps);

// Full trapezoid integral of |gamma_dot|^2 (equals 1 for unit-speed data).
double kinetic_energy(const GammaField& g);

// The kinetic mass sitting on the discrete degenerate set {|gamma|^2 <= eps}.
double excluded_kinetic_mass(const GammaField& g, double eps);

// (1/2) int tau_t phi_x dx: the pulled-back contact angle.
double pulled_back_angle(const LagrangianState& state);

// Bisected bracket of the time at which min_j |gamma(t, x_j)|^2 crosses
// eps_detect: coarse scan, local minimum refinement, then bisection of the
// descending/ascending crossings around the minimum.
struct DegeneracyBracket {
    bool found = false;
    double t_lo = 0.0;   // descending crossing
    double t_hi = 0.0;   // ascending crossing
    double t_min = 0.0;  // refined local minimum
    double min_value = 0.0;
};
DegeneracyBracket degeneracy_bracket(const InitialData& data, const SimParams& params,
                                     double t_search_lo, double t_search_hi,
                                     double eps_detect = 1e-12);

// Number of zeros of t -> gamma(t, x_j) on [0, t_end], located as refined
// local minima of |gamma|^2 below a round-off threshold.
int count_gamma_zeros(const InitialData& data, const SimParams& params, int j, double t_end);

// Per-time verdicts for the four weak-geodesic conditions.
struct GeodesicCheck {
    double t = 0.0;
    // (1) membership in the relaxed space
    double phi_start = 0.0, phi_end_dev = 0.0, min_phi_x = 0.0, tau_l2 = 0.0;
    bool item1 = false;
    // (2) tangency at (phi, tau)
    double phi_t_start = 0.0, phi_t_end = 0.0, max_phi_tx_degenerate = 0.0,
           max_metric_integrand = 0.0;
    bool item2 = false;
    // (3) conservation of energy and contact angle
    double energy_dev = 0.0, angle_dev = 0.0;
    bool item3 = false;
    // (4) equation residuals off the degenerate set
    double residual_u_sup = 0.0, residual_rho_sup = 0.0;
    bool item4 = false;
};

struct GeodesicReport {
    std::vector<GeodesicCheck> checks;
    bool all_pass = false;
};

GeodesicReport weak_geodesic_check(const InitialData& data, const SimParams& params,
                                   std::span<const double> times, TauVariant variant,
                                   double dt_tau = 1e-3);

}  // namespace m2hs::weakflow
