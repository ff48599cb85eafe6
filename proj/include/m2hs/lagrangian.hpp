#pragma once

#include <span>
#include <utility>

#include "m2hs/parallel.hpp"
#include "m2hs/types.hpp"

namespace m2hs::lagrangian {

// Complex samples Z(t, x_j) = U + iP with U = u_x o phi, P = rho o phi.
// Z(0,.) = u0x + i rho0.  Samples where |gamma|^2 < eps_phi_x are set to NaN
// and flagged rather than silently filled.
struct RiccatiField {
    Grid grid;
    double t = 0.0;
    std::vector<cplx> z;
    std::vector<unsigned char> at_blowup;
    int flagged = 0;
};

struct BlowupSite {
    int index = 0;
    double x = 0.0;
    double t0 = 0.0;
};

struct BlowupReport {
    bool occurs = false;
    std::vector<BlowupSite> sites;
    double t_first = 0.0;  // +inf when no site
    double margin = 0.0;   // min over the scanned (t, x) of the tan-form denominator
};

// dZ/dt = -(1/2) Z^2 + i s Z - 2 (c2 - s delta).
cplx riccati_rhs(cplx z, double s, double c2, double delta);
cplx riccati_rhs(cplx z, const SimParams& params);

// Z(t, x_j) for the whole grid, evaluated through the exponential form of the
// underlying sphere geodesic (Z = 2 gamma_dot / gamma).  Stable away from the
// tan-form poles; t = 0 returns the initial field verbatim.
RiccatiField riccati_explicit(const InitialData& data, const SimParams& params, double t,
                              Exec exec = Exec::OpenMP);

// The tan-form representation, evaluated literally for cross-validation.  The
// second component is returned as P = rho o phi (the raw display plus s, so
// that t = 0 reproduces rho0).  Throws TanPole within tan_pole_tol of a pole.
std::pair<double, double> explicit_u_rho_tanform(double u0x_j, double rho0_j,
                                                 const SimParams& params, double t);

// First positive root of the tan-form denominator at a candidate site:
// t0 = 2 arccot(-u0x / (theta1 - theta2)) / (theta1 - theta2), arccot in (0, pi).
double blowup_time_formula(double u0x_at_site, double freq_gap);

// Sites are grid points with |rho0 - s| <= rho_tol; the margin column is the
// swept minimum of the tan-form denominator over `sweep_samples` uniform
// times in [0, horizon] (a heuristic scan, not a proof of regularity).
BlowupReport blowup_scan(const InitialData& data, const SimParams& params, double rho_tol,
                         double horizon = 10.0, int sweep_samples = 10000);

struct LargeSMarginRow {
    double s = 0.0;
    bool degenerate = false;
    int sites = 0;
    double t_first = 0.0;
    double margin = 0.0;
};

// blowup_scan across a list of magnetic strengths on fixed data; degenerate
// discriminants are reported per row instead of aborting the sweep.
std::vector<LargeSMarginRow> large_s_margin(const InitialData& data,
                                            std::span<const double> s_values, double horizon,
                                            double rho_tol = 1e-9);

// Minimum of the formula time over the whole grid: every grid point is at
// least 10% away from its potential singular time on [0, 0.9 * this], which
// makes it the natural comparison horizon for smooth-regime checks.
double min_formula_time(const InitialData& data, const SimParams& params);

// Independently coded non-magnetic (s = 0, unit speed) solution formula, kept
// as a regression reference for the s = 0 special case.  Shares no code with
// the paths above.
std::pair<double, double> nonmagnetic_u_rho(double u0x_j, double rho0_j, double t);

}  // namespace m2hs::lagrangian
