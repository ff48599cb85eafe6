#pragma once

#include <span>
#include <utility>

#include "m2hs/types.hpp"

namespace m2hs {

// Periodic composite trapezoid over the full circle.  Uses exactly the same
// left-to-right accumulation as cumulative_integral, so
// cumulative_integral(f).back() == trapz_periodic(f) bit for bit.
double trapz_periodic(std::span<const double> f, const Grid& grid);

// F[j] ~ int_0^{x_j} f dy for j = 0..n (x_n = 1), trapezoid rule with the
// periodic wrap f[n] := f[0].  F[0] = 0; summation order is fixed.
std::vector<double> cumulative_integral(std::span<const double> f, const Grid& grid);

// (1/4) int (u_x^2 + rho^2) dx.
double energy(std::span<const double> u_x, std::span<const double> rho, const Grid& grid);

// (1/2) int rho dx.
double contact_angle(std::span<const double> rho, const Grid& grid);

// theta_{1/2} = (s +- sqrt(s^2 + 4(c2 - s*delta))) / 2, ordered theta1 > theta2.
// Throws DegenerateFrequencies if the discriminant is <= 0.
std::pair<double, double> thetas(double s, double c2, double delta);

// Rescale (u0, u0x, rho0) by 1/c so the energy becomes 1; returns the applied
// scale.  delta is not invariant under the scaling and must be recomputed.
std::pair<InitialData, double> normalize(const InitialData& data);

struct Mode {
    int k = 1;
    double a = 0.0;  // coefficient of sin(2 pi k x)
    double b = 0.0;  // coefficient of cos(2 pi k x) (shifted by -1 for u so that u0(0) = 0)
};

// u0(x) = sum a_k sin(2 pi k x) + b_k (cos(2 pi k x) - 1), u0x the analytic
// derivative, rho0(x) = rho_mean + sum a_k sin + b_k cos.
InitialData fourier_synthesize(std::span<const Mode> u_modes, std::span<const Mode> rho_modes,
                               double rho_mean, const Grid& grid);

// Pointwise-correct rho0 at one grid point to equal s exactly while keeping
// unit energy: alternates normalize and the pointwise set until both hold.
InitialData seed_blowup_site(InitialData data, double s, int site_index);

int argmin_u0x(const InitialData& data);

// Every stride-th sample (stride must divide n).  Valid because per-point
// evolutions are independent of the rest of the grid.
InitialData subsample(const InitialData& data, int stride);

// Measure c2 and delta from the data and derive the frequency pair.
SimParams make_params(double s, const InitialData& data);

}  // namespace m2hs
