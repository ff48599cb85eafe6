#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace m2hs {

using cplx = std::complex<double>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precondition or grid-compatibility violation.
struct ContractViolation : Error {
    using Error::Error;
};

// Discriminant s^2 + 4(c^2 - s*delta) <= 0: the frequency pair collapses and
// every formula dividing by theta1 - theta2 is invalid.
struct DegenerateFrequencies : Error {
    using Error::Error;
};

struct ZeroEnergy : Error {
    using Error::Error;
};

struct AliasedMode : Error {
    using Error::Error;
};

struct NonMonotone : Error {
    using Error::Error;
};

struct TanPole : Error {
    using Error::Error;
};

struct InsufficientDecay : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

// Uniform periodic grid on the circle [0,1): x_j = j*h, h = 1/n.
struct Grid {
    int n = 0;
    double h = 0.0;

    Grid() = default;
    explicit Grid(int n_) : n(n_), h(1.0 / n_) {
        if (n_ < 16 || n_ % 2 != 0)
            throw ContractViolation("Grid: n must be even and >= 16, got " + std::to_string(n_));
    }
    double x(int j) const { return j * h; }
};

// Sampled initial data (u0, d/dx u0, rho0) on a uniform periodic grid.
// Gauge: u0[0] = 0.  Unit-speed convention is established via normalize().
struct InitialData {
    Grid grid;
    std::vector<double> u0;
    std::vector<double> u0x;
    std::vector<double> rho0;
};

// Conserved quantities, characteristic frequencies and numerical thresholds
// shared by all modules.  theta1 > theta2; theta1+theta2 = s and
// theta1*theta2 = -(c2 - s*delta) up to round-off.
struct SimParams {
    double s = 0.0;      // magnetic strength
    double c2 = 1.0;     // energy (1/4) int u_x^2 + rho^2
    double delta = 0.0;  // contact angle (1/2) int rho
    double theta1 = 0.0;
    double theta2 = 0.0;

    double eps_phi_x = 1e-10;    // positivity threshold defining the discrete degenerate set
    double rho_tol = 1e-9;       // blow-up site detection |rho0 - s| <= rho_tol
    double dt_tau = 1e-4;        // midpoint substep for the tau time quadrature
    double dt_fd = 1e-4;         // central-difference step for residual time derivatives
    double tan_pole_tol = 1e-6;  // guard distance from poles of the tan-form

    double coupling() const { return c2 - s * delta; }
    double freq_gap() const { return theta1 - theta2; }
};

enum class TauVariant {
    OdeConsistent,  // tau_t = Im(2 gamma_dot / gamma); satisfies the Lagrangian dynamics for all s
    PaperVerbatim,  // tau_t = rho0 * chi{phi_x > eps} / phi_x; agrees with the above only at s = 0
};

}  // namespace m2hs
