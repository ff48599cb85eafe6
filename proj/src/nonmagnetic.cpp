// Non-magnetic (s = 0) unit-speed solution formula, written out on its own
// with the frequency gap hard-coded to 2.  Deliberately shares nothing with
// the general evaluation paths: it exists so the s = 0 regression compares
// two separately coded routes.

#include <cmath>

#include "m2hs/lagrangian.hpp"

namespace m2hs::lagrangian {

std::pair<double, double> nonmagnetic_u_rho(double u0x_j, double rho0_j, double t) {
    const double tn = std::tan(t);
    const double a = 1.0 + 0.5 * u0x_j * tn;
    const double b = 0.5 * rho0_j * tn;
    const double den = a * a + b * b;
    const double u = ((u0x_j - 2.0 * tn) * a + 0.5 * rho0_j * rho0_j * tn) / den;
    const double p = (1.0 + tn * tn) * rho0_j / den;
    return {u, p};
}

}  // namespace m2hs::lagrangian
