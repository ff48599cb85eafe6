#include "m2hs/core.hpp"

#include <cmath>
#include <numbers>
#include <tuple>

namespace m2hs {

namespace {

void require_same_grid(std::span<const double> f, const Grid& grid, const char* what) {
    if (static_cast<int>(f.size()) != grid.n)
        throw ContractViolation(std::string(what) + ": field size " + std::to_string(f.size()) +
                                " does not match grid n=" + std::to_string(grid.n));
}

}  // namespace

double trapz_periodic(std::span<const double> f, const Grid& grid) {
    require_same_grid(f, grid, "trapz_periodic");
    const int n = grid.n;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const double fr = (j + 1 == n) ? f[0] : f[j + 1];
        acc += 0.5 * grid.h * (f[j] + fr);
    }
    return acc;
}

std::vector<double> cumulative_integral(std::span<const double> f, const Grid& grid) {
    require_same_grid(f, grid, "cumulative_integral");
    const int n = grid.n;
    std::vector<double> F(n + 1);
    F[0] = 0.0;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const double fr = (j + 1 == n) ? f[0] : f[j + 1];
        acc += 0.5 * grid.h * (f[j] + fr);
        F[j + 1] = acc;
    }
    return F;
}

double energy(std::span<const double> u_x, std::span<const double> rho, const Grid& grid) {
    require_same_grid(u_x, grid, "energy(u_x)");
    require_same_grid(rho, grid, "energy(rho)");
    std::vector<double> w(grid.n);
    for (int j = 0; j < grid.n; ++j) w[j] = u_x[j] * u_x[j] + rho[j] * rho[j];
    return 0.25 * trapz_periodic(w, grid);
}

double contact_angle(std::span<const double> rho, const Grid& grid) {
    require_same_grid(rho, grid, "contact_angle");
    return 0.5 * trapz_periodic(rho, grid);
}

std::pair<double, double> thetas(double s, double c2, double delta) {
    const double disc = s * s + 4.0 * (c2 - s * delta);
    if (!(disc > 0.0))
        throw DegenerateFrequencies("thetas: discriminant " + std::to_string(disc) +
                                    " is not positive (s=" + std::to_string(s) +
                                    ", c2=" + std::to_string(c2) + ", delta=" + std::to_string(delta) + ")");
    const double root = std::sqrt(disc);
    return {0.5 * (s + root), 0.5 * (s - root)};
}

std::pair<InitialData, double> normalize(const InitialData& data) {
    const double c2 = energy(data.u0x, data.rho0, data.grid);
    if (c2 <= 0.0) throw ZeroEnergy("normalize: energy is zero");
    const double scale = 1.0 / std::sqrt(c2);
    InitialData out = data;
    for (double& v : out.u0) v *= scale;
    for (double& v : out.u0x) v *= scale;
    for (double& v : out.rho0) v *= scale;
    return {std::move(out), scale};
}

InitialData fourier_synthesize(std::span<const Mode> u_modes, std::span<const Mode> rho_modes,
                               double rho_mean, const Grid& grid) {
    for (const auto& m : u_modes)
        if (m.k < 1 || m.k >= grid.n / 2)
            throw AliasedMode("fourier_synthesize: u mode k=" + std::to_string(m.k) +
                              " outside [1, n/2) for n=" + std::to_string(grid.n));
    for (const auto& m : rho_modes)
        if (m.k < 1 || m.k >= grid.n / 2)
            throw AliasedMode("fourier_synthesize: rho mode k=" + std::to_string(m.k) +
                              " outside [1, n/2) for n=" + std::to_string(grid.n));

    const int n = grid.n;
    InitialData data;
    data.grid = grid;
    data.u0.assign(n, 0.0);
    data.u0x.assign(n, 0.0);
    data.rho0.assign(n, rho_mean);

    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (int j = 0; j < n; ++j) {
        const double x = grid.x(j);
        for (const auto& m : u_modes) {
            const double ph = two_pi * m.k * x;
            data.u0[j] += m.a * std::sin(ph) + m.b * (std::cos(ph) - 1.0);
            data.u0x[j] += two_pi * m.k * (m.a * std::cos(ph) - m.b * std::sin(ph));
        }
        for (const auto& m : rho_modes) {
            const double ph = two_pi * m.k * x;
            data.rho0[j] += m.a * std::sin(ph) + m.b * std::cos(ph);
        }
    }
    return data;
}

InitialData seed_blowup_site(InitialData data, double s, int site_index) {
    if (site_index < 0 || site_index >= data.grid.n)
        throw ContractViolation("seed_blowup_site: index out of range");
    // The pointwise correction perturbs the energy by O(h); the perturbation
    // contracts by a factor ~h s^2 per round, so a few rounds reach 1e-15.
    for (int round = 0; round < 6; ++round) {
        data = normalize(data).first;
        data.rho0[site_index] = s;
    }
    const double e = energy(data.u0x, data.rho0, data.grid);
    if (std::abs(e - 1.0) > 1e-12)
        throw ContractViolation("seed_blowup_site: unit energy not reached, |e-1|=" +
                                std::to_string(std::abs(e - 1.0)));
    return data;
}

int argmin_u0x(const InitialData& data) {
    int best = 0;
    for (int j = 1; j < data.grid.n; ++j)
        if (data.u0x[j] < data.u0x[best]) best = j;
    return best;
}

InitialData subsample(const InitialData& data, int stride) {
    if (stride < 1 || data.grid.n % stride != 0)
        throw ContractViolation("subsample: stride must divide n");
    if (stride == 1) return data;
    InitialData out;
    out.grid = Grid(data.grid.n / stride);
    for (int j = 0; j < out.grid.n; ++j) {
        out.u0.push_back(data.u0[j * stride]);
        out.u0x.push_back(data.u0x[j * stride]);
        out.rho0.push_back(data.rho0[j * stride]);
    }
    return out;
}

SimParams make_params(double s, const InitialData& data) {
    SimParams p;
    p.s = s;
    p.c2 = energy(data.u0x, data.rho0, data.grid);
    p.delta = contact_angle(data.rho0, data.grid);
    std::tie(p.theta1, p.theta2) = thetas(s, p.c2, p.delta);
    return p;
}

}  // namespace m2hs
