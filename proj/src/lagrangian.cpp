#include "m2hs/lagrangian.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include "m2hs/core.hpp"

namespace m2hs::lagrangian {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// arccot valued in (0, pi): atan2(1, v) has exactly this range and hits pi/2 at v = 0.
double arccot(double v) { return std::atan2(1.0, v); }

// Tan-form denominator D(t, x_j) of the explicit representation.
double tanform_denominator(double u0x, double rho0, double s, double d, double t) {
    const double T = std::tan(0.5 * d * t) / d;
    const double a = 1.0 + u0x * T;
    const double b = (rho0 - s) * T;
    return a * a + b * b;
}

}  // namespace

cplx riccati_rhs(cplx z, double s, double c2, double delta) {
    return -0.5 * z * z + cplx(0.0, s) * z - 2.0 * (c2 - s * delta);
}

cplx riccati_rhs(cplx z, const SimParams& params) {
    return riccati_rhs(z, params.s, params.c2, params.delta);
}

RiccatiField riccati_explicit(const InitialData& data, const SimParams& params, double t,
                              Exec exec) {
    const int n = data.grid.n;
    RiccatiField out;
    out.grid = data.grid;
    out.t = t;
    out.z.resize(n);
    out.at_blowup.assign(n, 0);

    if (t == 0.0) {
        for (int j = 0; j < n; ++j) out.z[j] = cplx(data.u0x[j], data.rho0[j]);
        return out;
    }

    const double th1 = params.theta1, th2 = params.theta2;
    const double d = params.freq_gap();
    if (!(d > 0.0)) throw DegenerateFrequencies("riccati_explicit: theta1 <= theta2");
    const cplx e1 = std::polar(1.0, th1 * t);
    const cplx e2 = std::polar(1.0, th2 * t);
    const cplx i(0.0, 1.0);
    const double eps = params.eps_phi_x;

    run_indexed(exec, n, [&](std::ptrdiff_t j) {
        const cplx half_z0(0.5 * data.u0x[j], 0.5 * data.rho0[j]);
        const cplx p1 = -(th2 + i * half_z0) / d;
        const cplx p2 = (th1 + i * half_z0) / d;
        const cplx g = e1 * p1 + e2 * p2;
        const cplx gd = i * (th1 * e1 * p1 + th2 * e2 * p2);
        if (std::norm(g) < eps) {
            out.z[j] = cplx(std::numeric_limits<double>::quiet_NaN(),
                            std::numeric_limits<double>::quiet_NaN());
            out.at_blowup[j] = 1;
        } else {
            out.z[j] = 2.0 * gd / g;
        }
    });
    for (int j = 0; j < n; ++j) out.flagged += out.at_blowup[j];
    return out;
}

std::pair<double, double> explicit_u_rho_tanform(double u0x_j, double rho0_j,
                                                 const SimParams& params, double t) {
    const double d = params.freq_gap();
    if (!(d > 0.0)) throw DegenerateFrequencies("explicit_u_rho_tanform: theta1 <= theta2");
    const double arg = 0.5 * d * t;
    // distance of arg from the nearest odd multiple of pi/2
    const double dist = std::abs(std::remainder(arg - 0.5 * std::numbers::pi, std::numbers::pi));
    if (dist < params.tan_pole_tol)
        throw TanPole("explicit_u_rho_tanform: tan argument within " +
                      std::to_string(params.tan_pole_tol) + " of a pole");

    const double tn = std::tan(arg);
    const double T = tn / d;
    const double s = params.s;
    const double A = 1.0 + u0x_j * T;
    const double B = (rho0_j - s) * T;
    const double den = A * A + B * B;
    const double num_u = (-d * tn + u0x_j) * A + (rho0_j - s) * (rho0_j - s) * T;
    const double num_p = (1.0 + tn * tn) * (rho0_j - s);
    // The raw display gives P - s; add s so the returned pair is (u_x, rho) o phi.
    return {num_u / den, num_p / den + s};
}

double blowup_time_formula(double u0x_at_site, double freq_gap) {
    return 2.0 * arccot(-u0x_at_site / freq_gap) / freq_gap;
}

BlowupReport blowup_scan(const InitialData& data, const SimParams& params, double rho_tol,
                         double horizon, int sweep_samples) {
    const double d = params.freq_gap();
    if (!(d > 0.0)) throw DegenerateFrequencies("blowup_scan: theta1 <= theta2");

    BlowupReport report;
    report.t_first = kInf;
    for (int j = 0; j < data.grid.n; ++j) {
        if (std::abs(data.rho0[j] - params.s) <= rho_tol) {
            const double t0 = blowup_time_formula(data.u0x[j], d);
            report.sites.push_back({j, data.grid.x(j), t0});
            report.t_first = std::min(report.t_first, t0);
        }
    }
    report.occurs = !report.sites.empty();

    double margin = kInf;
    for (int m = 0; m < sweep_samples; ++m) {
        const double t = horizon * (m + 1) / sweep_samples;
        for (int j = 0; j < data.grid.n; ++j) {
            const double den = tanform_denominator(data.u0x[j], data.rho0[j], params.s, d, t);
            if (den < margin) margin = den;
        }
    }
    report.margin = margin;
    return report;
}

double min_formula_time(const InitialData& data, const SimParams& params) {
    const double d = params.freq_gap();
    if (!(d > 0.0)) throw DegenerateFrequencies("min_formula_time: theta1 <= theta2");
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < data.grid.n; ++j)
        best = std::min(best, blowup_time_formula(data.u0x[j], d));
    return best;
}

std::vector<LargeSMarginRow> large_s_margin(const InitialData& data,
                                            std::span<const double> s_values, double horizon,
                                            double rho_tol) {
    const double c2 = energy(data.u0x, data.rho0, data.grid);
    const double delta = contact_angle(data.rho0, data.grid);
    std::vector<LargeSMarginRow> rows;
    rows.reserve(s_values.size());
    for (double s : s_values) {
        LargeSMarginRow row;
        row.s = s;
        try {
            SimParams p;
            p.s = s;
            p.c2 = c2;
            p.delta = delta;
            std::tie(p.theta1, p.theta2) = thetas(s, c2, delta);
            const BlowupReport rep = blowup_scan(data, p, rho_tol, horizon);
            row.sites = static_cast<int>(rep.sites.size());
            row.t_first = rep.t_first;
            row.margin = rep.margin;
        } catch (const DegenerateFrequencies&) {
            row.degenerate = true;
            row.t_first = kInf;
            row.margin = 0.0;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace m2hs::lagrangian
