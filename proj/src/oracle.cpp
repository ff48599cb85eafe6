#include "m2hs/oracle.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>

#include "m2hs/core.hpp"

namespace m2hs::oracle {

namespace {

constexpr double kOverflow = 1e12;

int step_count(const OdeRunConfig& cfg) {
    if (!(cfg.dt > 0.0) || cfg.t_end < 0.0 || cfg.stride < 1)
        throw ContractViolation("OdeRunConfig: need dt > 0, t_end >= 0, stride >= 1");
    return static_cast<int>(std::llround(cfg.t_end / cfg.dt));
}

// Real-to-complex spectral helper on the periodic unit circle.  Plans are
// created once per grid size; transforms run serially.
class SpectralCircle {
public:
    explicit SpectralCircle(int n)
        : n_(n),
          real_(fftw_alloc_real(n)),
          spec_(fftw_alloc_complex(n / 2 + 1)),
          fwd_(fftw_plan_dft_r2c_1d(n, real_, spec_, FFTW_ESTIMATE)),
          bwd_(fftw_plan_dft_c2r_1d(n, spec_, real_, FFTW_ESTIMATE)) {}
    ~SpectralCircle() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(real_);
        fftw_free(spec_);
    }
    SpectralCircle(const SpectralCircle&) = delete;
    SpectralCircle& operator=(const SpectralCircle&) = delete;

    // out = d/dx in; the Nyquist mode derivative is set to zero.
    void derivative(std::span<const double> in, std::span<double> out) {
        forward(in);
        const int half = n_ / 2;
        for (int k = 0; k <= half; ++k) {
            const double w = (k == half) ? 0.0 : 2.0 * std::numbers::pi * k;
            const double re = spec_[k][0], im = spec_[k][1];
            spec_[k][0] = -w * im;
            spec_[k][1] = w * re;
        }
        backward(out);
    }

    // out[j] = int_0^{x_j} in dy: mean * x plus the spectral antiderivative of
    // the oscillatory part, shifted to vanish at x = 0.
    void antiderivative(std::span<const double> in, std::span<double> out) {
        forward(in);
        const double mean = spec_[0][0] / n_;
        const int half = n_ / 2;
        double osc0 = 0.0;
        spec_[0][0] = 0.0;
        spec_[0][1] = 0.0;
        for (int k = 1; k <= half; ++k) {
            const double w = 2.0 * std::numbers::pi * k;
            const double re = spec_[k][0], im = spec_[k][1];
            spec_[k][0] = im / w;
            spec_[k][1] = -re / w;
            osc0 += ((k == half) ? 1.0 : 2.0) * spec_[k][0] / n_;
        }
        backward(out);
        const double h = 1.0 / n_;
        for (int j = 0; j < n_; ++j) out[j] += mean * (j * h) - osc0;
    }

private:
    void forward(std::span<const double> in) {
        for (int j = 0; j < n_; ++j) real_[j] = in[j];
        fftw_execute(fwd_);
    }
    void backward(std::span<double> out) {
        fftw_execute(bwd_);
        for (int j = 0; j < n_; ++j) out[j] = real_[j] / n_;
    }

    int n_;
    double* real_;
    fftw_complex* spec_;
    fftw_plan fwd_, bwd_;
};

}  // namespace

UpTrajectory rk4_up(const InitialData& data, const SimParams& params, const OdeRunConfig& cfg,
                    Exec exec) {
    const int n = data.grid.n;
    const int steps = step_count(cfg);

    UpTrajectory traj;
    traj.grid = data.grid;
    for (int m = 0; m <= steps; ++m)
        if (m % cfg.stride == 0 || m == steps) traj.times.push_back(m * cfg.dt);
    traj.u.assign(traj.times.size(), std::vector<double>(n));
    traj.p.assign(traj.times.size(), std::vector<double>(n));
    traj.overflow.assign(n, 0);

    const double s = params.s;
    const double k2 = 2.0 * params.coupling();

    run_indexed(exec, n, [&](std::ptrdiff_t j) {
        double u = data.u0x[j];
        double p = data.rho0[j];
        std::size_t slot = 0;
        const auto fu = [&](double uu, double pp) {
            return -0.5 * uu * uu + 0.5 * pp * pp - (s * pp + k2);
        };
        const auto fp = [&](double uu, double pp) { return (s - pp) * uu; };
        for (int m = 0; m <= steps; ++m) {
            if (m % cfg.stride == 0 || m == steps) {
                traj.u[slot][j] = u;
                traj.p[slot][j] = p;
                ++slot;
            }
            if (m == steps) break;
            if (traj.overflow[j]) continue;  // frozen after leaving the trust region
            const double dt = cfg.dt;
            const double k1u = fu(u, p), k1p = fp(u, p);
            const double k2u = fu(u + 0.5 * dt * k1u, p + 0.5 * dt * k1p);
            const double k2p = fp(u + 0.5 * dt * k1u, p + 0.5 * dt * k1p);
            const double k3u = fu(u + 0.5 * dt * k2u, p + 0.5 * dt * k2p);
            const double k3p = fp(u + 0.5 * dt * k2u, p + 0.5 * dt * k2p);
            const double k4u = fu(u + dt * k3u, p + dt * k3p);
            const double k4p = fp(u + dt * k3u, p + dt * k3p);
            u += dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            if (!(std::abs(u) < kOverflow) || !(std::abs(p) < kOverflow)) traj.overflow[j] = 1;
        }
    });
    for (int j = 0; j < n; ++j) traj.overflowed += traj.overflow[j];
    return traj;
}

GammaTrajectory rk4_gamma(const InitialData& data, const SimParams& params,
                          const OdeRunConfig& cfg, Exec exec) {
    const int n = data.grid.n;
    const int steps = step_count(cfg);

    GammaTrajectory traj;
    traj.grid = data.grid;
    for (int m = 0; m <= steps; ++m)
        if (m % cfg.stride == 0 || m == steps) traj.times.push_back(m * cfg.dt);
    traj.fields.resize(traj.times.size());
    for (std::size_t i = 0; i < traj.fields.size(); ++i) {
        traj.fields[i].grid = data.grid;
        traj.fields[i].t = traj.times[i];
        traj.fields[i].gamma.resize(n);
        traj.fields[i].gamma_dot.resize(n);
    }

    const cplx is(0.0, params.s);
    const double k = params.coupling();

    run_indexed(exec, n, [&](std::ptrdiff_t j) {
        cplx g(1.0, 0.0);
        cplx gd(0.5 * data.u0x[j], 0.5 * data.rho0[j]);
        std::size_t slot = 0;
        const auto acc = [&](cplx gg, cplx gdd) { return is * gdd - k * gg; };
        for (int m = 0; m <= steps; ++m) {
            if (m % cfg.stride == 0 || m == steps) {
                traj.fields[slot].gamma[j] = g;
                traj.fields[slot].gamma_dot[j] = gd;
                ++slot;
            }
            if (m == steps) break;
            const double dt = cfg.dt;
            const cplx k1g = gd, k1d = acc(g, gd);
            const cplx k2g = gd + 0.5 * dt * k1d, k2d = acc(g + 0.5 * dt * k1g, gd + 0.5 * dt * k1d);
            const cplx k3g = gd + 0.5 * dt * k2d, k3d = acc(g + 0.5 * dt * k2g, gd + 0.5 * dt * k2d);
            const cplx k4g = gd + dt * k3d, k4d = acc(g + dt * k3g, gd + dt * k3d);
            g += dt / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
            gd += dt / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        }
    });
    return traj;
}

MolTrajectory mol_m2hs(const InitialData& data, const SimParams& params, const OdeRunConfig& cfg) {
    const int n = data.grid.n;
    const int steps = step_count(cfg);
    const Grid grid = data.grid;
    SpectralCircle spec(n);

    std::vector<double> u = data.u0, rho = data.rho0;
    std::vector<double> ux(n), flux(n), flux_x(n), w(n), W(n);
    const double k = params.coupling();

    // du/dt = -u u_x + int_0^x (u_x^2/2 + rho^2/2 - s rho) dy - 2x k
    // drho/dt = -(rho u)_x + s u_x
    const auto rhs = [&](const std::vector<double>& uu, const std::vector<double>& rr,
                         std::vector<double>& du, std::vector<double>& dr) {
        spec.derivative(uu, ux);
        for (int j = 0; j < n; ++j) flux[j] = rr[j] * uu[j];
        spec.derivative(flux, flux_x);
        for (int j = 0; j < n; ++j)
            w[j] = 0.5 * ux[j] * ux[j] + 0.5 * rr[j] * rr[j] - params.s * rr[j];
        spec.antiderivative(w, W);
        for (int j = 0; j < n; ++j) {
            du[j] = -uu[j] * ux[j] + W[j] - 2.0 * grid.x(j) * k;
            dr[j] = -flux_x[j] + params.s * ux[j];
        }
    };

    MolTrajectory traj;
    const auto store = [&](double t) {
        eulerian::EulerianState st;
        st.grid = grid;
        st.t = t;
        st.u = u;
        st.rho = rho;
        spec.derivative(u, ux);
        st.u_x = ux;
        st.on_plateau.assign(n, 0);
        traj.times.push_back(t);
        traj.states.push_back(std::move(st));
    };
    // Conservation diagnostics, recomputed every step; never fed back.
    const auto drift = [&]() {
        spec.derivative(u, ux);
        traj.max_energy_drift =
            std::max(traj.max_energy_drift, std::abs(energy(ux, rho, grid) - params.c2));
        traj.max_angle_drift =
            std::max(traj.max_angle_drift, std::abs(contact_angle(rho, grid) - params.delta));
        return traj.max_energy_drift;
    };

    std::vector<double> k1u(n), k1r(n), k2u(n), k2r(n), k3u(n), k3r(n), k4u(n), k4r(n);
    std::vector<double> tu(n), tr(n);
    for (int m = 0; m <= steps; ++m) {
        if (m % cfg.stride == 0 || m == steps) store(m * cfg.dt);
        if (m == steps) break;
        const double dt = cfg.dt;
        rhs(u, rho, k1u, k1r);
        for (int j = 0; j < n; ++j) {
            tu[j] = u[j] + 0.5 * dt * k1u[j];
            tr[j] = rho[j] + 0.5 * dt * k1r[j];
        }
        rhs(tu, tr, k2u, k2r);
        for (int j = 0; j < n; ++j) {
            tu[j] = u[j] + 0.5 * dt * k2u[j];
            tr[j] = rho[j] + 0.5 * dt * k2r[j];
        }
        rhs(tu, tr, k3u, k3r);
        for (int j = 0; j < n; ++j) {
            tu[j] = u[j] + dt * k3u[j];
            tr[j] = rho[j] + dt * k3r[j];
        }
        rhs(tu, tr, k4u, k4r);
        for (int j = 0; j < n; ++j) {
            u[j] += dt / 6.0 * (k1u[j] + 2.0 * k2u[j] + 2.0 * k3u[j] + k4u[j]);
            rho[j] += dt / 6.0 * (k1r[j] + 2.0 * k2r[j] + 2.0 * k3r[j] + k4r[j]);
        }
        if (drift() > 1e-3) {
            traj.unstable = true;
            store((m + 1) * cfg.dt);
            break;
        }
    }
    return traj;
}

double richardson_order(const std::function<double(double)>& error_at_step,
                        std::span<const double> steps) {
    if (steps.size() < 3)
        throw ContractViolation("richardson_order: need at least 3 step sizes");
    std::vector<double> lx, ly;
    double max_err = 0.0;
    for (double h : steps) {
        const double e = error_at_step(h);
        max_err = std::max(max_err, e);
        if (!(e > 0.0)) throw InsufficientDecay("richardson_order: zero/negative error sample");
        lx.push_back(std::log(h));
        ly.push_back(std::log(e));
    }
    if (max_err < 1e-13)
        throw InsufficientDecay("richardson_order: errors at round-off floor");

    const double m = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace m2hs::oracle
