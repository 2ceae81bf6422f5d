#pragma once

// Classical rotating-frame dynamics of two balanced charge clumps in a
// Penning trap with a rotating quadrupolar wall: derived trap frequencies,
// analytic normal modes, the stroboscopic lock omega_lambda -> omega_minus,
// Mathieu radial breathing, Floquet stability, and period-averaged
// Hamiltonians.
//
// Mode frequencies are the roots of the characteristic polynomial of the
// rotating-frame system
//   xi''  - (Omega - 2 w) zeta' + u1 xi   = 0
//   zeta'' + (Omega - 2 w) xi'  + u2 zeta = 0
// with u1/u2 = w(Omega-w) - omega_hat^2/2 +- lambda omega_z^2:
//   lambda_pm^2 = (S +- sqrt(S^2 - 4 u1 u2)) / 2,  S = u1 + u2 + (Omega-2w)^2.
// At the lock with the wall off this gives lambda_minus = 0 and
// lambda_plus = Omega cos(Phi) exactly.

#include "factorspec/util.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace fspec {

struct TrapParams {
    // inputs
    double m = 1, e = 1;
    double b_field = 0;
    double omega_z = 0;
    double lambda = 0;        // rotating-wall relative strength
    double omega_lambda = 0;  // wall frequency

    // derived
    double omega_c = 0;  // Omega = eB/m
    double phi_angle = 0;  // sin(Phi) = sqrt(2) omega_z / Omega
    double omega_minus = 0, omega_plus = 0;
    double beta = 0;  // e^2/4
    double a = 0;     // equilibrium radius; +inf when undetermined
    double omega_hat_sq = 0;
    double mu = 0;     // cot^2(Phi/2)
    double phi_m = 0;  // lambda * mu
};

// a^3 (w Omega - w^2 - omega_z^2/2) = beta/m; the denominator vanishes at
// the exact lock, where a is undetermined (thin-disk limit).
inline double equilibrium_radius(double beta_over_m, double omega_lambda, double omega_c,
                                 double omega_z) {
    const double denom = omega_lambda * omega_c - omega_lambda * omega_lambda - 0.5 * omega_z * omega_z;
    if (!(denom > 1e-12 * omega_c * omega_c))
        return std::numeric_limits<double>::infinity();
    return std::cbrt(beta_over_m / denom);
}

inline TrapParams derive_params(double m, double e, double b_field, double omega_z, double lambda,
                                double omega_lambda) {
    if (!(m > 0) || !(e > 0) || !(b_field > 0) || !(omega_z > 0))
        throw ValidationError("trap params: m, e, B, omega_z must be positive");
    TrapParams p;
    p.m = m;
    p.e = e;
    p.b_field = b_field;
    p.omega_z = omega_z;
    p.lambda = lambda;
    p.omega_lambda = omega_lambda;
    p.omega_c = e * b_field / m;
    const double sin_phi = std::sqrt(2.0) * omega_z / p.omega_c;
    if (!(sin_phi <= 1.0))
        throw ValidationError("trap params: need Omega >= sqrt(2) omega_z (trap angle undefined)");
    p.phi_angle = std::asin(sin_phi);
    const double sh = std::sin(0.5 * p.phi_angle), ch = std::cos(0.5 * p.phi_angle);
    p.omega_minus = p.omega_c * sh * sh;
    p.omega_plus = p.omega_c * ch * ch;
    p.beta = e * e / 4.0;
    p.a = equilibrium_radius(p.beta / m, omega_lambda, p.omega_c, omega_z);
    p.omega_hat_sq = omega_z * omega_z
        + (std::isinf(p.a) ? 0.0 : 2.0 * p.beta / (m * p.a * p.a * p.a));
    p.mu = (ch / sh) * (ch / sh);
    p.phi_m = lambda * p.mu;
    return p;
}

// omega_lambda -> omega_minus, omega_hat^2 -> 2(Omega - w)w
inline TrapParams stroboscopic_lock(const TrapParams& in) {
    TrapParams p = in;
    p.omega_lambda = p.omega_minus;
    p.omega_hat_sq = 2.0 * (p.omega_c - p.omega_lambda) * p.omega_lambda;
    if (!(p.omega_hat_sq > 0)) throw ValidationError("stroboscopic lock: degenerate omega_hat");
    p.a = equilibrium_radius(p.beta / p.m, p.omega_lambda, p.omega_c, p.omega_z);
    p.phi_m = p.lambda * p.mu;
    return p;
}

struct ModeSolution {
    double lambda_plus = 0, lambda_minus = 0;
    double c_plus = 0, c_minus = 0;
    double a_plus = 1, a_minus = 1;  // mode amplitudes, caller-chosen
};

// nullopt = unstable parameters (complex or negative squared frequency)
inline std::optional<ModeSolution> mode_frequencies(const TrapParams& p) {
    const double w = p.omega_lambda;
    const double wr = p.omega_c - 2.0 * w;
    if (std::fabs(wr) < 1e-14 * p.omega_c)
        throw ValidationError("mode_frequencies: Omega = 2 omega_lambda degenerates c_pm");
    const double base = w * (p.omega_c - w) - 0.5 * p.omega_hat_sq;
    const double drive = p.lambda * p.omega_z * p.omega_z;
    const double u1 = base + drive, u2 = base - drive;
    const double s = u1 + u2 + wr * wr;
    const double disc = s * s - 4.0 * u1 * u2;
    if (disc < 0) return std::nullopt;
    const double root = std::sqrt(disc);
    const double lp_sq = 0.5 * (s + root), lm_sq = 0.5 * (s - root);
    if (lm_sq < -1e-12 * p.omega_c * p.omega_c) return std::nullopt;

    ModeSolution sol;
    sol.lambda_plus = std::sqrt(std::max(lp_sq, 0.0));
    sol.lambda_minus = std::sqrt(std::max(lm_sq, 0.0));
    auto coefficient = [&](double lam, double lam_sq) {
        // two algebraically equal forms; pick the better-conditioned one
        const double d1 = wr * lam, d2 = u2 - lam_sq;
        if (std::fabs(d2) > std::fabs(d1)) return wr * lam / d2;
        if (d1 == 0) return 0.0;
        return (u1 - lam_sq) / d1;
    };
    sol.c_plus = coefficient(sol.lambda_plus, lp_sq);
    sol.c_minus = coefficient(sol.lambda_minus, lm_sq);
    return sol;
}

// ---------------------------------------------------------------------------
// Integration

struct Trajectory {
    std::vector<double> t, xi, zeta, xi_dot, zeta_dot;
};

// fixed-step RK4 on the coupled linear system
inline Trajectory integrate_rotating_frame(const TrapParams& p, double xi0, double zeta0,
                                           double xi_dot0, double zeta_dot0, double dt,
                                           std::size_t steps, std::size_t sample_every = 1) {
    const double fast = std::max(p.omega_c, std::sqrt(std::fabs(p.omega_hat_sq)));
    if (!(dt > 0) || dt * fast > 0.05)
        throw ValidationError("integrate_rotating_frame: dt too coarse for the fast scale");
    if (sample_every == 0) sample_every = 1;

    const double w = p.omega_lambda;
    const double wr = p.omega_c - 2.0 * w;
    const double base = w * (p.omega_c - w) - 0.5 * p.omega_hat_sq;
    const double drive = p.lambda * p.omega_z * p.omega_z;
    const double u1 = base + drive, u2 = base - drive;

    struct State {
        double xi, zeta, vxi, vzeta;
    };
    auto rhs = [&](const State& y) {
        return State{y.vxi, y.vzeta, wr * y.vzeta - u1 * y.xi, -wr * y.vxi - u2 * y.zeta};
    };
    auto axpy = [](const State& y, double h, const State& d) {
        return State{y.xi + h * d.xi, y.zeta + h * d.zeta, y.vxi + h * d.vxi, y.vzeta + h * d.vzeta};
    };

    Trajectory traj;
    traj.t.reserve(steps / sample_every + 1);
    State y{xi0, zeta0, xi_dot0, zeta_dot0};
    for (std::size_t i = 0; i <= steps; ++i) {
        if (i % sample_every == 0) {
            traj.t.push_back(i * dt);
            traj.xi.push_back(y.xi);
            traj.zeta.push_back(y.zeta);
            traj.xi_dot.push_back(y.vxi);
            traj.zeta_dot.push_back(y.vzeta);
        }
        const State k1 = rhs(y);
        const State k2 = rhs(axpy(y, 0.5 * dt, k1));
        const State k3 = rhs(axpy(y, 0.5 * dt, k2));
        const State k4 = rhs(axpy(y, dt, k3));
        y = State{y.xi + dt / 6 * (k1.xi + 2 * k2.xi + 2 * k3.xi + k4.xi),
                  y.zeta + dt / 6 * (k1.zeta + 2 * k2.zeta + 2 * k3.zeta + k4.zeta),
                  y.vxi + dt / 6 * (k1.vxi + 2 * k2.vxi + 2 * k3.vxi + k4.vxi),
                  y.vzeta + dt / 6 * (k1.vzeta + 2 * k2.vzeta + 2 * k3.vzeta + k4.vzeta)};
    }
    return traj;
}

// ---------------------------------------------------------------------------
// Spectral peak extraction (validation tool)

namespace detail {

inline void fft_inplace(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * M_PI / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1, 0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k], v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

}  // namespace detail

struct SpectralPeak {
    double frequency = 0;  // angular
    double power = 0;
};

// Hann-windowed FFT of the xi component, parabolically interpolated local
// maxima, strongest first.
inline std::vector<SpectralPeak> extract_frequencies(const Trajectory& traj,
                                                     std::size_t max_peaks = 8) {
    if (traj.t.size() < 16) throw ValidationError("extract_frequencies: trajectory too short");
    std::size_t n = 1;
    while (n * 2 <= traj.t.size()) n *= 2;
    const double dt = traj.t[1] - traj.t[0];

    double mean_xi = 0;
    for (std::size_t i = 0; i < n; ++i) mean_xi += traj.xi[i];
    mean_xi /= static_cast<double>(n);

    std::vector<std::complex<double>> buf(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double hann = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / (n - 1));
        buf[i] = (traj.xi[i] - mean_xi) * hann;
    }
    detail::fft_inplace(buf);

    std::vector<double> power(n / 2);
    for (std::size_t i = 0; i < n / 2; ++i) power[i] = std::norm(buf[i]);
    double peak_power = 0;
    for (double pw : power) peak_power = std::max(peak_power, pw);
    if (peak_power <= 0) return {};

    std::vector<SpectralPeak> peaks;
    for (std::size_t i = 2; i + 1 < power.size(); ++i) {
        if (!(power[i] > power[i - 1] && power[i] >= power[i + 1])) continue;
        if (power[i] < 1e-9 * peak_power) continue;
        // parabolic interpolation on log power
        const double la = std::log(std::max(power[i - 1], 1e-300));
        const double lb = std::log(power[i]);
        const double lc = std::log(std::max(power[i + 1], 1e-300));
        const double denom = la - 2 * lb + lc;
        const double shift = (denom < 0) ? 0.5 * (la - lc) / denom : 0.0;
        SpectralPeak pk;
        pk.frequency = 2.0 * M_PI * (static_cast<double>(i) + shift) / (static_cast<double>(n) * dt);
        pk.power = power[i];
        peaks.push_back(pk);
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const SpectralPeak& a, const SpectralPeak& b) { return a.power > b.power; });
    if (peaks.size() > max_peaks) peaks.resize(max_peaks);
    return peaks;
}

// ---------------------------------------------------------------------------
// Mathieu radial breathing: rho'' - (mu - 2 phi cos 2 tau) rho = 0

struct MathieuSolution {
    std::vector<double> tau_grid, rho, rho_dot;
    bool stable = false;
    double growth_rate = 0;
};

inline MathieuSolution integrate_mathieu(double mu, double phi, double tau_end, double rho0,
                                         double rho_dot0, double dtau = 1e-3) {
    if (!(dtau > 0) || dtau > 1e-3) throw ValidationError("integrate_mathieu: dtau must be <= 1e-3");
    if (!(tau_end > 0)) throw ValidationError("integrate_mathieu: tau_end must be positive");
    const std::size_t steps = static_cast<std::size_t>(std::ceil(tau_end / dtau));

    MathieuSolution sol;
    sol.tau_grid.reserve(steps + 1);
    sol.rho.reserve(steps + 1);
    sol.rho_dot.reserve(steps + 1);
    double r = rho0, v = rho_dot0, tau = 0;
    auto acc = [&](double rr, double tt) { return (mu - 2.0 * phi * std::cos(2.0 * tt)) * rr; };
    for (std::size_t i = 0; i <= steps; ++i) {
        sol.tau_grid.push_back(tau);
        sol.rho.push_back(r);
        sol.rho_dot.push_back(v);
        const double k1r = v, k1v = acc(r, tau);
        const double k2r = v + 0.5 * dtau * k1v, k2v = acc(r + 0.5 * dtau * k1r, tau + 0.5 * dtau);
        const double k3r = v + 0.5 * dtau * k2v, k3v = acc(r + 0.5 * dtau * k2r, tau + 0.5 * dtau);
        const double k4r = v + dtau * k3v, k4v = acc(r + dtau * k3r, tau + dtau);
        r += dtau / 6 * (k1r + 2 * k2r + 2 * k3r + k4r);
        v += dtau / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
        tau += dtau;
    }

    // envelope classifier: bounded over 50 periods vs the first period
    const double period = M_PI;
    double env_first = 0, env_all = 0, env_last = 0;
    for (std::size_t i = 0; i < sol.tau_grid.size(); ++i) {
        const double t = sol.tau_grid[i], m_abs = std::fabs(sol.rho[i]);
        if (t <= period) env_first = std::max(env_first, m_abs);
        if (t <= 50 * period) env_all = std::max(env_all, m_abs);
        if (t >= 49 * period && t <= 50 * period) env_last = std::max(env_last, m_abs);
    }
    sol.stable = env_all <= 10.0 * env_first;
    if (env_first > 0 && env_last > 0)
        sol.growth_rate = std::log(env_last / env_first) / (49.0 * period);
    return sol;
}

// Floquet oracle: trace of the one-period monodromy matrix; |tr| <= 2 is
// stable (the system is Hamiltonian, det M = 1).
inline double floquet_trace(double mu, double phi, double dtau = 1e-3) {
    auto column = [&](double r0, double v0, double& r_out, double& v_out) {
        const std::size_t steps = static_cast<std::size_t>(std::ceil(M_PI / dtau));
        const double h = M_PI / static_cast<double>(steps);
        double r = r0, v = v0, tau = 0;
        auto acc = [&](double rr, double tt) { return (mu - 2.0 * phi * std::cos(2.0 * tt)) * rr; };
        for (std::size_t i = 0; i < steps; ++i) {
            const double k1r = v, k1v = acc(r, tau);
            const double k2r = v + 0.5 * h * k1v, k2v = acc(r + 0.5 * h * k1r, tau + 0.5 * h);
            const double k3r = v + 0.5 * h * k2v, k3v = acc(r + 0.5 * h * k2r, tau + 0.5 * h);
            const double k4r = v + h * k3v, k4v = acc(r + h * k3r, tau + h);
            r += h / 6 * (k1r + 2 * k2r + 2 * k3r + k4r);
            v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
            tau += h;
        }
        r_out = r;
        v_out = v;
    };
    double m00, m10, m01, m11;
    column(1, 0, m00, m10);
    column(0, 1, m01, m11);
    return m00 + m11;
}

inline bool floquet_stable(double mu, double phi, double dtau = 1e-3) {
    return std::fabs(floquet_trace(mu, phi, dtau)) <= 2.0;
}

struct ScanCell {
    double mu = 0, phi = 0;
    bool stable = false;
    double growth_rate = 0;
};

// envelope-classified cell map (CSV export shape)
inline std::vector<ScanCell> scan_cells(const std::vector<double>& mu_list,
                                        const std::vector<double>& phi_grid,
                                        unsigned threads = 1) {
    std::vector<ScanCell> cells(mu_list.size() * phi_grid.size());
    parallel_for(cells.size(), threads, [&](std::size_t idx) {
        const double mu = mu_list[idx / phi_grid.size()];
        const double phi = phi_grid[idx % phi_grid.size()];
        const auto sol = integrate_mathieu(mu, phi, 50 * M_PI, 1.0, 0.0);
        cells[idx] = ScanCell{mu, phi, sol.stable, sol.growth_rate};
    });
    return cells;
}

struct StabilityBand {
    double mu = 0;
    double phi_low = 0, phi_high = 0;
    double phi_center() const { return 0.5 * (phi_low + phi_high); }
};

// Locate the first stable band at fixed mu from the monodromy trace.
// Between cluster lines the trace passes monotonically across [-2, 2], so a
// sign jump over a coarse cell pins an interior point by bisection even when
// the band is far narrower than any practical phi grid; the edges are then
// found by expanding outward and bisecting |tr| = 2.
inline std::optional<StabilityBand> stability_band(double mu, double phi_lo, double phi_hi,
                                                   std::size_t coarse = 160) {
    auto trace = [&](double phi) { return floquet_trace(mu, phi); };
    auto inside = [&](double phi) { return std::fabs(trace(phi)) <= 2.0; };

    double phi_in = phi_lo;
    bool found = false;
    double prev_phi = phi_lo, prev_tr = trace(prev_phi);
    if (std::fabs(prev_tr) <= 2.0) {
        found = true;
    } else {
        for (std::size_t i = 1; i <= coarse && !found; ++i) {
            const double phi = phi_lo + (phi_hi - phi_lo) * static_cast<double>(i) / coarse;
            const double tr = trace(phi);
            if (std::fabs(tr) <= 2.0) {
                phi_in = phi;
                found = true;
            } else if ((prev_tr > 2.0 && tr < -2.0) || (prev_tr < -2.0 && tr > 2.0)) {
                // the trace sweeps through the band inside this cell
                double a = prev_phi, b = phi, fa = prev_tr;
                for (int it = 0; it < 100; ++it) {
                    const double m = 0.5 * (a + b);
                    const double fm = trace(m);
                    if (std::fabs(fm) <= 2.0) {
                        phi_in = m;
                        found = true;
                        break;
                    }
                    if ((fa < 0) == (fm < 0)) {
                        a = m;
                        fa = fm;
                    } else {
                        b = m;
                    }
                }
                break;
            }
            prev_phi = phi;
            prev_tr = tr;
        }
    }
    if (!found) return std::nullopt;

    auto edge = [&](double direction) {
        double in_pt = phi_in;
        double step = (phi_hi - phi_lo) / (coarse * 64.0);
        double out_pt = in_pt;
        bool exited = false;
        for (int it = 0; it < 200; ++it) {
            out_pt = in_pt + direction * step;
            if (!inside(out_pt)) {
                exited = true;
                break;
            }
            in_pt = out_pt;
            step *= 1.3;
        }
        if (!exited) return in_pt;  // band reaches the scan boundary
        double a = out_pt, b = in_pt;
        for (int it = 0; it < 80; ++it) {
            const double m = 0.5 * (a + b);
            (inside(m) ? b : a) = m;
        }
        return 0.5 * (a + b);
    };
    StabilityBand band;
    band.mu = mu;
    band.phi_low = edge(-1.0);
    band.phi_high = edge(+1.0);
    return band;
}

// ---------------------------------------------------------------------------
// Period-averaged Hamiltonians on a Mathieu trajectory

struct AveragedHamiltonians {
    double h_avg = 0;       // with the cos(2 tau) drive term
    double h_inverted = 0;  // inverted-oscillator form, <2 sin^2 tau> -> 1
};

inline AveragedHamiltonians averaged_hamiltonian(const TrapParams& p, const MathieuSolution& sol) {
    if (sol.tau_grid.size() < 3) throw ValidationError("averaged_hamiltonian: trajectory too short");
    const double period = M_PI;
    if (sol.tau_grid.back() < period)
        throw ValidationError("averaged_hamiltonian: need at least one breathing period");
    const double w = p.omega_lambda;
    if (!(w > 0)) throw ValidationError("averaged_hamiltonian: omega_lambda must be positive");

    double int_avg = 0, int_inv = 0, t_prev = 0, f_prev = 0, g_prev = 0;
    bool first = true;
    for (std::size_t i = 0; i < sol.tau_grid.size() && sol.tau_grid[i] <= period + 1e-12; ++i) {
        const double tau = sol.tau_grid[i];
        const double rho = sol.rho[i];
        const double pr = p.m * w * sol.rho_dot[i];  // p = m drho/dt, drho/dt = w rho'
        const double kin = pr * pr / (2.0 * p.m);
        const double f = kin - 0.25 * p.m * p.omega_hat_sq * rho * rho
            + 0.5 * p.m * p.omega_z * p.omega_z * p.lambda * rho * rho * std::cos(2.0 * tau);
        const double g = kin - 0.25 * p.m * p.omega_z * p.omega_z * rho * rho;
        if (!first) {
            int_avg += 0.5 * (f + f_prev) * (tau - t_prev);
            int_inv += 0.5 * (g + g_prev) * (tau - t_prev);
        }
        t_prev = tau;
        f_prev = f;
        g_prev = g;
        first = false;
    }
    return AveragedHamiltonians{int_avg / period, int_inv / period};
}

}  // namespace fspec
