#include "factorspec/trap.hpp"

#include "factorspec/rng.hpp"

#include <catch2/catch.hpp>

using namespace fspec;

namespace {

// a stable two-mode configuration: wall rotating below the magnetron band so
// the equilibrium radius is undetermined and omega_hat reduces to omega_z
TrapParams stable_params(double b_field = 8.0, double omega_z = 2.0, double lambda = 0.02) {
    TrapParams probe = derive_params(1, 1, b_field, omega_z, 0, 0.01);
    const double wall = 0.5 * probe.omega_minus;
    return derive_params(1, 1, b_field, omega_z, lambda, wall);
}

}  // namespace

TEST_CASE("derived trap parameters") {
    SECTION("Omega = 2 sqrt(2) omega_z puts the trap angle at pi/6") {
        const double wz = 1.7;
        const auto p = derive_params(1, 1, 2.0 * std::sqrt(2.0) * wz, wz, 0, 0.05);
        CHECK(p.phi_angle == Approx(M_PI / 6).epsilon(1e-12));
        CHECK(p.omega_minus ==
              Approx(p.omega_c * std::pow(std::sin(M_PI / 12), 2)).epsilon(1e-12));
    }
    SECTION("half-angle identities") {
        for (double b : {4.0, 8.0, 23.0}) {
            const auto p = derive_params(1, 1, b, 1.1, 0.1, 0.2);
            CHECK(p.omega_minus + p.omega_plus == Approx(p.omega_c).epsilon(1e-12));
            CHECK(p.omega_minus * p.omega_plus ==
                  Approx(0.5 * p.omega_z * p.omega_z).epsilon(1e-12));
        }
    }
    SECTION("trap angle undefined when Omega < sqrt(2) omega_z") {
        CHECK_THROWS_AS(derive_params(1, 1, 1.0, 2.0, 0, 0.1), ValidationError);
    }
    SECTION("finite equilibrium radius satisfies its defining equation") {
        const auto p = derive_params(1, 1, 8.0, 2.0, 0.1, 0.7);  // wall inside the band
        REQUIRE(std::isfinite(p.a));
        const double denom =
            p.omega_lambda * p.omega_c - p.omega_lambda * p.omega_lambda - 0.5 * p.omega_z * p.omega_z;
        CHECK(p.a * p.a * p.a * denom == Approx(p.beta / p.m).epsilon(1e-12));
        CHECK(p.omega_hat_sq ==
              Approx(p.omega_z * p.omega_z + 2 * p.beta / (p.m * p.a * p.a * p.a)).epsilon(1e-12));
    }
}

TEST_CASE("mode frequencies") {
    SECTION("static wall reduces to the Penning radial pair") {
        Rng rng(2024);
        for (int i = 0; i < 20; ++i) {
            const double b = 4 + 10 * rng.next_double();
            const double wz = 0.3 + 0.9 * rng.next_double();
            TrapParams p = derive_params(1, 1, b, wz, 0, 1e-6);
            p.omega_lambda = 0;  // static limit
            p.a = std::numeric_limits<double>::infinity();
            p.omega_hat_sq = wz * wz;
            const auto m = mode_frequencies(p);
            REQUIRE(m.has_value());
            const double inner = std::sqrt(p.omega_c * p.omega_c / 4 - p.omega_hat_sq / 2);
            CHECK(m->lambda_plus == Approx(p.omega_c / 2 + inner).epsilon(1e-10));
            CHECK(m->lambda_minus == Approx(p.omega_c / 2 - inner).epsilon(1e-10));
        }
    }
    SECTION("stroboscopic lock sends lambda_minus to zero") {
        const auto p = derive_params(1, 1, 8.0, 2.0, 0.0, 0.1);
        const auto locked = stroboscopic_lock(p);
        const auto m = mode_frequencies(locked);
        REQUIRE(m.has_value());
        CHECK(m->lambda_minus <= 1e-8 * p.omega_c);
        CHECK(m->lambda_plus ==
              Approx(p.omega_c * std::cos(p.phi_angle)).epsilon(1e-12));
    }
    SECTION("degenerate Omega = 2 omega_lambda rejected") {
        auto p = derive_params(1, 1, 8.0, 2.0, 0.0, 0.3);
        p.omega_lambda = 0.5 * p.omega_c;
        CHECK_THROWS_AS(mode_frequencies(p), ValidationError);
    }
    SECTION("equilibrium-radius wall is marginally unstable for any drive") {
        const auto p = derive_params(1, 1, 8.0, 2.0, 0.05, 0.7);
        REQUIRE(std::isfinite(p.a));
        CHECK_FALSE(mode_frequencies(p).has_value());
    }
}

TEST_CASE("stroboscopic lock") {
    const auto p = derive_params(1, 1, 8.0, 2.0, 0.0, 0.1);
    const auto locked = stroboscopic_lock(p);
    CHECK(locked.omega_lambda == Approx(p.omega_minus));
    SECTION("omega_hat collapses to omega_z (the beta correction vanishes)") {
        CHECK(locked.omega_hat_sq == Approx(p.omega_z * p.omega_z).epsilon(1e-12));
        CHECK(std::isinf(locked.a));  // Eq-a3 denominator is identically zero here
    }
}

TEST_CASE("rotating frame integration") {
    const auto p = stable_params();
    SECTION("origin stays at the origin") {
        const auto traj = integrate_rotating_frame(p, 0, 0, 0, 0, 1e-3, 2000);
        for (double v : traj.xi) CHECK(v == 0.0);
        for (double v : traj.zeta) CHECK(v == 0.0);
    }
    SECTION("pure mode matches the closed form") {
        const auto m = mode_frequencies(p);
        REQUIRE(m.has_value());
        const double amp = 0.7;
        const double period = 2 * M_PI / m->lambda_plus;
        const std::size_t steps = 1 << 16;
        const double dt = 10 * period / steps;
        const auto traj =
            integrate_rotating_frame(p, amp, 0, 0, m->c_plus * amp * m->lambda_plus, dt, steps);
        double err = 0, ref = 0;
        for (std::size_t i = 0; i < traj.t.size(); ++i) {
            const double xi_cf = amp * std::cos(m->lambda_plus * traj.t[i]);
            const double ze_cf = m->c_plus * amp * std::sin(m->lambda_plus * traj.t[i]);
            err = std::max({err, std::fabs(traj.xi[i] - xi_cf), std::fabs(traj.zeta[i] - ze_cf)});
            ref = std::max({ref, std::fabs(xi_cf), std::fabs(ze_cf)});
        }
        CHECK(err / ref < 1e-6);
    }
    SECTION("linearity: double the start, double the path") {
        const auto one = integrate_rotating_frame(p, 0.4, 0.1, 0.02, 0.03, 1e-3, 4000);
        const auto two = integrate_rotating_frame(p, 0.8, 0.2, 0.04, 0.06, 1e-3, 4000);
        for (std::size_t i = 0; i < one.t.size(); i += 97)
            CHECK(two.xi[i] == Approx(2 * one.xi[i]).margin(1e-12));
    }
    SECTION("RK4 order: halving dt cuts the closed-form error by >= 8x") {
        const auto m = mode_frequencies(p);
        REQUIRE(m.has_value());
        auto max_err = [&](double dt, std::size_t steps) {
            const auto traj =
                integrate_rotating_frame(p, 1, 0, 0, m->c_plus * m->lambda_plus, dt, steps);
            double err = 0;
            for (std::size_t i = 0; i < traj.t.size(); ++i)
                err = std::max(err, std::fabs(traj.xi[i] - std::cos(m->lambda_plus * traj.t[i])));
            return err;
        };
        const double coarse = max_err(4e-3, 20000);
        const double fine = max_err(2e-3, 40000);
        CHECK(coarse / fine >= 8.0);
    }
    SECTION("resolution guard") {
        CHECK_THROWS_AS(integrate_rotating_frame(p, 1, 0, 0, 0, 1.0, 10), ValidationError);
    }
}

TEST_CASE("frequency extraction") {
    SECTION("pure synthetic tone") {
        Trajectory traj;
        const double f = 0.8123, dt = 0.05;
        const std::size_t n = 1 << 15;
        for (std::size_t i = 0; i < n; ++i) {
            traj.t.push_back(i * dt);
            traj.xi.push_back(std::sin(f * i * dt));
            traj.zeta.push_back(0);
            traj.xi_dot.push_back(0);
            traj.zeta_dot.push_back(0);
        }
        const auto peaks = extract_frequencies(traj, 2);
        REQUIRE_FALSE(peaks.empty());
        CHECK(peaks[0].frequency == Approx(f).epsilon(1e-4));
    }
    SECTION("two-mode trap signal shows both closed-form peaks") {
        const auto p = stable_params();
        const auto m = mode_frequencies(p);
        REQUIRE(m.has_value());
        const double span = 60 * 2 * M_PI / m->lambda_minus;
        const std::size_t samples = 1 << 15;
        std::size_t sub = 1;
        double dt = span / samples;
        const double fast = std::max(p.omega_c, std::sqrt(p.omega_hat_sq));
        if (dt * fast > 0.05) {
            sub = static_cast<std::size_t>(std::ceil(dt * fast / 0.05));
            dt = span / (samples * sub);
        }
        const auto traj = integrate_rotating_frame(p, 1.0, 0.2, 0.1, 0.05, dt, samples * sub, sub);
        const auto peaks = extract_frequencies(traj, 6);
        double err_plus = 1e9, err_minus = 1e9;
        for (const auto& pk : peaks) {
            err_plus = std::min(err_plus, std::fabs(pk.frequency - m->lambda_plus) / m->lambda_plus);
            err_minus =
                std::min(err_minus, std::fabs(pk.frequency - m->lambda_minus) / m->lambda_minus);
        }
        CHECK(err_plus < 1e-4);
        CHECK(err_minus < 1e-4);
    }
    SECTION("constant signal has no peak") {
        Trajectory traj;
        for (std::size_t i = 0; i < 4096; ++i) {
            traj.t.push_back(i * 0.1);
            traj.xi.push_back(3.0);
            traj.zeta.push_back(0);
            traj.xi_dot.push_back(0);
            traj.zeta_dot.push_back(0);
        }
        CHECK(extract_frequencies(traj).empty());
    }
}

TEST_CASE("mathieu integration") {
    SECTION("undriven positive mu grows like cosh") {
        const auto sol = integrate_mathieu(4.0, 0.0, 4 * M_PI, 1.0, 0.0);
        CHECK_FALSE(sol.stable);
        for (std::size_t i = 0; i < sol.tau_grid.size(); i += 500)
            CHECK(sol.rho[i] == Approx(std::cosh(2.0 * sol.tau_grid[i])).epsilon(1e-6));
    }
    SECTION("undriven negative mu oscillates") {
        const auto sol = integrate_mathieu(-4.0, 0.0, 50 * M_PI, 1.0, 0.0);
        CHECK(sol.stable);
        for (std::size_t i = 0; i < sol.tau_grid.size(); i += 500)
            CHECK(sol.rho[i] == Approx(std::cos(2.0 * sol.tau_grid[i])).margin(1e-4));
    }
    SECTION("boundary-tuned solutions are pi-periodic") {
        // inside the band the motion is quasi-periodic; the pi-periodic
        // solution lives on the band edge where the monodromy trace is +2,
        // launched along the unit-multiplier eigenvector
        const auto band = stability_band(4.0, 2.2, 5.2);
        REQUIRE(band.has_value());
        auto column = [&](double phi, double r0, double v0, double& r1, double& v1) {
            const std::size_t steps = 4000;
            const double h = M_PI / steps;
            double r = r0, v = v0, tau = 0;
            auto acl = [&](double rr, double tt) { return (4.0 - 2.0 * phi * std::cos(2 * tt)) * rr; };
            for (std::size_t i = 0; i < steps; ++i) {
                const double k1r = v, k1v = acl(r, tau);
                const double k2r = v + 0.5 * h * k1v, k2v = acl(r + 0.5 * h * k1r, tau + 0.5 * h);
                const double k3r = v + 0.5 * h * k2v, k3v = acl(r + 0.5 * h * k2r, tau + 0.5 * h);
                const double k4r = v + h * k3v, k4v = acl(r + h * k3r, tau + h);
                r += h / 6 * (k1r + 2 * k2r + 2 * k3r + k4r);
                v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
                tau += h;
            }
            r1 = r;
            v1 = v;
        };
        // pick the edge whose trace sits at +2
        double phi_edge = band->phi_low;
        double m00, m10, m01, m11;
        column(phi_edge, 1, 0, m00, m10);
        column(phi_edge, 0, 1, m01, m11);
        if (std::fabs(m00 + m11 - 2.0) > std::fabs(-2.0 - (m00 + m11))) {
            phi_edge = band->phi_high;
            column(phi_edge, 1, 0, m00, m10);
            column(phi_edge, 0, 1, m01, m11);
        }
        REQUIRE(m00 + m11 == Approx(2.0).margin(1e-3));
        double v0 = m01, v1 = 1.0 - m00;
        if (std::fabs(v0) + std::fabs(v1) < 1e-12) {
            v0 = 1.0 - m11;
            v1 = m10;
        }
        const double norm = std::hypot(v0, v1);
        const auto sol = integrate_mathieu(4.0, phi_edge, 8 * M_PI, v0 / norm, v1 / norm);
        double max_abs = 0;
        for (double r : sol.rho) max_abs = std::max(max_abs, std::fabs(r));
        const std::size_t per_period = static_cast<std::size_t>(std::lround(M_PI / 1e-3));
        double worst = 0;
        for (std::size_t i = 0; i + per_period < sol.rho.size(); i += 211)
            worst = std::max(worst, std::fabs(sol.rho[i + per_period] - sol.rho[i]));
        CHECK(worst / max_abs <= 1e-2);
    }
    SECTION("dtau guard") {
        CHECK_THROWS_AS(integrate_mathieu(4, 2, M_PI, 1, 0, 0.01), ValidationError);
    }
}

TEST_CASE("stability structure") {
    SECTION("phi = 0 is unstable for positive mu") {
        for (double mu : {0.5, 4.0, 16.0}) CHECK_FALSE(floquet_stable(mu, 0.0));
    }
    SECTION("bands near mu/2 + O(sqrt(mu))") {
        for (double mu : {4.0, 16.0, 64.0}) {
            const auto band = stability_band(mu, 0.55 * mu, 1.3 * mu);
            REQUIRE(band.has_value());
            const double c = (band->phi_center() - mu / 2) / std::sqrt(mu);
            INFO("mu=" << mu << " center=" << band->phi_center() << " c=" << c);
            CHECK(c > 0.0);
            CHECK(c < 2.0);
        }
    }
    SECTION("band placement grows with mu (reported)") {
        double prev = 0;
        bool monotone = true;
        for (double mu : {4.0, 16.0, 64.0}) {
            const auto band = stability_band(mu, 0.55 * mu, 1.3 * mu);
            REQUIRE(band.has_value());
            if (band->phi_center() <= prev) monotone = false;
            prev = band->phi_center();
        }
        INFO("band centers monotone in mu: " << (monotone ? "yes" : "no"));
        SUCCEED();
    }
    SECTION("envelope classifier agrees with the Floquet oracle") {
        // mixed region: the near-origin stable zone plus unstable surroundings
        std::size_t agree = 0, total = 0;
        for (double mu : {0.05, 0.1, 0.2, 0.3, 0.5, 1.0}) {
            for (double phi : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.3, 1.7}) {
                const bool oracle = floquet_stable(mu, phi);
                const bool classifier = integrate_mathieu(mu, phi, 50 * M_PI, 1.0, 0.0).stable;
                agree += (oracle == classifier);
                ++total;
            }
        }
        CHECK(agree * 100 >= total * 95);
    }
}

TEST_CASE("averaged hamiltonian") {
    SECTION("quadrature of 2 sin^2 over a period") {
        const int n = 3142;
        double acc = 0;
        for (int i = 0; i <= n; ++i) {
            const double tau = M_PI * i / n;
            const double f = 2 * std::sin(tau) * std::sin(tau);
            acc += (i == 0 || i == n) ? 0.5 * f : f;
        }
        acc *= (M_PI / n) / M_PI;
        CHECK(acc == Approx(1.0).margin(1e-10));
    }
    SECTION("zero trajectory averages to zero") {
        const auto p = stable_params();
        auto locked = stroboscopic_lock(p);
        const auto sol = integrate_mathieu(4.0, 3.81, 2 * M_PI, 0.0, 0.0);
        const auto h = averaged_hamiltonian(locked, sol);
        CHECK(h.h_avg == 0.0);
        CHECK(h.h_inverted == 0.0);
    }
    SECTION("drive correlation on a band-center solution (reported)") {
        // the two averages differ at O(1) for every parametrically stabilized
        // solution; recorded measurement, asserted only for finiteness
        const auto band = stability_band(16.0, 9.0, 20.0);
        REQUIRE(band.has_value());
        const double mu = 16.0;
        const double omega = 10.0;
        const double sin_phi = 2.0 * std::sqrt(mu) / (1.0 + mu);
        const double wz = omega * sin_phi / std::sqrt(2.0);
        const auto p = derive_params(1, 1, omega, wz, band->phi_center() / mu, 0.01);
        const auto locked = stroboscopic_lock(p);
        const auto sol = integrate_mathieu(mu, band->phi_center(), 50 * M_PI, 1.0, 0.0);
        REQUIRE(sol.stable);
        const auto h = averaged_hamiltonian(locked, sol);
        CHECK(std::isfinite(h.h_avg));
        CHECK(std::isfinite(h.h_inverted));
        INFO("relative gap " << std::fabs(h.h_avg - h.h_inverted) / std::fabs(h.h_inverted));
        SUCCEED();
    }
}
