#include "qbm/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qbm {

namespace {

constexpr double kFFloor = 1e-12;

double trapezoid(const std::vector<double>& y, double h) {
    double s = 0.5 * (y.front() + y.back());
    for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
    return s * h;
}

void check_step(const FieldGrid& grid, double dt) {
    const double lim = 0.8 * fp_stable_dt(grid);
    if (dt > lim * (1.0 + 1e-12))
        throw std::runtime_error("fokker-planck: dt violates the stability bound; "
                                 "use dt <= " + std::to_string(lim));
}

} // namespace

void FieldGrid::validate() const {
    const std::size_t n = x.size();
    if (n < 3) throw std::invalid_argument("field grid: need >= 3 nodes");
    if (rho.size() != n || psi_sq.size() != n || v.size() != n)
        throw std::invalid_argument("field grid: array lengths must match the grid");
    if (!(h > 0.0)) throw std::invalid_argument("field grid: spacing must be > 0");
    if (!(diffusivity >= 0.0)) throw std::invalid_argument("field grid: diffusivity must be >= 0");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(rho[i] >= 0.0)) throw std::invalid_argument("field grid: rho must be nonnegative");
        if (!(psi_sq[i] > 0.0)) throw std::invalid_argument("field grid: |psi|^2 must be positive");
    }
    if (std::abs(trapezoid(rho, h) - 1.0) > 1e-6)
        throw std::invalid_argument("field grid: rho is not normalized");
    if (std::abs(trapezoid(psi_sq, h) - 1.0) > 1e-6)
        throw std::invalid_argument("field grid: |psi|^2 is not normalized");
}

double fp_stable_dt(const FieldGrid& grid) {
    double vmax = 0.0;
    for (double vi : grid.v) vmax = std::max(vmax, std::abs(vi));
    double lim = grid.diffusivity > 0.0 ? grid.h * grid.h / (2.0 * grid.diffusivity)
                                        : std::numeric_limits<double>::infinity();
    if (vmax > 0.0) lim = std::min(lim, grid.h / vmax);
    return lim;
}

namespace {

// One explicit conservative step of d_t p = -d_x(p v) + D d_xx p.
// Zero-flux (reflecting) or periodic edge fluxes; mass is conserved exactly.
void advection_diffusion_step(std::vector<double>& p, const std::vector<double>& v,
                              double D, double h, double dt, FpBoundary boundary,
                              std::vector<double>& flux) {
    const std::size_t n = p.size();
    // flux[i] lives on the face between nodes i and i+1
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double adv = 0.5 * (p[i] * v[i] + p[i + 1] * v[i + 1]);
        const double dif = -D * (p[i + 1] - p[i]) / h;
        flux[i] = adv + dif;
    }
    double left = 0.0, right = 0.0;
    if (boundary == FpBoundary::periodic) {
        const double adv = 0.5 * (p[n - 1] * v[n - 1] + p[0] * v[0]);
        left = right = adv - D * (p[0] - p[n - 1]) / h;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double fl = i == 0 ? left : flux[i - 1];
        const double fr = i + 1 == n ? right : flux[i];
        p[i] -= dt / h * (fr - fl);
    }
}

} // namespace

void evolve_fp_drezet(FieldGrid& grid, double dt, std::size_t n_steps) {
    grid.validate();
    check_step(grid, dt);
    std::vector<double> flux(grid.size());
    for (std::size_t s = 0; s < n_steps; ++s) {
        // rho and |psi|^2 share the same drift and diffusion (and stencil),
        // so f = 1 is an exact discrete fixed point
        advection_diffusion_step(grid.rho, grid.v, grid.diffusivity, grid.h, dt,
                                 grid.boundary, flux);
        advection_diffusion_step(grid.psi_sq, grid.v, grid.diffusivity, grid.h, dt,
                                 grid.boundary, flux);
    }
}

std::size_t evolve_fp_bohm_hiley(FieldGrid& grid, double dt, std::size_t n_steps) {
    grid.validate();
    check_step(grid, dt);
    const std::size_t n = grid.size();
    const double D = grid.diffusivity;
    std::vector<double> flux(n), logf(n);
    std::size_t floored = 0;

    for (std::size_t s = 0; s < n_steps; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            double f = grid.rho[i] / grid.psi_sq[i];
            if (f < kFFloor) {
                f = kFFloor;
                ++floored;
            }
            logf[i] = std::log(f);
        }
        // rho flux: rho v - D rho d_x(ln f), face-centered
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double adv = 0.5 * (grid.rho[i] * grid.v[i] + grid.rho[i + 1] * grid.v[i + 1]);
            const double rho_face = 0.5 * (grid.rho[i] + grid.rho[i + 1]);
            const double osm = -D * rho_face * (logf[i + 1] - logf[i]) / grid.h;
            flux[i] = adv + osm;
        }
        double left = 0.0, right = 0.0;
        if (grid.boundary == FpBoundary::periodic) {
            const double adv = 0.5 * (grid.rho[n - 1] * grid.v[n - 1] + grid.rho[0] * grid.v[0]);
            const double rho_face = 0.5 * (grid.rho[n - 1] + grid.rho[0]);
            left = right = adv - D * rho_face * (logf[0] - logf[n - 1]) / grid.h;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double fl = i == 0 ? left : flux[i - 1];
            const double fr = i + 1 == n ? right : flux[i];
            grid.rho[i] -= dt / grid.h * (fr - fl);
        }
        // |psi|^2 is purely advected
        advection_diffusion_step(grid.psi_sq, grid.v, 0.0, grid.h, dt, grid.boundary, flux);
    }
    return floored;
}

double h_functional(const FieldGrid& grid) {
    std::vector<double> integrand(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.rho[i];
        integrand[i] = r > 0.0 ? r * std::log(r / grid.psi_sq[i]) : 0.0;
    }
    return trapezoid(integrand, grid.h);
}

double h_dissipation_rate(const FieldGrid& grid) {
    const std::size_t n = grid.size();
    std::vector<double> f(n), integrand(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        f[i] = std::max(grid.rho[i] / grid.psi_sq[i], kFFloor);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double df = (f[i + 1] - f[i - 1]) / (2.0 * grid.h);
        integrand[i] = grid.psi_sq[i] * df * df / f[i];
    }
    integrand[0] = integrand[1];
    integrand[n - 1] = integrand[n - 2];
    return -grid.diffusivity * trapezoid(integrand, grid.h);
}

double equilibrium_distance(const FieldGrid& grid) {
    std::vector<double> integrand(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        integrand[i] = std::abs(grid.rho[i] - grid.psi_sq[i]);
    return trapezoid(integrand, grid.h);
}

} // namespace qbm
