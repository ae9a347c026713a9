#pragma once

#include <cstddef>
#include <vector>

namespace qbm {

enum class FpBoundary { reflecting, periodic };

// Uniform 1D grid carrying a trial density rho, the quantum-equilibrium
// reference |psi|^2, a drift velocity field and a scalar diffusivity.
struct FieldGrid {
    std::vector<double> x;
    std::vector<double> rho;
    std::vector<double> psi_sq;
    std::vector<double> v;
    double h = 0.0;
    double diffusivity = 0.0;
    FpBoundary boundary = FpBoundary::reflecting;

    std::size_t size() const { return x.size(); }
    void validate() const;   // normalization, positivity, shapes
};

// Largest stable explicit step (before the 0.8 safety factor).
double fp_stable_dt(const FieldGrid& grid);

// Paired dynamics: both rho and |psi|^2 advance under
//   d_t p = -d_x(p v) + D d_xx p
// through the same conservative stencil, so f = rho/|psi|^2 = 1 is an exact
// discrete fixed point. Refuses dt above 0.8 * fp_stable_dt.
void evolve_fp_drezet(FieldGrid& grid, double dt, std::size_t n_steps);

// Osmotic form: |psi|^2 is purely advected while
//   d_t rho = -d_x(rho v) + D d_x(rho d_x ln f).
// f is floored at 1e-12 inside the log drift; the number of floored nodes is
// returned as a diagnostic.
std::size_t evolve_fp_bohm_hiley(FieldGrid& grid, double dt, std::size_t n_steps);

// H = int rho ln(rho/|psi|^2) dx, trapezoid rule, 0 ln 0 := 0.
double h_functional(const FieldGrid& grid);

// dH/dt = -int D |psi|^2 (grad f)^2 / f dx  (central differences, <= 0).
double h_dissipation_rate(const FieldGrid& grid);

// L1 distance int |rho - |psi|^2| dx.
double equilibrium_distance(const FieldGrid& grid);

} // namespace qbm
