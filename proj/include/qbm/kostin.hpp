#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qbm/potential.hpp"

namespace qbm {

// Nonlinear Schrodinger-Langevin (Kostin) state on a uniform grid with box
// boundaries. The dissipative term is the phase-proportional Gamma*S with S
// the unwrapped phase, applied as a local phase rotation, so it is exactly
// norm-preserving node by node.
struct KostinState {
    std::vector<double> x;
    double h = 0.0;
    std::vector<std::complex<double>> field;
    double mass = 1.0;
    double gamma0 = 0.0;
    PotentialSpec potential;
    std::function<double(double)> drive;   // F(t); empty means 0
    bool mean_phase_subtraction = false;   // use Gamma (S - <S>) instead
    double t = 0.0;

    void validate() const;
    double norm() const;                   // int |psi|^2 dx
    double mean_position() const;
    double energy_expectation() const;     // <p^2/2m + V - xF(t)>
};

// Gaussian coherent packet of the harmonic well k = m w^2 centered on
// (x_c, v_c); used as an initial field.
KostinState make_kostin_coherent(std::size_t n_nodes, double x_min, double x_max,
                                 double mass, double omega, double x_c, double v_c);

// Unwrapped phase S (action units) from the grid center outward. Nodes whose
// amplitude is below `floor` freeze the running phase instead of adding
// their (meaningless) increment.
std::vector<double> unwrap_phase(std::span<const std::complex<double>> field,
                                 double amplitude_floor = 1e-10);

// Recorded evolution for trajectory extraction: amplitude and unwrapped
// phase at every stride-th step.
struct KostinHistory {
    double t0 = 0.0;
    double dt = 0.0;        // time between stored frames
    std::vector<double> x;
    double h = 0.0;
    double mass = 1.0;
    std::vector<std::vector<double>> amplitude;
    std::vector<std::vector<double>> phase;   // S, action units
    std::size_t frames() const { return amplitude.size(); }
};

// Strang splitting: half phase rotation (V - xF + Gamma S), Crank-Nicolson
// kinetic step, half phase rotation. With gamma0 = 0 and no drive this is a
// plain unitary Crank-Nicolson Schrodinger step.
void evolve_kostin(KostinState& state, double dt, std::size_t n_steps,
                   KostinHistory* history = nullptr, std::size_t history_stride = 1);

struct BohmTrajectory {
    std::vector<double> times;
    std::vector<double> x;
    std::vector<double> v;
    bool truncated = false;   // left the grid support
};

// Integrates dx/dt = (1/m) dS/dx with cubic interpolation in x and linear
// interpolation in t over the stored history.
std::vector<BohmTrajectory> bohmian_trajectories_from_field(const KostinHistory& history,
                                                            std::span<const double> x_starts);

struct ResidualReport {
    std::vector<double> times;
    std::vector<double> residual;   // m x'' + grad(V+Q) + m Gamma x' - F(t)
    double max_abs = 0.0;
    double rms = 0.0;
};

// Checks the dissipative Newton law along an extracted trajectory, with
// Q = -hbar^2 a'' / (2 m a) evaluated from the stored amplitude.
ResidualReport langevin_residual(const KostinHistory& history,
                                 const BohmTrajectory& trajectory,
                                 const PotentialSpec& potential, double gamma0,
                                 const std::function<double(double)>& drive = {});

} // namespace qbm
