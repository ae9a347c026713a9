#pragma once

#include <vector>

#include "qbm/bath.hpp"
#include "qbm/potential.hpp"

namespace qbm {

// Initial phase-space point of the full (1+N)-body classical system.
struct MicroInit {
    double x0 = 0.0;
    double v0 = 0.0;
    std::vector<double> bath_pos;
    std::vector<double> bath_vel;
};

// Classical initial conditions matching a coherent sample at t0. With
// offset = 0 the free classical mode evolution coincides with the Bohmian
// coherent trajectory, which is what makes the GLE oracle comparison exact.
MicroInit classical_init_from_sample(const BathSpec& spec, const CoherentSample& sample);

struct MicroTrajectory {
    std::vector<double> times;
    std::vector<double> x;
    std::vector<double> v;
    double energy_drift = 0.0;   // max |E(t) - E(t0)| over the run
};

// Velocity-Verlet integration of the coupled Newton equations of the system
// plus bath Hamiltonian (classical oracle; no quantum potentials). Refuses
// dt that fails to resolve the fastest bath mode (dt > 0.1 / max w_n).
MicroTrajectory integrate_full_microscopic(const BathSpec& spec,
                                           const PotentialSpec& potential,
                                           const MicroInit& init,
                                           double t0, double t_end, double dt,
                                           std::size_t record_stride = 1);

// Full Hamiltonian of Eq.-(1) form, for conservation checks.
double microscopic_energy(const BathSpec& spec, const PotentialSpec& potential,
                          double x, double v,
                          std::span<const double> bath_pos,
                          std::span<const double> bath_vel);

} // namespace qbm
