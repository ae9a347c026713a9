#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qbm/bath.hpp"
#include "qbm/coherent.hpp"
#include "qbm/stats.hpp"

namespace qbm {

// Thermal mixture of coherent states in the Glauber P-representation.
struct ThermalSampler {
    double temperature = 1.0;   // k_B T, reduced units
    std::uint64_t seed = 0;
    std::size_t n_samples = 1;

    void validate() const;
};

// Bose occupation (e^{hbar w/kT} - 1)^-1; the mean of |alpha|^2 in the
// thermal P-function.
double bose_mean_occupation(double omega, double temperature);

// Draws one mode: amp0^2 ~ Exp(<m>_th), sigma ~ U[0,2pi),
// u ~ N(0, hbar/(2 m w)).
CoherentState sample_coherent_mode(RngStream& rng, double omega, double mass,
                                   double t0, double temperature);

// Monte Carlo mean +- standard error of `observable` over M thermal draws.
EnsembleStats thermal_average(const std::function<double(const CoherentState&, double)>& observable,
                              const ThermalSampler& sampler, double omega, double mass,
                              double t, int workers = 1);

// sigma- and thermally-averaged <m w^2 x^2 / 2> = hbar w / 4 + k_B T / 2.
double potential_moment_analytic(double omega, double mass, double temperature);

// |psi|^2-weighted trajectory product x(t+tau) x(t) for one coherent state
// (the u-integral in closed form).
double pwi_correlator_single_mode(const CoherentState& s, double t, double tau);

// Its sigma-average: hbar/(2 m w) + (hbar/(m w)) amp0^2 cos(w tau).
double sigma_averaged_pwi_correlator(double amp0, double omega, double mass, double tau);

// C_F(tau) = A + k_B T m gamma(tau) with the bath's discrete A and gamma.
double force_correlator_analytic(const BathSpec& spec, double temperature, double tau);

struct ForceStatistics {
    std::vector<double> tau;
    std::vector<EnsembleStats> correlator;   // <F'(t+tau) F'(t)>_th
    std::vector<double> analytic;            // A + kT m gamma(tau)
    EnsembleStats mean_force;                // <F'(t_ref)>_th
};

// Samples full bath realizations and estimates the force mean and two-time
// correlator at each tau. Deterministic for fixed (seed, parameters) at any
// worker count: each sample derives its own stream from (seed, index).
ForceStatistics force_statistics_mc(const BathSpec& spec, const ThermalSampler& sampler,
                                    std::span<const double> tau_grid, double t_ref,
                                    int workers = 1);

} // namespace qbm
