#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qbm/bath.hpp"
#include "qbm/potential.hpp"
#include "qbm/stats.hpp"

namespace qbm {

struct GleConfig {
    double mass = 1.0;
    PotentialSpec potential;
    QuantumPotentialSpec q_s;
    double gamma0 = 0.0;       // Gamma (Markovian friction / kernel scale)
    double t0 = 0.0;
    double t_end = 1.0;
    double dt = 1e-3;
    double x0 = 0.0;
    double v0 = 0.0;
    bool slip_term = true;     // include -m gamma(t-t0) x(t0)
    std::size_t record_stride = 1;

    void validate() const;
};

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<double> positions;
    std::vector<double> velocities;
    std::vector<double> force_samples;    // F' at the recorded times
    double window_valid_until = 0.0;      // bath recurrence bound
    bool exceeded_recurrence = false;
};

// Generalized Langevin equation
//   m x'' = -grad(V + Q_S) - m gamma(t-t0) x(t0) - m int gamma(t-t') x'(t') dt' + F'(t).
// Lorentzian kernel: the memory integral is carried by the auxiliary state
//   z' = -wc z + wc Gamma x'  (friction force -m z), integrated with RK4.
// Sharp (or any discrete) kernel: direct history convolution with trapezoid
// quadrature and a Heun predictor-corrector step.
TrajectoryRecord integrate_gle(const BathSpec& spec, const CoherentSample& sample,
                               const GleConfig& config);

enum class NoiseMode { sampled_bath, white };

struct NoiseSource {
    NoiseMode mode = NoiseMode::sampled_bath;
    const BathSpec* spec = nullptr;          // sampled_bath
    const CoherentSample* sample = nullptr;  // sampled_bath
    double temperature = 0.0;                // white: intensity 2 m Gamma kT
    std::uint64_t seed = 0;                  // white
    bool zero_force = false;                 // no fluctuating force at all
};

// Markovian limit m x'' = -grad(V + Q_S) - m Gamma x' + F'(t).
// Sampled-bath noise is smooth per realization (classic RK4); white noise
// uses a semi-implicit Euler step.
TrajectoryRecord integrate_markovian(const GleConfig& config, const NoiseSource& noise);

// Time- and ensemble-averaged mean squared displacement on tau_grid. Only
// times t >= burn_in past each record's start enter; throws if the
// post-burn-in span cannot host the largest tau.
std::vector<EnsembleStats> ensemble_msd(std::span<const TrajectoryRecord> records,
                                        std::span<const double> tau_grid,
                                        double burn_in);

// Same averaging for <v(t)^2>.
EnsembleStats ensemble_velocity_variance(std::span<const TrajectoryRecord> records,
                                         double burn_in);

// Time- and ensemble-averaged velocity autocorrelation <v(t+tau) v(t)>.
std::vector<EnsembleStats> ensemble_vacf(std::span<const TrajectoryRecord> records,
                                         std::span<const double> tau_grid,
                                         double burn_in);

struct DiffusionFit {
    double diffusion = 0.0;        // D, from MSD ~ 2 D tau + B tau^2
    double diffusion_err = 0.0;
    double quadratic = 0.0;        // B
    double quadratic_err = 0.0;
};

// Weighted least-squares fit of the MSD to 2 D tau + B tau^2 over the
// window [fit_window.first, fit_window.second].
DiffusionFit estimate_diffusion(std::span<const double> tau_grid,
                                std::span<const EnsembleStats> msd,
                                std::pair<double, double> fit_window);

// T_eff = T (1 + (hbar wc / kT) (wc / 2 pi Gamma)).
double effective_temperature(double temperature, double omega_c, double gamma0);

// Regime classifier of the spreading law: diffusive when
// hbar wc << sqrt(kT hbar / tau), linear spreading in the opposite limit.
enum class SpreadingRegime { diffusive, linear_spreading, crossover };
SpreadingRegime classify_spreading(double temperature, double omega_c, double tau);

// Free-electron arithmetic for gold (SI inputs embedded):
// hbar Gamma = 65.8 meV, E_F = 5.53 eV, lambda_F = 0.55 nm.
struct GoldCase {
    double d_over_dq = 0.0;        // D / D_Q = (4/3) E_F / (hbar Gamma)
    double lambda_ratio = 0.0;     // lambda_F / (v_F tau_r) = pi hbar Gamma / E_F
    double d_q = 0.0;              // hbar / (2 m_e), m^2/s
    double diffusion = 0.0;        // D = d_over_dq * d_q, m^2/s
    double tau_r_inverse_rate = 0.0;   // 1/Gamma = hbar / (hbar Gamma), s
    double tau_r_planck = 0.0;         // h / (hbar Gamma), the 2pi-larger convention, s
    double fermi_temperature = 0.0;    // E_F / k_B, K
};
GoldCase gold_case();

} // namespace qbm
