#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "qbm/rng.hpp"

namespace qbm {

enum class CutoffShape { sharp, lorentzian };

std::string to_string(CutoffShape shape);
CutoffShape cutoff_shape_from_string(const std::string& s);

// Discretized Caldeira-Leggett oscillator bath. The tagged particle couples
// bilinearly to each mode; c_n carries the full coupling scale (mode masses
// default to 1 since m_n only ever enters through c_n^2 / (m_n w_n^2)).
struct BathSpec {
    std::vector<double> mode_mass;
    std::vector<double> mode_freq;
    std::vector<double> coupling;
    double gamma0 = 0.0;       // Gamma, friction rate
    double cutoff = 0.0;       // w_c
    double freq_max = 0.0;     // upper edge of the discretization grid
    CutoffShape cutoff_shape = CutoffShape::lorentzian;
    double system_mass = 1.0;

    std::size_t n_modes() const { return mode_freq.size(); }
    void validate() const;     // throws std::invalid_argument on bad data

    // Quasi-period of the discrete bath: dissipation statistics are only
    // meaningful for t - t0 below this span.
    double recurrence_window() const;
};

// One thermal-bath realization: per-mode coherent amplitude |alpha_n|,
// phase sigma_n and Bohmian offset u_n, all frozen at t0.
struct CoherentSample {
    std::vector<double> amp;
    std::vector<double> phase;
    std::vector<double> offset;
    double t0 = 0.0;
};

// Midpoint discretization of the Ohmic spectral density
//   g(w) = 2*Gamma/pi                    on [0, wc]            (sharp)
//   g(w) = (2*Gamma/pi) wc^2/(w^2+wc^2)  on [0, freq_max]      (lorentzian)
// with w_n = (n - 1/2) dw and c_n^2 = m m_n w_n^2 g(w_n) dw.
// freq_max <= 0 selects the default (wc for sharp, 30*wc for lorentzian).
BathSpec discretize_ohmic(double gamma0, double cutoff, std::size_t n_modes,
                          CutoffShape shape, double freq_max = 0.0);

// gamma(tau) = (1/m) sum_n c_n^2/(m_n w_n^2) cos(w_n tau); even in tau.
double memory_kernel(const BathSpec& spec, double tau);

// A = sum_n c_n^2/(m_n w_n^2) * hbar w_n / 2, the zero-point floor of the
// force correlator.
double zpf_constant(const BathSpec& spec);

// Fluctuating force F'(t) = sum_n c_n x_n(t) along the per-mode Bohmian
// coherent trajectories of `sample`.
double bath_force(const BathSpec& spec, const CoherentSample& sample, double t);

// F' evaluated on a uniform time grid t_start + k*dt, k = 0..n_points-1.
// Rotation recurrences per mode; no trig in the inner loop.
std::vector<double> bath_force_grid(const BathSpec& spec, const CoherentSample& sample,
                                    double t_start, double dt, std::size_t n_points);

// Thermal draw of a full bath realization: amp^2 ~ Exp(<m>_th) with the Bose
// mean (e^{hbar w/kT}-1)^-1, sigma ~ U[0,2pi), u ~ N(0, hbar/(2 m_n w_n)).
CoherentSample sample_thermal_bath(const BathSpec& spec, double temperature,
                                   RngStream& rng, double t0 = 0.0);

// True when hbar*w/kT > 0.3 for any mode, i.e. the high-temperature
// P-representation regime is violated.
bool thermal_regime_warning(const BathSpec& spec, double temperature);

// Plain-text serialization, one mode per record.
void save_bath(const BathSpec& spec, const std::filesystem::path& path);
BathSpec load_bath(const std::filesystem::path& path);

// Two-column CSV (tau, gamma) plus the A constant in the header comment.
void export_kernel_csv(const BathSpec& spec, const std::filesystem::path& path,
                       double tau_max, std::size_t n_points);

} // namespace qbm
