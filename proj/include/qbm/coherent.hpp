#pragma once

#include <complex>
#include <utility>

namespace qbm {

// Harmonic-oscillator coherent state |alpha| e^{i sigma} at t0, plus the
// Bohmian integration constant u (particle offset from the packet center).
struct CoherentState {
    double mass = 1.0;
    double omega = 1.0;
    double amp0 = 0.0;     // |alpha(t0)|
    double sigma = 0.0;    // arg alpha(t0), in [0, 2pi)
    double t0 = 0.0;
    double offset = 0.0;   // u

    void validate() const;
};

struct AmplitudePhase {
    double amplitude;  // a(x,t) >= 0
    double phase;      // S(x,t), action units
};

// Packet center <x>_alpha(t) = sqrt(2 hbar/(m w)) |alpha| cos(w (t-t0) - sigma).
double packet_center(const CoherentState& s, double t);

// Polar decomposition psi = a e^{iS/hbar} of the evolving coherent state.
AmplitudePhase wavefunction_amplitude_phase(const CoherentState& s, double x, double t);

// dx/dt = grad S / m = -sqrt(2 hbar w / m) |alpha| sin(w (t-t0) - sigma);
// spatially uniform for a coherent state.
double guidance_velocity(const CoherentState& s, double t);

// x(t) = packet center + u.
double trajectory_position(const CoherentState& s, double t);

// Q(x,t) = hbar w/2 - (m w^2/2) (x - <x>_alpha(t))^2.
double quantum_potential(const CoherentState& s, double x, double t);

// E(t) = -dS/dt on the trajectory; oscillates unless u = 0.
double particle_energy(const CoherentState& s, double t);

// Operator-ordered <alpha| x(t+tau) x(t) |alpha> from oscillator algebra:
// X(t+tau) X(t) + (hbar/2mw) e^{-i w tau}. Not a trajectory average.
std::complex<double> standard_two_time_correlator(const CoherentState& s,
                                                  double t, double tau);

} // namespace qbm
