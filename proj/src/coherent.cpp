#include "qbm/coherent.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qbm/constants.hpp"

namespace qbm {

namespace {
using constants::hbar;
}

void CoherentState::validate() const {
    if (!(mass > 0.0)) throw std::invalid_argument("coherent state: mass must be > 0");
    if (!(omega > 0.0)) throw std::invalid_argument("coherent state: omega must be > 0");
    if (!(amp0 >= 0.0)) throw std::invalid_argument("coherent state: amp0 must be >= 0");
}

double packet_center(const CoherentState& s, double t) {
    return std::sqrt(2.0 * hbar / (s.mass * s.omega)) * s.amp0 *
           std::cos(s.omega * (t - s.t0) - s.sigma);
}

AmplitudePhase wavefunction_amplitude_phase(const CoherentState& s, double x, double t) {
    const double mw = s.mass * s.omega;
    const double xc = packet_center(s, t);
    const double a = std::pow(mw / (std::numbers::pi * hbar), 0.25) *
                     std::exp(-mw / (2.0 * hbar) * (x - xc) * (x - xc));
    // Im[alpha(t)] = -|alpha| sin(w (t-t0) - sigma)
    const double im_alpha = -s.amp0 * std::sin(s.omega * (t - s.t0) - s.sigma);
    const double phase_over_hbar =
        std::sqrt(2.0 * mw / hbar) * im_alpha * x - 0.5 * s.omega * (t - s.t0) +
        0.5 * s.amp0 * s.amp0 * std::sin(2.0 * s.omega * (t - s.t0) - 2.0 * s.sigma);
    return {a, hbar * phase_over_hbar};
}

double guidance_velocity(const CoherentState& s, double t) {
    return -std::sqrt(2.0 * hbar * s.omega / s.mass) * s.amp0 *
           std::sin(s.omega * (t - s.t0) - s.sigma);
}

double trajectory_position(const CoherentState& s, double t) {
    return packet_center(s, t) + s.offset;
}

double quantum_potential(const CoherentState& s, double x, double t) {
    const double d = x - packet_center(s, t);
    return 0.5 * hbar * s.omega - 0.5 * s.mass * s.omega * s.omega * d * d;
}

double particle_energy(const CoherentState& s, double t) {
    return hbar * s.omega * s.amp0 * s.amp0 + 0.5 * hbar * s.omega +
           s.omega * std::sqrt(2.0 * s.mass * hbar * s.omega) * s.offset * s.amp0 *
               std::cos(s.omega * (t - s.t0) - s.sigma);
}

std::complex<double> standard_two_time_correlator(const CoherentState& s,
                                                  double t, double tau) {
    const double x1 = packet_center(s, t);
    const double x2 = packet_center(s, t + tau);
    const double width = hbar / (2.0 * s.mass * s.omega);
    return std::complex<double>(x2 * x1, 0.0) +
           width * std::exp(std::complex<double>(0.0, -s.omega * tau));
}

} // namespace qbm
