#pragma once

#include <stdexcept>
#include <vector>

#include "qbm/coherent.hpp"

namespace qbm {

// External potential V(x): constant, harmonic k x^2/2, or tabulated.
struct PotentialSpec {
    enum class Kind { free, harmonic, tabulated };
    Kind kind = Kind::free;
    double v0 = 0.0;           // constant offset (free)
    double spring_k = 0.0;     // harmonic
    std::vector<double> xs;    // tabulated, strictly increasing
    std::vector<double> vs;

    static PotentialSpec make_free(double v0 = 0.0);
    static PotentialSpec make_harmonic(double k);
    static PotentialSpec make_tabulated(std::vector<double> xs, std::vector<double> vs);

    double value(double x) const;
    double force(double x) const;   // -dV/dx
    void validate() const;          // gradient/value consistency spot checks
};

// Quantum potential of the system S: absent (spatially uniform a_S, zero
// force) or the residual restoring force of a coherent packet.
struct QuantumPotentialSpec {
    enum class Kind { none, coherent_packet };
    Kind kind = Kind::none;
    CoherentState packet;

    static QuantumPotentialSpec make_none() { return {}; }
    static QuantumPotentialSpec make_coherent(const CoherentState& s);

    double force(double x, double t) const;   // -dQ_S/dx
    double value(double x, double t) const;
};

} // namespace qbm
