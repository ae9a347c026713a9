#include "qbm/potential.hpp"

#include <algorithm>
#include <cmath>

namespace qbm {

PotentialSpec PotentialSpec::make_free(double v0) {
    PotentialSpec p;
    p.kind = Kind::free;
    p.v0 = v0;
    return p;
}

PotentialSpec PotentialSpec::make_harmonic(double k) {
    PotentialSpec p;
    p.kind = Kind::harmonic;
    p.spring_k = k;
    return p;
}

PotentialSpec PotentialSpec::make_tabulated(std::vector<double> xs, std::vector<double> vs) {
    PotentialSpec p;
    p.kind = Kind::tabulated;
    p.xs = std::move(xs);
    p.vs = std::move(vs);
    p.validate();
    return p;
}

double PotentialSpec::value(double x) const {
    switch (kind) {
        case Kind::free: return v0;
        case Kind::harmonic: return 0.5 * spring_k * x * x;
        case Kind::tabulated: {
            if (x <= xs.front()) return vs.front();
            if (x >= xs.back()) return vs.back();
            const auto it = std::upper_bound(xs.begin(), xs.end(), x);
            const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
            const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
            return vs[i] * (1.0 - t) + vs[i + 1] * t;
        }
    }
    return 0.0;
}

double PotentialSpec::force(double x) const {
    switch (kind) {
        case Kind::free: return 0.0;
        case Kind::harmonic: return -spring_k * x;
        case Kind::tabulated: {
            if (x <= xs.front() || x >= xs.back()) return 0.0;
            const auto it = std::upper_bound(xs.begin(), xs.end(), x);
            const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
            return -(vs[i + 1] - vs[i]) / (xs[i + 1] - xs[i]);
        }
    }
    return 0.0;
}

void PotentialSpec::validate() const {
    if (kind != Kind::tabulated) return;
    if (xs.size() != vs.size() || xs.size() < 2)
        throw std::invalid_argument("tabulated potential: need matching arrays, >= 2 nodes");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw std::invalid_argument("tabulated potential: x grid must be increasing");
    // finite-difference consistency of force() against value() at interior points
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
        const double xm = 0.5 * (xs[i] + xs[i + 1]);
        const double h = 1e-3 * (xs[i + 1] - xs[i]);
        const double fd = -(value(xm + h) - value(xm - h)) / (2.0 * h);
        if (std::abs(fd - force(xm)) > 1e-6 * (1.0 + std::abs(fd)))
            throw std::invalid_argument("tabulated potential: gradient inconsistent with values");
    }
}

QuantumPotentialSpec QuantumPotentialSpec::make_coherent(const CoherentState& s) {
    s.validate();
    QuantumPotentialSpec q;
    q.kind = Kind::coherent_packet;
    q.packet = s;
    return q;
}

double QuantumPotentialSpec::force(double x, double t) const {
    if (kind == Kind::none) return 0.0;
    // Q = hbar w/2 - m w^2 (x - X(t))^2 / 2  =>  -dQ/dx = +m w^2 (x - X(t))
    const double w = packet.omega;
    return packet.mass * w * w * (x - packet_center(packet, t));
}

double QuantumPotentialSpec::value(double x, double t) const {
    if (kind == Kind::none) return 0.0;
    return quantum_potential(packet, x, t);
}

} // namespace qbm
