#include "qbm/microscopic.hpp"

#include <cmath>
#include <stdexcept>

#include "qbm/constants.hpp"

namespace qbm {

MicroInit classical_init_from_sample(const BathSpec& spec, const CoherentSample& sample) {
    const std::size_t n = spec.n_modes();
    if (sample.amp.size() != n)
        throw std::invalid_argument("classical_init_from_sample: sample/bath mismatch");
    MicroInit init;
    init.bath_pos.resize(n);
    init.bath_vel.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = spec.mode_freq[i];
        const double scale = std::sqrt(2.0 * constants::hbar / (spec.mode_mass[i] * w));
        init.bath_pos[i] = scale * sample.amp[i] * std::cos(sample.phase[i]) + sample.offset[i];
        init.bath_vel[i] = scale * w * sample.amp[i] * std::sin(sample.phase[i]);
    }
    return init;
}

double microscopic_energy(const BathSpec& spec, const PotentialSpec& potential,
                          double x, double v,
                          std::span<const double> bath_pos,
                          std::span<const double> bath_vel) {
    double e = 0.5 * spec.system_mass * v * v + potential.value(x);
    for (std::size_t i = 0; i < spec.n_modes(); ++i) {
        const double mn = spec.mode_mass[i];
        const double w = spec.mode_freq[i];
        const double shift = bath_pos[i] - spec.coupling[i] * x / (mn * w * w);
        e += 0.5 * mn * bath_vel[i] * bath_vel[i] + 0.5 * mn * w * w * shift * shift;
    }
    return e;
}

MicroTrajectory integrate_full_microscopic(const BathSpec& spec,
                                           const PotentialSpec& potential,
                                           const MicroInit& init,
                                           double t0, double t_end, double dt,
                                           std::size_t record_stride) {
    spec.validate();
    const std::size_t n = spec.n_modes();
    if (init.bath_pos.size() != n || init.bath_vel.size() != n)
        throw std::invalid_argument("microscopic: bath init dimensions mismatch");
    if (!(dt > 0.0) || !(t_end > t0))
        throw std::invalid_argument("microscopic: need dt > 0 and t_end > t0");
    double w_max = 0.0;
    for (double w : spec.mode_freq) w_max = std::max(w_max, w);
    if (dt * w_max > 0.1)
        throw std::runtime_error("microscopic: dt does not resolve the fastest bath mode; "
                                 "need dt <= 0.1/max(w_n) = " + std::to_string(0.1 / w_max));
    if (record_stride == 0) record_stride = 1;

    const double m = spec.system_mass;
    double x = init.x0;
    double v = init.v0;
    std::vector<double> xb = init.bath_pos;
    std::vector<double> vb = init.bath_vel;
    std::vector<double> fb(n);

    auto system_force = [&](double xs, const std::vector<double>& bath) {
        double f = potential.force(xs);
        for (std::size_t i = 0; i < n; ++i) {
            const double mnw2 = spec.mode_mass[i] * spec.mode_freq[i] * spec.mode_freq[i];
            f += spec.coupling[i] * (bath[i] - spec.coupling[i] * xs / mnw2);
        }
        return f;
    };
    auto bath_forces = [&](double xs, const std::vector<double>& bath, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) {
            const double mnw2 = spec.mode_mass[i] * spec.mode_freq[i] * spec.mode_freq[i];
            out[i] = -mnw2 * bath[i] + spec.coupling[i] * xs;
        }
    };

    const auto n_steps = static_cast<std::size_t>(std::ceil((t_end - t0) / dt - 1e-12));
    MicroTrajectory traj;
    traj.times.reserve(n_steps / record_stride + 2);
    traj.x.reserve(traj.times.capacity());
    traj.v.reserve(traj.times.capacity());

    const double e0 = microscopic_energy(spec, potential, x, v, xb, vb);
    double fx = system_force(x, xb);
    bath_forces(x, xb, fb);
    traj.times.push_back(t0);
    traj.x.push_back(x);
    traj.v.push_back(v);

    for (std::size_t k = 0; k < n_steps; ++k) {
        // velocity Verlet over the full (1+N)-body system
        const double half_vx = v + 0.5 * dt * fx / m;
        x += dt * half_vx;
        for (std::size_t i = 0; i < n; ++i) {
            const double half = vb[i] + 0.5 * dt * fb[i] / spec.mode_mass[i];
            xb[i] += dt * half;
            vb[i] = half;
        }
        fx = system_force(x, xb);
        bath_forces(x, xb, fb);
        v = half_vx + 0.5 * dt * fx / m;
        for (std::size_t i = 0; i < n; ++i)
            vb[i] += 0.5 * dt * fb[i] / spec.mode_mass[i];

        if ((k + 1) % record_stride == 0 || k + 1 == n_steps) {
            traj.times.push_back(t0 + static_cast<double>(k + 1) * dt);
            traj.x.push_back(x);
            traj.v.push_back(v);
        }
        const double e = microscopic_energy(spec, potential, x, v, xb, vb);
        traj.energy_drift = std::max(traj.energy_drift, std::abs(e - e0));
    }
    return traj;
}

} // namespace qbm
