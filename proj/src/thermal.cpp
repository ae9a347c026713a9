#include "qbm/thermal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qbm/constants.hpp"
#include "qbm/parallel.hpp"

namespace qbm {

namespace {
using constants::hbar;
using constants::kB;
constexpr double two_pi = 2.0 * std::numbers::pi;
}

void ThermalSampler::validate() const {
    if (!(temperature > 0.0))
        throw std::invalid_argument("thermal sampler: temperature must be > 0");
    if (n_samples < 1)
        throw std::invalid_argument("thermal sampler: n_samples must be >= 1");
}

double bose_mean_occupation(double omega, double temperature) {
    if (!(temperature > 0.0))
        throw std::invalid_argument("bose_mean_occupation: temperature must be > 0");
    return 1.0 / std::expm1(hbar * omega / (kB * temperature));
}

CoherentState sample_coherent_mode(RngStream& rng, double omega, double mass,
                                   double t0, double temperature) {
    CoherentState s;
    s.mass = mass;
    s.omega = omega;
    s.t0 = t0;
    s.amp0 = std::sqrt(rng.exponential(bose_mean_occupation(omega, temperature)));
    s.sigma = rng.uniform(0.0, two_pi);
    s.offset = rng.normal(0.0, std::sqrt(hbar / (2.0 * mass * omega)));
    s.validate();
    return s;
}

EnsembleStats thermal_average(const std::function<double(const CoherentState&, double)>& observable,
                              const ThermalSampler& sampler, double omega, double mass,
                              double t, int workers) {
    sampler.validate();
    constexpr std::size_t chunk = 4096;
    const std::size_t n_chunks = (sampler.n_samples + chunk - 1) / chunk;
    std::vector<Accumulator> parts(n_chunks);
    parallel_for(n_chunks, workers, [&](std::size_t ci) {
        const std::size_t begin = ci * chunk;
        const std::size_t end = std::min(begin + chunk, sampler.n_samples);
        Accumulator acc;
        for (std::size_t i = begin; i < end; ++i) {
            RngStream rng = RngStream::derived(sampler.seed, i);
            acc.add(observable(sample_coherent_mode(rng, omega, mass, 0.0, sampler.temperature), t));
        }
        parts[ci] = acc;
    });
    Accumulator total;
    for (const auto& p : parts) total.merge(p);
    return total.stats();
}

double potential_moment_analytic(double omega, double /*mass*/, double temperature) {
    return 0.25 * hbar * omega + 0.5 * kB * temperature;
}

double pwi_correlator_single_mode(const CoherentState& s, double t, double tau) {
    const double width = hbar / (2.0 * s.mass * s.omega);
    const double c1 = std::cos(s.omega * (t - s.t0) - s.sigma);
    const double c2 = std::cos(s.omega * (t + tau - s.t0) - s.sigma);
    return width + (2.0 * hbar / (s.mass * s.omega)) * s.amp0 * s.amp0 * c1 * c2;
}

double sigma_averaged_pwi_correlator(double amp0, double omega, double mass, double tau) {
    return hbar / (2.0 * mass * omega) +
           (hbar / (mass * omega)) * amp0 * amp0 * std::cos(omega * tau);
}

double force_correlator_analytic(const BathSpec& spec, double temperature, double tau) {
    return zpf_constant(spec) +
           kB * temperature * spec.system_mass * memory_kernel(spec, tau);
}

ForceStatistics force_statistics_mc(const BathSpec& spec, const ThermalSampler& sampler,
                                    std::span<const double> tau_grid, double t_ref,
                                    int workers) {
    sampler.validate();
    spec.validate();
    if (tau_grid.empty())
        throw std::invalid_argument("force_statistics_mc: tau grid must not be empty");

    const std::size_t n_tau = tau_grid.size();
    const std::size_t n_modes = spec.n_modes();

    // per-(mode, tau) rotation table: cos/sin of w_n * tau_j
    std::vector<double> ct(n_modes * n_tau), st(n_modes * n_tau);
    for (std::size_t i = 0; i < n_modes; ++i)
        for (std::size_t j = 0; j < n_tau; ++j) {
            ct[i * n_tau + j] = std::cos(spec.mode_freq[i] * tau_grid[j]);
            st[i * n_tau + j] = std::sin(spec.mode_freq[i] * tau_grid[j]);
        }
    std::vector<double> mode_scale(n_modes);
    for (std::size_t i = 0; i < n_modes; ++i)
        mode_scale[i] = spec.coupling[i] *
                        std::sqrt(2.0 * hbar / (spec.mode_mass[i] * spec.mode_freq[i]));

    constexpr std::size_t chunk = 1024;
    const std::size_t n_chunks = (sampler.n_samples + chunk - 1) / chunk;
    struct Part {
        Accumulator mean_force;
        std::vector<Accumulator> corr;
    };
    std::vector<Part> parts(n_chunks);
    for (auto& p : parts) p.corr.resize(n_tau);

    parallel_for(n_chunks, workers, [&](std::size_t ci) {
        Part& part = parts[ci];
        std::vector<double> f_tau(n_tau);
        const std::size_t begin = ci * chunk;
        const std::size_t end = std::min(begin + chunk, sampler.n_samples);
        for (std::size_t s = begin; s < end; ++s) {
            RngStream rng = RngStream::derived(sampler.seed, s);
            const CoherentSample sample = sample_thermal_bath(spec, sampler.temperature, rng, 0.0);
            double f0 = 0.0;
            std::fill(f_tau.begin(), f_tau.end(), 0.0);
            for (std::size_t i = 0; i < n_modes; ++i) {
                const double a = mode_scale[i] * sample.amp[i];
                const double theta = spec.mode_freq[i] * (t_ref - sample.t0) - sample.phase[i];
                const double c0 = a * std::cos(theta);
                const double s0 = a * std::sin(theta);
                const double off = spec.coupling[i] * sample.offset[i];
                f0 += c0 + off;
                // cos(theta + w tau_j) expansion from the precomputed table
                const double* crow = &ct[i * n_tau];
                const double* srow = &st[i * n_tau];
                for (std::size_t j = 0; j < n_tau; ++j)
                    f_tau[j] += c0 * crow[j] - s0 * srow[j] + off;
            }
            part.mean_force.add(f0);
            for (std::size_t j = 0; j < n_tau; ++j)
                part.corr[j].add(f_tau[j] * f0);
        }
    });

    ForceStatistics out;
    out.tau.assign(tau_grid.begin(), tau_grid.end());
    Accumulator mean_force;
    std::vector<Accumulator> corr(n_tau);
    for (const auto& p : parts) {
        mean_force.merge(p.mean_force);
        for (std::size_t j = 0; j < n_tau; ++j) corr[j].merge(p.corr[j]);
    }
    out.mean_force = mean_force.stats();
    out.correlator.reserve(n_tau);
    out.analytic.reserve(n_tau);
    for (std::size_t j = 0; j < n_tau; ++j) {
        out.correlator.push_back(corr[j].stats());
        out.analytic.push_back(force_correlator_analytic(spec, sampler.temperature, tau_grid[j]));
    }
    return out;
}

} // namespace qbm
