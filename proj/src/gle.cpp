#include "qbm/gle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qbm/constants.hpp"

namespace qbm {

namespace {
using constants::hbar;
using constants::kB;

double detect_uniform_dt(const std::vector<double>& times) {
    if (times.size() < 2) throw std::invalid_argument("trajectory record too short");
    const double dt = times[1] - times[0];
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double expect = times[0] + static_cast<double>(i) * dt;
        if (std::abs(times[i] - expect) > 1e-9 * (1.0 + std::abs(expect)))
            throw std::invalid_argument("trajectory record is not uniformly sampled");
    }
    return dt;
}
} // namespace

void GleConfig::validate() const {
    if (!(mass > 0.0)) throw std::invalid_argument("gle: mass must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("gle: dt must be > 0");
    if (!(t_end > t0)) throw std::invalid_argument("gle: t_end must exceed t0");
    if (!(gamma0 >= 0.0)) throw std::invalid_argument("gle: gamma0 must be >= 0");
    potential.validate();
}

namespace {

struct RecordBuilder {
    TrajectoryRecord rec;
    std::size_t stride = 1;

    void start(const GleConfig& config, double window) {
        stride = std::max<std::size_t>(1, config.record_stride);
        rec.window_valid_until = window;
        rec.exceeded_recurrence = config.t_end > window;
    }
    void push(std::size_t k, std::size_t n_steps, double t, double x, double v, double f) {
        if (k % stride == 0 || k == n_steps) {
            rec.times.push_back(t);
            rec.positions.push_back(x);
            rec.velocities.push_back(v);
            rec.force_samples.push_back(f);
        }
    }
};

} // namespace

TrajectoryRecord integrate_gle(const BathSpec& spec, const CoherentSample& sample,
                               const GleConfig& config) {
    config.validate();
    spec.validate();
    const double m = config.mass;
    const double dt = config.dt;
    const auto n_steps =
        static_cast<std::size_t>(std::ceil((config.t_end - config.t0) / dt - 1e-12));

    RecordBuilder rb;
    rb.start(config, config.t0 + spec.recurrence_window());

    auto det_force = [&](double x, double t) {
        return config.potential.force(x) + config.q_s.force(x, t);
    };

    if (spec.cutoff_shape == CutoffShape::lorentzian) {
        // exponential kernel: memory exact via one auxiliary state
        const double wc = spec.cutoff;
        const double gam = spec.gamma0;
        if (dt > 0.05 / wc)
            throw std::runtime_error("integrate_gle: dt too large for the lorentzian kernel; "
                                     "need dt <= 0.05/wc = " + std::to_string(0.05 / wc));
        const std::vector<double> force =
            bath_force_grid(spec, sample, config.t0, 0.5 * dt, 2 * n_steps + 1);

        double x = config.x0, v = config.v0, z = 0.0;
        auto slip = [&](double t) {
            return config.slip_term ? wc * gam * std::exp(-wc * (t - config.t0)) * config.x0 : 0.0;
        };
        rb.push(0, n_steps, config.t0, x, v, force[0]);
        for (std::size_t k = 0; k < n_steps; ++k) {
            const double t = config.t0 + static_cast<double>(k) * dt;
            const double f0 = force[2 * k], fh = force[2 * k + 1], f1 = force[2 * k + 2];
            auto acc = [&](double xx, double vv, double zz, double ff, double tt) {
                return (det_force(xx, tt) + ff) / m - zz - slip(tt);
            };
            auto zdot = [&](double vv, double zz) { return -wc * zz + wc * gam * vv; };

            const double k1x = v, k1v = acc(x, v, z, f0, t), k1z = zdot(v, z);
            const double k2x = v + 0.5 * dt * k1v;
            const double k2v = acc(x + 0.5 * dt * k1x, k2x, z + 0.5 * dt * k1z, fh, t + 0.5 * dt);
            const double k2z = zdot(v + 0.5 * dt * k1v, z + 0.5 * dt * k1z);
            const double k3x = v + 0.5 * dt * k2v;
            const double k3v = acc(x + 0.5 * dt * k2x, k3x, z + 0.5 * dt * k2z, fh, t + 0.5 * dt);
            const double k3z = zdot(v + 0.5 * dt * k2v, z + 0.5 * dt * k2z);
            const double k4x = v + dt * k3v;
            const double k4v = acc(x + dt * k3x, k4x, z + dt * k3z, f1, t + dt);
            const double k4z = zdot(v + dt * k3v, z + dt * k3z);

            x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
            v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            z += dt / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
            rb.push(k + 1, n_steps, t + dt, x, v, f1);
        }
        return rb.rec;
    }

    // generic discrete kernel: trapezoid history convolution, Heun stepping
    double w_max = 0.0;
    for (double w : spec.mode_freq) w_max = std::max(w_max, w);
    if (dt * w_max > 0.2)
        throw std::runtime_error("integrate_gle: dt too large for the discrete kernel; "
                                 "need dt <= 0.2/max(w_n) = " + std::to_string(0.2 / w_max));

    std::vector<double> kernel(n_steps + 1);
    for (std::size_t j = 0; j <= n_steps; ++j)
        kernel[j] = memory_kernel(spec, static_cast<double>(j) * dt);
    const std::vector<double> force = bath_force_grid(spec, sample, config.t0, dt, n_steps + 1);

    std::vector<double> vhist(n_steps + 1, 0.0);
    double x = config.x0, v = config.v0;
    vhist[0] = v;

    auto memory_integral = [&](std::size_t k, double v_end) {
        // int_{t0}^{t_k} gamma(t_k - t') v(t') dt', trapezoid on the stored grid
        if (k == 0) return 0.0;
        double acc = 0.5 * kernel[k] * vhist[0] + 0.5 * kernel[0] * v_end;
        for (std::size_t j = 1; j < k; ++j) acc += kernel[k - j] * vhist[j];
        return acc * dt;
    };
    auto slip = [&](std::size_t k) {
        return config.slip_term ? kernel[k] * config.x0 : 0.0;
    };

    rb.push(0, n_steps, config.t0, x, v, force[0]);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = config.t0 + static_cast<double>(k) * dt;
        const double a0 = (det_force(x, t) + force[k]) / m - slip(k) - memory_integral(k, v);
        const double xp = x + dt * v;
        const double vp = v + dt * a0;
        vhist[k + 1] = vp;  // predictor endpoint for the corrector integral
        const double a1 = (det_force(xp, t + dt) + force[k + 1]) / m - slip(k + 1) -
                          memory_integral(k + 1, vp);
        x += 0.5 * dt * (v + vp);
        v += 0.5 * dt * (a0 + a1);
        vhist[k + 1] = v;
        rb.push(k + 1, n_steps, t + dt, x, v, force[k + 1]);
    }
    return rb.rec;
}

TrajectoryRecord integrate_markovian(const GleConfig& config, const NoiseSource& noise) {
    config.validate();
    const double m = config.mass;
    const double gam = config.gamma0;
    const double dt = config.dt;
    const auto n_steps =
        static_cast<std::size_t>(std::ceil((config.t_end - config.t0) / dt - 1e-12));

    auto det_force = [&](double x, double t) {
        return config.potential.force(x) + config.q_s.force(x, t);
    };

    if (noise.mode == NoiseMode::sampled_bath && !noise.zero_force) {
        if (noise.spec == nullptr || noise.sample == nullptr)
            throw std::invalid_argument("integrate_markovian: sampled-bath noise needs spec+sample");
        const BathSpec& spec = *noise.spec;
        double w_max = 0.0;
        for (double w : spec.mode_freq) w_max = std::max(w_max, w);
        if (dt * w_max > 1.0)
            throw std::runtime_error("integrate_markovian: dt too large for the sampled bath; "
                                     "need dt <= 1.0/max(w_n) = " + std::to_string(1.0 / w_max));

        RecordBuilder rb;
        rb.start(config, config.t0 + spec.recurrence_window());
        const std::vector<double> force =
            bath_force_grid(spec, *noise.sample, config.t0, 0.5 * dt, 2 * n_steps + 1);

        double x = config.x0, v = config.v0;
        rb.push(0, n_steps, config.t0, x, v, force[0]);
        for (std::size_t k = 0; k < n_steps; ++k) {
            const double t = config.t0 + static_cast<double>(k) * dt;
            const double f0 = force[2 * k], fh = force[2 * k + 1], f1 = force[2 * k + 2];
            auto acc = [&](double xx, double vv, double ff, double tt) {
                return (det_force(xx, tt) + ff) / m - gam * vv;
            };
            const double k1x = v, k1v = acc(x, v, f0, t);
            const double k2x = v + 0.5 * dt * k1v;
            const double k2v = acc(x + 0.5 * dt * k1x, k2x, fh, t + 0.5 * dt);
            const double k3x = v + 0.5 * dt * k2v;
            const double k3v = acc(x + 0.5 * dt * k2x, k3x, fh, t + 0.5 * dt);
            const double k4x = v + dt * k3v;
            const double k4v = acc(x + dt * k3x, k4x, f1, t + dt);
            x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
            v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            rb.push(k + 1, n_steps, t + dt, x, v, f1);
        }
        return rb.rec;
    }

    // white noise (or no noise at all): semi-implicit Euler in v
    RecordBuilder rb;
    GleConfig cfg = config;
    rb.start(cfg, std::numeric_limits<double>::infinity());
    RngStream rng(noise.seed);
    const double sigma =
        noise.zero_force ? 0.0 : std::sqrt(2.0 * gam * kB * noise.temperature * dt / m);

    double x = config.x0, v = config.v0;
    rb.push(0, n_steps, config.t0, x, v, 0.0);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = config.t0 + static_cast<double>(k) * dt;
        const double kick = sigma != 0.0 ? sigma * rng.normal(0.0, 1.0) : 0.0;
        v = (v + dt * det_force(x, t) / m + kick) / (1.0 + gam * dt);
        x += dt * v;
        rb.push(k + 1, n_steps, t + dt, x, v, kick / dt * m);
    }
    return rb.rec;
}

std::vector<EnsembleStats> ensemble_msd(std::span<const TrajectoryRecord> records,
                                        std::span<const double> tau_grid,
                                        double burn_in) {
    if (records.empty()) throw std::invalid_argument("ensemble_msd: no records");
    std::vector<Accumulator> acc(tau_grid.size());
    for (const auto& rec : records) {
        const double dt = detect_uniform_dt(rec.times);
        const auto burn =
            static_cast<std::size_t>(std::ceil(burn_in / dt - 1e-9));
        if (burn >= rec.times.size())
            throw std::invalid_argument("ensemble_msd: record shorter than burn-in");
        for (std::size_t j = 0; j < tau_grid.size(); ++j) {
            const double lag_f = tau_grid[j] / dt;
            const auto lag = static_cast<std::size_t>(std::llround(lag_f));
            if (std::abs(lag_f - static_cast<double>(lag)) > 1e-6)
                throw std::invalid_argument("ensemble_msd: tau is not a multiple of the record step");
            if (burn + lag >= rec.times.size())
                throw std::invalid_argument("ensemble_msd: post-burn-in span too short for tau");
            double sum = 0.0;
            std::size_t count = 0;
            for (std::size_t i = burn; i + lag < rec.times.size(); ++i) {
                const double d = rec.positions[i + lag] - rec.positions[i];
                sum += d * d;
                ++count;
            }
            acc[j].add(sum / static_cast<double>(count));
        }
    }
    std::vector<EnsembleStats> out;
    out.reserve(acc.size());
    for (const auto& a : acc) out.push_back(a.stats());
    return out;
}

EnsembleStats ensemble_velocity_variance(std::span<const TrajectoryRecord> records,
                                         double burn_in) {
    if (records.empty()) throw std::invalid_argument("ensemble_velocity_variance: no records");
    Accumulator acc;
    for (const auto& rec : records) {
        const double dt = detect_uniform_dt(rec.times);
        const auto burn = static_cast<std::size_t>(std::ceil(burn_in / dt - 1e-9));
        if (burn >= rec.times.size())
            throw std::invalid_argument("ensemble_velocity_variance: record shorter than burn-in");
        double sum = 0.0;
        for (std::size_t i = burn; i < rec.velocities.size(); ++i)
            sum += rec.velocities[i] * rec.velocities[i];
        acc.add(sum / static_cast<double>(rec.velocities.size() - burn));
    }
    return acc.stats();
}

std::vector<EnsembleStats> ensemble_vacf(std::span<const TrajectoryRecord> records,
                                         std::span<const double> tau_grid,
                                         double burn_in) {
    if (records.empty()) throw std::invalid_argument("ensemble_vacf: no records");
    std::vector<Accumulator> acc(tau_grid.size());
    for (const auto& rec : records) {
        const double dt = detect_uniform_dt(rec.times);
        const auto burn = static_cast<std::size_t>(std::ceil(burn_in / dt - 1e-9));
        for (std::size_t j = 0; j < tau_grid.size(); ++j) {
            const auto lag = static_cast<std::size_t>(std::llround(tau_grid[j] / dt));
            if (burn + lag >= rec.times.size())
                throw std::invalid_argument("ensemble_vacf: post-burn-in span too short for tau");
            double sum = 0.0;
            std::size_t count = 0;
            for (std::size_t i = burn; i + lag < rec.times.size(); ++i) {
                sum += rec.velocities[i + lag] * rec.velocities[i];
                ++count;
            }
            acc[j].add(sum / static_cast<double>(count));
        }
    }
    std::vector<EnsembleStats> out;
    out.reserve(acc.size());
    for (const auto& a : acc) out.push_back(a.stats());
    return out;
}

DiffusionFit estimate_diffusion(std::span<const double> tau_grid,
                                std::span<const EnsembleStats> msd,
                                std::pair<double, double> fit_window) {
    if (tau_grid.size() != msd.size())
        throw std::invalid_argument("estimate_diffusion: grid/stats size mismatch");
    std::vector<double> t, y, s;
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        if (tau_grid[i] < fit_window.first || tau_grid[i] > fit_window.second) continue;
        if (!(tau_grid[i] > 0.0)) continue;
        t.push_back(tau_grid[i]);
        y.push_back(msd[i].mean);
        s.push_back(msd[i].std_error);
    }
    if (t.size() < 2)
        throw std::invalid_argument("estimate_diffusion: fewer than 2 points in the fit window");
    const QuadraticFit fit = fit_linear_quadratic(t, y, s);
    DiffusionFit out;
    out.diffusion = 0.5 * fit.linear;
    out.diffusion_err = 0.5 * fit.linear_err;
    out.quadratic = fit.quadratic;
    out.quadratic_err = fit.quadratic_err;
    return out;
}

double effective_temperature(double temperature, double omega_c, double gamma0) {
    if (!(temperature > 0.0) || !(omega_c > 0.0) || !(gamma0 > 0.0))
        throw std::invalid_argument("effective_temperature: arguments must be positive");
    return temperature * (1.0 + (hbar * omega_c / (kB * temperature)) *
                                    (omega_c / (2.0 * std::numbers::pi * gamma0)));
}

SpreadingRegime classify_spreading(double temperature, double omega_c, double tau) {
    const double scale = std::sqrt(kB * temperature * hbar / tau);
    const double r = hbar * omega_c / scale;
    if (r < 1.0 / 3.0) return SpreadingRegime::diffusive;
    if (r > 3.0) return SpreadingRegime::linear_spreading;
    return SpreadingRegime::crossover;
}

GoldCase gold_case() {
    using namespace constants;
    const double hbar_gamma = 65.8e-3 * electron_volt;   // J
    const double fermi_energy = 5.53 * electron_volt;    // J
    GoldCase g;
    g.d_over_dq = (4.0 / 3.0) * fermi_energy / hbar_gamma;
    g.lambda_ratio = std::numbers::pi * hbar_gamma / fermi_energy;
    g.d_q = hbar_si / (2.0 * electron_mass_si);
    g.diffusion = g.d_over_dq * g.d_q;
    g.tau_r_inverse_rate = hbar_si / hbar_gamma;
    g.tau_r_planck = planck_si / hbar_gamma;
    g.fermi_temperature = fermi_energy / 1.380649e-23;
    return g;
}

} // namespace qbm
