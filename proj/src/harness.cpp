#include "qbm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>

#include "qbm/bath.hpp"
#include "qbm/coherent.hpp"
#include "qbm/constants.hpp"
#include "qbm/csv.hpp"
#include "qbm/fokker_planck.hpp"
#include "qbm/gle.hpp"
#include "qbm/kostin.hpp"
#include "qbm/microscopic.hpp"
#include "qbm/parallel.hpp"
#include "qbm/thermal.hpp"

namespace qbm {

using nlohmann::json;

const char* version_string() { return "0.1.0"; }

const std::vector<std::string>& RunConfig::experiment_names() {
    static const std::vector<std::string> names = {
        "bath-check", "correlator", "gle", "markovian", "relax", "kostin", "gold"};
    return names;
}

json default_params(const std::string& experiment) {
    if (experiment == "bath-check")
        return json{{"gamma0", 1.0},
                    {"cutoff", 1.0},
                    {"n_modes", 4000},
                    {"cutoff_shape", "lorentzian"},
                    {"freq_max", 0.0},
                    {"tau_max_over_inv_cutoff", 5.0},
                    {"n_tau", 512}};
    if (experiment == "correlator")
        return json{{"gamma0", 0.5},
                    {"cutoff", 2.0},
                    {"n_modes", 300},
                    {"cutoff_shape", "sharp"},
                    {"freq_max", 0.0},
                    {"temperature", 200.0},
                    {"n_samples", 100000},
                    {"t_ref", 3.0},
                    {"tau_max", 6.3},
                    {"n_tau", 10}};
    if (experiment == "gle")
        return json{{"gamma0", 0.5},
                    {"cutoff", 2.0},
                    {"n_modes", 256},
                    {"cutoff_shape", "lorentzian"},
                    {"freq_max", 0.0},
                    {"temperature", 10.0},
                    {"mass", 1.0},
                    {"t_end", 20.0},
                    {"dt", 0.005},
                    {"x0", 0.0},
                    {"v0", 0.0},
                    {"slip_term", true},
                    {"record_stride", 10},
                    {"n_realizations", 1},
                    {"potential", json{{"kind", "free"}, {"k", 0.0}}},
                    {"quantum_potential",
                     json{{"kind", "none"}, {"omega", 1.0}, {"amp0", 0.0}, {"sigma", 0.0}, {"offset", 0.0}}}};
    if (experiment == "markovian")
        return json{{"gamma0", 1.0},
                    {"cutoff", 20.0},
                    {"n_modes", 2000},
                    {"cutoff_shape", "sharp"},
                    {"freq_max", 0.0},
                    {"temperature", 8000.0},
                    {"mass", 1.0},
                    {"noise", "sampled_bath"},
                    {"n_realizations", 2000},
                    {"t_end", 568.0},
                    {"dt", 0.04},
                    {"record_stride", 25},
                    {"burn_in", 8.0},
                    {"tau_min", 60.0},
                    {"tau_step", 7.0},
                    {"n_tau", 15},
                    {"fit_min", 60.0},
                    {"fit_max", 158.0}};
    if (experiment == "relax")
        return json{{"n_nodes", 512},
                    {"x_min", -6.0},
                    {"x_max", 6.0},
                    {"diffusivity", 1.0},
                    {"psi", "gaussian"},
                    {"psi_sigma", 1.0},
                    {"velocity", 0.0},
                    {"variant", "both"},
                    {"t_end", 14.0},
                    {"perturbation", 0.3},
                    {"snapshot_every", 0}};
    if (experiment == "kostin")
        return json{{"n_nodes", 384},
                    {"x_min", -8.0},
                    {"x_max", 8.0},
                    {"mass", 1.0},
                    {"omega", 1.0},
                    {"gamma0", 0.2},
                    {"x_c", 1.0},
                    {"v_c", 0.0},
                    {"dt", 1e-3},
                    {"n_periods", 5.0},
                    {"mean_phase_subtraction", false},
                    {"drive", json{{"kind", "none"}, {"amp", 0.0}, {"freq", 1.0}, {"phase", 0.0}}},
                    {"snapshot_every", 0}};
    if (experiment == "gold") return json::object();
    throw std::invalid_argument("unknown experiment '" + experiment + "'");
}

namespace {

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

void check_keys(const json& params, const json& defaults, const std::string& prefix) {
    for (auto it = params.begin(); it != params.end(); ++it) {
        if (!defaults.contains(it.key())) {
            std::string best;
            std::size_t best_d = SIZE_MAX;
            for (auto dit = defaults.begin(); dit != defaults.end(); ++dit) {
                const std::size_t d = edit_distance(it.key(), dit.key());
                if (d < best_d) {
                    best_d = d;
                    best = dit.key();
                }
            }
            throw std::invalid_argument("unknown parameter '" + prefix + it.key() +
                                        "' (nearest valid key: '" + prefix + best + "')");
        }
        if (it.value().is_object() && defaults[it.key()].is_object())
            check_keys(it.value(), defaults[it.key()], prefix + it.key() + ".");
    }
}

json merge_params(const json& defaults, const json& overrides) {
    json out = defaults;
    for (auto it = overrides.begin(); it != overrides.end(); ++it) {
        if (it.value().is_object() && out.contains(it.key()) && out[it.key()].is_object())
            out[it.key()] = merge_params(out[it.key()], it.value());
        else
            out[it.key()] = it.value();
    }
    return out;
}

BathSpec bath_from_params(const json& p) {
    return discretize_ohmic(p.at("gamma0").get<double>(), p.at("cutoff").get<double>(),
                            p.at("n_modes").get<std::size_t>(),
                            cutoff_shape_from_string(p.at("cutoff_shape").get<std::string>()),
                            p.at("freq_max").get<double>());
}

PotentialSpec potential_from_params(const json& p) {
    const std::string kind = p.at("kind").get<std::string>();
    if (kind == "free") return PotentialSpec::make_free();
    if (kind == "harmonic") return PotentialSpec::make_harmonic(p.at("k").get<double>());
    throw std::invalid_argument("potential kind must be free|harmonic");
}

QuantumPotentialSpec qs_from_params(const json& p) {
    const std::string kind = p.at("kind").get<std::string>();
    if (kind == "none") return QuantumPotentialSpec::make_none();
    if (kind == "coherent") {
        CoherentState s;
        s.omega = p.at("omega").get<double>();
        s.amp0 = p.at("amp0").get<double>();
        s.sigma = p.at("sigma").get<double>();
        s.offset = p.at("offset").get<double>();
        return QuantumPotentialSpec::make_coherent(s);
    }
    throw std::invalid_argument("quantum_potential kind must be none|coherent");
}

void write_manifest(const RunConfig& config, const json& params,
                    const std::vector<std::string>& outputs, double wall_s) {
    json m;
    m["experiment"] = config.experiment;
    m["parameters"] = params;
    m["seed"] = config.seed;
    m["workers"] = config.workers;
    m["code_version"] = version_string();
    m["outputs"] = outputs;
    m["wall_time_s"] = wall_s;
    std::ofstream out(config.output_dir / "manifest.json");
    out << m.dump(2) << "\n";
}

void append_summary(const std::filesystem::path& dir, const json& record) {
    std::ofstream out(dir / "summary.jsonl", std::ios::app);
    out << record.dump() << "\n";
}

// ---- individual experiments ------------------------------------------------

json run_bath_check(const RunConfig& config, const json& p,
                    std::vector<std::string>& outputs) {
    const BathSpec spec = bath_from_params(p);
    const double wc = spec.cutoff;
    const double g0 = spec.gamma0;
    const double tau_max = p.at("tau_max_over_inv_cutoff").get<double>() / wc;
    const auto n_tau = p.at("n_tau").get<std::size_t>();

    auto analytic = [&](double tau) {
        if (spec.cutoff_shape == CutoffShape::lorentzian) return wc * g0 * std::exp(-wc * tau);
        return tau == 0.0 ? 2.0 * g0 * wc / std::numbers::pi
                          : 2.0 * g0 * std::sin(wc * tau) / (std::numbers::pi * tau);
    };

    const std::string cols[] = {"tau", "gamma_discrete", "gamma_analytic"};
    CsvWriter csv(config.output_dir / "kernel.csv", cols);
    double max_err = 0.0;
    for (std::size_t i = 0; i < n_tau; ++i) {
        const double tau = tau_max * static_cast<double>(i) / static_cast<double>(n_tau - 1);
        const double gd = memory_kernel(spec, tau);
        const double ga = analytic(tau);
        max_err = std::max(max_err, std::abs(gd - ga));
        const double row[] = {tau, gd, ga};
        csv.row(row);
    }
    outputs.push_back("kernel.csv");
    save_bath(spec, config.output_dir / "bath.txt");
    outputs.push_back("bath.txt");

    const double peak = wc * g0;
    json summary;
    summary["kernel_max_abs_error"] = max_err;
    summary["kernel_max_error_over_peak"] = max_err / peak;
    summary["zpf_constant"] = zpf_constant(spec);
    summary["zpf_sharp_formula"] = spec.system_mass * g0 * constants::hbar * wc * wc /
                                   (2.0 * std::numbers::pi);
    summary["recurrence_window"] = spec.recurrence_window();
    return summary;
}

json run_correlator(const RunConfig& config, const json& p,
                    std::vector<std::string>& outputs) {
    const BathSpec spec = bath_from_params(p);
    ThermalSampler sampler;
    sampler.temperature = p.at("temperature").get<double>();
    sampler.seed = config.seed;
    sampler.n_samples = p.at("n_samples").get<std::size_t>();
    const auto n_tau = p.at("n_tau").get<std::size_t>();
    const double tau_max = p.at("tau_max").get<double>();
    std::vector<double> taus(n_tau);
    for (std::size_t i = 0; i < n_tau; ++i)
        taus[i] = tau_max * static_cast<double>(i) / static_cast<double>(n_tau - 1);

    const ForceStatistics fs = force_statistics_mc(spec, sampler, taus,
                                                   p.at("t_ref").get<double>(), config.workers);

    const std::string cols[] = {"tau", "mc_mean", "mc_stderr", "analytic"};
    CsvWriter csv(config.output_dir / "correlator.csv", cols);
    double worst_sigma = 0.0;
    for (std::size_t i = 0; i < n_tau; ++i) {
        const auto& c = fs.correlator[i];
        const double row[] = {taus[i], c.mean, c.std_error, fs.analytic[i]};
        csv.row(row);
        if (c.std_error > 0.0)
            worst_sigma = std::max(worst_sigma, std::abs(c.mean - fs.analytic[i]) / c.std_error);
    }
    outputs.push_back("correlator.csv");

    json summary;
    summary["mean_force"] = fs.mean_force.mean;
    summary["mean_force_stderr"] = fs.mean_force.std_error;
    summary["worst_correlator_sigma_deviation"] = worst_sigma;
    summary["zpf_constant"] = zpf_constant(spec);
    summary["regime_warning"] = thermal_regime_warning(spec, sampler.temperature);
    return summary;
}

json run_gle(const RunConfig& config, const json& p, std::vector<std::string>& outputs) {
    const BathSpec spec = bath_from_params(p);
    GleConfig gc;
    gc.mass = p.at("mass").get<double>();
    gc.potential = potential_from_params(p.at("potential"));
    gc.q_s = qs_from_params(p.at("quantum_potential"));
    gc.gamma0 = spec.gamma0;
    gc.t_end = p.at("t_end").get<double>();
    gc.dt = p.at("dt").get<double>();
    gc.x0 = p.at("x0").get<double>();
    gc.v0 = p.at("v0").get<double>();
    gc.slip_term = p.at("slip_term").get<bool>();
    gc.record_stride = p.at("record_stride").get<std::size_t>();
    const double temperature = p.at("temperature").get<double>();
    const auto n_real = p.at("n_realizations").get<std::size_t>();

    bool exceeded = false;
    for (std::size_t r = 0; r < n_real; ++r) {
        RngStream rng = RngStream::derived(config.seed, r);
        const CoherentSample sample = sample_thermal_bath(spec, temperature, rng, gc.t0);
        const TrajectoryRecord rec = integrate_gle(spec, sample, gc);
        exceeded = exceeded || rec.exceeded_recurrence;
        const std::string name = "trajectory_" + std::to_string(r) + ".csv";
        const std::string cols[] = {"t", "x", "v", "force"};
        CsvWriter csv(config.output_dir / name, cols);
        for (std::size_t i = 0; i < rec.times.size(); ++i) {
            const double row[] = {rec.times[i], rec.positions[i], rec.velocities[i],
                                  rec.force_samples[i]};
            csv.row(row);
        }
        outputs.push_back(name);
    }
    json summary;
    summary["n_realizations"] = n_real;
    summary["recurrence_window"] = spec.recurrence_window();
    summary["exceeded_recurrence"] = exceeded;
    summary["regime_warning"] = thermal_regime_warning(spec, temperature);
    return summary;
}

json run_markovian(const RunConfig& config, const json& p,
                   std::vector<std::string>& outputs) {
    const BathSpec spec = bath_from_params(p);
    const double temperature = p.at("temperature").get<double>();
    const auto n_real = p.at("n_realizations").get<std::size_t>();
    const std::string noise_kind = p.at("noise").get<std::string>();

    GleConfig gc;
    gc.mass = p.at("mass").get<double>();
    gc.potential = PotentialSpec::make_free();
    gc.gamma0 = spec.gamma0;
    gc.t_end = p.at("t_end").get<double>();
    gc.dt = p.at("dt").get<double>();
    gc.record_stride = p.at("record_stride").get<std::size_t>();

    std::vector<TrajectoryRecord> records(n_real);
    parallel_for(n_real, config.workers, [&](std::size_t r) {
        RngStream rng = RngStream::derived(config.seed, r);
        NoiseSource noise;
        if (noise_kind == "white") {
            noise.mode = NoiseMode::white;
            noise.temperature = temperature;
            noise.seed = RngStream::mix(config.seed, r);
            records[r] = integrate_markovian(gc, noise);
        } else {
            const CoherentSample sample = sample_thermal_bath(spec, temperature, rng, gc.t0);
            noise.mode = NoiseMode::sampled_bath;
            noise.spec = &spec;
            noise.sample = &sample;
            records[r] = integrate_markovian(gc, noise);
        }
    });

    const double burn_in = p.at("burn_in").get<double>();
    const auto n_tau = p.at("n_tau").get<std::size_t>();
    const double tau_min = p.at("tau_min").get<double>();
    const double tau_step = p.at("tau_step").get<double>();
    std::vector<double> taus(n_tau);
    for (std::size_t i = 0; i < n_tau; ++i)
        taus[i] = tau_min + tau_step * static_cast<double>(i);

    const auto msd = ensemble_msd(records, taus, burn_in);
    const auto vacf = ensemble_vacf(records, taus, burn_in);
    const auto v2 = ensemble_velocity_variance(records, burn_in);
    const DiffusionFit fit = estimate_diffusion(
        taus, msd, {p.at("fit_min").get<double>(), p.at("fit_max").get<double>()});

    const std::string cols[] = {"tau", "msd", "msd_stderr", "vacf", "vacf_stderr"};
    CsvWriter csv(config.output_dir / "msd.csv", cols);
    for (std::size_t i = 0; i < n_tau; ++i) {
        const double row[] = {taus[i], msd[i].mean, msd[i].std_error, vacf[i].mean,
                              vacf[i].std_error};
        csv.row(row);
    }
    outputs.push_back("msd.csv");

    const double A = zpf_constant(spec);
    json summary;
    summary["velocity_variance"] = v2.mean;
    summary["velocity_variance_stderr"] = v2.std_error;
    summary["diffusion"] = fit.diffusion;
    summary["diffusion_err"] = fit.diffusion_err;
    summary["quadratic"] = fit.quadratic;
    summary["quadratic_err"] = fit.quadratic_err;
    summary["expected_diffusion"] = constants::kB * temperature / (gc.mass * spec.gamma0);
    summary["expected_quadratic"] = A / (gc.mass * gc.mass * spec.gamma0 * spec.gamma0);
    summary["effective_temperature"] =
        effective_temperature(temperature, spec.cutoff, spec.gamma0);
    summary["zpf_constant"] = A;
    const json fit_rec = {{"D", fit.diffusion},
                          {"D_err", fit.diffusion_err},
                          {"B", fit.quadratic},
                          {"B_err", fit.quadratic_err}};
    std::ofstream dfile(config.output_dir / "diffusion.jsonl");
    dfile << fit_rec.dump() << "\n";
    outputs.push_back("diffusion.jsonl");
    return summary;
}

FieldGrid make_relax_grid(const json& p, std::uint64_t seed) {
    FieldGrid grid;
    const auto n = p.at("n_nodes").get<std::size_t>();
    const double x_min = p.at("x_min").get<double>();
    const double x_max = p.at("x_max").get<double>();
    grid.h = (x_max - x_min) / static_cast<double>(n - 1);
    grid.x.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        grid.x[i] = x_min + grid.h * static_cast<double>(i);
    grid.diffusivity = p.at("diffusivity").get<double>();
    grid.v.assign(n, p.at("velocity").get<double>());

    const std::string psi = p.at("psi").get<std::string>();
    grid.psi_sq.resize(n);
    if (psi == "gaussian") {
        const double s = p.at("psi_sigma").get<double>();
        for (std::size_t i = 0; i < n; ++i)
            grid.psi_sq[i] = std::exp(-grid.x[i] * grid.x[i] / (2.0 * s * s));
    } else if (psi == "uniform") {
        std::fill(grid.psi_sq.begin(), grid.psi_sq.end(), 1.0);
    } else {
        throw std::invalid_argument("relax: psi must be gaussian|uniform");
    }

    // random smooth multiplicative perturbation on top of |psi|^2
    RngStream rng(seed);
    const double amp = p.at("perturbation").get<double>();
    double a[4], ph[4];
    for (int k = 0; k < 4; ++k) {
        a[k] = rng.uniform(-amp, amp);
        ph[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    grid.rho.resize(n);
    const double span = x_max - x_min;
    for (std::size_t i = 0; i < n; ++i) {
        double pert = 1.0;
        for (int k = 0; k < 4; ++k)
            pert += a[k] * std::cos((k + 1) * std::numbers::pi * (grid.x[i] - x_min) / span + ph[k]);
        grid.rho[i] = grid.psi_sq[i] * std::max(pert, 0.05);
    }
    // normalize both densities (trapezoid)
    auto normalize = [&](std::vector<double>& f) {
        double s = 0.5 * (f.front() + f.back());
        for (std::size_t i = 1; i + 1 < n; ++i) s += f[i];
        s *= grid.h;
        for (double& v : f) v /= s;
    };
    normalize(grid.psi_sq);
    normalize(grid.rho);
    return grid;
}

json run_relax(const RunConfig& config, const json& p, std::vector<std::string>& outputs) {
    const std::string variant = p.at("variant").get<std::string>();
    const double t_end = p.at("t_end").get<double>();
    const auto snapshot_every = p.at("snapshot_every").get<std::size_t>();

    json summary = json::object();
    auto run_variant = [&](const std::string& name) {
        FieldGrid grid = make_relax_grid(p, config.seed);
        const double dt = 0.8 * fp_stable_dt(grid) * 0.999;
        const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt));
        const std::string fname = "relax_" + name + ".csv";
        const std::string cols[] = {"t", "H", "dH_dt", "l1_distance"};
        CsvWriter csv(config.output_dir / fname, cols);
        std::unique_ptr<CsvWriter> snap;
        if (snapshot_every > 0) {
            const std::string scol[] = {"t", "x", "rho", "psi_sq"};
            snap = std::make_unique<CsvWriter>(config.output_dir / ("density_" + name + ".csv"), scol);
        }
        const std::size_t report_every = std::max<std::size_t>(1, n_steps / 400);
        double h_prev = h_functional(grid);
        double worst_increase = 0.0;
        for (std::size_t s = 0; s < n_steps; ++s) {
            if (name == "drezet")
                evolve_fp_drezet(grid, dt, 1);
            else
                evolve_fp_bohm_hiley(grid, dt, 1);
            const double h_now = h_functional(grid);
            worst_increase = std::max(worst_increase, h_now - h_prev);
            h_prev = h_now;
            if (s % report_every == 0 || s + 1 == n_steps) {
                const double row[] = {dt * static_cast<double>(s + 1), h_now,
                                      h_dissipation_rate(grid), equilibrium_distance(grid)};
                csv.row(row);
            }
            if (snap && s % snapshot_every == 0)
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const double srow[] = {dt * static_cast<double>(s + 1), grid.x[i],
                                           grid.rho[i], grid.psi_sq[i]};
                    snap->row(srow);
                }
        }
        outputs.push_back(fname);
        summary[name] = {{"final_H", h_prev},
                         {"final_l1", equilibrium_distance(grid)},
                         {"worst_H_increase_per_step", worst_increase},
                         {"dt", dt},
                         {"n_steps", n_steps}};
    };

    if (variant == "drezet" || variant == "both") run_variant("drezet");
    if (variant == "bohm_hiley" || variant == "both") run_variant("bohm_hiley");
    if (variant != "drezet" && variant != "bohm_hiley" && variant != "both")
        throw std::invalid_argument("relax: variant must be drezet|bohm_hiley|both");
    return summary;
}

json run_kostin(const RunConfig& config, const json& p, std::vector<std::string>& outputs) {
    const double mass = p.at("mass").get<double>();
    const double omega = p.at("omega").get<double>();
    const double gamma0 = p.at("gamma0").get<double>();
    KostinState st = make_kostin_coherent(p.at("n_nodes").get<std::size_t>(),
                                          p.at("x_min").get<double>(), p.at("x_max").get<double>(),
                                          mass, omega, p.at("x_c").get<double>(),
                                          p.at("v_c").get<double>());
    st.gamma0 = gamma0;
    st.mean_phase_subtraction = p.at("mean_phase_subtraction").get<bool>();
    const json& dr = p.at("drive");
    const std::string drive_kind = dr.at("kind").get<std::string>();
    if (drive_kind == "const") {
        const double amp = dr.at("amp").get<double>();
        st.drive = [amp](double) { return amp; };
    } else if (drive_kind == "cosine") {
        const double amp = dr.at("amp").get<double>();
        const double freq = dr.at("freq").get<double>();
        const double phase = dr.at("phase").get<double>();
        st.drive = [=](double t) { return amp * std::cos(freq * t + phase); };
    } else if (drive_kind != "none") {
        throw std::invalid_argument("kostin: drive kind must be none|const|cosine");
    }

    const double dt = p.at("dt").get<double>();
    const double omega_damped = std::sqrt(std::max(omega * omega - 0.25 * gamma0 * gamma0, 1e-12));
    const double t_end = p.at("n_periods").get<double>() * 2.0 * std::numbers::pi / omega_damped;
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt));

    // classical damped-oscillator reference for the packet center (RK4)
    double xr = st.mean_position(), vr = p.at("v_c").get<double>();
    const double norm0 = st.norm();

    const std::string cols[] = {"t", "mean_x", "x_classical", "norm"};
    CsvWriter csv(config.output_dir / "kostin_com.csv", cols);
    const auto snapshot_every = p.at("snapshot_every").get<std::size_t>();
    std::unique_ptr<CsvWriter> snap;
    if (snapshot_every > 0) {
        const std::string scol[] = {"t", "x", "re", "im", "density", "phase"};
        snap = std::make_unique<CsvWriter>(config.output_dir / "kostin_field.csv", scol);
    }

    double max_dev = 0.0, max_norm_drift = 0.0;
    const std::size_t report_every = std::max<std::size_t>(1, n_steps / 500);
    for (std::size_t s = 0; s < n_steps; ++s) {
        evolve_kostin(st, dt, 1);
        auto ode = [&](double x, double v) {
            const double f = st.drive ? st.drive(st.t) : 0.0;
            return std::pair{v, -omega * omega * x - gamma0 * v + f / mass};
        };
        // RK4 on the classical reference, same dt
        {
            const auto [k1x, k1v] = ode(xr, vr);
            const auto [k2x, k2v] = ode(xr + 0.5 * dt * k1x, vr + 0.5 * dt * k1v);
            const auto [k3x, k3v] = ode(xr + 0.5 * dt * k2x, vr + 0.5 * dt * k2v);
            const auto [k4x, k4v] = ode(xr + dt * k3x, vr + dt * k3v);
            xr += dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
            vr += dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        }
        const double mx = st.mean_position();
        max_dev = std::max(max_dev, std::abs(mx - xr));
        max_norm_drift = std::max(max_norm_drift, std::abs(st.norm() - norm0));
        if (s % report_every == 0 || s + 1 == n_steps) {
            const double row[] = {st.t, mx, xr, st.norm()};
            csv.row(row);
        }
        if (snap && s % snapshot_every == 0) {
            const auto phase = unwrap_phase(st.field);
            for (std::size_t i = 0; i < st.x.size(); ++i) {
                const double srow[] = {st.t, st.x[i], st.field[i].real(), st.field[i].imag(),
                                       std::norm(st.field[i]), phase[i]};
                snap->row(srow);
            }
        }
    }
    outputs.push_back("kostin_com.csv");

    json summary;
    summary["max_center_deviation"] = max_dev;
    summary["max_norm_drift"] = max_norm_drift;
    summary["n_steps"] = n_steps;
    summary["t_end"] = st.t;
    return summary;
}

json run_gold(const RunConfig& config, const json&, std::vector<std::string>& outputs) {
    const GoldCase g = gold_case();
    std::ofstream rep(config.output_dir / "gold_report.txt");
    rep << "Free-electron diffusion estimate for gold\n";
    rep << "-----------------------------------------\n";
    rep << "inputs: hbar*Gamma = 65.8 meV, E_F = 5.53 eV, lambda_F = 0.55 nm\n\n";
    rep << "D / D_Q              = " << format_double(g.d_over_dq) << "\n";
    rep << "lambda_F/(v_F tau_r) = " << format_double(g.lambda_ratio) << "\n";
    rep << "D_Q = hbar/(2 m_e)   = " << format_double(g.d_q) << " m^2/s\n";
    rep << "D                    = " << format_double(g.diffusion) << " m^2/s\n";
    rep << "T_F                  = " << format_double(g.fermi_temperature) << " K\n";
    rep << "tau_r (1/Gamma)      = " << format_double(g.tau_r_inverse_rate) << " s\n";
    rep << "tau_r (h/(hbar G))   = " << format_double(g.tau_r_planck) << " s\n";
    rep << "\nThe two tau_r lines differ by 2*pi; both conventions are reported\n";
    rep << "rather than silently picking one. Direct evaluation of hbar/(2 m_e)\n";
    rep << "gives 5.79e-5 m^2/s; the commonly quoted rounded value is 5.5e-5.\n";
    outputs.push_back("gold_report.txt");

    json summary;
    summary["d_over_dq"] = g.d_over_dq;
    summary["lambda_ratio"] = g.lambda_ratio;
    summary["d_q"] = g.d_q;
    summary["diffusion"] = g.diffusion;
    summary["tau_r_inverse_rate"] = g.tau_r_inverse_rate;
    summary["tau_r_planck"] = g.tau_r_planck;
    return summary;
}

} // namespace

void validate_params(const std::string& experiment, const json& params) {
    const json defaults = default_params(experiment);
    check_keys(params, defaults, "");
}

RunResult run_experiment(const RunConfig& config) {
    RunResult result;
    const auto start = std::chrono::steady_clock::now();
    try {
        const json defaults = default_params(config.experiment);
        check_keys(config.params, defaults, "");
        const json params = merge_params(defaults, config.params);
        std::filesystem::create_directories(config.output_dir);

        std::vector<std::string> outputs;
        json summary;
        if (config.experiment == "bath-check") summary = run_bath_check(config, params, outputs);
        else if (config.experiment == "correlator") summary = run_correlator(config, params, outputs);
        else if (config.experiment == "gle") summary = run_gle(config, params, outputs);
        else if (config.experiment == "markovian") summary = run_markovian(config, params, outputs);
        else if (config.experiment == "relax") summary = run_relax(config, params, outputs);
        else if (config.experiment == "kostin") summary = run_kostin(config, params, outputs);
        else if (config.experiment == "gold") summary = run_gold(config, params, outputs);
        else throw std::invalid_argument("unknown experiment '" + config.experiment + "'");

        summary["experiment"] = config.experiment;
        summary["seed"] = config.seed;
        append_summary(config.output_dir, summary);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_manifest(config, params, outputs, wall);
        result.summary = summary;
        result.status = RunStatus::ok;
    } catch (const std::invalid_argument& e) {
        result.status = RunStatus::validation_error;
        result.message = e.what();
    } catch (const std::runtime_error& e) {
        result.status = RunStatus::numerical_refusal;
        result.message = e.what();
    }
    return result;
}

RunResult run_sweep(const RunConfig& config, const std::string& axis,
                    const std::vector<double>& values) {
    RunResult result;
    try {
        const json defaults = default_params(config.experiment);
        if (!defaults.contains(axis))
            throw std::invalid_argument("sweep axis '" + axis + "' is not a parameter of " +
                                        config.experiment);
        std::filesystem::create_directories(config.output_dir);
        json merged = json::array();
        for (std::size_t i = 0; i < values.size(); ++i) {
            RunConfig sub = config;
            sub.params = config.params;
            if (defaults.at(axis).is_number_integer())
                sub.params[axis] = static_cast<std::int64_t>(std::llround(values[i]));
            else
                sub.params[axis] = values[i];
            sub.seed = RngStream::mix(config.seed, i);
            sub.output_dir = config.output_dir / (axis + "_" + std::to_string(i));
            const RunResult r = run_experiment(sub);
            if (r.status != RunStatus::ok) return r;
            json row = r.summary;
            row["sweep_axis"] = axis;
            row["sweep_value"] = values[i];
            merged.push_back(row);
        }
        std::ofstream out(config.output_dir / "sweep_summary.jsonl");
        for (const auto& row : merged) out << row.dump() << "\n";
        result.summary = merged;
        result.status = RunStatus::ok;
    } catch (const std::invalid_argument& e) {
        result.status = RunStatus::validation_error;
        result.message = e.what();
    } catch (const std::runtime_error& e) {
        result.status = RunStatus::numerical_refusal;
        result.message = e.what();
    }
    return result;
}

} // namespace qbm
