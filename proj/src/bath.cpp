#include "qbm/bath.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qbm/constants.hpp"
#include "qbm/csv.hpp"

namespace qbm {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

std::string to_string(CutoffShape shape) {
    return shape == CutoffShape::sharp ? "sharp" : "lorentzian";
}

CutoffShape cutoff_shape_from_string(const std::string& s) {
    if (s == "sharp") return CutoffShape::sharp;
    if (s == "lorentzian") return CutoffShape::lorentzian;
    throw std::invalid_argument("unknown cutoff shape '" + s + "' (sharp|lorentzian)");
}

void BathSpec::validate() const {
    const std::size_t n = mode_freq.size();
    if (n == 0) throw std::invalid_argument("bath: n_modes must be >= 1");
    if (mode_mass.size() != n || coupling.size() != n)
        throw std::invalid_argument("bath: mode arrays must have equal length");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(mode_freq[i] > 0.0) || !std::isfinite(mode_freq[i]))
            throw std::invalid_argument("bath: mode frequencies must be positive and finite");
        if (!(mode_mass[i] > 0.0))
            throw std::invalid_argument("bath: mode masses must be positive");
        if (!std::isfinite(coupling[i]))
            throw std::invalid_argument("bath: couplings must be finite");
    }
    if (!(system_mass > 0.0)) throw std::invalid_argument("bath: system mass must be positive");
    // gamma(0+) of the reconstructed kernel must be finite
    double g0 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        g0 += coupling[i] * coupling[i] / (mode_mass[i] * mode_freq[i] * mode_freq[i]);
    if (!std::isfinite(g0))
        throw std::invalid_argument("bath: reconstructed gamma(0) is not finite");
}

double BathSpec::recurrence_window() const {
    if (mode_freq.size() < 2) return std::numeric_limits<double>::infinity();
    std::vector<double> sorted = mode_freq;
    std::sort(sorted.begin(), sorted.end());
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < sorted.size(); ++i)
        min_gap = std::min(min_gap, sorted[i] - sorted[i - 1]);
    if (!(min_gap > 0.0)) return std::numeric_limits<double>::infinity();
    return two_pi / min_gap;
}

BathSpec discretize_ohmic(double gamma0, double cutoff, std::size_t n_modes,
                          CutoffShape shape, double freq_max) {
    if (!(gamma0 >= 0.0)) throw std::invalid_argument("discretize_ohmic: gamma0 must be >= 0");
    if (!(cutoff > 0.0)) throw std::invalid_argument("discretize_ohmic: cutoff must be > 0");
    if (n_modes < 1) throw std::invalid_argument("discretize_ohmic: n_modes must be >= 1");
    if (freq_max <= 0.0)
        freq_max = shape == CutoffShape::sharp ? cutoff : 30.0 * cutoff;
    if (freq_max < cutoff)
        throw std::invalid_argument("discretize_ohmic: freq_max must be >= cutoff");

    BathSpec spec;
    spec.gamma0 = gamma0;
    spec.cutoff = cutoff;
    spec.freq_max = freq_max;
    spec.cutoff_shape = shape;

    // sharp: g vanishes above wc, so the grid only spans [0, wc]
    const double grid_max = shape == CutoffShape::sharp ? std::min(freq_max, cutoff) : freq_max;
    const double dw = grid_max / static_cast<double>(n_modes);
    spec.mode_mass.assign(n_modes, 1.0);
    spec.mode_freq.resize(n_modes);
    spec.coupling.resize(n_modes);
    const double g_flat = 2.0 * gamma0 / std::numbers::pi;
    for (std::size_t n = 0; n < n_modes; ++n) {
        const double w = (static_cast<double>(n) + 0.5) * dw;
        spec.mode_freq[n] = w;
        double g = g_flat;
        if (shape == CutoffShape::lorentzian)
            g *= cutoff * cutoff / (w * w + cutoff * cutoff);
        // c_n^2 = m m_n w_n^2 g(w_n) dw, with m = m_n = 1
        spec.coupling[n] = std::sqrt(std::max(0.0, spec.system_mass * w * w * g * dw));
    }
    spec.validate();
    return spec;
}

double memory_kernel(const BathSpec& spec, double tau) {
    double acc = 0.0;
    const std::size_t n = spec.n_modes();
    for (std::size_t i = 0; i < n; ++i) {
        const double w = spec.mode_freq[i];
        const double c = spec.coupling[i];
        acc += c * c / (spec.mode_mass[i] * w * w) * std::cos(w * tau);
    }
    return acc / spec.system_mass;
}

double zpf_constant(const BathSpec& spec) {
    double acc = 0.0;
    for (std::size_t i = 0; i < spec.n_modes(); ++i) {
        const double w = spec.mode_freq[i];
        const double c = spec.coupling[i];
        acc += c * c / (spec.mode_mass[i] * w * w) * 0.5 * constants::hbar * w;
    }
    return acc;
}

namespace {

void check_sample(const BathSpec& spec, const CoherentSample& sample) {
    const std::size_t n = spec.n_modes();
    if (sample.amp.size() != n || sample.phase.size() != n || sample.offset.size() != n)
        throw std::invalid_argument("bath sample dimensions do not match the bath");
}

} // namespace

double bath_force(const BathSpec& spec, const CoherentSample& sample, double t) {
    check_sample(spec, sample);
    double f = 0.0;
    for (std::size_t n = 0; n < spec.n_modes(); ++n) {
        const double w = spec.mode_freq[n];
        const double xn = std::sqrt(2.0 * constants::hbar / (spec.mode_mass[n] * w)) *
                              sample.amp[n] * std::cos(w * (t - sample.t0) - sample.phase[n]) +
                          sample.offset[n];
        f += spec.coupling[n] * xn;
    }
    return f;
}

std::vector<double> bath_force_grid(const BathSpec& spec, const CoherentSample& sample,
                                    double t_start, double dt, std::size_t n_points) {
    check_sample(spec, sample);
    const std::size_t n = spec.n_modes();
    std::vector<double> out(n_points, 0.0);
    if (n_points == 0) return out;

    double f_static = 0.0;
    std::vector<double> p(n), q(n), cd(n), sd(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = spec.mode_freq[i];
        const double a = spec.coupling[i] *
                         std::sqrt(2.0 * constants::hbar / (spec.mode_mass[i] * w)) *
                         sample.amp[i];
        const double theta = w * (t_start - sample.t0) - sample.phase[i];
        p[i] = a * std::cos(theta);
        q[i] = a * std::sin(theta);
        cd[i] = std::cos(w * dt);
        sd[i] = std::sin(w * dt);
        f_static += spec.coupling[i] * sample.offset[i];
    }
    for (std::size_t k = 0; k < n_points; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += p[i];
            const double pn = p[i] * cd[i] - q[i] * sd[i];
            q[i] = q[i] * cd[i] + p[i] * sd[i];
            p[i] = pn;
        }
        out[k] = acc + f_static;
    }
    return out;
}

CoherentSample sample_thermal_bath(const BathSpec& spec, double temperature,
                                   RngStream& rng, double t0) {
    if (!(temperature > 0.0))
        throw std::invalid_argument("sample_thermal_bath: temperature must be > 0");
    const std::size_t n = spec.n_modes();
    CoherentSample s;
    s.t0 = t0;
    s.amp.resize(n);
    s.phase.resize(n);
    s.offset.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = spec.mode_freq[i];
        const double mean_occ = 1.0 / std::expm1(constants::hbar * w / (constants::kB * temperature));
        s.amp[i] = std::sqrt(rng.exponential(mean_occ));
        s.phase[i] = rng.uniform(0.0, two_pi);
        s.offset[i] = rng.normal(0.0, std::sqrt(constants::hbar / (2.0 * spec.mode_mass[i] * w)));
    }
    return s;
}

bool thermal_regime_warning(const BathSpec& spec, double temperature) {
    for (double w : spec.mode_freq)
        if (constants::hbar * w / (constants::kB * temperature) > 0.3) return true;
    return false;
}

void save_bath(const BathSpec& spec, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << "# qbm bath v1\n";
    out << "gamma0 " << format_double(spec.gamma0) << "\n";
    out << "cutoff " << format_double(spec.cutoff) << "\n";
    out << "freq_max " << format_double(spec.freq_max) << "\n";
    out << "cutoff_shape " << to_string(spec.cutoff_shape) << "\n";
    out << "system_mass " << format_double(spec.system_mass) << "\n";
    out << "n_modes " << spec.n_modes() << "\n";
    out << "# mode: index mass freq coupling\n";
    for (std::size_t i = 0; i < spec.n_modes(); ++i)
        out << "mode " << i << " " << format_double(spec.mode_mass[i]) << " "
            << format_double(spec.mode_freq[i]) << " "
            << format_double(spec.coupling[i]) << "\n";
}

BathSpec load_bath(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    BathSpec spec;
    std::size_t declared = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        if (key == "gamma0") ss >> spec.gamma0;
        else if (key == "cutoff") ss >> spec.cutoff;
        else if (key == "freq_max") ss >> spec.freq_max;
        else if (key == "system_mass") ss >> spec.system_mass;
        else if (key == "cutoff_shape") {
            std::string s;
            ss >> s;
            spec.cutoff_shape = cutoff_shape_from_string(s);
        } else if (key == "n_modes") ss >> declared;
        else if (key == "mode") {
            std::size_t idx;
            double m, w, c;
            if (!(ss >> idx >> m >> w >> c))
                throw std::runtime_error("bath file: malformed mode record: " + line);
            spec.mode_mass.push_back(m);
            spec.mode_freq.push_back(w);
            spec.coupling.push_back(c);
        } else {
            throw std::runtime_error("bath file: unknown record '" + key + "'");
        }
    }
    if (declared != spec.n_modes())
        throw std::runtime_error("bath file: mode count mismatch");
    spec.validate();
    return spec;
}

void export_kernel_csv(const BathSpec& spec, const std::filesystem::path& path,
                       double tau_max, std::size_t n_points) {
    if (n_points < 2) throw std::invalid_argument("export_kernel_csv: need >= 2 points");
    const std::string cols[] = {"tau", "gamma"};
    CsvWriter csv(path, cols);
    csv.comment("A = " + format_double(zpf_constant(spec)));
    for (std::size_t i = 0; i < n_points; ++i) {
        const double tau = tau_max * static_cast<double>(i) / static_cast<double>(n_points - 1);
        const double row[] = {tau, memory_kernel(spec, tau)};
        csv.row(row);
    }
}

} // namespace qbm
