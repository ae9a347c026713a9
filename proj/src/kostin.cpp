#include "qbm/kostin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qbm/constants.hpp"

namespace qbm {

namespace {
using constants::hbar;
using cplx = std::complex<double>;
}

void KostinState::validate() const {
    const std::size_t n = x.size();
    if (n < 8) throw std::invalid_argument("kostin: need >= 8 grid nodes");
    if (field.size() != n) throw std::invalid_argument("kostin: field/grid size mismatch");
    if (!(h > 0.0)) throw std::invalid_argument("kostin: grid spacing must be > 0");
    if (!(mass > 0.0)) throw std::invalid_argument("kostin: mass must be > 0");
    if (!(gamma0 >= 0.0)) throw std::invalid_argument("kostin: gamma0 must be >= 0");
}

double KostinState::norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double w = (i == 0 || i + 1 == field.size()) ? 0.5 : 1.0;
        s += w * std::norm(field[i]);
    }
    return s * h;
}

double KostinState::mean_position() const {
    double s = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double w = (i == 0 || i + 1 == field.size()) ? 0.5 : 1.0;
        s += w * x[i] * std::norm(field[i]);
    }
    return s * h / norm();
}

double KostinState::energy_expectation() const {
    const std::size_t n = field.size();
    const double f_t = drive ? drive(t) : 0.0;
    double kin = 0.0, pot = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const cplx lap = (field[i + 1] - 2.0 * field[i] + field[i - 1]) / (h * h);
        kin += -(hbar * hbar / (2.0 * mass)) * std::real(std::conj(field[i]) * lap);
        pot += (potential.value(x[i]) - x[i] * f_t) * std::norm(field[i]);
    }
    return (kin + pot) * h / norm();
}

KostinState make_kostin_coherent(std::size_t n_nodes, double x_min, double x_max,
                                 double mass, double omega, double x_c, double v_c) {
    if (n_nodes < 8) throw std::invalid_argument("make_kostin_coherent: need >= 8 nodes");
    KostinState s;
    s.mass = mass;
    s.h = (x_max - x_min) / static_cast<double>(n_nodes - 1);
    s.x.resize(n_nodes);
    s.field.resize(n_nodes);
    s.potential = PotentialSpec::make_harmonic(mass * omega * omega);
    const double mw = mass * omega;
    const double norm_c = std::pow(mw / (std::numbers::pi * hbar), 0.25);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        const double x = x_min + static_cast<double>(i) * s.h;
        s.x[i] = x;
        const double a = norm_c * std::exp(-0.5 * mw / hbar * (x - x_c) * (x - x_c));
        s.field[i] = a * std::exp(cplx(0.0, mass * v_c * x / hbar));
    }
    return s;
}

std::vector<double> unwrap_phase(std::span<const cplx> field, double amplitude_floor) {
    const std::size_t n = field.size();
    std::vector<double> s(n, 0.0);
    if (n == 0) return s;
    const std::size_t mid = n / 2;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    auto raw = [&](std::size_t i) { return std::arg(field[i]); };
    s[mid] = raw(mid);
    double prev = s[mid];
    for (std::size_t i = mid + 1; i < n; ++i) {
        if (std::abs(field[i]) < amplitude_floor) {
            s[i] = prev;   // frozen outside the tracked support
            continue;
        }
        double d = raw(i) - std::remainder(prev, two_pi);
        d = std::remainder(d, two_pi);
        s[i] = prev + d;
        prev = s[i];
    }
    prev = s[mid];
    for (std::size_t i = mid; i-- > 0;) {
        if (std::abs(field[i]) < amplitude_floor) {
            s[i] = prev;
            continue;
        }
        double d = raw(i) - std::remainder(prev, two_pi);
        d = std::remainder(d, two_pi);
        s[i] = prev + d;
        prev = s[i];
    }
    for (double& v : s) v *= hbar;   // action units
    return s;
}

namespace {

// Thomas solve of the complex tridiagonal system (diag d, off-diagonals o).
void solve_tridiag(const std::vector<cplx>& dl, const std::vector<cplx>& d,
                   const std::vector<cplx>& du, std::vector<cplx>& rhs,
                   std::vector<cplx>& scratch) {
    const std::size_t n = d.size();
    scratch.resize(n);
    cplx beta = d[0];
    rhs[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        scratch[i] = du[i - 1] / beta;
        beta = d[i] - dl[i] * scratch[i];
        rhs[i] = (rhs[i] - dl[i] * rhs[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;)
        rhs[i] -= scratch[i + 1] * rhs[i + 1];
}

void apply_phase_half_step(KostinState& st, double dt_half, double drive_force) {
    const std::size_t n = st.field.size();
    std::vector<double> s_tilde;
    double mean_s = 0.0;
    if (st.gamma0 > 0.0) {
        s_tilde = unwrap_phase(st.field);
        if (st.mean_phase_subtraction) {
            double acc = 0.0, nrm = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
                acc += w * s_tilde[i] * std::norm(st.field[i]);
                nrm += w * std::norm(st.field[i]);
            }
            mean_s = acc / nrm;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double u = st.potential.value(st.x[i]) - st.x[i] * drive_force;
        if (st.gamma0 > 0.0) u += st.gamma0 * (s_tilde[i] - mean_s);
        st.field[i] *= std::exp(cplx(0.0, -u * dt_half / hbar));
    }
}

} // namespace

void evolve_kostin(KostinState& state, double dt, std::size_t n_steps,
                   KostinHistory* history, std::size_t history_stride) {
    state.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("evolve_kostin: dt must be > 0");
    if (history_stride == 0) history_stride = 1;
    if (history && n_steps % history_stride != 0)
        throw std::invalid_argument("evolve_kostin: n_steps must be a multiple of history_stride");
    const std::size_t n = state.field.size();
    const double r = hbar * dt / (4.0 * state.mass * state.h * state.h);

    // Crank-Nicolson kinetic half matrices (time-independent)
    std::vector<cplx> dl(n, cplx(0.0, r)), du(n, cplx(0.0, r)), d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = cplx(1.0, -2.0 * r);
    std::vector<cplx> rhs(n), scratch(n);

    auto record = [&](std::size_t step) {
        if (!history) return;
        if (step % history_stride != 0 && step != n_steps) return;
        std::vector<double> amp(n);
        for (std::size_t i = 0; i < n; ++i) amp[i] = std::abs(state.field[i]);
        history->amplitude.push_back(std::move(amp));
        history->phase.push_back(unwrap_phase(state.field));
    };

    if (history) {
        history->t0 = state.t;
        history->dt = dt * static_cast<double>(history_stride);
        history->x = state.x;
        history->h = state.h;
        history->mass = state.mass;
        history->amplitude.clear();
        history->phase.clear();
        record(0);
    }

    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t_mid = state.t + 0.5 * dt;
        const double f_mid = state.drive ? state.drive(t_mid) : 0.0;

        apply_phase_half_step(state, 0.5 * dt, f_mid);
        // (1 + i r L) psi' = (1 - i r L) psi with L the discrete Laplacian
        for (std::size_t i = 0; i < n; ++i) {
            const cplx left = i > 0 ? state.field[i - 1] : cplx(0.0);
            const cplx right = i + 1 < n ? state.field[i + 1] : cplx(0.0);
            rhs[i] = state.field[i] + cplx(0.0, -r) * (left - 2.0 * state.field[i] + right);
        }
        solve_tridiag(dl, d, du, rhs, scratch);
        state.field = rhs;
        apply_phase_half_step(state, 0.5 * dt, f_mid);

        state.t += dt;
        record(k + 1);
    }
}

namespace {

// Catmull-Rom interpolation of a grid function at x.
double cubic_interp(const std::vector<double>& xg, double h, const std::vector<double>& y,
                    double x) {
    const std::size_t n = xg.size();
    double s = (x - xg.front()) / h;
    if (s <= 0.0) return y.front();
    if (s >= static_cast<double>(n - 1)) return y.back();
    auto i = static_cast<std::size_t>(s);
    if (i >= n - 1) i = n - 2;
    const double t = s - static_cast<double>(i);
    const double y0 = i > 0 ? y[i - 1] : 2.0 * y[0] - y[1];
    const double y1 = y[i];
    const double y2 = y[i + 1];
    const double y3 = i + 2 < n ? y[i + 2] : 2.0 * y[n - 1] - y[n - 2];
    const double a = -0.5 * y0 + 1.5 * y1 - 1.5 * y2 + 0.5 * y3;
    const double b = y0 - 2.5 * y1 + 2.0 * y2 - 0.5 * y3;
    const double c = -0.5 * y0 + 0.5 * y2;
    return ((a * t + b) * t + c) * t + y1;
}

} // namespace

std::vector<BohmTrajectory> bohmian_trajectories_from_field(const KostinHistory& history,
                                                            std::span<const double> x_starts) {
    if (history.frames() < 2)
        throw std::invalid_argument("bohmian_trajectories_from_field: need >= 2 frames");
    const std::size_t n = history.x.size();
    const std::size_t frames = history.frames();
    const double dt = history.dt;

    // velocity field v = dS/dx / m per frame, central differences
    std::vector<std::vector<double>> vel(frames, std::vector<double>(n));
    for (std::size_t f = 0; f < frames; ++f) {
        const auto& s = history.phase[f];
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t l = i > 0 ? i - 1 : 0;
            const std::size_t rr = i + 1 < n ? i + 1 : n - 1;
            const double dx = history.h * static_cast<double>(rr - l);
            vel[f][i] = (s[rr] - s[l]) / (dx * history.mass);
        }
    }

    auto v_at = [&](double x, double time) {
        double s = (time - history.t0) / dt;
        s = std::clamp(s, 0.0, static_cast<double>(frames - 1));
        auto f = static_cast<std::size_t>(s);
        if (f >= frames - 1) f = frames - 2;
        const double a = s - static_cast<double>(f);
        const double v0 = cubic_interp(history.x, history.h, vel[f], x);
        const double v1 = cubic_interp(history.x, history.h, vel[f + 1], x);
        return (1.0 - a) * v0 + a * v1;
    };

    std::vector<BohmTrajectory> out(x_starts.size());
    const double x_lo = history.x.front();
    const double x_hi = history.x.back();
    for (std::size_t s = 0; s < x_starts.size(); ++s) {
        BohmTrajectory& tr = out[s];
        double x = x_starts[s];
        tr.times.reserve(frames);
        tr.x.reserve(frames);
        tr.v.reserve(frames);
        for (std::size_t f = 0; f + 1 < frames; ++f) {
            const double t = history.t0 + static_cast<double>(f) * dt;
            tr.times.push_back(t);
            tr.x.push_back(x);
            tr.v.push_back(v_at(x, t));
            const double k1 = v_at(x, t);
            const double k2 = v_at(x + 0.5 * dt * k1, t + 0.5 * dt);
            const double k3 = v_at(x + 0.5 * dt * k2, t + 0.5 * dt);
            const double k4 = v_at(x + dt * k3, t + dt);
            x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (x < x_lo || x > x_hi) {
                tr.truncated = true;
                break;
            }
        }
        if (!tr.truncated) {
            const double t_end = history.t0 + static_cast<double>(frames - 1) * dt;
            tr.times.push_back(t_end);
            tr.x.push_back(x);
            tr.v.push_back(v_at(x, t_end));
        }
    }
    return out;
}

ResidualReport langevin_residual(const KostinHistory& history,
                                 const BohmTrajectory& trajectory,
                                 const PotentialSpec& potential, double gamma0,
                                 const std::function<double(double)>& drive) {
    if (trajectory.times.size() < 3)
        throw std::invalid_argument("langevin_residual: trajectory too short");
    const std::size_t n = history.x.size();
    const std::size_t frames = history.frames();

    // grad(V + Q) on the grid per frame; Q = -hbar^2 a'' / (2 m a)
    std::vector<std::vector<double>> grad_vq(frames, std::vector<double>(n, 0.0));
    std::vector<double> q(n);
    for (std::size_t f = 0; f < frames; ++f) {
        const auto& a = history.amplitude[f];
        for (std::size_t i = 0; i < n; ++i) {
            if (i == 0 || i + 1 == n || a[i] < 1e-12) {
                q[i] = 0.0;
                continue;
            }
            const double lap = (a[i + 1] - 2.0 * a[i] + a[i - 1]) / (history.h * history.h);
            q[i] = -hbar * hbar * lap / (2.0 * history.mass * a[i]);
        }
        for (std::size_t i = 1; i + 1 < n; ++i)
            grad_vq[f][i] = -potential.force(history.x[i]) + (q[i + 1] - q[i - 1]) / (2.0 * history.h);
    }

    auto grad_at = [&](double x, double time) {
        double s = (time - history.t0) / history.dt;
        s = std::clamp(s, 0.0, static_cast<double>(frames - 1));
        auto f = static_cast<std::size_t>(s);
        if (f >= frames - 1) f = frames - 2;
        const double a = s - static_cast<double>(f);
        return (1.0 - a) * cubic_interp(history.x, history.h, grad_vq[f], x) +
               a * cubic_interp(history.x, history.h, grad_vq[f + 1], x);
    };

    ResidualReport rep;
    const double dt = trajectory.times[1] - trajectory.times[0];
    double sum_sq = 0.0;
    for (std::size_t k = 1; k + 1 < trajectory.times.size(); ++k) {
        const double t = trajectory.times[k];
        const double accel = (trajectory.v[k + 1] - trajectory.v[k - 1]) / (2.0 * dt);
        const double f_drive = drive ? drive(t) : 0.0;
        const double r = history.mass * accel + grad_at(trajectory.x[k], t) +
                         history.mass * gamma0 * trajectory.v[k] - f_drive;
        rep.times.push_back(t);
        rep.residual.push_back(r);
        rep.max_abs = std::max(rep.max_abs, std::abs(r));
        sum_sq += r * r;
    }
    rep.rms = std::sqrt(sum_sq / static_cast<double>(rep.residual.size()));
    return rep;
}

} // namespace qbm
