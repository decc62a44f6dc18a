// propagate.hpp — Fixed-step RK4 integration of the effective Schroedinger
// equation and recording of the dipole autocorrelation function
// c(t) = <Psi_0| e^{-iHt} |Psi_0>.
//
// Traces are recorded in a rotating frame: samples[k] = e^{+i s t_k} c(t_k)
// with demodulation frequency s (default eps + C). This removes the fast
// overall phase at large |V| from both the integrated state and the stored
// samples; the Fourier stage shifts by s exactly, so A(nu) is unchanged.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "aggspec/basis.hpp"
#include "aggspec/errors.hpp"
#include "aggspec/model.hpp"
#include "aggspec/thread_pool.hpp"

namespace aggspec::propagate {

using complexd = std::complex<double>;

struct PropagationOptions {
    double dt{0.0};     // 0 = auto: min(0.02/Omega, 2.2/rho_Gershgorin)
    double t_max{0.0};  // 0 = auto from the expected line width
    double tol{1e-6};   // certification tolerance, per unit time
    double floor{1e-8};       // early-exit threshold on |c|
    double exit_window{0.0};  // |c| must stay below floor this long; 0 = auto
    double demod_frequency{std::numeric_limits<double>::quiet_NaN()};  // NaN = eps + C
    bool certify{true};
    int max_halvings{8};
};

struct TraceMeta {
    std::size_t dimension{0};
    int max_quanta{-1};
    double requested_t_max{0.0};
    double tol{0.0};
    int halvings{0};
    bool certified{false};
    double final_norm{0.0};
};

struct CorrelationTrace {
    double dt{0.0};
    double demod_frequency{0.0};
    bool decayed{false};
    std::vector<complexd> samples;  // e^{+i s t_k} c(t_k), k = 0..K
    TraceMeta meta;

    double t_end() const { return samples.empty() ? 0.0 : dt * (samples.size() - 1); }
    // undo the demodulation
    complexd c(std::size_t k) const {
        return samples[k] * std::exp(complexd(0.0, -demod_frequency * dt * static_cast<double>(k)));
    }
};

namespace detail {

// One RK4 step of d/dt psi = deriv(psi); deriv(in, out) must be linear.
// Scratch vectors are caller-owned to avoid per-step allocation.
template <class Deriv>
void rk4_step(const Deriv& deriv, Eigen::VectorXcd& psi, double dt,
              Eigen::VectorXcd& stage, Eigen::VectorXcd& arg, Eigen::VectorXcd& acc) {
    deriv(psi, stage);                      // k1
    acc = psi + (dt / 6.0) * stage;
    arg = psi + (dt / 2.0) * stage;
    deriv(arg, stage);                      // k2
    acc += (dt / 3.0) * stage;
    arg = psi + (dt / 2.0) * stage;
    deriv(arg, stage);                      // k3
    acc += (dt / 3.0) * stage;
    arg = psi + dt * stage;
    deriv(arg, stage);                      // k4
    acc += (dt / 6.0) * stage;
    psi.swap(acc);
}

struct RunResult {
    std::vector<complexd> samples;
    bool decayed{false};
    double final_norm{0.0};
};

// Integrate with fixed dt, record overlap(psi) each step, stop early once
// |c| has stayed below floor for exit_window time units.
template <class Deriv, class Overlap>
RunResult run_fixed(const Deriv& deriv, const Overlap& overlap,
                    const Eigen::VectorXcd& psi0, double dt, double t_max,
                    double floor, double exit_window) {
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-12));
    const std::size_t window_steps =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(exit_window / dt)));

    Eigen::VectorXcd psi = psi0;
    Eigen::VectorXcd stage(psi.size()), arg(psi.size()), acc(psi.size());

    RunResult r;
    r.samples.reserve(n_steps + 1);
    r.samples.push_back(overlap(psi));
    std::size_t below = 0;
    for (std::size_t k = 0; k < n_steps; ++k) {
        rk4_step(deriv, psi, dt, stage, arg, acc);
        const complexd c = overlap(psi);
        r.samples.push_back(c);
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw divergence_error("propagate: non-finite correlation sample at t = " +
                                   std::to_string((k + 1) * dt));
        below = std::abs(c) < floor ? below + 1 : 0;
        if (below >= window_steps) {
            r.decayed = true;
            break;
        }
        if ((k & 63u) == 63u) {
            const double nrm = psi.norm();
            if (!std::isfinite(nrm) || nrm > 1.001)
                throw divergence_error("propagate: state norm " + std::to_string(nrm) +
                                       " diverged at t = " + std::to_string((k + 1) * dt) +
                                       " (time step too large)");
        }
    }
    r.final_norm = psi.norm();
    if (!r.decayed && !r.samples.empty()) {
        // reached t_max; decayed if the trailing window already sits below floor
        std::size_t tail = std::min(window_steps, r.samples.size());
        r.decayed = true;
        for (std::size_t k = r.samples.size() - tail; k < r.samples.size(); ++k)
            if (std::abs(r.samples[k]) >= floor) { r.decayed = false; break; }
    }
    return r;
}

// Step-halving certification: accept when the dt and dt/2 runs agree on
// every common sample to tol * max(1, t). Returns the finer run.
template <class RunFn>
CorrelationTrace certify(const RunFn& run, double dt0, double tol, int max_halvings) {
    RunResult coarse = run(dt0);
    double dt = dt0;
    for (int h = 0; h <= max_halvings; ++h) {
        RunResult fine = run(dt / 2.0);
        const std::size_t common = std::min(coarse.samples.size(), (fine.samples.size() + 1) / 2);
        bool ok = true;
        for (std::size_t k = 0; k < common && ok; ++k) {
            const double allowed = tol * std::max(1.0, k * dt);
            if (std::abs(coarse.samples[k] - fine.samples[2 * k]) > allowed) ok = false;
        }
        if (ok) {
            CorrelationTrace trace;
            trace.dt = dt / 2.0;
            trace.decayed = fine.decayed;
            trace.samples = std::move(fine.samples);
            trace.meta.halvings = h;
            trace.meta.certified = true;
            trace.meta.final_norm = fine.final_norm;
            return trace;
        }
        coarse = std::move(fine);
        dt /= 2.0;
    }
    throw convergence_error("propagate: step-halving certification failed after " +
                            std::to_string(max_halvings) +
                            " halvings (tolerance unachievable at the given dt)");
}

} // namespace detail

// Integration of d/dt psi = -i (H_eff - s) psi from |bright> (x) |vacuum>.
inline CorrelationTrace propagate_correlation(const basis::EffectiveHamiltonian& h,
                                              PropagationOptions opt = {},
                                              ThreadPool* pool = nullptr) {
    const model::AggregateSpec& agg = h.basis().agg;
    const model::LorentzianBath& bath = h.bath();
    const double omega = bath.center_frequency;

    const double shift = std::isnan(opt.demod_frequency)
                             ? agg.site_energy + agg.effective_shift()
                             : opt.demod_frequency;

    double dt = opt.dt;
    if (dt <= 0.0)
        dt = std::min(0.02 / omega, 2.2 / std::max(1e-12, h.gershgorin_radius(shift)));

    double t_max = opt.t_max;
    if (t_max <= 0.0) {
        // spec-style baseline plus a line-width-based decay horizon:
        // the slowest pole has |Im lambda| ~ gamma_tilde / N.
        t_max = std::max(10.0 / bath.width, 200.0 / omega);
        const double s2 = bath.width * bath.width + omega * omega;
        const double gamma_tilde = bath.bath_strength() * bath.width / s2;
        if (gamma_tilde > 0.0 && opt.floor > 0.0) {
            const double horizon = 20.0 / omega + 1.3 * std::log(1.0 / opt.floor) *
                                                      agg.n_monomers / gamma_tilde;
            t_max = std::max(t_max, horizon);
        }
    }

    const double exit_window =
        opt.exit_window > 0.0 ? opt.exit_window : 3.0 * 2.0 * M_PI / omega;

    const Eigen::VectorXcd psi0 = basis::initial_state(h.basis());
    const double amp = 1.0 / std::sqrt(static_cast<double>(h.basis().n_sites));
    const std::size_t n_occ = h.basis().n_occupations;
    const int n_sites = h.basis().n_sites;

    auto deriv = [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
        h.apply(in.data(), out.data(), shift, /*minus_i=*/true, pool);
    };
    auto overlap = [&](const Eigen::VectorXcd& psi) {
        complexd c = 0.0;
        for (int s = 0; s < n_sites; ++s) c += psi[static_cast<Eigen::Index>(s) * n_occ];
        return amp * c;
    };
    auto run = [&](double step) {
        return detail::run_fixed(deriv, overlap, psi0, step, t_max, opt.floor, exit_window);
    };

    CorrelationTrace trace;
    if (opt.certify) {
        trace = detail::certify(run, dt, opt.tol, opt.max_halvings);
    } else {
        detail::RunResult r = run(dt);
        trace.dt = dt;
        trace.decayed = r.decayed;
        trace.samples = std::move(r.samples);
        trace.meta.final_norm = r.final_norm;
    }
    trace.demod_frequency = shift;
    trace.meta.dimension = h.dimension();
    trace.meta.max_quanta = h.basis().max_total_quanta;
    trace.meta.requested_t_max = t_max;
    trace.meta.tol = opt.tol;
    return trace;
}

// Markovian reference: d/dt psi = (-i H_sys - Gamma_M) psi on the purely
// electronic N-dimensional space.
inline CorrelationTrace propagate_markovian_correlation(const model::AggregateSpec& agg,
                                                        const model::MarkovianBath& bath,
                                                        PropagationOptions opt = {}) {
    agg.validate();
    bath.validate();
    const double shift = std::isnan(opt.demod_frequency)
                             ? agg.site_energy + agg.effective_shift()
                             : opt.demod_frequency;
    const Eigen::MatrixXd h_sys = model::build_electronic_hamiltonian(agg);
    const Eigen::MatrixXcd h_c = h_sys.cast<complexd>();

    double rho = bath.rate;
    for (int i = 0; i < h_sys.rows(); ++i)
        rho = std::max(rho, std::abs(h_sys(i, i) - shift) + h_sys.row(i).cwiseAbs().sum() -
                                std::abs(h_sys(i, i)) + bath.rate);
    double dt = opt.dt > 0.0 ? opt.dt : std::min(0.02, 2.2 / std::max(1e-12, rho));
    double t_max = opt.t_max > 0.0
                       ? opt.t_max
                       : 5.0 + 1.3 * std::log(1.0 / opt.floor) / bath.rate;
    const double exit_window = opt.exit_window > 0.0 ? opt.exit_window : 2.0;

    const Eigen::VectorXcd psi0 = model::bright_state(agg);
    auto deriv = [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
        out = complexd(0.0, -1.0) * (h_c * in - shift * in) - bath.rate * in;
    };
    auto overlap = [&](const Eigen::VectorXcd& psi) { return psi0.dot(psi); };
    auto run = [&](double step) {
        return detail::run_fixed(deriv, overlap, psi0, step, t_max, opt.floor, exit_window);
    };

    CorrelationTrace trace;
    if (opt.certify) {
        trace = detail::certify(run, dt, opt.tol, opt.max_halvings);
    } else {
        detail::RunResult r = run(dt);
        trace.dt = dt;
        trace.decayed = r.decayed;
        trace.samples = std::move(r.samples);
        trace.meta.final_norm = r.final_norm;
    }
    trace.demod_frequency = shift;
    trace.meta.dimension = static_cast<std::size_t>(agg.n_monomers);
    trace.meta.requested_t_max = t_max;
    trace.meta.tol = opt.tol;
    return trace;
}

} // namespace aggspec::propagate
