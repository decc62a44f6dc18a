// spectra.hpp — Absorption spectra from correlation traces:
// A(nu) = Re integral_0^inf dt e^{i nu t} c(t), discretized with trapezoidal
// end weights on the trace's uniform time grid. Total area is pi for any
// decayed trace with c(0) = 1.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "aggspec/errors.hpp"
#include "aggspec/propagate.hpp"
#include "aggspec/thread_pool.hpp"

namespace aggspec::spectra {

using complexd = std::complex<double>;

// Where a spectrum came from; embedded in every emitted file.
struct Provenance {
    std::string kind;  // "lorentzian" | "markovian" | "analytic"
    int n_monomers{0};
    std::string boundary;
    double site_energy{0.0};
    double coupling{0.0};
    double omega{0.0};
    double huang_rhys{0.0};
    double bath_width{0.0};
    double markov_rate{0.0};
    int max_quanta{-1};
    double dt{0.0};
    double t_end{0.0};
    double tol{0.0};
    bool decayed{true};
    bool certified{false};
    std::string note;
};

struct Spectrum {
    double nu_min{0.0};
    double dnu{0.0};
    std::vector<double> values;
    Provenance prov;

    std::size_t size() const { return values.size(); }
    double nu(std::size_t j) const { return nu_min + dnu * static_cast<double>(j); }
    double nu_max() const { return values.empty() ? nu_min : nu(values.size() - 1); }
};

struct TransformOptions {
    bool allow_truncated{false};
    // Diagnostic exponential apodization e^{-rate t}; broadens every line by
    // `rate` (HWHM). Off by default and not used by any shipped pipeline.
    double exp_window_rate{0.0};
};

// Trapezoidal half-line Fourier sum. The trace's demodulation frequency s is
// absorbed into the phase factor e^{i (nu - s) t}. Deterministic: fixed
// per-point summation order, points parallelized over disjoint slots.
inline Spectrum transform(const propagate::CorrelationTrace& trace, double nu_min,
                          double nu_max, double dnu, const TransformOptions& opt = {},
                          ThreadPool* pool = nullptr) {
    if (!(dnu > 0.0) || !(nu_max > nu_min))
        throw config_error("transform: need nu_max > nu_min and dnu > 0");
    if (trace.samples.size() < 2)
        throw config_error("transform: trace has fewer than 2 samples");
    if (!trace.decayed && !opt.allow_truncated)
        throw truncation_error(
            "transform: trace has not decayed below its floor (would ring); "
            "pass allow_truncated to override");

    const std::size_t n_points =
        static_cast<std::size_t>(std::floor((nu_max - nu_min) / dnu + 1e-9)) + 1;
    if (n_points > 50'000'000)
        throw resource_error("transform: frequency grid of " + std::to_string(n_points) +
                             " points exceeds sanity cap");

    const std::size_t n = trace.samples.size();
    const double dt = trace.dt;
    const double s = trace.demod_frequency;

    const complexd* samples = trace.samples.data();
    std::vector<complexd> windowed;
    if (opt.exp_window_rate > 0.0) {
        windowed.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            windowed[k] = trace.samples[k] * std::exp(-opt.exp_window_rate * dt * k);
        samples = windowed.data();
    }

    Spectrum spec;
    spec.nu_min = nu_min;
    spec.dnu = dnu;
    spec.values.assign(n_points, 0.0);

    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            const double mu = (nu_min + dnu * static_cast<double>(j)) - s;
            const complexd rot = std::exp(complexd(0.0, mu * dt));
            complexd phase(1.0, 0.0);
            double acc = samples[0].real();  // t = 0 term, phase = 1
            for (std::size_t k = 1; k < n; ++k) {
                phase *= rot;
                acc += samples[k].real() * phase.real() - samples[k].imag() * phase.imag();
            }
            // trapezoidal end weights
            acc -= 0.5 * samples[0].real();
            acc -= 0.5 * (samples[n - 1].real() * phase.real() -
                          samples[n - 1].imag() * phase.imag());
            spec.values[j] = acc * dt;
        }
    };
    if (pool)
        pool->parallel_for(n_points, worker, 64);
    else
        worker(0, n_points);

    spec.prov.dt = dt;
    spec.prov.t_end = trace.t_end();
    spec.prov.decayed = trace.decayed;
    spec.prov.certified = trace.meta.certified;
    spec.prov.tol = trace.meta.tol;
    spec.prov.max_quanta = trace.meta.max_quanta;
    return spec;
}

// Trapezoidal area.
inline double area(const Spectrum& spec) {
    if (spec.values.size() < 2) return 0.0;
    double acc = 0.0;
    for (double v : spec.values) acc += v;
    acc -= 0.5 * (spec.values.front() + spec.values.back());
    return acc * spec.dnu;
}

// Resample onto a new uniform grid over the same range using local cubic
// (Catmull-Rom) interpolation. Interpolatory: node values are reproduced
// exactly, so identity and refine-then-coarsen round trips are lossless.
inline Spectrum resample(const Spectrum& spec, double dnu_new) {
    if (!(dnu_new > 0.0)) throw config_error("resample: dnu must be > 0");
    if (spec.values.empty()) throw config_error("resample: empty spectrum");
    if (dnu_new == spec.dnu) return spec;

    const std::int64_t n_old = static_cast<std::int64_t>(spec.values.size());
    auto at = [&](std::int64_t i) {
        // clamped edge extension
        if (i < 0) i = 0;
        if (i >= n_old) i = n_old - 1;
        return spec.values[static_cast<std::size_t>(i)];
    };

    Spectrum out;
    out.nu_min = spec.nu_min;
    out.dnu = dnu_new;
    out.prov = spec.prov;
    const std::size_t n_new =
        static_cast<std::size_t>(std::floor((spec.nu_max() - spec.nu_min) / dnu_new + 1e-9)) + 1;
    out.values.resize(n_new);
    for (std::size_t j = 0; j < n_new; ++j) {
        const double u = dnu_new * static_cast<double>(j) / spec.dnu;
        const double nearest = std::round(u);
        if (std::abs(u - nearest) <= 1e-9 * std::max(1.0, std::abs(u))) {
            out.values[j] = at(static_cast<std::int64_t>(nearest));
            continue;
        }
        const auto i = static_cast<std::int64_t>(std::floor(u));
        const double t = u - static_cast<double>(i);
        const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
        const double a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
        const double b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
        const double c = 0.5 * (p2 - p0);
        out.values[j] = ((a * t + b) * t + c) * t + p1;
    }
    return out;
}

} // namespace aggspec::spectra
