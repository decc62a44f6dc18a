// analytic.hpp — Closed-form reference results: the bath correlation
// function, the Markovian Lorentzian line, the purely electronic line
// position, and the exact monomer correlation function / series spectrum
// for the Lorentzian bath at zero temperature.
//
// These are the oracles the numerical pipeline is validated against.

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "aggspec/errors.hpp"
#include "aggspec/model.hpp"

namespace aggspec::analytic {

using complexd = std::complex<double>;

// alpha(tau) = Gamma exp(-i Omega tau - gamma tau), tau >= 0.
// Inverse transform of the Lorentzian J(w) with the full-line convention.
inline complexd bath_correlation(const model::LorentzianBath& bath, double tau) {
    const double gamma = bath.width;
    const double omega = bath.center_frequency;
    return bath.bath_strength() *
           std::exp(complexd(-gamma * tau, -omega * tau));
}

// Position eps + C of the purely electronic absorption line.
inline double electronic_line_position(const model::AggregateSpec& agg) {
    return agg.site_energy + agg.effective_shift();
}

// Markovian line shape, 1/(2 pi) normalization (integrates to 1/2).
// The half-line transform convention used by the pipeline carries an extra
// factor 2 pi (total area pi); see markovian_lineshape_half_line.
inline double markovian_spectrum(const model::AggregateSpec& agg,
                                 const model::MarkovianBath& bath,
                                 double nu) {
    const double d = nu - electronic_line_position(agg);
    return bath.rate / (2.0 * M_PI * (d * d + bath.rate * bath.rate));
}

// Same Lorentzian rescaled to the half-line Fourier convention (area pi),
// directly comparable with spectra::transform output.
inline double markovian_lineshape_half_line(const model::AggregateSpec& agg,
                                            const model::MarkovianBath& bath,
                                            double nu) {
    return 2.0 * M_PI * markovian_spectrum(agg, bath, nu);
}

// Derived quantities of the monomer series spectrum.
//   w            = gamma + i Omega
//   gamma_tilde  = Gamma gamma / (gamma^2 + Omega^2)   (k = 0 HWHM)
//   omega_tilde  = Gamma Omega / (gamma^2 + Omega^2)   (k = 0 red shift)
//   theta        = 2 Gamma gamma Omega / (gamma^2 + Omega^2)^2
//   q            = full-quadrant phase of (gamma^2 - Omega^2) - 2 i gamma Omega
// The full-quadrant q absorbs the sign(gamma^2 - Omega^2) factor of the
// principal-branch arctan form; the combination is fixed by the identity
// Gamma / w^2 = (gamma_tilde / gamma) e^{i q}.
struct MonomerSeriesParams {
    complexd w;
    double gamma_tilde{0.0};
    double omega_tilde{0.0};
    double theta{0.0};
    double q{0.0};
    double prefactor_exponent{0.0};  // (gamma_tilde^2 - omega_tilde^2) / Gamma
    double log_ratio{0.0};           // ln(gamma_tilde / gamma)

    static MonomerSeriesParams from(const model::LorentzianBath& bath) {
        bath.validate();
        const double gamma = bath.width;
        const double omega = bath.center_frequency;
        const double strength = bath.bath_strength();
        const double s2 = gamma * gamma + omega * omega;
        MonomerSeriesParams p;
        p.w = complexd(gamma, omega);
        p.gamma_tilde = strength * gamma / s2;
        p.omega_tilde = strength * omega / s2;
        p.theta = 2.0 * strength * gamma * omega / (s2 * s2);
        p.q = std::atan2(-2.0 * gamma * omega, gamma * gamma - omega * omega);
        p.prefactor_exponent = strength * (gamma * gamma - omega * omega) / (s2 * s2);
        p.log_ratio = std::log(strength / s2);
        return p;
    }
};

// c(t) = exp{ -i eps t - (Gamma/w^2) (w t + e^{-w t} - 1) }, t >= 0.
inline complexd analytic_monomer_correlation(const model::LorentzianBath& bath,
                                             double eps, double t) {
    const complexd w(bath.width, bath.center_frequency);
    const complexd g_over_w2 = bath.bath_strength() / (w * w);
    const complexd exponent =
        complexd(0.0, -eps * t) - g_over_w2 * (w * t + std::exp(-w * t) - 1.0);
    return std::exp(exponent);
}

// Monomer absorption spectrum as a sum of complex Lorentzians,
//   A(nu) = sum_k Re[ coef_k / ((gamma_tilde + k gamma) - i (nu - k Omega + omega_tilde - eps)) ],
//   coef_k = e^{Gamma/w^2} (-Gamma/w^2)^k / k!.
// Coefficients are nu-independent, so they are computed once (in log space,
// the k! and power factors overflow long before the sum converges otherwise)
// and the evaluator is then cheap per frequency point.
class MonomerSpectrumSeries {
public:
    MonomerSpectrumSeries(const model::LorentzianBath& bath, double eps,
                          double series_tol)
        : params_(MonomerSeriesParams::from(bath)), eps_(eps) {
        if (!(series_tol > 0.0))
            throw config_error("MonomerSpectrumSeries: series_tol must be > 0");
        const double gamma = bath.width;
        const double omega = bath.center_frequency;
        const double peak_k = std::exp(params_.log_ratio);  // magnitude peaks near k = gamma_tilde/gamma
        constexpr int k_cap = 100000;
        for (int k = 0; k < k_cap; ++k) {
            const double log_mag = params_.prefactor_exponent +
                                   (k == 0 ? 0.0 : k * params_.log_ratio) -
                                   std::lgamma(k + 1.0);
            const double mag = std::exp(log_mag);
            const double width = params_.gamma_tilde + k * gamma;
            const double phase = k * (params_.q + M_PI) - params_.theta;
            coef_.push_back(std::polar(mag, phase));
            center_.push_back(k * omega - params_.omega_tilde + eps);
            width_.push_back(width);
            // Term bound: max_nu |coef_k L_k| = mag / width.
            if (k > peak_k && mag / width < series_tol) return;
        }
        throw convergence_error("MonomerSpectrumSeries: series did not reach "
                                "tolerance within 100000 terms");
    }

    double operator()(double nu) const {
        double acc = 0.0;
        for (std::size_t k = 0; k < coef_.size(); ++k) {
            const complexd denom(width_[k], -(nu - center_[k]));
            acc += (coef_[k] / denom).real();
        }
        return acc;
    }

    const MonomerSeriesParams& params() const { return params_; }
    std::size_t terms() const { return coef_.size(); }

private:
    MonomerSeriesParams params_;
    double eps_;
    std::vector<complexd> coef_;
    std::vector<double> center_;
    std::vector<double> width_;
};

inline double analytic_monomer_spectrum(const model::LorentzianBath& bath,
                                        double eps, double nu,
                                        double series_tol) {
    return MonomerSpectrumSeries(bath, eps, series_tol)(nu);
}

// Bare k = 0 term of the series,
//   A0(nu) = gamma_tilde / ((nu + omega_tilde - eps)^2 + gamma_tilde^2)
//            * (cos theta + sin theta (nu + omega_tilde - eps) / gamma_tilde).
// For small theta this is a Lorentzian of HWHM gamma_tilde. Note the full
// spectrum carries the additional global prefactor e^{(gamma_tilde^2 -
// omega_tilde^2)/Gamma} on this term.
inline double analytic_a0_peak(const model::LorentzianBath& bath, double eps,
                               double nu) {
    const auto p = MonomerSeriesParams::from(bath);
    const double x = nu + p.omega_tilde - eps;
    const double lor = p.gamma_tilde / (x * x + p.gamma_tilde * p.gamma_tilde);
    return lor * (std::cos(p.theta) + std::sin(p.theta) * x / p.gamma_tilde);
}

} // namespace aggspec::analytic
