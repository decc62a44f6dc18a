// model.hpp — Aggregate geometry/energetics, bath parameter records, and the
// electronic (one-exciton) Hamiltonian.
//
// Units: the vibrational center frequency Omega is the energy unit (Omega = 1
// by convention); times are in 1/Omega.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "aggspec/errors.hpp"

namespace aggspec::model {

// Chain topology. N = 1 ignores the boundary, N = 2 must be open_dimer
// (a single bond, never double-counted), N >= 3 must be ring (periodic,
// two nearest neighbours per site).
enum class Boundary { open_dimer, ring };

inline const char* to_string(Boundary b) {
    return b == Boundary::open_dimer ? "open_dimer" : "ring";
}

// N identical monomers with transition energy eps and nearest-neighbour
// excitation exchange V. Immutable value record; validate() before use.
struct AggregateSpec {
    int n_monomers{1};
    double site_energy{0.0};  // eps
    double coupling{0.0};     // V, nearest-neighbour only
    Boundary boundary{Boundary::ring};

    static AggregateSpec monomer(double eps) {
        return {1, eps, 0.0, Boundary::ring};
    }
    static AggregateSpec dimer(double eps, double v) {
        return {2, eps, v, Boundary::open_dimer};
    }
    static AggregateSpec ring(int n, double eps, double v) {
        AggregateSpec agg{n, eps, v, Boundary::ring};
        agg.validate();
        return agg;
    }
    // Boundary implied by N: open bond for the dimer, periodic for N >= 3.
    static AggregateSpec chain(int n, double eps, double v) {
        if (n == 1) return monomer(eps);
        if (n == 2) return dimer(eps, v);
        return ring(n, eps, v);
    }

    void validate() const {
        if (n_monomers < 1)
            throw config_error("AggregateSpec: n_monomers must be >= 1, got " +
                               std::to_string(n_monomers));
        if (n_monomers == 2 && boundary != Boundary::open_dimer)
            throw config_error("AggregateSpec: N = 2 must use open_dimer boundary");
        if (n_monomers >= 3 && boundary != Boundary::ring)
            throw config_error("AggregateSpec: ring boundary requires N >= 3");
        if (n_monomers == 2 && boundary == Boundary::ring)
            throw config_error("AggregateSpec: ring requires N >= 3");
        if (!std::isfinite(site_energy) || !std::isfinite(coupling))
            throw config_error("AggregateSpec: non-finite parameter");
    }

    // Effective shift C of the absorption line: C = 0 (monomer), V (dimer),
    // 2V (ring, two neighbours per site).
    double effective_shift() const {
        if (n_monomers == 1) return 0.0;
        if (n_monomers == 2) return coupling;
        return 2.0 * coupling;
    }
};

// Lorentzian spectral density J(w) = (1/pi) Omega^2 X gamma / ((w-Omega)^2 + gamma^2),
// zero temperature. Derived quantities: bath strength Gamma = Omega^2 X and
// pseudomode coupling kappa = Omega sqrt(X), so kappa^2 = Gamma exactly.
struct LorentzianBath {
    double center_frequency{1.0};  // Omega > 0
    double huang_rhys{0.0};        // X >= 0
    double width{0.0};             // gamma > 0

    double bath_strength() const {  // Gamma
        return center_frequency * center_frequency * huang_rhys;
    }
    double pseudomode_coupling() const {  // kappa
        return center_frequency * std::sqrt(huang_rhys);
    }

    void validate() const {
        if (!(center_frequency > 0.0))
            throw config_error("LorentzianBath: center frequency Omega must be > 0");
        if (!(huang_rhys >= 0.0))
            throw config_error("LorentzianBath: Huang-Rhys factor X must be >= 0");
        if (!(width > 0.0))
            throw config_error("LorentzianBath: width gamma must be > 0");
    }

    // J(w), full-line convention (w may be negative).
    double spectral_density(double w) const {
        const double g = width;
        const double d = w - center_frequency;
        return bath_strength() / M_PI * g / (d * d + g * g);
    }
};

// Memoryless environment, alpha(tau) = 2 Gamma_M delta(tau).
struct MarkovianBath {
    double rate{0.0};  // Gamma_M > 0

    void validate() const {
        if (!(rate > 0.0))
            throw config_error("MarkovianBath: rate Gamma_M must be > 0");
    }
};

// One-exciton Hamiltonian: eps on the diagonal, V between nearest
// neighbours, wraparound bond only for the ring.
inline Eigen::MatrixXd build_electronic_hamiltonian(const AggregateSpec& agg) {
    agg.validate();
    const int n = agg.n_monomers;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    h.diagonal().setConstant(agg.site_energy);
    for (int i = 0; i + 1 < n; ++i) {
        h(i, i + 1) = agg.coupling;
        h(i + 1, i) = agg.coupling;
    }
    if (agg.boundary == Boundary::ring && n >= 3) {
        h(0, n - 1) = agg.coupling;
        h(n - 1, 0) = agg.coupling;
    }
    return h;
}

// Totally symmetric (bright) one-exciton state, entries 1/sqrt(N).
inline Eigen::VectorXcd bright_state(const AggregateSpec& agg) {
    if (agg.n_monomers < 1)
        throw config_error("bright_state: n_monomers must be >= 1");
    const int n = agg.n_monomers;
    return Eigen::VectorXcd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
}

} // namespace aggspec::model
