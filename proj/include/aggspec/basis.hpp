// basis.hpp — Truncated one-exciton x pseudomode-Fock space and the
// matrix-free action of the effective non-Hermitian Hamiltonian.
//
// One damped harmonic pseudomode per monomer (frequency Omega, coupling
// kappa = sqrt(Gamma), amplitude damping gamma) reproduces the Lorentzian
// bath exactly at zero temperature; for the absorption correlation function
// the Lindblad jump terms vanish and the anti-Hermitian term
// -i gamma sum_n m_n is the entire environment contribution.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "aggspec/errors.hpp"
#include "aggspec/model.hpp"
#include "aggspec/thread_pool.hpp"

namespace aggspec::basis {

using complexd = std::complex<double>;

inline constexpr std::size_t kDefaultDimensionCap = 4'000'000;

// C(n, k) with overflow detection.
inline std::uint64_t binomial_checked(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        const std::uint64_t f = static_cast<std::uint64_t>(n - k + i);
        if (r > UINT64_MAX / f)
            throw resource_error("binomial_checked: overflow computing C(" +
                                 std::to_string(n) + "," + std::to_string(k) + ")");
        r = r * f / static_cast<std::uint64_t>(i);
    }
    return r;
}

// States are (exciton site n, occupations m_1..m_N with sum <= M), ordered
// site-major with occupation tuples in ascending lexicographic order, so
// index = site * n_occupations + occupation_rank. The all-zero tuple has
// rank 0. Deterministic ordering keeps results bit-reproducible.
struct VibronicBasis {
    model::AggregateSpec agg;
    int max_total_quanta{0};  // M
    int n_sites{0};
    std::size_t n_occupations{0};
    std::size_t dimension{0};

    // occupation tuples, row-major: occupations[i * n_sites + j]
    std::vector<std::uint8_t> occupations;
    std::vector<std::uint8_t> total_quanta;  // per occupation rank

    // Mode-major ladder tables: entry [j * n_occupations + i] is the
    // occupation rank reached from rank i by m_j -> m_j +/- 1, or -1 when the
    // step leaves the truncated space. Amplitudes are sqrt(m_j + 1) / sqrt(m_j).
    std::vector<std::int32_t> raise_rank, lower_rank;
    std::vector<double> raise_amp, lower_amp;

    std::size_t state_index(int site, std::size_t occupation_rank) const {
        return static_cast<std::size_t>(site) * n_occupations + occupation_rank;
    }
    const std::uint8_t* occupation(std::size_t rank) const {
        return occupations.data() + rank * n_sites;
    }
    // rank of an occupation tuple, -1 if absent
    std::int64_t occupation_rank(const std::vector<std::uint8_t>& m) const {
        auto it = rank_map_.find(key(m.data(), n_sites));
        return it == rank_map_.end() ? -1 : static_cast<std::int64_t>(it->second);
    }

    static std::string key(const std::uint8_t* m, int n) {
        return std::string(reinterpret_cast<const char*>(m), static_cast<std::size_t>(n));
    }

    std::unordered_map<std::string, std::uint32_t> rank_map_;
};

inline VibronicBasis enumerate_basis(const model::AggregateSpec& agg, int max_total_quanta,
                                     std::size_t dimension_cap = kDefaultDimensionCap) {
    agg.validate();
    if (max_total_quanta < 0)
        throw config_error("enumerate_basis: max_total_quanta must be >= 0");
    if (max_total_quanta > 255)
        throw resource_error("enumerate_basis: max_total_quanta > 255 unsupported");

    const int n = agg.n_monomers;
    const int m = max_total_quanta;
    const std::uint64_t n_occ64 = binomial_checked(n + m, m);
    const std::uint64_t dim64 = static_cast<std::uint64_t>(n) * n_occ64;
    if (dim64 > dimension_cap)
        throw resource_error("enumerate_basis: dimension " + std::to_string(dim64) +
                             " exceeds cap " + std::to_string(dimension_cap) +
                             " (N = " + std::to_string(n) + ", M = " + std::to_string(m) + ")");

    VibronicBasis b;
    b.agg = agg;
    b.max_total_quanta = m;
    b.n_sites = n;
    b.n_occupations = static_cast<std::size_t>(n_occ64);
    b.dimension = static_cast<std::size_t>(dim64);
    b.occupations.reserve(b.n_occupations * n);
    b.total_quanta.reserve(b.n_occupations);

    // lexicographic odometer over tuples with sum <= M
    std::vector<std::uint8_t> tuple(n, 0);
    int total = 0;
    for (;;) {
        b.occupations.insert(b.occupations.end(), tuple.begin(), tuple.end());
        b.total_quanta.push_back(static_cast<std::uint8_t>(total));
        if (total < m) {
            ++tuple[n - 1];
            ++total;
            continue;
        }
        int j = n - 1;
        while (j >= 0 && tuple[j] == 0) --j;
        if (j <= 0) break;
        total -= tuple[j];
        tuple[j] = 0;
        ++tuple[j - 1];
        ++total;
    }
    if (b.total_quanta.size() != b.n_occupations)
        throw std::logic_error("enumerate_basis: enumeration count mismatch");

    b.rank_map_.reserve(b.n_occupations * 2);
    for (std::size_t i = 0; i < b.n_occupations; ++i)
        b.rank_map_.emplace(VibronicBasis::key(b.occupation(i), n), static_cast<std::uint32_t>(i));

    const std::size_t tbl = b.n_occupations * static_cast<std::size_t>(n);
    b.raise_rank.assign(tbl, -1);
    b.lower_rank.assign(tbl, -1);
    b.raise_amp.assign(tbl, 0.0);
    b.lower_amp.assign(tbl, 0.0);
    std::vector<std::uint8_t> probe(n);
    for (std::size_t i = 0; i < b.n_occupations; ++i) {
        const std::uint8_t* occ = b.occupation(i);
        const int tot = b.total_quanta[i];
        for (int j = 0; j < n; ++j) {
            const std::size_t slot = static_cast<std::size_t>(j) * b.n_occupations + i;
            if (tot < m) {
                std::copy(occ, occ + n, probe.begin());
                ++probe[j];
                auto it = b.rank_map_.find(VibronicBasis::key(probe.data(), n));
                b.raise_rank[slot] = static_cast<std::int32_t>(it->second);
                b.raise_amp[slot] = std::sqrt(occ[j] + 1.0);
            }
            if (occ[j] > 0) {
                std::copy(occ, occ + n, probe.begin());
                --probe[j];
                auto it = b.rank_map_.find(VibronicBasis::key(probe.data(), n));
                b.lower_rank[slot] = static_cast<std::int32_t>(it->second);
                b.lower_amp[slot] = std::sqrt(static_cast<double>(occ[j]));
            }
        }
    }
    return b;
}

// H_eff = H_sys (x) I + sum_n Omega m_n - kappa sum_n P_n (b_n^dag + b_n)
//         - i gamma sum_n m_n
// applied matrix-free in O(dimension * N). Immutable after construction;
// apply() is reentrant.
class EffectiveHamiltonian {
public:
    EffectiveHamiltonian(VibronicBasis basis, model::LorentzianBath bath)
        : basis_(std::move(basis)), bath_(bath) {
        bath_.validate();
        const int n = basis_.n_sites;
        neighbors_.assign(static_cast<std::size_t>(n) * 2, -1);
        if (n == 2) {
            neighbors_[0] = 1;
            neighbors_[2] = 0;
        } else if (n >= 3) {
            for (int s = 0; s < n; ++s) {
                neighbors_[2 * s] = (s + 1) % n;
                neighbors_[2 * s + 1] = (s + n - 1) % n;
            }
        }
        const double omega = bath_.center_frequency;
        const double gamma = bath_.width;
        const double eps = basis_.agg.site_energy;
        diag_.resize(basis_.n_occupations);
        for (std::size_t i = 0; i < basis_.n_occupations; ++i) {
            const double q = basis_.total_quanta[i];
            diag_[i] = complexd(eps + omega * q, -gamma * q);
        }
    }

    const VibronicBasis& basis() const { return basis_; }
    const model::LorentzianBath& bath() const { return bath_; }
    std::size_t dimension() const { return basis_.dimension; }

    // out = factor * (H_eff - shift) * in, factor in {1, -i}.
    // pool (optional) splits the site-major blocks across threads.
    void apply(const complexd* in, complexd* out, double shift = 0.0,
               bool minus_i = false, ThreadPool* pool = nullptr) const {
        const std::size_t n_occ = basis_.n_occupations;
        const int n = basis_.n_sites;
        const double v = basis_.agg.coupling;
        const double kappa = bath_.pseudomode_coupling();

        auto block = [&](std::size_t site_begin, std::size_t site_end) {
            for (std::size_t s = site_begin; s < site_end; ++s) {
                const complexd* vin = in + s * n_occ;
                complexd* vout = out + s * n_occ;
                const complexd* nb1 =
                    neighbors_[2 * s] >= 0 ? in + static_cast<std::size_t>(neighbors_[2 * s]) * n_occ : nullptr;
                const complexd* nb2 =
                    neighbors_[2 * s + 1] >= 0 ? in + static_cast<std::size_t>(neighbors_[2 * s + 1]) * n_occ : nullptr;
                const std::int32_t* up = basis_.raise_rank.data() + s * n_occ;
                const std::int32_t* dn = basis_.lower_rank.data() + s * n_occ;
                const double* upa = basis_.raise_amp.data() + s * n_occ;
                const double* dna = basis_.lower_amp.data() + s * n_occ;
                for (std::size_t i = 0; i < n_occ; ++i) {
                    complexd acc = (diag_[i] - shift) * vin[i];
                    if (nb1) acc += v * nb1[i];
                    if (nb2) acc += v * nb2[i];
                    if (up[i] >= 0) acc -= kappa * upa[i] * vin[static_cast<std::size_t>(up[i])];
                    if (dn[i] >= 0) acc -= kappa * dna[i] * vin[static_cast<std::size_t>(dn[i])];
                    vout[i] = minus_i ? complexd(acc.imag(), -acc.real()) : acc;
                }
            }
        };

        if (pool && pool->lanes() > 1 && basis_.dimension >= 16384) {
            pool->parallel_for(static_cast<std::size_t>(n),
                               [&](std::size_t b, std::size_t e) { block(b, e); }, 1);
        } else {
            block(0, static_cast<std::size_t>(n));
        }
    }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const {
        if (static_cast<std::size_t>(v.size()) != basis_.dimension)
            throw dimension_error("apply_effective_hamiltonian: vector length " +
                                  std::to_string(v.size()) + " != basis dimension " +
                                  std::to_string(basis_.dimension));
        Eigen::VectorXcd out(v.size());
        apply(v.data(), out.data());
        return out;
    }

    // Upper bound on |lambda - shift| over the spectrum (Gershgorin rows).
    double gershgorin_radius(double shift = 0.0) const {
        const double v = std::abs(basis_.agg.coupling);
        const double kappa = bath_.pseudomode_coupling();
        const int n_neighbors = basis_.n_sites == 1 ? 0 : (basis_.n_sites == 2 ? 1 : 2);
        double r = 0.0;
        for (std::size_t i = 0; i < basis_.n_occupations; ++i) {
            const double q = basis_.total_quanta[i];
            const double off = n_neighbors * v + kappa * (std::sqrt(q + 1.0) + std::sqrt(q));
            r = std::max(r, std::abs(diag_[i] - shift) + off);
        }
        return r;
    }

    // Dense matrix (small dimensions, tests only).
    Eigen::MatrixXcd to_dense(double shift = 0.0) const {
        const std::size_t d = basis_.dimension;
        if (d > 20000)
            throw resource_error("to_dense: dimension too large");
        Eigen::MatrixXcd h(d, d);
        Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(d), col(d);
        for (std::size_t j = 0; j < d; ++j) {
            unit[j] = 1.0;
            apply(unit.data(), col.data(), shift);
            h.col(j) = col;
            unit[j] = 0.0;
        }
        return h;
    }

private:
    VibronicBasis basis_;
    model::LorentzianBath bath_;
    std::vector<std::int32_t> neighbors_;  // two per site, -1 = none
    std::vector<complexd> diag_;
};

inline Eigen::VectorXcd apply_effective_hamiltonian(const EffectiveHamiltonian& h,
                                                    const Eigen::VectorXcd& v) {
    return h.apply(v);
}

// Bright state (x) vibrational vacuum in the vibronic basis.
inline Eigen::VectorXcd initial_state(const VibronicBasis& b) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(b.dimension));
    const double amp = 1.0 / std::sqrt(static_cast<double>(b.n_sites));
    for (int s = 0; s < b.n_sites; ++s)
        psi[static_cast<Eigen::Index>(b.state_index(s, 0))] = amp;
    return psi;
}

} // namespace aggspec::basis
