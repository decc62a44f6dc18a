// analysis.hpp — Peak statistics (FWHM, moments, area), sum-rule checks,
// narrowing sweeps, and the strong-coupling X -> X/N comparison.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "aggspec/analytic.hpp"
#include "aggspec/errors.hpp"
#include "aggspec/model.hpp"
#include "aggspec/spectra.hpp"

namespace aggspec::analysis {

struct PeakStats {
    double peak_position{0.0};  // nu*, parabolic refinement through 3 points
    double peak_height{0.0};
    double fwhm{0.0};
    double mean{0.0};
    double variance{0.0};
    double area{0.0};
    std::string warning;  // set for plateaued maxima

    double std_dev() const { return std::sqrt(std::max(0.0, variance)); }
};

// FWHM convention: the extent of {nu : A(nu) >= half maximum}, i.e. the
// outermost half-maximum crossings. A vibrational shoulder widens the peak
// only if it rises above half maximum.
inline PeakStats peak_stats(const spectra::Spectrum& spec) {
    const auto& a = spec.values;
    const std::size_t n = a.size();
    if (n < 3) throw config_error("peak_stats: need at least 3 grid points");

    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (a[i] > a[imax]) imax = i;

    PeakStats st;
    std::size_t plateau_end = imax;  // contiguous run of equal maxima is a plateau
    while (plateau_end + 1 < n && a[plateau_end + 1] == a[imax]) ++plateau_end;
    if (plateau_end > imax)
        st.warning = "plateaued maximum; using leftmost grid point";
    for (std::size_t i = plateau_end + 1; i < n; ++i)
        if (a[i] == a[imax])
            throw config_error("peak_stats: ambiguous spectrum, equal maxima at nu = " +
                               std::to_string(spec.nu(imax)) + " and nu = " +
                               std::to_string(spec.nu(i)));
    if (imax == 0 || imax == n - 1)
        throw config_error("peak_stats: maximum at grid edge nu = " +
                           std::to_string(spec.nu(imax)) + " (grid too narrow)");

    // parabolic refinement of position/height
    const double ym = a[imax - 1], y0 = a[imax], yp = a[imax + 1];
    const double denom = ym - 2.0 * y0 + yp;
    double delta = 0.0;
    if (denom < 0.0) delta = 0.5 * (ym - yp) / denom;
    st.peak_position = spec.nu(imax) + delta * spec.dnu;
    st.peak_height = y0 - 0.25 * (ym - yp) * delta;

    // outermost half-maximum crossings
    const double half = 0.5 * st.peak_height;
    std::size_t lo = n, hi = n;
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] >= half) { lo = i; break; }
    for (std::size_t i = n; i-- > 0;)
        if (a[i] >= half) { hi = i; break; }
    if (lo == n || lo == 0 || hi == n - 1)
        throw config_error("peak_stats: half-maximum crossing outside the grid "
                           "(grid too narrow)");
    auto interp_left = [&](std::size_t i) {  // crossing in (i-1, i], a[i] >= half > a[i-1]
        const double f = (half - a[i - 1]) / (a[i] - a[i - 1]);
        return spec.nu(i - 1) + f * spec.dnu;
    };
    auto interp_right = [&](std::size_t i) {  // crossing in [i, i+1), a[i] >= half > a[i+1]
        const double f = (a[i] - half) / (a[i] - a[i + 1]);
        return spec.nu(i) + f * spec.dnu;
    };
    st.fwhm = interp_right(hi) - interp_left(lo);

    // trapezoidal moments over the full grid
    double w_area = 0.0, w_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        w_area += w * a[i];
        w_mean += w * a[i] * spec.nu(i);
    }
    st.area = w_area * spec.dnu;
    if (!(st.area > 0.0)) throw config_error("peak_stats: non-positive spectral area");
    st.mean = w_mean / w_area;
    double w_var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        const double d = spec.nu(i) - st.mean;
        w_var += w * a[i] * d * d;
    }
    st.variance = w_var / w_area;
    return st;
}

// Exact statements checked per spectrum of a fixed-N, varying-V family:
// mean = eps + C(V), area independent of V, variance = Gamma.
struct SumRuleRow {
    double coupling{0.0};
    double mean{0.0}, mean_deviation{0.0};
    double area{0.0};
    double variance{0.0}, variance_rel_deviation{0.0};
};

struct SumRuleReport {
    int n_monomers{0};
    double expected_variance{0.0};  // Gamma
    std::vector<SumRuleRow> rows;
    double worst_mean_abs_deviation{0.0};
    double area_rel_spread{0.0};  // (max - min) / mean of areas
    double worst_variance_rel_deviation{0.0};
};

inline SumRuleReport sum_rule_report(const std::vector<spectra::Spectrum>& specs) {
    if (specs.size() < 2)
        throw config_error("sum_rule_report: need at least 2 spectra");
    SumRuleReport rep;
    const auto& p0 = specs.front().prov;
    rep.n_monomers = p0.n_monomers;
    rep.expected_variance = p0.omega * p0.omega * p0.huang_rhys;
    double area_min = 0.0, area_max = 0.0, area_sum = 0.0;
    for (const auto& s : specs) {
        const auto& p = s.prov;
        if (p.n_monomers != p0.n_monomers || p.omega != p0.omega ||
            p.huang_rhys != p0.huang_rhys || p.bath_width != p0.bath_width ||
            p.site_energy != p0.site_energy)
            throw config_error("sum_rule_report: mismatched N or bath metadata");
        model::AggregateSpec agg = model::AggregateSpec::chain(
            p.n_monomers, p.site_energy, p.coupling);
        const PeakStats st = peak_stats(s);
        SumRuleRow row;
        row.coupling = p.coupling;
        row.mean = st.mean;
        row.mean_deviation = st.mean - analytic::electronic_line_position(agg);
        row.area = st.area;
        row.variance = st.variance;
        row.variance_rel_deviation =
            rep.expected_variance > 0.0
                ? (st.variance - rep.expected_variance) / rep.expected_variance
                : 0.0;
        rep.worst_mean_abs_deviation =
            std::max(rep.worst_mean_abs_deviation, std::abs(row.mean_deviation));
        rep.worst_variance_rel_deviation = std::max(rep.worst_variance_rel_deviation,
                                                    std::abs(row.variance_rel_deviation));
        if (rep.rows.empty()) {
            area_min = area_max = row.area;
        } else {
            area_min = std::min(area_min, row.area);
            area_max = std::max(area_max, row.area);
        }
        area_sum += row.area;
        rep.rows.push_back(row);
    }
    rep.area_rel_spread = (area_max - area_min) / (area_sum / specs.size());
    return rep;
}

struct NarrowingPoint {
    double coupling{0.0};
    double fwhm{0.0};
    double fwhm_times_n{0.0};
    double mean{0.0};
    double variance{0.0};
    double area{0.0};
    double peak_position{0.0};
    double peak_height{0.0};
};

struct NarrowingCurve {
    int n_monomers{0};
    std::vector<NarrowingPoint> points;  // strictly ordered in V
};

// provider(N, V) must yield the pair (fine spectrum for peak/FWHM, wide
// spectrum for moments); converged per the basis policy. Points are reduced
// in V order regardless of evaluation order.
template <class SpectrumProvider>
NarrowingCurve narrowing_sweep(int n_monomers, std::vector<double> couplings,
                               SpectrumProvider&& provider) {
    std::sort(couplings.begin(), couplings.end());
    couplings.erase(std::unique(couplings.begin(), couplings.end()), couplings.end());
    NarrowingCurve curve;
    curve.n_monomers = n_monomers;
    for (double v : couplings) {
        const auto [fine, wide] = provider(n_monomers, v);
        const PeakStats pf = peak_stats(fine);
        const PeakStats pw = peak_stats(wide);
        NarrowingPoint pt;
        pt.coupling = v;
        pt.fwhm = pf.fwhm;
        pt.fwhm_times_n = pf.fwhm * n_monomers;
        pt.mean = pw.mean;
        pt.variance = pw.variance;
        pt.area = pw.area;
        pt.peak_position = pf.peak_position;
        pt.peak_height = pf.peak_height;
        curve.points.push_back(pt);
    }
    return curve;
}

struct StrongCouplingComparison {
    double sup_deviation_rel{0.0};  // sup |numeric - reference| / peak height
    double peak_height{0.0};
    std::vector<double> reference;  // analytic monomer, X -> X/N, shifted by C
};

// Reference line shape for |V| >> monomer width: analytic monomer spectrum
// with X -> X/N, shifted by C, evaluated on the numeric spectrum's grid.
inline StrongCouplingComparison strong_coupling_compare(const spectra::Spectrum& numeric,
                                                        const model::AggregateSpec& agg,
                                                        const model::LorentzianBath& bath,
                                                        double series_tol = 1e-10) {
    model::LorentzianBath reduced = bath;
    reduced.huang_rhys = bath.huang_rhys / agg.n_monomers;
    const double c_shift = agg.effective_shift();
    const analytic::MonomerSpectrumSeries series(reduced, agg.site_energy, series_tol);

    StrongCouplingComparison cmp;
    cmp.reference.resize(numeric.size());
    double peak = 0.0;
    for (std::size_t j = 0; j < numeric.size(); ++j) {
        cmp.reference[j] = series(numeric.nu(j) - c_shift);
        peak = std::max(peak, numeric.values[j]);
    }
    cmp.peak_height = peak;
    double sup = 0.0;
    for (std::size_t j = 0; j < numeric.size(); ++j)
        sup = std::max(sup, std::abs(numeric.values[j] - cmp.reference[j]));
    cmp.sup_deviation_rel = sup / peak;
    return cmp;
}

} // namespace aggspec::analysis
