#pragma once

// The probabilistic layer: summatory sums, empirical moments of the
// normalized pairing, Gaussian comparison (moments, histogram, KS), prime
// geodesic counting and the prime-vs-all-classes regrouping identity.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "geodesic/enumerate.hpp"
#include "geodesic/errors.hpp"
#include "geodesic/periods.hpp"

namespace geodesic {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline double gaussian_moment(int n) {
    if (n % 2 != 0) return 0.0;
    double v = 1.0;  // (2m)!/(m! 2^m) = (2m-1)!!
    for (int k = n - 1; k > 1; k -= 2) v *= static_cast<double>(k);
    return v;
}

namespace detail {

struct Kahan {
    double sum = 0.0, comp = 0.0;
    void add(double v) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

inline double int_pow(double x, int n) {
    double v = 1.0;
    for (int k = 0; k < n; ++k) v *= x;
    return v;
}

}  // namespace detail

/// S_n(T) = sum over classes with N <= T of <gamma,alpha>^n log N, over
/// primitive classes only or over all classes.  Terms are accumulated over
/// inverse pairs when the involution index is attached, so odd-n sums over
/// all classes cancel exactly (the paired terms are exact negations).
inline double summatory(int n, double T, const ClassTable& t, const HarmonicForm& f,
                        bool primitive_only = true) {
    detail::Kahan acc;
    const auto term = [&](const ConjClass& c) {
        return detail::int_pow(pairing(c, f), n) * c.l;
    };
    if (!t.inverse_index.empty()) {
        for (std::size_t i = 0; i < t.classes.size(); ++i) {
            const std::size_t j = t.inverse_index[i];
            if (j < i) continue;  // pair handled at the smaller index
            const ConjClass& c = t.classes[i];
            if (c.N > T || (primitive_only && !c.primitive)) continue;
            if (j == i) {
                acc.add(term(c));
            } else {
                acc.add(term(c) + term(t.classes[j]));
            }
        }
    } else {
        for (const ConjClass& c : t.classes) {
            if (c.N > T) break;
            if (primitive_only && !c.primitive) continue;
            acc.add(term(c));
        }
    }
    return acc.sum;
}

enum class NormMode { user, effective };

struct MomentReport {
    double T = 0.0;
    int n_max = 8;
    std::vector<double> raw_moments;      // M_n, n = 0..n_max
    std::vector<double> summatory_values; // S_n(T), primitive classes
    std::vector<double> gaussian_targets; // 0 for odd n, (2m-1)!! for n = 2m
    std::size_t sample_count = 0;
    NormMode norm_mode = NormMode::effective;
    double norm_sq_used = 0.0;
    bool all_classes = false;
};

inline MomentReport moments(double T, const ClassTable& t, const HarmonicForm& f,
                            NormMode mode, double user_norm_sq = 1.0, int n_max = 8,
                            bool all_classes = false, double vol = 4.0 * std::numbers::pi) {
    MomentReport r;
    r.T = T;
    r.n_max = n_max;
    r.norm_mode = mode;
    r.all_classes = all_classes;
    r.norm_sq_used = (mode == NormMode::user) ? user_norm_sq : effective_norm_sq(t, f, T, vol);

    std::size_t count = 0;
    for (const ConjClass& c : t.classes) {
        if (c.N > T) break;
        if (!all_classes && !c.primitive) continue;
        ++count;
    }
    if (count < 100)
        throw InsufficientData("moments: only " + std::to_string(count) + " classes below T");
    r.sample_count = count;

    std::vector<detail::Kahan> acc(static_cast<std::size_t>(n_max) + 1);
    for (const ConjClass& c : t.classes) {
        if (c.N > T) break;
        if (!all_classes && !c.primitive) continue;
        const double v = normalized_pairing(c, f, r.norm_sq_used, vol);
        for (int n = 0; n <= n_max; ++n) acc[static_cast<std::size_t>(n)].add(detail::int_pow(v, n));
    }
    for (int n = 0; n <= n_max; ++n) {
        r.raw_moments.push_back(acc[static_cast<std::size_t>(n)].sum / static_cast<double>(count));
        r.summatory_values.push_back(summatory(n, T, t, f, /*primitive_only=*/!all_classes));
        r.gaussian_targets.push_back(gaussian_moment(n));
    }
    return r;
}

struct MomentRatio {
    int n;          // 2m
    double ratio;   // M_{2m} / M_2^m
    double target;  // (2m-1)!!
    bool degenerate = false;
};

/// Dimensionless ratios M_{2m}/M_2^m; invariant under the ||alpha||^2
/// calibration ambiguity.
inline std::vector<MomentRatio> moment_ratio_check(const MomentReport& r) {
    std::vector<MomentRatio> out;
    const double m2 = r.raw_moments.size() > 2 ? r.raw_moments[2] : 0.0;
    for (int m = 2; 2 * m <= r.n_max; ++m) {
        const std::size_t n = static_cast<std::size_t>(2 * m);
        if (n >= r.raw_moments.size()) break;
        MomentRatio mr;
        mr.n = 2 * m;
        mr.target = gaussian_moment(2 * m);
        if (m2 <= 0.0) {
            mr.ratio = 0.0;
            mr.degenerate = true;
        } else {
            mr.ratio = r.raw_moments[n] / detail::int_pow(m2, m);
            // a point mass gives M_4/M_2^2 = 1; flag anything at that floor
            mr.degenerate = (2 * m == 4 && mr.ratio <= 1.0 + 1e-9);
        }
        out.push_back(mr);
    }
    return out;
}

/// Samples divided by their own standard deviation (about the mean).
inline std::vector<double> studentize(std::vector<double> samples) {
    if (samples.size() < 2) throw InsufficientData("studentize: need >= 2 samples");
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (double v : samples) var += (v - mean) * (v - mean);
    var /= static_cast<double>(samples.size());
    if (var == 0.0) throw DegenerateSample("studentize: zero variance");
    const double sd = std::sqrt(var);
    for (double& v : samples) v /= sd;
    return samples;
}

/// Kolmogorov-Smirnov statistic of studentized samples against the standard
/// normal CDF.
inline double ks_against_gaussian(const std::vector<double>& raw_samples) {
    std::vector<double> s = studentize(raw_samples);
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double F = normal_cdf(s[i]);
        ks = std::max(ks, std::max(static_cast<double>(i + 1) / n - F,
                                   F - static_cast<double>(i) / n));
    }
    return ks;
}

struct PgtRow {
    double x = 0.0;
    std::size_t count = 0;  // pi(x), oriented primitive classes with l <= x
    double expected = 0.0;  // e^x / x
    double ratio = 0.0;
};

inline std::vector<PgtRow> pgt_check(const ClassTable& t, const std::vector<double>& x_grid) {
    std::vector<PgtRow> rows;
    for (double x : x_grid) {
        PgtRow r;
        r.x = x;
        for (const ConjClass& c : t.classes) {
            if (c.l > x) break;
            if (c.primitive) ++r.count;
        }
        r.expected = std::exp(x) / x;
        r.ratio = static_cast<double>(r.count) / r.expected;
        rows.push_back(r);
    }
    return rows;
}

struct PrimePowerRoundtrip {
    double phi_n = 0.0;               // sum over all classes of <g,a>^n
    double pi_n = 0.0;                // sum over primitive classes
    double reconstructed_phi_n = 0.0; // Pi_n(T) + sum_m m^n Pi_n(T^{1/m})
    double correction = 0.0;          // the m >= 2 part
};

/// The regrouping identity phi_n(T) = Pi_n(T) + sum_{m>=2} m^n Pi_n(T^{1/m}):
/// the direct sum runs over all classes; the reconstruction regroups the very
/// same classes by their primitive root, using power * root homology.
inline PrimePowerRoundtrip prime_power_roundtrip(int n, double T, const ClassTable& t,
                                                 const HarmonicForm& f) {
    PrimePowerRoundtrip out;
    detail::Kahan direct, prim, recon, corr;
    for (const ConjClass& c : t.classes) {
        if (c.N > T) break;
        direct.add(detail::int_pow(pairing(c, f), n));
        if (c.primitive) prim.add(detail::int_pow(pairing(c, f), n));
        const double root_pairing = pairing(abelianize(c.root_key.letters, t.genus), f);
        const double term = detail::int_pow(static_cast<double>(c.power), n) *
                            detail::int_pow(root_pairing, n);
        recon.add(term);
        if (c.power >= 2) corr.add(term);
    }
    out.phi_n = direct.sum;
    out.pi_n = prim.sum;
    out.reconstructed_phi_n = recon.sum;
    out.correction = corr.sum;
    return out;
}

struct Histogram {
    std::vector<double> edges;          // bins+1 edges
    std::vector<std::size_t> counts;    // outliers clipped into the end bins
    std::vector<double> gauss_density;  // standard normal mass per bin
};

inline Histogram make_histogram(const std::vector<double>& samples, int bins, double lo,
                                double hi) {
    Histogram h;
    const double w = (hi - lo) / bins;
    for (int b = 0; b <= bins; ++b) h.edges.push_back(lo + b * w);
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (double v : samples) {
        int b = static_cast<int>(std::floor((v - lo) / w));
        b = std::clamp(b, 0, bins - 1);
        ++h.counts[static_cast<std::size_t>(b)];
    }
    for (int b = 0; b < bins; ++b)
        h.gauss_density.push_back(normal_cdf(h.edges[static_cast<std::size_t>(b) + 1]) -
                                  normal_cdf(h.edges[static_cast<std::size_t>(b)]));
    return h;
}

struct DistributionReport {
    std::vector<double> T_grid;
    std::vector<std::size_t> sample_sizes;
    std::vector<double> ks;           // one per grid point
    std::vector<double> central_mass; // fraction of studentized samples in [-1,1]
    Histogram histogram;              // at the largest grid point
};

/// Studentized normalized-pairing samples over classes with N <= T, for each
/// T in the grid, with Gaussian overlay and KS statistic.
inline DistributionReport distribution_report(const ClassTable& t, const HarmonicForm& f,
                                              const std::vector<double>& T_grid, int bins = 41,
                                              bool all_classes = false,
                                              double vol = 4.0 * std::numbers::pi) {
    DistributionReport rep;
    rep.T_grid = T_grid;
    for (double T : T_grid) {
        std::vector<double> samples;
        for (const ConjClass& c : t.classes) {
            if (c.N > T) break;
            if (!all_classes && !c.primitive) continue;
            // studentization cancels the norm/vol scaling; 1/sqrt(l) is what
            // matters here
            samples.push_back(pairing(c, f) / std::sqrt(c.l));
        }
        if (samples.size() < 100)
            throw InsufficientData("distribution_report: " + std::to_string(samples.size()) +
                                   " samples at T");
        std::vector<double> st = studentize(samples);
        std::size_t inside = 0;
        for (double v : st)
            if (v >= -1.0 && v <= 1.0) ++inside;
        rep.sample_sizes.push_back(st.size());
        rep.ks.push_back(ks_against_gaussian(samples));
        rep.central_mass.push_back(static_cast<double>(inside) / static_cast<double>(st.size()));
        if (T == *std::max_element(T_grid.begin(), T_grid.end()))
            rep.histogram = make_histogram(st, bins, -4.0, 4.0);
    }
    (void)vol;
    return rep;
}

}  // namespace geodesic
