#pragma once

// Truncated evaluation of the character-twisted Selberg zeta machinery: the
// series E and its epsilon-derivatives, the splitting terms A1 and A2, the
// direct log-derivative expansion and the partial Euler product.  All sums
// run over the classes stored in the table, so any two series evaluated on
// the same table are consistent term by term.

#include <cmath>
#include <complex>
#include <vector>

#include "geodesic/enumerate.hpp"
#include "geodesic/periods.hpp"

namespace geodesic {

using Complex = std::complex<double>;

/// A truncated series/product value.  tail_bound is a heuristic envelope of
/// the truncation error from the prime-geodesic density e^u/u with a x1.5
/// margin; it is only meaningful when tail_valid is set (inside the abscissa
/// of convergence), and never rigorous.
struct SeriesValue {
    Complex value{0.0, 0.0};
    std::size_t terms_used = 0;
    double tail_bound = 0.0;
    bool tail_valid = false;   // false in the divergent region
    bool divergent = false;    // Re(s) at or below the abscissa of convergence
};

namespace detail {

// Compensated (Kahan) accumulation; keeps parallel/reordered evaluation
// within the 1e-12 determinism contract.
struct KahanComplex {
    Complex sum{0.0, 0.0};
    Complex comp{0.0, 0.0};
    void add(Complex v) {
        const Complex y = v - comp;
        const Complex t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

// integral_{x}^{inf} u e^{(1-sigma) u} du for sigma > 1, times the margin.
inline double pgt_tail(double x_max, double sigma) {
    const double a = sigma - 1.0;
    return 1.5 * std::exp(-a * x_max) * (x_max / a + 1.0 / (a * a));
}

inline void finish(SeriesValue& sv, double x_max, double sigma, double abscissa) {
    if (sigma > abscissa) {
        sv.tail_valid = sigma > 1.0;  // density-based bound needs sigma > 1
        if (sv.tail_valid) sv.tail_bound = pgt_tail(x_max, sigma);
    } else {
        sv.divergent = true;
    }
}

}  // namespace detail

/// E(s, eps) = sum over primitive classes of chi(g0,eps) log N(g0) N(g0)^{-s}.
inline SeriesValue E_series(Complex s, double eps, const ClassTable& t, const HarmonicForm& f) {
    detail::KahanComplex acc;
    SeriesValue sv;
    for (const ConjClass& c : t.classes) {
        if (!c.primitive) continue;
        acc.add(character(c, eps, f) * c.l * std::pow(Complex(c.N), -s));
        ++sv.terms_used;
    }
    sv.value = acc.sum;
    detail::finish(sv, t.x_max, s.real(), 1.0);
    return sv;
}

/// E^{(n)}(s, 0) = sum over primitives of (-i)^n <g0,a>^n log N(g0) N(g0)^{-s}.
inline SeriesValue E_derivative(int n, Complex s, const ClassTable& t, const HarmonicForm& f) {
    const Complex minus_i{0.0, -1.0};
    Complex in{1.0, 0.0};
    for (int k = 0; k < n; ++k) in *= minus_i;
    detail::KahanComplex acc;
    SeriesValue sv;
    for (const ConjClass& c : t.classes) {
        if (!c.primitive) continue;
        const double p = pairing(c, f);
        acc.add(in * std::pow(p, n) * c.l * std::pow(Complex(c.N), -s));
        ++sv.terms_used;
    }
    sv.value = acc.sum;
    detail::finish(sv, t.x_max, s.real(), 1.0);
    return sv;
}

/// A1(s, eps): sum over ALL classes, with the log of the primitive root in
/// the numerator; converges for Re(s) > 0.
inline SeriesValue A1_series(Complex s, double eps, const ClassTable& t, const HarmonicForm& f) {
    detail::KahanComplex acc;
    SeriesValue sv;
    for (const ConjClass& c : t.classes) {
        const double log_root = c.l / c.power;  // log N(gamma_0)
        acc.add(character(c, eps, f) * log_root * std::pow(Complex(c.N), -s) / (c.N - 1.0));
        ++sv.terms_used;
    }
    sv.value = acc.sum;
    detail::finish(sv, t.x_max, s.real(), 0.0);
    return sv;
}

/// A2(s, eps): sum over primitive classes of
/// log N(g0) chi^2 N^{-2s} / (1 - chi N^{-s}); converges for Re(s) > 1/2.
inline SeriesValue A2_series(Complex s, double eps, const ClassTable& t, const HarmonicForm& f) {
    detail::KahanComplex acc;
    SeriesValue sv;
    for (const ConjClass& c : t.classes) {
        if (!c.primitive) continue;
        const Complex chi = character(c, eps, f);
        const Complex ns = std::pow(Complex(c.N), -s);
        acc.add(c.l * chi * chi * ns * ns / (1.0 - chi * ns));
        ++sv.terms_used;
    }
    sv.value = acc.sum;
    detail::finish(sv, t.x_max, s.real(), 0.5);
    return sv;
}

/// Z'(s,eps)/Z(s,eps) expanded directly from the double product:
/// sum over primitives, m = 1..m_max of chi^m log N N^{-ms} / (1 - N^{-m}).
inline SeriesValue zeta_log_deriv_direct(Complex s, double eps, const ClassTable& t,
                                         const HarmonicForm& f, int m_max = 40) {
    detail::KahanComplex acc;
    SeriesValue sv;
    for (const ConjClass& c : t.classes) {
        if (!c.primitive) continue;
        const Complex chi = character(c, eps, f);
        const Complex nms = std::pow(Complex(c.N), -s);
        Complex chim = chi;
        Complex npow = nms;
        double nm = c.N;
        for (int m = 1; m <= m_max; ++m) {
            acc.add(chim * c.l * npow / (1.0 - 1.0 / nm));
            chim *= chi;
            npow *= nms;
            nm *= c.N;
            if (std::abs(npow) < 1e-300) break;
        }
        ++sv.terms_used;
    }
    sv.value = acc.sum;
    detail::finish(sv, t.x_max, s.real(), 1.0);
    return sv;
}

/// Partial Euler product: prod over primitives in the table, k = 0..k_max of
/// (1 - chi(g0,eps) N(g0)^{-s-k}).
inline SeriesValue zeta_partial_product(Complex s, double eps, const ClassTable& t,
                                        const HarmonicForm& f, int k_max = 40) {
    Complex prod{1.0, 0.0};
    SeriesValue sv;
    for (const ConjClass& c : t.classes) {
        if (!c.primitive) continue;
        const Complex chi = character(c, eps, f);
        for (int k = 0; k <= k_max; ++k) {
            const Complex term = chi * std::pow(Complex(c.N), -(s + static_cast<double>(k)));
            prod *= (1.0 - term);
            if (std::abs(term) < 1e-18) break;
        }
        ++sv.terms_used;
    }
    sv.value = prod;
    detail::finish(sv, t.x_max, s.real(), 1.0);
    return sv;
}

}  // namespace geodesic
