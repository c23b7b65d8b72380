#pragma once

// Poincare pairing against a harmonic 1-form given by its periods, the
// normalized pairing, the unitary character family and the Eichler-bound
// diagnostic.

#include <cmath>
#include <complex>
#include <vector>

#include "geodesic/enumerate.hpp"
#include "geodesic/errors.hpp"
#include "geodesic/word.hpp"

namespace geodesic {

/// A harmonic 1-form, represented purely by its periods over the homology
/// basis (the fixed generator basis of the group).
struct HarmonicForm {
    std::vector<double> periods;  // length 2g, not all zero
    std::string name = "alpha";

    bool valid() const {
        for (double p : periods)
            if (p != 0.0) return true;
        return false;
    }
};

inline double pairing(const HomologyVector& h, const HarmonicForm& f) {
    double s = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k)
        s += static_cast<double>(h[k]) * f.periods[k];
    return s;
}

inline double pairing(const ConjClass& c, const HarmonicForm& f) {
    return pairing(c.homology, f);
}

inline double pairing(const Word& w, const HarmonicForm& f, int genus) {
    return pairing(abelianize(w, genus), f);
}

/// [gamma, alpha] = sqrt(vol / (2 ||alpha||^2 l)) <gamma, alpha>.
inline double normalized_pairing(const ConjClass& c, const HarmonicForm& f,
                                 double norm_alpha_sq, double vol) {
    if (norm_alpha_sq <= 0.0) throw NonPositiveNorm("norm_alpha_sq must be positive");
    if (vol <= 0.0) throw NonPositiveNorm("vol must be positive");
    return std::sqrt(vol / (2.0 * norm_alpha_sq * c.l)) * pairing(c, f);
}

/// chi(gamma, eps) = exp(-i eps <gamma, alpha>), a unitary character.
inline std::complex<double> character(const ConjClass& c, double eps, const HarmonicForm& f) {
    const double ph = -eps * pairing(c, f);
    return {std::cos(ph), std::sin(ph)};
}

/// Self-calibration of ||alpha||^2 from the second summatory asymptotic:
/// sum over primitive N <= T of <g0,a>^2 log N ~ (2 ||a||^2 / vol) T log T.
inline double effective_norm_sq(const ClassTable& t, const HarmonicForm& f, double T,
                                double vol) {
    std::size_t primitives = 0;
    double s = 0.0;
    for (const ConjClass& c : t.classes) {
        if (c.N > T) break;
        if (!c.primitive) continue;
        ++primitives;
        const double p = pairing(c, f);
        s += p * p * c.l;
    }
    if (primitives < 100)
        throw InsufficientData("effective_norm_sq: only " + std::to_string(primitives) +
                               " primitive classes below T");
    return vol * s / (2.0 * T * std::log(T));
}

struct EichlerDiagnostics {
    double max_ratio = 0.0;
    const ConjClass* argmax = nullptr;
};

/// max |<gamma,alpha>| / log N(gamma) over the table; the Eichler bound says
/// this saturates as the table grows.
inline EichlerDiagnostics eichler_diagnostics(const ClassTable& t, const HarmonicForm& f) {
    if (t.classes.empty()) throw InsufficientData("eichler_diagnostics: empty table");
    EichlerDiagnostics d;
    for (const ConjClass& c : t.classes) {
        const double r = std::abs(pairing(c, f)) / c.l;
        if (r > d.max_ratio) {
            d.max_ratio = r;
            d.argmax = &c;
        }
    }
    return d;
}

}  // namespace geodesic
