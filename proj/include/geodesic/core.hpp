#pragma once

// Floating-point arithmetic on PSL(2,R): products, traces, element
// classification, norms/lengths of hyperbolic elements and hyperbolic
// displacement of the base point i.

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>

#include "geodesic/errors.hpp"
#include "geodesic/word.hpp"

namespace geodesic {

inline constexpr double kSignZeroTol = 1e-10;   // "first nonzero entry" cutoff
inline constexpr double kIdentityTol = 1e-9;
inline constexpr double kAcoshClampSlack = 1e-12;

/// Real 2x2 matrix with det = 1.
struct Matrix2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    static Matrix2 identity() { return {}; }

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }
    double frob_sq() const { return a * a + b * b + c * c + d * d; }

    Matrix2 operator*(const Matrix2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Matrix2 inverse() const { return {d, -b, -c, a}; }
    Matrix2 negated() const { return {-a, -b, -c, -d}; }

    bool det_ok(double tol = 1e-9) const {
        return std::abs(det() - 1.0) <= tol * std::max(1.0, frob_sq());
    }
};

/// Sign-normalize a det-1 matrix as a PSL(2,R) representative: the first
/// entry of (a,b,c,d) with |entry| > 1e-10 is made positive.  Idempotent.
inline Matrix2 psl2_normalize(const Matrix2& m) {
    const double e[4] = {m.a, m.b, m.c, m.d};
    for (double v : e) {
        if (std::abs(v) > kSignZeroTol) return v > 0 ? m : m.negated();
    }
    return m;
}

inline bool entrywise_close(const Matrix2& x, const Matrix2& y, double tol) {
    return std::abs(x.a - y.a) <= tol && std::abs(x.b - y.b) <= tol &&
           std::abs(x.c - y.c) <= tol && std::abs(x.d - y.d) <= tol;
}

/// Entrywise comparison with the tolerance scaled by the larger entry
/// magnitude; long words make entries grow like e^{d/2}, so an absolute
/// tolerance is meaningless there.
inline bool matrices_close(const Matrix2& x, const Matrix2& y, double tol) {
    const double scale = std::max(1.0, std::sqrt(std::max(x.frob_sq(), y.frob_sq())));
    return entrywise_close(x, y, tol * scale);
}

/// A group element: sign-normalized matrix plus an optional word witness
/// in the generators.
struct PSL2Element {
    Matrix2 mat;
    std::optional<Word> word;

    static PSL2Element identity() { return {Matrix2::identity(), Word{}}; }
};

inline PSL2Element make_element(const Matrix2& m, std::optional<Word> w = std::nullopt) {
    return {psl2_normalize(m), std::move(w)};
}

/// Product; word witness concatenates (and freely reduces) when both present.
inline PSL2Element mul(const PSL2Element& g, const PSL2Element& h) {
    PSL2Element out;
    out.mat = psl2_normalize(g.mat * h.mat);
    if (g.word && h.word) {
        Word w = *g.word;
        w.insert(w.end(), h.word->begin(), h.word->end());
        out.word = free_reduce(w);
    }
    return out;
}

inline PSL2Element inverse(const PSL2Element& g) {
    PSL2Element out;
    out.mat = psl2_normalize(g.mat.inverse());
    if (g.word) out.word = invert(*g.word);
    return out;
}

enum class ElementKind { identity, elliptic, parabolic, hyperbolic };

inline ElementKind classify(const PSL2Element& g) {
    const Matrix2& m = g.mat;
    if (entrywise_close(m, Matrix2::identity(), kIdentityTol) ||
        entrywise_close(m, Matrix2::identity().negated(), kIdentityTol))
        return ElementKind::identity;
    const double t = std::abs(m.trace());
    if (std::abs(t - 2.0) <= kIdentityTol) return ElementKind::parabolic;
    return t < 2.0 ? ElementKind::elliptic : ElementKind::hyperbolic;
}

struct NormLength {
    double N;  // norm, > 1
    double l;  // geodesic length = log N
};

/// Norm and translation length of a hyperbolic element.  With t = |tr g| and
/// m = (t + sqrt(t^2-4))/2 the element is conjugate to diag(m, 1/m), so
/// N = m^2 and l = log N; equivalently cosh(l/2) = t/2.
inline NormLength norm_and_length(const PSL2Element& g) {
    const double t = std::abs(g.mat.trace());
    if (t <= 2.0 + kIdentityTol)
        throw NonHyperbolic("norm_and_length: |trace| = " + std::to_string(t) + " <= 2");
    const double m = (t + std::sqrt(t * t - 4.0)) / 2.0;
    NormLength nl;
    nl.l = 2.0 * std::log(m);
    nl.N = m * m;
    return nl;
}

inline NormLength norm_length_from_trace(double trace) {
    const double t = std::abs(trace);
    if (t <= 2.0 + kIdentityTol)
        throw NonHyperbolic("norm_length_from_trace: |trace| <= 2");
    const double m = (t + std::sqrt(t * t - 4.0)) / 2.0;
    return {m * m, 2.0 * std::log(m)};
}

inline double acosh_clamped(double u) {
    if (u < 1.0) {
        if (u < 1.0 - kAcoshClampSlack)
            throw Error("acosh argument " + std::to_string(u) + " below 1");
        u = 1.0;
    }
    return std::acosh(u);
}

/// Hyperbolic distance d(i, g.i): cosh d = (a^2+b^2+c^2+d^2)/2.
inline double origin_distance(const PSL2Element& g) {
    return acosh_clamped(g.mat.frob_sq() / 2.0);
}

inline double origin_distance(const Matrix2& m) {
    return acosh_clamped(m.frob_sq() / 2.0);
}

}  // namespace geodesic
