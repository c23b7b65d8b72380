#include <doctest.h>

#include <cmath>
#include <numbers>

#include "geodesic/periods.hpp"

using namespace geodesic;

namespace {

const SurfaceGroup& bolza() {
    static const SurfaceGroup g = SurfaceGroup::bolza();
    return g;
}

const ClassTable& table8() {
    static const ClassTable t = build_class_table(bolza(), 8.0);
    return t;
}

}  // namespace

TEST_CASE("pairing is the homology dot product") {
    const HarmonicForm f{{1.0, -2.0, 0.5, 0.0}};
    CHECK(f.valid());
    CHECK_FALSE(HarmonicForm{{0.0, 0.0, 0.0, 0.0}}.valid());

    CHECK(pairing(HomologyVector{1, 0, 0, 0}, f) == 1.0);
    CHECK(pairing(HomologyVector{2, 1, -4, 7}, f) == doctest::Approx(2.0 - 2.0 - 2.0));
    CHECK(pairing(Word{1, 1, 2, -3}, f, 2) == doctest::Approx(2.0 - 2.0 - 0.5));
    // conjugation-invariant and additive in the word
    CHECK(pairing(Word{2, 1, -2}, f, 2) == pairing(Word{1}, f, 2));
}

TEST_CASE("pairing is linear in the form and flips under inversion") {
    const HarmonicForm f{{0.3, 1.1, -0.7, 2.0}};
    HarmonicForm f2 = f;
    for (double& p : f2.periods) p *= 3.0;
    const ClassTable& t = table8();
    for (std::size_t i = 0; i < t.classes.size(); i += 7) {
        const ConjClass& c = t.classes[i];
        CHECK(pairing(c, f2) == doctest::Approx(3.0 * pairing(c, f)).epsilon(1e-12));
        const ConjClass& inv = t.classes[t.inverse_index[i]];
        CHECK(pairing(inv, f) == -pairing(c, f));  // exact: integer homology negates
    }
}

TEST_CASE("normalized pairing scaling") {
    const HarmonicForm f{{1.0, 0.0, 0.0, 0.0}};
    const ConjClass& c = table8().classes.front();
    const double vol = 4.0 * std::numbers::pi;
    const double base = normalized_pairing(c, f, 1.0, vol);
    CHECK(base == doctest::Approx(std::sqrt(vol / (2.0 * c.l)) * pairing(c, f)).epsilon(1e-12));
    // quadrupling the norm halves the normalized value
    CHECK(normalized_pairing(c, f, 4.0, vol) == doctest::Approx(base / 2.0).epsilon(1e-12));
    CHECK_THROWS_AS(normalized_pairing(c, f, 0.0, vol), NonPositiveNorm);
    CHECK_THROWS_AS(normalized_pairing(c, f, -1.0, vol), NonPositiveNorm);
    CHECK_THROWS_AS(normalized_pairing(c, f, 1.0, 0.0), NonPositiveNorm);
}

TEST_CASE("character is unitary and multiplicative in eps") {
    const HarmonicForm f{{0.4, -1.3, 0.9, 0.2}};
    for (std::size_t i = 0; i < table8().classes.size(); i += 11) {
        const ConjClass& c = table8().classes[i];
        for (double eps : {0.0, 0.3, -1.7}) {
            const std::complex<double> ch = character(c, eps, f);
            CHECK(std::abs(ch) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(std::abs(ch - std::exp(std::complex<double>(0.0, -eps * pairing(c, f)))) <
                  1e-12);
        }
        CHECK(character(c, 0.0, f) == std::complex<double>(1.0, 0.0));
        // inverse class conjugates the character
        const ConjClass& inv = table8().classes[table8().inverse_index[i]];
        CHECK(std::abs(character(inv, 0.3, f) - std::conj(character(c, 0.3, f))) < 1e-15);
    }
}

TEST_CASE("effective norm scales quadratically in the form") {
    const double vol = 4.0 * std::numbers::pi;
    const HarmonicForm f{{1.0, 0.5, -0.25, 0.75}};
    HarmonicForm f2 = f;
    for (double& p : f2.periods) p *= 2.0;
    const double T = std::exp(8.0);
    const double n1 = effective_norm_sq(table8(), f, T, vol);
    const double n2 = effective_norm_sq(table8(), f2, T, vol);
    CHECK(n1 > 0.0);
    CHECK(n2 == doctest::Approx(4.0 * n1).epsilon(1e-12));
}

TEST_CASE("effective norm is stable in T") {
    const double vol = 4.0 * std::numbers::pi;
    const HarmonicForm f{{1.0, 0.0, 0.0, 0.0}};
    const double a = effective_norm_sq(table8(), f, std::exp(7.0), vol);
    const double b = effective_norm_sq(table8(), f, std::exp(8.0), vol);
    // the summatory asymptotic has already set in at this scale
    CHECK(b == doctest::Approx(a).epsilon(0.25));
}

TEST_CASE("effective norm needs enough classes") {
    const HarmonicForm f{{1.0, 0.0, 0.0, 0.0}};
    CHECK_THROWS_AS(effective_norm_sq(table8(), f, std::exp(3.5), 4.0 * std::numbers::pi),
                    InsufficientData);
}

TEST_CASE("eichler ratio saturates") {
    const HarmonicForm f{{1.0, -1.0, 2.0, 0.5}};
    const ClassTable small = build_class_table(bolza(), 6.0);
    const EichlerDiagnostics d_small = eichler_diagnostics(small, f);
    const EichlerDiagnostics d_big = eichler_diagnostics(table8(), f);
    REQUIRE(d_small.argmax != nullptr);
    REQUIRE(d_big.argmax != nullptr);
    CHECK(d_big.max_ratio >= d_small.max_ratio);  // monotone in the table
    // the winner really attains the ratio
    CHECK(std::abs(pairing(*d_big.argmax, f)) / d_big.argmax->l ==
          doctest::Approx(d_big.max_ratio).epsilon(1e-12));
    // growing the table further moves the ratio only a little
    const ClassTable bigger = build_class_table(bolza(), 9.0);
    const double r9 = eichler_diagnostics(bigger, f).max_ratio;
    CHECK(r9 <= d_big.max_ratio * 1.5);

    CHECK_THROWS_AS(eichler_diagnostics(ClassTable{}, f), InsufficientData);
}
