#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "geodesic/core.hpp"
#include "geodesic/group.hpp"

using namespace geodesic;

namespace {

const SurfaceGroup& bolza() {
    static const SurfaceGroup g = SurfaceGroup::bolza();
    return g;
}

Word random_word(std::mt19937& rng, int len) {
    std::uniform_int_distribution<int> d(0, 7);
    const std::vector<Letter> alpha = bolza().letters();
    Word w;
    for (int i = 0; i < len; ++i) w.push_back(alpha[static_cast<std::size_t>(d(rng))]);
    return w;
}

}  // namespace

TEST_CASE("bolza group basics") {
    const SurfaceGroup& g = bolza();
    CHECK(g.genus == 2);
    CHECK(g.vol == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-15));
    CHECK(g.relator.size() == 8);
    CHECK(g.relator_ok(1e-7));
    CHECK(abelianize(g.relator, 2) == HomologyVector{0, 0, 0, 0});

    // shortest translation length among the generators
    const double l0 = 2.0 * std::acosh(1.0 + std::numbers::sqrt2);
    for (int k = 1; k <= 4; ++k) {
        const NormLength nl = norm_and_length(make_element(g.gen(static_cast<Letter>(k))));
        CHECK(nl.l == doctest::Approx(l0).epsilon(1e-12));
    }
}

TEST_CASE("dehn_reduce kills the relator and keeps generators") {
    const SurfaceGroup& g = bolza();
    CHECK(g.dehn_reduce(g.relator).empty());
    CHECK(g.dehn_reduce({1}) == Word{1});
    // 5-letter subword of the relator reduces to the 3-letter complement inverse
    const Word sub(g.relator.begin(), g.relator.begin() + 5);
    const Word complement_inv = invert(Word(g.relator.begin() + 5, g.relator.end()));
    CHECK(g.dehn_reduce(sub) == complement_inv);
}

TEST_CASE("dehn reduction is sound: same matrix") {
    const SurfaceGroup& g = bolza();
    std::mt19937 rng(17);
    for (int trial = 0; trial < 10'000; ++trial) {
        const Word w = random_word(rng, 1 + static_cast<int>(rng() % 30));
        const Word r = g.dehn_reduce(w);
        CHECK(matrices_close(g.evaluate(w), g.evaluate(r), 1e-6));
    }
}

TEST_CASE("dehn solves the word problem") {
    const SurfaceGroup& g = bolza();
    std::mt19937 rng(19);
    int empties = 0;
    for (int trial = 0; trial < 1'000; ++trial) {
        Word w = random_word(rng, 1 + static_cast<int>(rng() % 12));
        if (trial % 4 == 0) {
            // plant identities: u relator^{±1} u^{-1} w w^{-1}
            const Word u = random_word(rng, 3);
            const Word rel = trial % 8 ? g.relator : invert(g.relator);
            w = concat(concat(concat(u, rel), invert(u)), concat(w, invert(w)));
        }
        const bool trivial_word = g.dehn_reduce(w).empty();
        const Matrix2 m = g.evaluate(w);
        // products of ~35 generators accumulate rounding error up to ~1e-5
        // before cancelling; the nearest non-identity element differs from
        // +-I by order 1, so a loose cutoff is still unambiguous
        const bool trivial_matrix = entrywise_close(m, Matrix2::identity(), 1e-3) ||
                                    entrywise_close(m, Matrix2::identity().negated(), 1e-3);
        CHECK(trivial_word == trivial_matrix);
        if (trivial_word) ++empties;
    }
    CHECK(empties > 100);  // the planted cases actually exercised the branch
}

TEST_CASE("cyclic_normal_form merges explicit conjugates") {
    const SurfaceGroup& g = bolza();
    CHECK(g.cyclic_normal_form({2, 1, -2}) == g.cyclic_normal_form({1}));
    CHECK(g.cyclic_normal_form({3, 1}) == g.cyclic_normal_form({1, 3}));
    const Word w = concat(concat(g.relator, Word{1}), invert(g.relator));
    CHECK(g.cyclic_normal_form(w) == g.cyclic_normal_form({1}));
    CHECK_THROWS_AS(g.cyclic_normal_form(g.relator), IdentityWord);
}

TEST_CASE("cyclic_normal_form is a conjugacy invariant on random pairs") {
    const SurfaceGroup& g = bolza();
    std::mt19937 rng(23);
    for (int trial = 0; trial < 1'000; ++trial) {
        const Word w = random_word(rng, 1 + static_cast<int>(rng() % 10));
        const Word u = random_word(rng, 1 + static_cast<int>(rng() % 8));
        const Word conj = concat(concat(u, w), invert(u));
        if (g.dehn_reduce(w).empty()) continue;
        CHECK(g.cyclic_normal_form(conj) == g.cyclic_normal_form(w));
    }
}

TEST_CASE("abelianization of powers scales linearly") {
    const SurfaceGroup& g = bolza();
    Word w{1, -3, 2};
    Word w3 = concat(concat(w, w), w);
    HomologyVector h = abelianize(w, g.genus);
    HomologyVector h3 = abelianize(w3, g.genus);
    for (int k = 0; k < 4; ++k) CHECK(h3[static_cast<std::size_t>(k)] == 3 * h[static_cast<std::size_t>(k)]);
}
