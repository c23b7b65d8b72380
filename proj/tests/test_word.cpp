#include <doctest.h>

#include <random>

#include "geodesic/word.hpp"

using namespace geodesic;

TEST_CASE("free_reduce") {
    CHECK(free_reduce({1, -1}).empty());
    CHECK(free_reduce({2, 1, -1, 3}) == Word{2, 3});
    const Word w{2, -3, 1, 4};
    CHECK(free_reduce(w) == w);  // idempotent on reduced input
    CHECK(free_reduce({1, 2, -2, -1, 3}) == Word{3});  // nested cancellation
}

TEST_CASE("invert and concat") {
    const Word w{1, -3, 2};
    CHECK(invert(w) == Word{-2, 3, -1});
    CHECK(free_reduce(concat(w, invert(w))).empty());
}

TEST_CASE("least rotation agrees with brute force") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> d(-4, 4);
    for (int trial = 0; trial < 500; ++trial) {
        Word w;
        const int n = 1 + static_cast<int>(rng() % 12);
        for (int i = 0; i < n; ++i) {
            int v = d(rng);
            if (v == 0) v = 1;
            w.push_back(static_cast<Letter>(v));
        }
        Word best = w;
        for (std::size_t s = 1; s < w.size(); ++s) best = std::min(best, rotated(w, s));
        CHECK(least_rotation(w) == best);
    }
}

TEST_CASE("primitive_root") {
    auto [r1, k1] = primitive_root(CyclicWord{{1, 2, 1, 2}});
    CHECK(r1.letters == Word{1, 2});
    CHECK(k1 == 2);

    auto [r2, k2] = primitive_root(CyclicWord{{1, 2, 3}});
    CHECK(r2.letters == Word{1, 2, 3});
    CHECK(k2 == 1);

    auto [r3, k3] = primitive_root(CyclicWord{{1, 1, 1}});
    CHECK(r3.letters == Word{1});
    CHECK(k3 == 3);

    CHECK_THROWS_AS(primitive_root(CyclicWord{}), IdentityWord);
}

TEST_CASE("abelianize") {
    CHECK(abelianize({1, 1, 4}, 2) == HomologyVector{2, 0, 0, 1});
    // homomorphism: counts add
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> d(1, 4);
    for (int trial = 0; trial < 100; ++trial) {
        Word v, w;
        for (int i = 0; i < 5; ++i) {
            v.push_back(static_cast<Letter>(rng() % 2 ? d(rng) : -d(rng)));
            w.push_back(static_cast<Letter>(rng() % 2 ? d(rng) : -d(rng)));
        }
        const HomologyVector hv = abelianize(v, 2), hw = abelianize(w, 2);
        HomologyVector sum(4);
        for (int k = 0; k < 4; ++k) sum[static_cast<std::size_t>(k)] = hv[static_cast<std::size_t>(k)] + hw[static_cast<std::size_t>(k)];
        CHECK(abelianize(concat(v, w), 2) == sum);
        // conjugation invariance
        CHECK(abelianize(concat(concat(v, w), invert(v)), 2) == hw);
    }
}

TEST_CASE("word string round trip") {
    const Word w{1, -3, 2};
    CHECK(word_to_string(w) == "1,-3,2");
    CHECK(word_from_string("1,-3,2") == w);
    CHECK(word_from_string("").empty());
    CHECK_THROWS_AS(word_from_string("1,0,2"), Error);
}
