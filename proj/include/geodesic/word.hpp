#pragma once

// Words in the generators of a surface group: letters are signed generator
// indices in {±1, ..., ±2g}, negative meaning inverse.  Free reduction,
// inversion, abelianization, cyclic rotation machinery and primitive-power
// factorization live here; everything relator-dependent is in group.hpp.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "geodesic/errors.hpp"

namespace geodesic {

using Letter = std::int8_t;
using Word = std::vector<Letter>;

inline Word free_reduce(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (Letter x : w) {
        if (!out.empty() && out.back() == -x)
            out.pop_back();
        else
            out.push_back(x);
    }
    return out;
}

inline Word invert(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(static_cast<Letter>(-*it));
    return out;
}

inline Word concat(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

inline Word rotated(const Word& w, std::size_t shift) {
    Word out;
    out.reserve(w.size());
    out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(shift), w.end());
    out.insert(out.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(shift));
    return out;
}

/// Free reduction on the cyclic word: reduce, then cancel across the seam.
inline Word cyclic_free_reduce(Word w) {
    w = free_reduce(w);
    while (w.size() > 1 && w.front() == -w.back()) {
        w.erase(w.begin());
        w.pop_back();
        w = free_reduce(w);
    }
    return w;
}

/// Index of the lexicographically least rotation (two-candidate duel).
inline std::size_t least_rotation_index(const Word& w) {
    const std::size_t n = w.size();
    if (n <= 1) return 0;
    std::size_t i = 0, j = 1, k = 0;
    while (i < n && j < n && k < n) {
        const Letter a = w[(i + k) % n];
        const Letter b = w[(j + k) % n];
        if (a == b) {
            ++k;
            continue;
        }
        if (a > b) {
            i += k + 1;
            if (i == j) ++i;
        } else {
            j += k + 1;
            if (j == i) ++j;
        }
        k = 0;
    }
    return std::min(i, j);
}

inline Word least_rotation(const Word& w) {
    if (w.empty()) return w;
    return rotated(w, least_rotation_index(w));
}

/// Freely-and-cyclically reduced word stored as its least rotation.
/// Construction is owned by SurfaceGroup::cyclic_normal_form; this type is
/// just the canonical container used as a conjugacy-class key.
struct CyclicWord {
    Word letters;

    bool operator==(const CyclicWord& o) const = default;
    auto operator<=>(const CyclicWord& o) const = default;
    bool empty() const { return letters.empty(); }
    std::size_t size() const { return letters.size(); }
};

struct CyclicWordHash {
    std::size_t operator()(const CyclicWord& c) const {
        std::size_t h = 1469598103934665603ull;
        for (Letter x : c.letters) {
            h ^= static_cast<std::size_t>(static_cast<unsigned char>(x));
            h *= 1099511628211ull;
        }
        return h;
    }
};

/// Smallest-period decomposition of a cyclic word: c = root^k with the root
/// not a proper power.  KMP failure function; a period is valid only if it
/// divides the length.
inline std::pair<CyclicWord, int> primitive_root(const CyclicWord& c) {
    const Word& w = c.letters;
    const std::size_t n = w.size();
    if (n == 0) throw IdentityWord("primitive_root of empty word");
    std::vector<std::size_t> fail(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
        std::size_t j = fail[i - 1];
        while (j > 0 && w[i] != w[j]) j = fail[j - 1];
        if (w[i] == w[j]) ++j;
        fail[i] = j;
    }
    const std::size_t p = n - fail[n - 1];
    if (n % p != 0) return {c, 1};
    const int k = static_cast<int>(n / p);
    CyclicWord root{least_rotation(Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p)))};
    return {root, k};
}

using HomologyVector = std::vector<long long>;

/// Abelianization: coordinate k-1 counts letter +k minus letter -k.
inline HomologyVector abelianize(const Word& w, int genus) {
    HomologyVector h(static_cast<std::size_t>(2 * genus), 0);
    for (Letter x : w) {
        const int k = std::abs(static_cast<int>(x)) - 1;
        h[static_cast<std::size_t>(k)] += (x > 0) ? 1 : -1;
    }
    return h;
}

// Serialization: comma-separated signed integers, "1,-3,2"; empty word is "".

inline std::string word_to_string(const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(static_cast<int>(w[i]));
    }
    return s;
}

inline Word word_from_string(const std::string& s) {
    Word w;
    if (s.empty()) return w;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const long v = std::strtol(tok.c_str(), nullptr, 10);
        if (v == 0) throw Error("word_from_string: zero letter in \"" + s + "\"");
        w.push_back(static_cast<Letter>(v));
    }
    return w;
}

}  // namespace geodesic
