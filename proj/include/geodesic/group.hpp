#pragma once

// Surface group combinatorics: the genus-2 regular-octagon (Bolza) group,
// Dehn's algorithm for the word problem, cyclic normal forms and the
// canonical conjugacy key.

#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numbers>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "geodesic/core.hpp"
#include "geodesic/errors.hpp"
#include "geodesic/word.hpp"

namespace geodesic {

namespace detail {

// Packs short letter sequences into an integer key.  Letters ±1..±2g map to
// codes 0..4g-1; for genus 2 that is 3 bits per letter.
struct LetterCodec {
    int genus;
    int bits;

    explicit LetterCodec(int g) : genus(g) {
        bits = 1;
        while ((1 << bits) < 4 * g) ++bits;
    }
    std::uint64_t code(Letter x) const {
        const int k = std::abs(static_cast<int>(x)) - 1;
        return static_cast<std::uint64_t>(x > 0 ? k : 2 * genus + k);
    }
    template <typename It>
    std::uint64_t pack(It first, It last) const {
        std::uint64_t key = 1;  // leading 1 separates lengths
        for (It it = first; it != last; ++it) key = (key << bits) | code(*it);
        return key;
    }
};

}  // namespace detail

class SurfaceGroup {
  public:
    int genus = 0;
    Word relator;
    double vol = 0.0;

    const Matrix2& gen(Letter x) const {
        const int k = std::abs(static_cast<int>(x)) - 1;
        return x > 0 ? gens_[static_cast<std::size_t>(k)]
                     : gen_invs_[static_cast<std::size_t>(k)];
    }

    std::vector<Letter> letters() const {
        std::vector<Letter> out;
        for (int k = 1; k <= 2 * genus; ++k) {
            out.push_back(static_cast<Letter>(k));
            out.push_back(static_cast<Letter>(-k));
        }
        return out;
    }

    Matrix2 evaluate(const Word& w) const {
        Matrix2 m = Matrix2::identity();
        for (Letter x : w) m = m * gen(x);
        return psl2_normalize(m);
    }

    PSL2Element element(const Word& w) const { return {evaluate(w), free_reduce(w)}; }

    /// Dehn reduction: freely reduce, then repeatedly replace any subword
    /// matching more than half of a cyclic rotation of relator^{±1} by the
    /// inverse of the shorter complement.  Leftmost match first; all matches
    /// have the same length so this is also longest-first.  The result is
    /// empty iff the input represents the identity.
    Word dehn_reduce(Word w) const {
        w = free_reduce(w);
        const std::size_t m = match_len();
        bool changed = true;
        while (changed && w.size() >= m) {
            changed = false;
            for (std::size_t i = 0; i + m <= w.size(); ++i) {
                const Word* rep = long_match(w.begin() + static_cast<std::ptrdiff_t>(i));
                if (!rep) continue;
                Word next(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
                next.insert(next.end(), rep->begin(), rep->end());
                next.insert(next.end(), w.begin() + static_cast<std::ptrdiff_t>(i + m), w.end());
                w = free_reduce(next);
                changed = true;
                break;
            }
        }
        return w;
    }

    /// Dehn reduction on the cyclic word: reduce, cancel across the seam and
    /// rewrite wrap-around long matches until stable.  Result is a shortest
    /// cyclic spelling of the conjugacy class (up to half-relator ambiguity).
    Word cyclic_dehn_reduce(Word w) const {
        const std::size_t m = match_len();
        for (;;) {
            w = cyclic_free_reduce(dehn_reduce(w));
            const std::size_t n = w.size();
            if (n < m) return w;
            bool rotatedMatch = false;
            Word doubled = concat(w, w);
            for (std::size_t i = n - m + 1; i < n; ++i) {  // seam-crossing windows only
                if (long_match(doubled.begin() + static_cast<std::ptrdiff_t>(i))) {
                    w = rotated(w, i);
                    rotatedMatch = true;
                    break;
                }
            }
            if (!rotatedMatch) return w;
        }
    }

    /// Canonical conjugacy key.  Cyclically Dehn-reduce, then close under all
    /// relator substitutions on the cyclic word (replace a cyclic subword p
    /// by q^{-1} whenever pq is a rotation of relator^{±1}), keeping words up
    /// to two letters above minimal length, and return the lexicographically
    /// least rotation over the minimal-length spellings reached.  Rotations
    /// plus half-relator swaps alone do not suffice: short conjugate words
    /// can be linked only through a longer intermediate spelling.
    CyclicWord cyclic_normal_form(const Word& w) const {
        Word u = cyclic_dehn_reduce(w);
        if (u.empty()) throw IdentityWord("cyclic_normal_form of identity word");
        return canonical_closure(u);
    }

    /// Relator evaluated over the generators must be ±I.
    bool relator_ok(double tol = 1e-7) const {
        const Matrix2 m = evaluate(relator);
        return entrywise_close(m, Matrix2::identity(), tol);
    }

    // Construction ----------------------------------------------------------

    static SurfaceGroup bolza();

  private:
    std::vector<Matrix2> gens_;      // g_1..g_{2g}
    std::vector<Matrix2> gen_invs_;  // their inverses
    detail::LetterCodec codec_{2};

    // Long-match table: subwords of length halfLen+1 of rotations of
    // relator^{±1}, mapped to the inverted complement (length halfLen-1).
    std::vector<std::int32_t> long_table_;  // packed key -> replacement index, -1 none
    std::vector<Word> long_repl_;
    // All proper splits pq of rotations of relator^{±1}: p -> q^{-1},
    // grouped by |p|.  Used only by the conjugacy closure.
    std::vector<std::unordered_map<std::uint64_t, std::vector<Word>>> split_maps_;

    std::size_t match_len() const { return relator.size() / 2 + 1; }

    template <typename It>
    const Word* long_match(It first) const {
        const std::uint64_t key = codec_.pack(first, first + static_cast<std::ptrdiff_t>(match_len()));
        const std::int32_t idx = long_table_[key];
        return idx < 0 ? nullptr : &long_repl_[static_cast<std::size_t>(idx)];
    }

    void build_tables() {
        const std::size_t L = relator.size();
        const std::size_t m = match_len();
        std::vector<Word> rots;
        for (const Word& base : {relator, invert(relator)})
            for (std::size_t s = 0; s < L; ++s) rots.push_back(rotated(base, s));

        long_table_.assign(std::size_t{1} << (codec_.bits * static_cast<int>(m) + 1), -1);
        for (const Word& r : rots) {
            const std::uint64_t key = codec_.pack(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(m));
            if (long_table_[key] < 0) {
                long_table_[key] = static_cast<std::int32_t>(long_repl_.size());
                long_repl_.push_back(invert(Word(r.begin() + static_cast<std::ptrdiff_t>(m), r.end())));
            }
        }
        split_maps_.assign(L, {});
        for (const Word& r : rots) {
            for (std::size_t k = 1; k < L; ++k) {
                const std::uint64_t key = codec_.pack(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(k));
                split_maps_[k][key].push_back(invert(Word(r.begin() + static_cast<std::ptrdiff_t>(k), r.end())));
            }
        }
    }

    CyclicWord canonical_closure(Word u) const {
        const std::size_t L = u.size();
        const std::size_t maxlen = L + 2;
        CyclicWord start{least_rotation(u)};
        CyclicWord best = start;
        std::unordered_set<CyclicWord, CyclicWordHash> seen{start};
        std::deque<CyclicWord> queue{start};
        while (!queue.empty()) {
            const Word v = queue.front().letters;
            queue.pop_front();
            const std::size_t n = v.size();
            const Word doubled = concat(v, v);
            for (std::size_t plen = 1; plen < relator.size() && plen <= n; ++plen) {
                const auto& table = split_maps_[plen];
                for (std::size_t i = 0; i < n; ++i) {
                    const auto it = table.find(codec_.pack(
                        doubled.begin() + static_cast<std::ptrdiff_t>(i),
                        doubled.begin() + static_cast<std::ptrdiff_t>(i + plen)));
                    if (it == table.end()) continue;
                    Word rest(doubled.begin() + static_cast<std::ptrdiff_t>(i + plen),
                              doubled.begin() + static_cast<std::ptrdiff_t>(i + n));
                    for (const Word& repl : it->second) {
                        Word cand = cyclic_free_reduce(concat(rest, repl));
                        if (cand.empty() || cand.size() > maxlen) continue;
                        Word reduced = cyclic_dehn_reduce(cand);
                        if (reduced.empty()) continue;
                        if (reduced.size() < L) return canonical_closure(reduced);
                        CyclicWord key{least_rotation(cand)};
                        if (seen.insert(key).second) {
                            queue.push_back(key);
                            if (key.size() == L && key < best) best = key;
                        }
                    }
                }
            }
        }
        return best;
    }
};

// Bolza group: eight side-pairing translations of the regular hyperbolic
// octagon centered at the origin of the disk model, g_k translating by
// l0 = 2 arccosh(1+sqrt 2) along the axis at angle k*pi/4, with
// g_{k+4} = g_k^{-1}.  Conjugated to the upper half-plane the independent
// generators g_0..g_3 come out as the symmetric matrices
//   [[ch + sh cos(k pi/4), -sh sin(k pi/4)], [-sh sin(k pi/4), ch - sh cos(k pi/4)]]
// with ch = 1+sqrt2, sh = sqrt(2+2 sqrt2).  The relator is found by searching
// all freely reduced words of length 8 whose matrix is ±I.
inline SurfaceGroup SurfaceGroup::bolza() {
    SurfaceGroup g;
    g.genus = 2;
    g.vol = 4.0 * std::numbers::pi;  // Gauss-Bonnet, genus 2
    g.codec_ = detail::LetterCodec(2);

    const double ch = 1.0 + std::numbers::sqrt2;
    const double sh = std::sqrt(ch * ch - 1.0);
    for (int k = 0; k < 4; ++k) {
        const double th = static_cast<double>(k) * std::numbers::pi / 4.0;
        Matrix2 m{ch + sh * std::cos(th), -sh * std::sin(th),
                  -sh * std::sin(th), ch - sh * std::cos(th)};
        g.gens_.push_back(psl2_normalize(m));
        g.gen_invs_.push_back(psl2_normalize(m.inverse()));
    }

    // Depth-first search for length-8 relators over the four generators and
    // inverses; any shorter nontrivial word evaluating to ±I means the
    // matrices are wrong.
    const double tol = 1e-6;
    std::vector<Word> found;
    const auto is_pm_identity = [tol](const Matrix2& m) {
        return entrywise_close(m, Matrix2::identity(), tol) ||
               entrywise_close(m, Matrix2::identity().negated(), tol);
    };
    Word stack;
    const std::vector<Letter> alphabet = g.letters();
    auto dfs = [&](auto&& self, const Matrix2& m) -> void {
        if (!stack.empty() && is_pm_identity(m)) {
            if (stack.size() < 8)
                throw RelatorNotFound("nontrivial word of length " +
                                      std::to_string(stack.size()) + " evaluates to identity");
            found.push_back(stack);
            return;
        }
        if (stack.size() == 8) return;
        for (Letter x : alphabet) {
            if (!stack.empty() && x == -stack.back()) continue;
            stack.push_back(x);
            self(self, m * g.gen(x));
            stack.pop_back();
        }
    };
    dfs(dfs, Matrix2::identity());
    if (found.empty()) throw RelatorNotFound("no length-8 relator over the Bolza generators");

    // All hits must form a single class under rotation and inversion: the
    // 8 rotations of the relator and the 8 of its inverse, nothing else.
    const Word first = found.front();
    const CyclicWord cls{least_rotation(first)};
    const CyclicWord cls_inv{least_rotation(invert(first))};
    std::unordered_set<CyclicWord, CyclicWordHash> spellings;
    for (const Word& w : found) {
        const CyclicWord c{least_rotation(w)};
        if (c != cls && c != cls_inv)
            throw RelatorNotFound("multiple inequivalent length-8 relators found");
        spellings.insert(CyclicWord{w});
    }
    if (spellings.size() != 16)
        throw RelatorNotFound("expected 16 relator spellings, found " +
                              std::to_string(spellings.size()));

    g.relator = std::min(cls, cls_inv).letters;
    g.build_tables();
    return g;
}

}  // namespace geodesic
