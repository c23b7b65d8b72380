#pragma once

// Orbit enumeration: every group element moving the base point i by at most
// x + 2B, reduced to conjugacy classes (= oriented closed geodesics) of
// length at most x, with primitivity bookkeeping and CSV persistence.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "geodesic/core.hpp"
#include "geodesic/errors.hpp"
#include "geodesic/group.hpp"
#include "geodesic/word.hpp"

namespace geodesic {

inline constexpr double kDedupQuantum = 1e-8;
inline constexpr double kDedupConfirmTol = 1e-6;
inline constexpr double kTraceClashTol = 1e-6;
inline constexpr std::size_t kDefaultElementCap = 50'000'000;

/// Circumradius of the regular octagon fundamental domain: distance from the
/// center to a vertex, cosh R = cot^2(pi/8).
inline double bolza_circumradius() {
    const double c = 1.0 / std::tan(std::numbers::pi / 8.0);
    return std::acosh(c * c);
}

inline constexpr double kDefaultSlack = 0.05;

struct ElementEntry {
    Matrix2 mat;  // sign-normalized
    Word word;
};

/// All group elements with d(i, g.i) <= radius, deduplicated by matrix.
struct ElementTable {
    std::vector<ElementEntry> elements;
    double radius = 0.0;
    const SurfaceGroup* group = nullptr;
};

namespace detail {

// Dedup set keyed on the quantized matrix.  Entries near a cell boundary are
// probed in both neighboring cells before a key is declared new.
class MatrixDedup {
  public:
    explicit MatrixDedup(const std::vector<ElementEntry>& store) : store_(store) {}

    bool contains(const Matrix2& m) const {
        std::array<std::int64_t, 4> lo{}, hi{};
        const double e[4] = {m.a, m.b, m.c, m.d};
        for (int k = 0; k < 4; ++k) {
            const double q = e[k] / kDedupQuantum;
            lo[static_cast<std::size_t>(k)] = std::llround(std::floor(q + 0.5 - kBoundaryFrac));
            hi[static_cast<std::size_t>(k)] = std::llround(std::floor(q + 0.5 + kBoundaryFrac));
        }
        std::array<std::int64_t, 4> cell{};
        return probe(m, lo, hi, cell, 0);
    }

    void insert(const Matrix2& m, std::uint32_t index) {
        map_.emplace(hash_cell(quantize(m)), index);
    }

    static std::array<std::int64_t, 4> quantize(const Matrix2& m) {
        return {std::llround(m.a / kDedupQuantum), std::llround(m.b / kDedupQuantum),
                std::llround(m.c / kDedupQuantum), std::llround(m.d / kDedupQuantum)};
    }

  private:
    // Fraction of a cell treated as "near the boundary"; 1e-6 absolute
    // tolerance over a 1e-8 quantum would be 100 cells, but accumulated
    // product error stays below ~1e-9 so one neighbor suffices.
    static constexpr double kBoundaryFrac = 0.25;

    static std::uint64_t hash_cell(const std::array<std::int64_t, 4>& c) {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (std::int64_t v : c) {
            h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }

    bool probe(const Matrix2& m, const std::array<std::int64_t, 4>& lo,
               const std::array<std::int64_t, 4>& hi, std::array<std::int64_t, 4>& cell,
               int k) const {
        if (k == 4) {
            auto [first, last] = map_.equal_range(hash_cell(cell));
            for (auto it = first; it != last; ++it)
                if (entrywise_close(store_[it->second].mat, m, kDedupConfirmTol)) return true;
            return false;
        }
        for (std::int64_t v = lo[static_cast<std::size_t>(k)]; v <= hi[static_cast<std::size_t>(k)]; ++v) {
            cell[static_cast<std::size_t>(k)] = v;
            if (probe(m, lo, hi, cell, k + 1)) return true;
        }
        return false;
    }

    const std::vector<ElementEntry>& store_;
    std::unordered_multimap<std::uint64_t, std::uint32_t> map_;
};

}  // namespace detail

/// Breadth-first expansion of the orbit of i out to radius x + 2B, where B
/// bounds d(i, .) on the fundamental polygon, so every conjugacy class with
/// l <= x has a representative in the ball.
inline ElementTable enumerate_ball(const SurfaceGroup& group, double x, double B,
                                   std::size_t cap = kDefaultElementCap) {
    ElementTable table;
    table.group = &group;
    table.radius = x + 2.0 * B;

    auto& elems = table.elements;
    detail::MatrixDedup dedup(elems);

    elems.push_back({Matrix2::identity(), Word{}});
    dedup.insert(elems[0].mat, 0);

    const std::vector<Letter> alphabet = group.letters();
    const double cosh_rad = std::cosh(table.radius);

    std::size_t frontier_begin = 0;
    while (frontier_begin < elems.size()) {
        const std::size_t frontier_end = elems.size();
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            for (Letter letter : alphabet) {
                const ElementEntry& e = elems[i];
                if (!e.word.empty() && letter == -e.word.back()) continue;
                Matrix2 m = psl2_normalize(e.mat * group.gen(letter));
                if (m.frob_sq() / 2.0 > cosh_rad) continue;
                if (dedup.contains(m)) continue;
                if (elems.size() >= cap)
                    throw CapacityExceeded("element cap " + std::to_string(cap) +
                                           " exceeded at radius " + std::to_string(table.radius));
                Word w = elems[i].word;
                w.push_back(letter);
                dedup.insert(m, static_cast<std::uint32_t>(elems.size()));
                elems.push_back({m, std::move(w)});
            }
        }
        frontier_begin = frontier_end;
    }
    return table;
}

/// One oriented closed geodesic.
struct ConjClass {
    CyclicWord key;
    double trace = 0.0;
    double N = 0.0;
    double l = 0.0;
    bool primitive = true;
    int power = 1;
    CyclicWord root_key;
    HomologyVector homology;
};

struct ClassTable {
    std::vector<ConjClass> classes;  // sorted by l ascending
    double x_max = 0.0;
    std::string group_name = "bolza";
    double slack = kDefaultSlack;
    int genus = 2;
    // inverse_index[i] = position of the inverse class of classes[i]; filled
    // by attach_inverse_index (or at build time).  Empty if never attached.
    std::vector<std::size_t> inverse_index;

    std::size_t primitive_count(double T) const {
        std::size_t n = 0;
        for (const ConjClass& c : classes) {
            if (c.N > T) break;
            if (c.primitive) ++n;
        }
        return n;
    }
};

/// Pair every class with its inverse class (a length-preserving,
/// homology-negating involution) and symmetrize trace/N/l across each pair so
/// the involution is exact on the stored floats, not just up to round-off.
inline void attach_inverse_index(ClassTable& t, const SurfaceGroup& group) {
    std::unordered_map<CyclicWord, std::size_t, CyclicWordHash> pos;
    for (std::size_t i = 0; i < t.classes.size(); ++i) pos.emplace(t.classes[i].key, i);
    t.inverse_index.assign(t.classes.size(), 0);
    for (std::size_t i = 0; i < t.classes.size(); ++i) {
        const CyclicWord inv_key = group.cyclic_normal_form(invert(t.classes[i].key.letters));
        const auto it = pos.find(inv_key);
        if (it == pos.end())
            throw InvariantClash("inverse class missing for " +
                                 word_to_string(t.classes[i].key.letters));
        t.inverse_index[i] = it->second;
    }
    for (std::size_t i = 0; i < t.classes.size(); ++i) {
        const std::size_t j = t.inverse_index[i];
        if (t.inverse_index[j] != i)
            throw InvariantClash("class inversion is not an involution");
        if (j > i) {
            t.classes[j].trace = t.classes[i].trace;
            t.classes[j].N = t.classes[i].N;
            t.classes[j].l = t.classes[i].l;
        }
    }
}

/// Reduce the element table to one ConjClass per cyclic normal form among
/// hyperbolic elements of length <= x.
inline ClassTable build_class_table(const ElementTable& elems, double x) {
    const SurfaceGroup& group = *elems.group;
    ClassTable table;
    table.x_max = x;
    table.genus = group.genus;

    const double trace_cut = 2.0 * std::cosh(x / 2.0) + 1e-12;

    // Reduced-spelling cache: conjugates of one class reduce to few distinct
    // cyclic words, so almost every canonical-closure run is skipped.
    std::unordered_map<CyclicWord, CyclicWord, CyclicWordHash> canon_cache;
    std::unordered_map<CyclicWord, std::size_t, CyclicWordHash> index;

    for (const ElementEntry& e : elems.elements) {
        const double t = std::abs(e.mat.trace());
        if (t <= 2.0 + kIdentityTol || t > trace_cut) continue;
        const NormLength nl = norm_length_from_trace(t);
        if (nl.l > x + 1e-12) continue;

        Word reduced = group.cyclic_dehn_reduce(e.word);
        if (reduced.empty())
            throw InvariantClash("hyperbolic element reduced to the identity word");
        CyclicWord spelled{least_rotation(reduced)};
        auto cached = canon_cache.find(spelled);
        CyclicWord key = (cached != canon_cache.end())
                             ? cached->second
                             : canon_cache.emplace(spelled, group.cyclic_normal_form(reduced))
                                   .first->second;

        auto [it, inserted] = index.emplace(key, table.classes.size());
        if (!inserted) {
            const ConjClass& prior = table.classes[it->second];
            if (std::abs(prior.trace - t) > kTraceClashTol)
                throw InvariantClash("conjugacy key collision with trace mismatch: " +
                                     word_to_string(key.letters));
            continue;
        }
        ConjClass c;
        c.key = key;
        c.trace = t;
        c.N = nl.N;
        c.l = nl.l;
        auto [root, k] = primitive_root(key);
        c.power = k;
        c.primitive = (k == 1);
        c.root_key = k == 1 ? key : group.cyclic_normal_form(root.letters);
        c.homology = abelianize(key.letters, group.genus);
        table.classes.push_back(std::move(c));
    }

    std::sort(table.classes.begin(), table.classes.end(),
              [](const ConjClass& a, const ConjClass& b) {
                  return a.l != b.l ? a.l < b.l : a.key < b.key;
              });
    attach_inverse_index(table, group);
    return table;
}

inline ClassTable build_class_table(const SurfaceGroup& group, double x,
                                    double slack = kDefaultSlack,
                                    std::size_t cap = kDefaultElementCap) {
    const double B = bolza_circumradius() + slack;
    ElementTable elems = enumerate_ball(group, x, B, cap);
    ClassTable t = build_class_table(elems, x);
    t.slack = slack;
    return t;
}

// Persistence -----------------------------------------------------------

inline constexpr const char* kTableFormatTag = "geodesic-classes v1";

inline std::string format_float(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline void save_table(const ClassTable& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << "# " << kTableFormatTag << "; group=" << t.group_name
        << "; x_max=" << format_float(t.x_max) << "; slack=" << format_float(t.slack) << "\n";
    out << "key_word,trace,N,l,primitive,power,root_word,h1,h2,h3,h4\n";
    for (const ConjClass& c : t.classes) {
        out << word_to_string(c.key.letters) << ',' << format_float(c.trace) << ','
            << format_float(c.N) << ',' << format_float(c.l) << ',' << (c.primitive ? 1 : 0)
            << ',' << c.power << ',' << word_to_string(c.root_key.letters);
        for (long long h : c.homology) out << ',' << h;
        out << '\n';
    }
    if (!out) throw Error("write failed: " + path);
}

inline ClassTable load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open: " + path);
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line)) throw CorruptRow(lineno, "empty file");
    if (line.rfind("# ", 0) != 0 || line.find(kTableFormatTag) == std::string::npos)
        throw FormatVersionMismatch("unrecognized header: " + line);

    ClassTable t;
    {
        // header fields: group=..; x_max=..; slack=..
        std::stringstream hs(line.substr(2));
        std::string item;
        while (std::getline(hs, item, ';')) {
            const std::size_t eq = item.find('=');
            if (eq == std::string::npos) continue;
            std::string k = item.substr(0, eq);
            k.erase(0, k.find_first_not_of(' '));
            const std::string v = item.substr(eq + 1);
            if (k == "group") t.group_name = v;
            else if (k == "x_max") t.x_max = std::stod(v);
            else if (k == "slack") t.slack = std::stod(v);
        }
    }
    ++lineno;
    if (!std::getline(in, line)) throw CorruptRow(lineno, "missing column header");
    if (line.rfind("key_word,", 0) != 0) throw CorruptRow(lineno, "bad column header");

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) cols.push_back(tok);
        // key and root words contain commas; columns are reassembled by
        // counting from both ends: trace..root_word block is between them.
        // Simpler: parse structurally.
        ConjClass c;
        try {
            std::size_t i = 0;
            Word key;
            // letters until a token parses as a float with '.' or 'e' (trace)
            auto is_letter = [](const std::string& s) {
                if (s.empty()) return false;
                const char* p = s.c_str();
                char* end = nullptr;
                const long v = std::strtol(p, &end, 10);
                return *end == '\0' && v != 0 && std::abs(v) <= 127;
            };
            while (i < cols.size() && is_letter(cols[i]) &&
                   cols[i].find('.') == std::string::npos)
                key.push_back(static_cast<Letter>(std::stoi(cols[i++])));
            if (i + 4 > cols.size()) throw Error("truncated row");
            c.key = CyclicWord{key};
            c.trace = std::stod(cols[i++]);
            c.N = std::stod(cols[i++]);
            c.l = std::stod(cols[i++]);
            c.primitive = std::stoi(cols[i++]) != 0;
            c.power = std::stoi(cols[i++]);
            Word root;
            while (i < cols.size() && cols.size() - i > 4)
                root.push_back(static_cast<Letter>(std::stoi(cols[i++])));
            c.root_key = CyclicWord{root};
            if (cols.size() - i != 4) throw Error("bad homology column count");
            for (; i < cols.size(); ++i) c.homology.push_back(std::stoll(cols[i]));
        } catch (const std::exception& ex) {
            throw CorruptRow(lineno, ex.what());
        }
        if (c.key.empty() || c.root_key.empty() || c.N <= 1.0 || c.l <= 0.0)
            throw CorruptRow(lineno, "invariant violation in row");
        if (std::abs(c.l - std::log(c.N)) > 1e-9 * std::max(1.0, c.l))
            throw CorruptRow(lineno, "l != log N");
        t.classes.push_back(std::move(c));
    }
    for (std::size_t i = 1; i < t.classes.size(); ++i)
        if (t.classes[i - 1].l > t.classes[i].l + 1e-12)
            throw CorruptRow(i + 2, "rows not sorted by length");
    return t;
}

}  // namespace geodesic
