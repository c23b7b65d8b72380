// Batch front door: build and cache class tables, run the statistics and
// zeta experiments, emit CSV/JSON reports.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geodesic/stats.hpp"
#include "geodesic/zeta.hpp"

using namespace geodesic;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitComputation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_form_periods(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

// grid tokens: literals or eK shorthand meaning e^K
std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty() && tok[0] == 'e')
            out.push_back(std::exp(std::stod(tok.substr(1))));
        else
            out.push_back(std::stod(tok));
    }
    if (out.empty()) throw UsageError("empty grid");
    return out;
}

// "2", "2.5", "2+10i", "2-0.5i"
Complex parse_complex(const std::string& s) {
    const std::size_t tail = s.find_first_of("+-", 1);
    if (tail == std::string::npos || s.back() != 'i') return {std::stod(s), 0.0};
    const double re = std::stod(s.substr(0, tail));
    std::string im = s.substr(tail, s.size() - tail - 1);
    if (im == "+" || im == "-") im += "1";
    return {re, std::stod(im)};
}

std::string resolve_classes_path(const std::string& path) {
    namespace fs = std::filesystem;
    if (fs::exists(path)) return path;
    if (const char* cache = std::getenv("GEODESIC_CACHE_DIR")) {
        const fs::path alt = fs::path(cache) / path;
        if (fs::exists(alt)) return alt.string();
    }
    throw Error("class table not found: " + path);
}

ClassTable load_with_involution(const std::string& path, const SurfaceGroup& group) {
    ClassTable t = load_table(resolve_classes_path(path));
    if (t.group_name != "bolza") throw Error("unsupported group in table: " + t.group_name);
    attach_inverse_index(t, group);
    return t;
}

HarmonicForm make_form(const std::string& periods_str, int genus) {
    HarmonicForm f{parse_form_periods(periods_str)};
    if (static_cast<int>(f.periods.size()) != 2 * genus)
        throw UsageError("--form needs " + std::to_string(2 * genus) + " periods");
    if (!f.valid()) throw UsageError("--form must not be the zero form");
    return f;
}

json series_json(const SeriesValue& sv) {
    json j;
    j["re"] = sv.value.real();
    j["im"] = sv.value.imag();
    j["terms_used"] = sv.terms_used;
    j["divergent"] = sv.divergent;
    if (sv.tail_valid) j["tail_bound"] = sv.tail_bound;
    return j;
}

int cmd_build(const std::string& group_name, double x_max, double slack, std::string out,
              std::size_t cap) {
    if (group_name != "bolza") throw UsageError("unknown group: " + group_name);
    if (x_max <= 0.0) throw UsageError("--x-max must be positive");
    if (out.empty()) {
        const char* cache = std::getenv("GEODESIC_CACHE_DIR");
        const std::filesystem::path dir = cache ? cache : ".";
        std::ostringstream name;
        name << "classes_x" << x_max << ".csv";
        out = (dir / name.str()).string();
    }
    const auto t0 = std::chrono::steady_clock::now();
    const SurfaceGroup group = SurfaceGroup::bolza();
    const double B = bolza_circumradius() + slack;
    const ElementTable elems = enumerate_ball(group, x_max, B, cap);
    ClassTable table = build_class_table(elems, x_max);
    table.slack = slack;
    save_table(table, out);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (table.classes.empty())
        std::cerr << "warning: no classes below x_max = " << x_max
                  << " (systole is " << 2.0 * std::acosh(1.0 + std::numbers::sqrt2) << ")\n";
    std::cout << "elements: " << elems.elements.size() << "\n"
              << "classes: " << table.classes.size() << "\n"
              << "min_length: "
              << (table.classes.empty() ? 0.0 : table.classes.front().l) << "\n"
              << "wall_time_s: " << secs << "\n"
              << "out: " << out << "\n";
    return kExitOk;
}

int cmd_stats(const std::string& classes, const std::string& form_str,
              const std::string& grid_str, int n_max, int bins, bool all_classes,
              double norm_sq, bool norm_given, const std::string& out) {
    const SurfaceGroup group = SurfaceGroup::bolza();
    const ClassTable t = load_with_involution(classes, group);
    const HarmonicForm f = make_form(form_str, t.genus);
    const std::vector<double> grid = parse_grid(grid_str);
    const double T_top = *std::max_element(grid.begin(), grid.end());
    if (T_top > std::exp(t.x_max) * (1.0 + 1e-9))
        throw Error("grid exceeds e^x_max of the table; rebuild with a larger --x-max");

    const NormMode mode = norm_given ? NormMode::user : NormMode::effective;
    const MomentReport mr = moments(T_top, t, f, mode, norm_sq, n_max, all_classes, group.vol);
    const std::vector<MomentRatio> ratios = moment_ratio_check(mr);
    const DistributionReport rep = distribution_report(t, f, grid, bins, all_classes, group.vol);

    std::vector<double> x_grid;
    for (double T : grid) x_grid.push_back(std::log(T));
    const std::vector<PgtRow> pgt = pgt_check(t, x_grid);

    json j;
    j["group"] = t.group_name;
    j["x_max"] = t.x_max;
    j["form"]["periods"] = f.periods;
    j["T_grid"] = grid;
    j["pgt"] = json::array();
    for (const PgtRow& r : pgt)
        j["pgt"].push_back({{"x", r.x}, {"count", r.count}, {"expected", r.expected},
                            {"ratio", r.ratio}});
    j["moments"]["T"] = mr.T;
    j["moments"]["n_max"] = mr.n_max;
    j["moments"]["sample_count"] = mr.sample_count;
    j["moments"]["norm_mode"] = mr.norm_mode == NormMode::user ? "user" : "effective";
    j["moments"]["norm_sq_used"] = mr.norm_sq_used;
    j["moments"]["all_classes"] = mr.all_classes;
    j["moments"]["raw"] = mr.raw_moments;
    j["moments"]["summatory"] = mr.summatory_values;
    j["moments"]["gaussian_targets"] = mr.gaussian_targets;
    j["moment_ratios"] = json::array();
    for (const MomentRatio& r : ratios)
        j["moment_ratios"].push_back(
            {{"n", r.n}, {"ratio", r.ratio}, {"target", r.target}, {"degenerate", r.degenerate}});
    j["ks"] = rep.ks;
    j["central_mass"] = rep.central_mass;
    j["histogram"]["edges"] = rep.histogram.edges;
    j["histogram"]["counts"] = rep.histogram.counts;
    j["histogram"]["gauss_density"] = rep.histogram.gauss_density;
    std::cout << j.dump(2) << "\n";

    if (!out.empty()) {
        std::ofstream csv(out);
        if (!csv) throw Error("cannot open for writing: " + out);
        csv << "l,N,pairing,normalized\n";
        for (const ConjClass& c : t.classes) {
            if (c.N > T_top) break;
            if (!all_classes && !c.primitive) continue;
            csv << format_float(c.l) << ',' << format_float(c.N) << ','
                << format_float(pairing(c, f)) << ','
                << format_float(normalized_pairing(c, f, mr.norm_sq_used, group.vol)) << '\n';
        }
    }
    return kExitOk;
}

int cmd_zeta(const std::string& classes, const std::string& form_str, const std::string& s_str,
             double eps, int deriv, int terms_k, int m_max) {
    const SurfaceGroup group = SurfaceGroup::bolza();
    const ClassTable t = load_with_involution(classes, group);
    const HarmonicForm f = make_form(form_str, t.genus);
    const Complex s = parse_complex(s_str);
    if (deriv < 0 || deriv > 4) throw UsageError("--deriv must be in 0..4");

    const SeriesValue e = E_series(s, eps, t, f);
    const SeriesValue a1 = A1_series(s, eps, t, f);
    const SeriesValue a2 = A2_series(s, eps, t, f);
    const SeriesValue direct = zeta_log_deriv_direct(s, eps, t, f, m_max);
    const SeriesValue prod = zeta_partial_product(s, eps, t, f, terms_k);

    json j;
    j["group"] = t.group_name;
    j["x_max"] = t.x_max;
    j["s"] = {{"re", s.real()}, {"im", s.imag()}};
    j["eps"] = eps;
    j["E"] = series_json(e);
    j["E_derivatives"] = json::array();
    for (int n = 1; n <= deriv; ++n)
        j["E_derivatives"].push_back(series_json(E_derivative(n, s, t, f)));
    j["A1"] = series_json(a1);
    j["A2"] = series_json(a2);
    j["log_deriv_direct"] = series_json(direct);
    j["partial_product"] = series_json(prod);
    const Complex residual = e.value + a1.value + a2.value - direct.value;
    j["splitting_residual"] = {{"re", residual.real()},
                               {"im", residual.imag()},
                               {"abs", std::abs(residual)}};
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_pgt(const std::string& classes, const std::string& grid_str, const std::string& out) {
    const SurfaceGroup group = SurfaceGroup::bolza();
    const ClassTable t = load_with_involution(classes, group);
    std::vector<double> xs;
    std::stringstream ss(grid_str);
    std::string tok;
    while (std::getline(ss, tok, ',')) xs.push_back(std::stod(tok));
    if (xs.empty()) throw UsageError("empty grid");
    for (double x : xs)
        if (x > t.x_max + 1e-9)
            throw Error("x = " + std::to_string(x) + " exceeds table x_max = " +
                        std::to_string(t.x_max) + "; rebuild with a larger --x-max");

    const std::vector<PgtRow> rows = pgt_check(t, xs);
    std::printf("%10s %12s %16s %10s\n", "x", "pi(x)", "e^x/x", "ratio");
    for (const PgtRow& r : rows)
        std::printf("%10.4f %12zu %16.2f %10.6f\n", r.x, r.count, r.expected, r.ratio);

    if (!out.empty()) {
        std::ofstream csv(out);
        if (!csv) throw Error("cannot open for writing: " + out);
        csv << "x,count,expected,ratio\n";
        for (const PgtRow& r : rows)
            csv << format_float(r.x) << ',' << r.count << ',' << format_float(r.expected)
                << ',' << format_float(r.ratio) << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"closed-geodesic enumeration and Poincare pairing statistics"};
    app.require_subcommand(1);

    std::string group_name = "bolza";
    double x_max = 0.0, slack = kDefaultSlack;
    std::string out, classes, form_str, grid_str = "e8,e10,e12", s_str = "2";
    int n_max = 8, bins = 41, deriv = 0, terms_k = 40, m_max = 40;
    bool all_classes = false;
    double norm_sq = 1.0, eps = 0.0;
    std::size_t cap = kDefaultElementCap;
    int threads = 0;

    CLI::App* build = app.add_subcommand("build", "enumerate and cache a class table");
    build->add_option("--group", group_name);
    build->add_option("--x-max", x_max)->required()->check(CLI::PositiveNumber);
    build->add_option("--slack", slack);
    build->add_option("--out", out);
    build->add_option("--cap", cap);
    build->add_option("--threads", threads);

    CLI::App* stats = app.add_subcommand("stats", "moments, distribution and PGT report");
    stats->add_option("--classes", classes)->required();
    stats->add_option("--form", form_str)->required();
    stats->add_option("--grid", grid_str);
    stats->add_option("--n-max", n_max);
    stats->add_option("--bins", bins);
    stats->add_flag("--all-classes", all_classes);
    CLI::Option* norm_opt = stats->add_option("--norm-sq", norm_sq);
    stats->add_option("--out", out, "per-class CSV export");
    stats->add_option("--threads", threads);

    CLI::App* zeta = app.add_subcommand("zeta", "twisted Selberg zeta series");
    zeta->add_option("--classes", classes)->required();
    zeta->add_option("--form", form_str)->required();
    zeta->add_option("--s", s_str);
    zeta->add_option("--eps", eps);
    zeta->add_option("--deriv", deriv);
    zeta->add_option("--terms-k", terms_k);
    zeta->add_option("--m-max", m_max);
    zeta->add_option("--threads", threads);

    CLI::App* pgt = app.add_subcommand("pgt", "prime geodesic counts on an x grid");
    pgt->add_option("--classes", classes)->required();
    pgt->add_option("--grid", grid_str);
    pgt->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (build->parsed()) return cmd_build(group_name, x_max, slack, out, cap);
        if (stats->parsed())
            return cmd_stats(classes, form_str, grid_str, n_max, bins, all_classes, norm_sq,
                             norm_opt->count() > 0, out);
        if (zeta->parsed())
            return cmd_zeta(classes, form_str, s_str, eps, deriv, terms_k, m_max);
        if (pgt->parsed()) return cmd_pgt(classes, grid_str, out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputation;
    }
    return kExitUsage;
}
