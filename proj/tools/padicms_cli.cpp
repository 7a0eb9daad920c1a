#include <CLI11.hpp>
#include <json.hpp>

#include "padicms/chair.hpp"
#include "padicms/cutproject.hpp"
#include "padicms/diffraction.hpp"
#include "padicms/limitperiodic.hpp"
#include "padicms/limitquasi.hpp"
#include "padicms/parallel.hpp"
#include "padicms/substitution.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace padicms;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitVerifyFail = 3;

struct VerifyFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Emit a JSON artifact: to stdout for "-", to the path otherwise.
void emit_json(const ordered_json& j, const std::string& path) {
    std::string text = j.dump(2) + "\n";
    if (path == "-")
        std::cout << text;
    else
        write_file(path, text);
}

ordered_json artifact(const char* kind) {
    ordered_json j;
    j["schema"] = std::string("padicms/") + kind + "/1";
    return j;
}

std::vector<double> parse_weights(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw std::invalid_argument("empty weight in --weights");
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw std::invalid_argument("--weights needs at least one entry");
    return out;
}

std::array<double, 3> weights3(const std::string& text) {
    std::vector<double> w = parse_weights(text);
    if (w.size() != 3) throw std::invalid_argument("--weights needs exactly 3 entries here");
    return {w[0], w[1], w[2]};
}

Rational parse_rational(const std::string& text) {
    try {
        return Rational(text);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational: " + text);
    }
}

SubstitutionSystem named_letter_system(const std::string& name, const std::string& rules_path) {
    if (name == "perioddoubling") return SubstitutionSystem::parse("a -> ab\nb -> aa\n");
    if (name == "thuemorse") return SubstitutionSystem::parse("a -> ab\nb -> ba\n");
    if (name == "custom") {
        if (rules_path.empty()) throw std::invalid_argument("--rules required for system custom");
        return SubstitutionSystem::parse(read_file(rules_path));
    }
    throw std::invalid_argument("unknown system: " + name);
}

/// Tick rendering of a 1D typed point list, one color per type.
std::string ticks_svg(const std::vector<std::pair<double, char>>& points, double lo, double hi) {
    const int width = 1200, height = 120, pad = 20;
    const char* palette[] = {"#1b6ca8", "#c1403d", "#3e8914", "#8d5a97"};
    std::string svg;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                  "viewBox=\"0 0 %d %d\">\n",
                  width, height, width, height);
    svg += buf;
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%d\" y1=\"60\" x2=\"%d\" y2=\"60\" stroke=\"#888\"/>\n", pad,
                  width - pad);
    svg += buf;
    double span = hi - lo;
    if (span <= 0) span = 1;
    for (const auto& [x, type] : points) {
        double px = pad + (x - lo) / span * (width - 2 * pad);
        int idx = type - 'a';
        const char* color = palette[idx >= 0 && idx < 4 ? idx : 3];
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.2f\" y1=\"40\" x2=\"%.2f\" y2=\"80\" stroke=\"%s\" "
                      "stroke-width=\"1.5\"><title>%c</title></line>\n",
                      px, px, color, type);
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

// ---------------------------------------------------------------- seqgen

struct SeqgenOpts {
    std::string system = "limitperiodic3";
    long range = 20;
    int steps = 6;
    int iters = 8;
    std::string rules;
    std::string json;
    bool two_sided = false;
};

int run_seqgen(const SeqgenOpts& o) {
    if (o.system == "limitperiodic3") {
        auto pos = sequence_on_range(Integer(0), Integer(o.range - 1));
        std::string line;
        for (const auto& [x, type] : pos) {
            (void)type;
            if (!line.empty()) line += ' ';
            line += x.str();
        }
        std::cout << line << "\n";
        std::vector<std::pair<Integer, char>> neg;
        if (o.two_sided || !o.json.empty()) neg = sequence_on_range(Integer(-o.range), Integer(-1));
        if (o.two_sided) {
            std::string left;
            for (const auto& [x, type] : neg) {
                (void)type;
                if (!left.empty()) left += ' ';
                left += x.str();
            }
            std::cout << left << "\n";
        }
        if (!o.json.empty()) {
            ordered_json j = artifact("seqgen");
            j["system"] = o.system;
            j["range"] = {{"lo", -o.range}, {"hi", o.range - 1}};
            ordered_json pts = ordered_json::array();
            for (const auto& [x, type] : neg)
                pts.push_back({{"x", x.str()}, {"type", std::string(1, type)}});
            for (const auto& [x, type] : pos)
                pts.push_back({{"x", x.str()}, {"type", std::string(1, type)}});
            j["points"] = pts;
            j["notes"] = ordered_json::array(
                {"layout: two-sided fixed point of a->ab, b->abc, c->abcc with legal seed "
                 "c|a, each tile marked at its right end",
                 "left of the origin the layout runs ...,-24 (b), -23 (a), -21 (b),...; "
                 "the commonly printed endpoint list shows a single step -24,-21 and "
                 "omits -23"});
            emit_json(j, o.json);
        }
        return 0;
    }
    if (o.system == "limitquasi") {
        QuasiPatch p = generate_sequence_exact(o.steps);
        std::cout << "a " << p.lambda_a.size() << " b " << p.lambda_b.size() << " span ["
                  << quadint_str(p.span_lo) << ", " << quadint_str(p.span_hi) << ")\n";
        if (!o.json.empty()) {
            ordered_json j = artifact("seqgen");
            j["system"] = o.system;
            j["steps"] = o.steps;
            j["span"] = {{"lo", quadint_str(p.span_lo)}, {"hi", quadint_str(p.span_hi)}};
            ordered_json a = ordered_json::array(), b = ordered_json::array();
            for (const QuadInt& x : p.lambda_a) a.push_back(quadint_str(x));
            for (const QuadInt& x : p.lambda_b) b.push_back(quadint_str(x));
            j["a"] = a;
            j["b"] = b;
            emit_json(j, o.json);
        }
        return 0;
    }
    SubstitutionSystem s = named_letter_system(o.system, o.rules);
    std::string word = one_sided_patch(s, s.alphabet.front(), o.iters).right_word;
    std::cout << word << "\n";
    if (!o.json.empty()) {
        ordered_json j = artifact("seqgen");
        j["system"] = o.system;
        j["iterations"] = o.iters;
        j["seed"] = std::string(1, s.alphabet.front());
        j["word"] = word;
        emit_json(j, o.json);
    }
    return 0;
}

// ---------------------------------------------------------------- verify

struct VerifyOpts {
    std::string system = "limitperiodic3";
    int truncation = 6;
    long range = 729;
    std::string json;
    std::string diff = "verify.diff.json";
};

int run_verify(const VerifyOpts& o) {
    if (o.system != "limitperiodic3")
        throw std::invalid_argument("verify supports only limitperiodic3");
    VerifyReport r = verify_against_substitution(o.truncation, Integer(o.range));
    std::cout << "K " << r.truncation << " radius " << r.radius << " checked " << r.checked
              << " matched " << r.matched << " mismatches " << r.mismatches.size() << " tail "
              << r.tail.size() << "\n";
    ordered_json j = artifact("verify");
    j["system"] = o.system;
    j["truncation"] = r.truncation;
    j["radius"] = r.radius.str();
    j["safe_radius"] = r.safe_r.str();
    j["checked"] = r.checked;
    j["matched"] = r.matched;
    ordered_json mism = ordered_json::array();
    for (const auto& m : r.mismatches)
        mism.push_back({{"x", m.x.str()},
                        {"anchor", std::string(1, m.anchor_type)},
                        {"model", std::string(1, m.model_type)}});
    j["mismatches"] = mism;
    ordered_json tail = ordered_json::array();
    for (const auto& t : r.tail)
        tail.push_back(
            {{"x", t.x.str()}, {"type", std::string(1, t.type)}, {"level", t.level}});
    j["tail"] = tail;
    j["ok"] = r.ok();
    j["exact_equal"] = r.exact_equal();
    if (!o.json.empty()) emit_json(j, o.json);
    if (!r.ok()) {
        emit_json(j, o.diff);
        throw VerifyFailure("window/substitution mismatch, diff written to " + o.diff);
    }
    return 0;
}

// ---------------------------------------------------------------- windows

struct WindowsOpts {
    int truncation = 4;
    std::string out = "-";
};

int run_windows(const WindowsOpts& o) {
    WindowFamily3 w = windows_abc(o.truncation);
    WindowMeasures m = window_measures(o.truncation);
    InvarianceReport inv = window_invariance(o.truncation);
    ordered_json j = artifact("windows");
    j["truncation"] = o.truncation;
    j["omega_a"] = ordered_json::parse(coset_union_to_json(w.omega_a, -1));
    j["omega_b"] = ordered_json::parse(coset_union_to_json(w.omega_b, -1));
    j["omega_c"] = ordered_json::parse(coset_union_to_json(w.omega_c, -1));
    j["measures"] = {{"a", rational_str(m.a)},
                     {"b", rational_str(m.b)},
                     {"c", rational_str(m.c)},
                     {"closed_form", rational_str(m.closed_form)},
                     {"a_limit", rational_str(m.a_limit)},
                     {"b_limit", rational_str(m.b_limit)},
                     {"c_limit", rational_str(m.c_limit)},
                     {"weighted_cover", rational_str(m.weighted_cover)}};
    WindowLimits lim = window_limits(o.truncation);
    j["boundary_limits"] = {{"a", rational_str(lim.a_value)},
                            {"b", rational_str(lim.b_value)},
                            {"c", rational_str(lim.c_value)}};
    j["invariance_ok"] = inv.ok();
    emit_json(j, o.out);
    if (!inv.ok()) throw VerifyFailure("window invariance violated");
    return 0;
}

// ---------------------------------------------------------------- modelset

struct ModelsetOpts {
    std::string scheme = "diagonal-Z-3adic";
    std::string config;
    std::string window_type;
    int truncation = 6;
    std::string lo = "-30";
    std::string hi = "30";
    std::string json;
    int threads = 0;
};

int run_modelset(const ModelsetOpts& o) {
    CutProjectScheme s = o.config.empty() ? scheme_from_catalog(o.scheme, o.truncation)
                                          : scheme_from_json(read_file(o.config));
    if (!o.window_type.empty()) {
        if (scheme_catalog_name(s.lattice) != "diagonal-Z-3adic" || o.window_type.size() != 1)
            throw std::invalid_argument("--window-type applies to diagonal-Z-3adic, one letter");
        s.factors.at(0) =
            InternalFactor::padic_factor(windows_abc(o.truncation).of(o.window_type[0]));
    }
    if (s.physical_dim != 1)
        throw std::invalid_argument("modelset handles 1-dimensional schemes; use chair gen");
    ModelSetQuery q;
    q.lo = QuadRat::from_rational(parse_rational(o.lo));
    q.hi = QuadRat::from_rational(parse_rational(o.hi));
    q.truncation = o.truncation;
    std::vector<ModelPoint> pts = model_set_points(s, q, o.threads);
    std::cout << "scheme " << scheme_catalog_name(s.lattice) << " points " << pts.size()
              << " density " << quadrat_str(density(s)) << "\n";
    if (!o.json.empty()) {
        ordered_json j = artifact("modelset");
        j["scheme"] = ordered_json::parse(scheme_to_json(s, -1));
        j["query"] = {{"lo", o.lo}, {"hi", o.hi}, {"truncation", o.truncation}};
        j["count"] = pts.size();
        j["density"] = quadrat_str(density(s));
        ordered_json arr = ordered_json::array();
        for (const ModelPoint& p : pts) {
            ordered_json lat = ordered_json::array();
            for (const Integer& c : p.lattice) lat.push_back(c.str());
            arr.push_back({{"lattice", lat}, {"x", quadrat_str(p.x)}});
        }
        j["points"] = arr;
        emit_json(j, o.json);
    }
    return 0;
}

// ---------------------------------------------------------------- chair

struct ChairGenOpts {
    int levels = 6;
    std::string svg;
    std::string json;
    int px = 20;
};

int run_chair_gen(const ChairGenOpts& o) {
    ChairState st = chair_recursion(o.levels);
    std::cout << "levels " << o.levels;
    long total = 0;
    for (int k = 0; k < 4; ++k) total += long(st.stage(o.levels, k).size());
    std::cout << " points " << total << "\n";
    if (!o.svg.empty()) write_file(o.svg, chair_svg(st, o.levels, o.px));
    if (!o.json.empty()) {
        ordered_json j = artifact("chair-gen");
        j["levels"] = o.levels;
        ordered_json counts = ordered_json::array();
        for (int k = 0; k < 4; ++k) counts.push_back(st.stage(o.levels, k).size());
        j["class_counts"] = counts;
        j["patch"] = ordered_json::parse(chair_level_json(st, o.levels, -1));
        emit_json(j, o.json);
    }
    return 0;
}

struct ChairOracleOpts {
    int build_level = 6;
    int check_level = 3;
    std::string mode = "refined";
    std::string json;
};

int run_chair_oracle(const ChairOracleOpts& o) {
    ChairWindowMode mode =
        o.mode == "conservative" ? ChairWindowMode::Conservative : ChairWindowMode::Refined;
    ChairState st = chair_recursion(o.build_level);
    ChairWindows w = chair_windows(st, mode);
    ChairOracleReport rep = chair_oracle_compare(w, st, o.check_level);
    std::cout << "mode " << o.mode << " agreed " << rep.agreed << " undecided " << rep.undecided
              << " disagreements " << rep.disagreements.size() << " deficit "
              << rational_str(w.deficit()) << "\n";
    if (!o.json.empty()) {
        ordered_json j = artifact("chair-oracle");
        j["build_level"] = o.build_level;
        j["check_level"] = o.check_level;
        j["mode"] = o.mode;
        j["agreed"] = rep.agreed;
        j["undecided"] = rep.undecided;
        j["disagreements"] = rep.disagreements;
        j["deficit"] = rational_str(w.deficit());
        j["ok"] = rep.ok();
        emit_json(j, o.json);
    }
    if (!rep.ok()) throw VerifyFailure("chair oracle disagreement");
    return 0;
}

// ---------------------------------------------------------------- limitquasi

struct QuasiRunOpts {
    int steps = 6;
    int depth = 8;
    std::string report = "-";
};

int run_quasi_run(const QuasiRunOpts& o) {
    SandwichReport rep = sandwich_check(o.steps, o.depth);
    std::cout << "steps " << rep.steps << " depth " << rep.depth << " patch " << rep.patch_a
              << "+" << rep.patch_b << " inner " << rep.inner_model_a << "+" << rep.inner_model_b
              << " outer " << rep.outer_model_a << "+" << rep.outer_model_b << " violations "
              << rep.inner_violations + rep.outer_violations << " discrepancy " << rep.discrepancy
              << "\n";
    ordered_json j = artifact("limitquasi-run");
    ordered_json body = ordered_json::parse(sandwich_report_json(rep, -1));
    for (auto& [key, value] : body.items()) j[key] = value;
    emit_json(j, o.report);
    if (!rep.ok()) {
        if (o.report == "-") emit_json(j, "limitquasi.diff.json");
        throw VerifyFailure("sandwich inclusion violated");
    }
    return 0;
}

struct QuasiStripOpts {
    int steps = 4;
    std::string json;
};

int run_quasi_strip(const QuasiStripOpts& o) {
    StripReport rep = inner_strip_connectivity(o.steps);
    std::cout << "steps " << rep.steps << " candidates " << rep.candidates << " violations "
              << rep.violations << " connected " << (rep.connected ? "yes" : "no")
              << " validated (" << quadrat_str(rep.validated.lo) << ", "
              << quadrat_str(rep.validated.hi) << ")\n";
    if (!o.json.empty()) {
        ordered_json j = artifact("limitquasi-strip");
        j["steps"] = rep.steps;
        j["candidates"] = rep.candidates;
        j["violations"] = rep.violations;
        ordered_json ex = ordered_json::array();
        for (const Vec2I& v : rep.violation_examples)
            ex.push_back({v.x.str(), v.y.str()});
        j["violation_examples"] = ex;
        j["printed_claim_ok"] = rep.printed_claim_ok;
        j["connected"] = rep.connected;
        j["validated_strip"] = {{"lo", quadrat_str(rep.validated.lo)},
                                {"hi", quadrat_str(rep.validated.hi)},
                                {"violations", rep.validated_violations}};
        j["inner_points"] = rep.inner_points;
        j["cut_vertices"] = rep.cut_vertices;
        j["removal_breaks"] = rep.removal_breaks;
        emit_json(j, o.json);
    }
    return 0;
}

// ---------------------------------------------------------------- diffract

struct DiffractOpts {
    std::string system = "limitperiodic3";
    long r = 6561;
    int nmax = 5;
    std::string kmax = "10";
    std::string weights;
    int levels = 8;
    int klass = 0;
    int kdenom = 3;
    std::string csv;
    std::string json;
    int threads = 0;
};

std::string numeric_csv_1d(const WeightedPointPatch& patch, const Rational& kmax, int kdenom) {
    std::string out = "k,numeric_re,numeric_im,numeric_abs2\n";
    Integer denom = int_pow(Integer(2), kdenom);
    Rational step(1, denom);
    for (Rational k(0); k <= kmax; k += step) {
        std::complex<double> v = fourier_bohr_numeric(patch, k);
        out += fmt17(to_double(k)) + "," + fmt17(v.real()) + "," + fmt17(v.imag()) + "," +
               fmt17(std::norm(v)) + "\n";
    }
    return out;
}

int run_diffract(const DiffractOpts& o) {
    Rational kmax = parse_rational(o.kmax);
    if (o.system == "limitperiodic3") {
        std::array<double, 3> h = weights3(o.weights.empty() ? "1,1,1" : o.weights);
        WeightedPointPatch patch = sequence_patch(Integer(o.r), h);
        auto elems = fourier_module(o.nmax, Rational(0), kmax);
        auto rep = spectrum_compare(patch, h, elems, 20, 0.05, o.threads);
        std::cout << "rows " << rep.rows.size() << " max_intensity " << fmt17(rep.max_intensity)
                  << " max_rel_err_strongest " << fmt17(rep.max_rel_err_strongest)
                  << (rep.formulas_ok ? " formulas_ok" : " FORMULAS_DISAGREE") << "\n";
        if (!rep.formula_note.empty()) std::cerr << "note: " << rep.formula_note << "\n";
        if (!o.csv.empty()) write_file(o.csv, spectrum_csv(rep));
        if (!o.json.empty()) {
            ordered_json j = artifact("diffract");
            j["system"] = o.system;
            j["r"] = o.r;
            j["nmax"] = o.nmax;
            j["kmax"] = o.kmax;
            j["weights"] = {h[0], h[1], h[2]};
            j["rows"] = rep.rows.size();
            j["max_intensity"] = rep.max_intensity;
            j["strongest_count"] = rep.strongest_count;
            j["max_rel_err_strongest"] = rep.max_rel_err_strongest;
            j["tolerance"] = rep.tolerance;
            j["formulas_ok"] = rep.formulas_ok;
            j["formula_note"] = rep.formula_note;
            emit_json(j, o.json);
        }
        return 0;
    }
    if (o.system == "chair") {
        ChairState st = chair_recursion(o.levels);
        RatBox box = chair_patch_box(o.levels);
        double area = to_double(Rational((box.x_hi - box.x_lo) * (box.y_hi - box.y_lo)));
        std::vector<std::pair<Vec2I, double>> pts;
        for (const Vec2I& v : st.stage(o.levels, o.klass)) pts.emplace_back(v, 1.0);
        Integer denom = int_pow(Integer(2), o.kdenom);
        Rational step(1, denom);
        std::string csv = "kx,ky,numeric_re,numeric_im,numeric_abs2\n";
        for (Rational kx(0); kx <= kmax; kx += step)
            for (Rational ky(0); ky <= kmax; ky += step) {
                std::complex<double> v = fourier_bohr_numeric_2d(pts, kx, ky, area);
                csv += fmt17(to_double(kx)) + "," + fmt17(to_double(ky)) + "," +
                       fmt17(v.real()) + "," + fmt17(v.imag()) + "," + fmt17(std::norm(v)) + "\n";
            }
        std::cout << "chair class " << o.klass << " level " << o.levels << " points "
                  << pts.size() << " numeric-only spectrum\n";
        if (!o.csv.empty()) write_file(o.csv, csv);
        if (!o.json.empty()) {
            ordered_json j = artifact("diffract");
            j["system"] = o.system;
            j["levels"] = o.levels;
            j["class"] = o.klass;
            j["kmax"] = o.kmax;
            j["kdenom"] = o.kdenom;
            j["points"] = pts.size();
            j["analytic"] = false;
            emit_json(j, o.json);
        }
        return 0;
    }
    if (o.system == "thuemorse" || o.system == "perioddoubling" || o.system == "custom") {
        if (o.system == "thuemorse")
            std::cerr << "warning: thuemorse is a negative control (not a model set); "
                         "numeric-only spectrum, expect no stable peaks off trivial positions\n";
        SubstitutionSystem s = named_letter_system(o.system, "");
        int iters = 1;
        while ((1L << iters) < 2 * o.r) ++iters;
        std::string word = one_sided_patch(s, s.alphabet.front(), iters).right_word;
        std::vector<double> w = parse_weights(
            o.weights.empty() ? (o.system == "thuemorse" ? "1,-1" : "1,1") : o.weights);
        if (w.size() != s.alphabet.size())
            throw std::invalid_argument("--weights must match the alphabet size");
        std::vector<WeightedPoint> pts;
        long n = std::min(long(word.size()), 2 * o.r);
        for (long i = 0; i < n; ++i) {
            std::size_t idx =
                std::find(s.alphabet.begin(), s.alphabet.end(), word[std::size_t(i)]) -
                s.alphabet.begin();
            pts.push_back({Rational(i - n / 2), w[idx]});
        }
        WeightedPointPatch patch = make_patch(std::move(pts), Rational(n / 2));
        std::string csv = numeric_csv_1d(patch, kmax, o.kdenom);
        std::cout << o.system << " points " << patch.points.size() << " numeric-only spectrum\n";
        if (!o.csv.empty()) write_file(o.csv, csv);
        if (!o.json.empty()) {
            ordered_json j = artifact("diffract");
            j["system"] = o.system;
            j["points"] = patch.points.size();
            j["kmax"] = o.kmax;
            j["kdenom"] = o.kdenom;
            j["analytic"] = false;
            emit_json(j, o.json);
        }
        return 0;
    }
    throw std::invalid_argument("no diffraction backend for system: " + o.system);
}

// ---------------------------------------------------------------- render

struct RenderOpts {
    std::string system = "chair";
    std::string svg;
    int levels = 6;
    long range = 40;
    int steps = 6;
    int px = 20;
};

int run_render(const RenderOpts& o) {
    if (o.system == "chair") {
        ChairState st = chair_recursion(o.levels);
        write_file(o.svg, chair_svg(st, o.levels, o.px));
    } else if (o.system == "limitperiodic3") {
        std::vector<std::pair<double, char>> pts;
        for (const auto& [x, type] : sequence_on_range(Integer(-o.range), Integer(o.range)))
            pts.emplace_back(double(long(x)), type);
        write_file(o.svg, ticks_svg(pts, -double(o.range), double(o.range)));
    } else if (o.system == "limitquasi") {
        QuasiPatch p = generate_sequence_exact(o.steps);
        std::vector<std::pair<double, char>> pts;
        for (const QuadInt& x : p.lambda_a) pts.emplace_back(to_double(QuadRat(x)), 'a');
        for (const QuadInt& x : p.lambda_b) pts.emplace_back(to_double(QuadRat(x)), 'b');
        std::sort(pts.begin(), pts.end());
        write_file(o.svg,
                   ticks_svg(pts, to_double(QuadRat(p.span_lo)), to_double(QuadRat(p.span_hi))));
    } else {
        throw std::invalid_argument("render supports chair, limitperiodic3, limitquasi");
    }
    std::cout << "wrote " << o.svg << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"limit-(quasi-)periodic model sets: generation, verification, diffraction"};
    app.require_subcommand(1);

    SeqgenOpts seq;
    auto* c_seq = app.add_subcommand("seqgen", "generate a point sequence");
    c_seq->add_option("--system", seq.system,
                      "limitperiodic3 | limitquasi | perioddoubling | thuemorse | custom");
    c_seq->add_option("--range", seq.range, "positions [0, range) for limitperiodic3")
        ->check(CLI::PositiveNumber);
    c_seq->add_option("--steps", seq.steps, "inflation steps for limitquasi")
        ->check(CLI::Range(0, 12));
    c_seq->add_option("--iters", seq.iters, "substitution iterations for letter systems")
        ->check(CLI::Range(0, 20));
    c_seq->add_option("--rules", seq.rules, "rule file for system custom");
    c_seq->add_option("--json", seq.json, "write a JSON artifact (- for stdout)");
    c_seq->add_flag("--two-sided", seq.two_sided, "also print the negative side");

    VerifyOpts ver;
    auto* c_ver = app.add_subcommand("verify", "windows against the substitution fixed point");
    c_ver->add_option("--system", ver.system, "limitperiodic3");
    c_ver->add_option("--K", ver.truncation, "window truncation depth")->check(CLI::Range(2, 30));
    c_ver->add_option("--range", ver.range, "check radius")->check(CLI::PositiveNumber);
    c_ver->add_option("--json", ver.json, "write the report (- for stdout)");
    c_ver->add_option("--diff", ver.diff, "diff artifact path on failure");

    WindowsOpts win;
    auto* c_win = app.add_subcommand("windows", "emit the 3-adic window family");
    c_win->add_option("--K", win.truncation, "truncation depth")->check(CLI::Range(2, 30));
    c_win->add_option("--out", win.out, "output path (- for stdout)");

    ModelsetOpts mdl;
    auto* c_mdl = app.add_subcommand("modelset", "cut-and-project point query");
    c_mdl->add_option("--scheme", mdl.scheme, "catalog scheme name");
    c_mdl->add_option("--config", mdl.config, "scheme JSON file (overrides --scheme)");
    c_mdl->add_option("--window-type", mdl.window_type, "a|b|c window for diagonal-Z-3adic");
    c_mdl->add_option("--truncation", mdl.truncation, "internal truncation depth")
        ->check(CLI::Range(2, 30));
    c_mdl->add_option("--lo", mdl.lo, "physical range lower end (rational)");
    c_mdl->add_option("--hi", mdl.hi, "physical range upper end (rational)");
    c_mdl->add_option("--json", mdl.json, "write a JSON artifact (- for stdout)");
    c_mdl->add_option("--threads", mdl.threads, "worker cap (0: PADIC_MODELSET_THREADS)");

    auto* c_chair = app.add_subcommand("chair", "chair tiling recursion and windows");
    c_chair->require_subcommand(1);
    ChairGenOpts cg;
    auto* c_cg = c_chair->add_subcommand("gen", "generate the level patch");
    c_cg->add_option("--levels", cg.levels, "recursion level")->check(CLI::Range(0, 12));
    c_cg->add_option("--svg", cg.svg, "write an SVG rendering");
    c_cg->add_option("--json", cg.json, "write the labeled points (- for stdout)");
    c_cg->add_option("--px", cg.px, "pixels per unit cell")->check(CLI::Range(2, 200));
    ChairOracleOpts co;
    auto* c_co = c_chair->add_subcommand("oracle", "windows against the recursion labels");
    c_co->add_option("--levels", co.build_level, "window build level")->check(CLI::Range(2, 10));
    c_co->add_option("--check-level", co.check_level, "patch level to compare on")
        ->check(CLI::Range(0, 10));
    c_co->add_option("--mode", co.mode, "refined | conservative")
        ->check(CLI::IsMember({"refined", "conservative"}));
    c_co->add_option("--json", co.json, "write the report (- for stdout)");

    auto* c_quasi = app.add_subcommand("limitquasi", "sqrt2 limit-quasiperiodic system");
    c_quasi->require_subcommand(1);
    QuasiRunOpts qr;
    auto* c_qr = c_quasi->add_subcommand("run", "sandwich check of window approximations");
    c_qr->add_option("--steps", qr.steps, "inflation steps")->check(CLI::Range(0, 10));
    c_qr->add_option("--depth", qr.depth, "window recursion depth")->check(CLI::Range(0, 14));
    c_qr->add_option("--report", qr.report, "report path (- for stdout)");
    QuasiStripOpts qs;
    auto* c_qs = c_quasi->add_subcommand("strip", "inner strip claims and connectivity");
    c_qs->add_option("--steps", qs.steps, "inflation steps")->check(CLI::Range(0, 10));
    c_qs->add_option("--json", qs.json, "write the report (- for stdout)");

    DiffractOpts dif;
    auto* c_dif = app.add_subcommand("diffract", "analytic and numeric spectra");
    c_dif->add_option("--system", dif.system,
                      "limitperiodic3 | chair | perioddoubling | thuemorse | custom");
    c_dif->add_option("--r", dif.r, "patch radius")->check(CLI::PositiveNumber);
    c_dif->add_option("--nmax", dif.nmax, "3-adic module depth")->check(CLI::Range(2, 12));
    c_dif->add_option("--kmax", dif.kmax, "wavenumber range [0, kmax] (rational)");
    c_dif->add_option("--weights", dif.weights, "comma-separated scatterer weights");
    c_dif->add_option("--levels", dif.levels, "chair patch level")->check(CLI::Range(0, 12));
    c_dif->add_option("--class", dif.klass, "chair orientation class")->check(CLI::Range(0, 3));
    c_dif->add_option("--kdenom", dif.kdenom, "dyadic grid depth for numeric-only systems")
        ->check(CLI::Range(0, 6));
    c_dif->add_option("--csv", dif.csv, "write the spectrum table");
    c_dif->add_option("--json", dif.json, "write a JSON summary (- for stdout)");
    c_dif->add_option("--threads", dif.threads, "worker cap (0: PADIC_MODELSET_THREADS)");

    RenderOpts ren;
    auto* c_ren = app.add_subcommand("render", "SVG rendering of a point set");
    c_ren->add_option("--system", ren.system, "chair | limitperiodic3 | limitquasi");
    c_ren->add_option("--svg", ren.svg, "output path")->required();
    c_ren->add_option("--levels", ren.levels, "chair recursion level")->check(CLI::Range(0, 12));
    c_ren->add_option("--range", ren.range, "limitperiodic3 radius")->check(CLI::PositiveNumber);
    c_ren->add_option("--steps", ren.steps, "limitquasi inflation steps")->check(CLI::Range(0, 10));
    c_ren->add_option("--px", ren.px, "pixels per unit cell")->check(CLI::Range(2, 200));

    try {
        app.parse(argc, argv);
        if (*c_seq) return run_seqgen(seq);
        if (*c_ver) return run_verify(ver);
        if (*c_win) return run_windows(win);
        if (*c_mdl) return run_modelset(mdl);
        if (*c_cg) return run_chair_gen(cg);
        if (*c_co) return run_chair_oracle(co);
        if (*c_qr) return run_quasi_run(qr);
        if (*c_qs) return run_quasi_strip(qs);
        if (*c_dif) return run_diffract(dif);
        if (*c_ren) return run_render(ren);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const VerifyFailure& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kExitVerifyFail;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
