#include "padicms/substitution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace padicms {

namespace {

constexpr std::size_t kMaxWordLength = 50'000'000;

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

int SubstitutionSystem::index_of(char letter) const {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == letter) return static_cast<int>(i);
    throw std::invalid_argument(std::string("unknown letter '") + letter + "'");
}

const std::string& SubstitutionSystem::rule(char letter) const {
    return images[index_of(letter)];
}

std::string SubstitutionSystem::apply(const std::string& word) const {
    std::size_t total = 0;
    for (char ch : word) total += rule(ch).size();
    if (total > kMaxWordLength)
        throw std::length_error("substitution image exceeds the word length guard");
    std::string out;
    out.reserve(total);
    for (char ch : word) out += rule(ch);
    return out;
}

std::string SubstitutionSystem::iterate(char seed, int n) const {
    if (n < 0) throw std::invalid_argument("iterate: negative count");
    std::string w(1, seed);
    index_of(seed);
    for (int i = 0; i < n; ++i) w = apply(w);
    return w;
}

std::optional<int> SubstitutionSystem::constant_length() const {
    if (images.empty()) return {};
    std::size_t len = images[0].size();
    for (const std::string& w : images)
        if (w.size() != len) return {};
    return static_cast<int>(len);
}

SubstitutionSystem SubstitutionSystem::parse(const std::string& rules_text) {
    SubstitutionSystem s;
    auto add_letter = [&s](char ch) {
        for (char a : s.alphabet)
            if (a == ch) return;
        s.alphabet.push_back(ch);
        s.images.emplace_back();
    };
    std::vector<std::pair<char, std::string>> parsed;
    std::istringstream in(rules_text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        std::size_t arrow = line.find("->");
        if (arrow == std::string::npos)
            throw std::invalid_argument("rule line missing '->': " + line);
        std::string lhs = trim(line.substr(0, arrow));
        std::string rhs = trim(line.substr(arrow + 2));
        if (lhs.size() != 1)
            throw std::invalid_argument("rule left side must be one letter: " + line);
        std::string image;
        for (char ch : rhs)
            if (!std::isspace(static_cast<unsigned char>(ch))) image += ch;
        if (image.empty())
            throw std::invalid_argument("rule image must be nonempty: " + line);
        add_letter(lhs[0]);
        for (char ch : image) add_letter(ch);
        parsed.emplace_back(lhs[0], image);
    }
    if (parsed.empty()) throw std::invalid_argument("no substitution rules found");
    std::vector<bool> has_rule(s.alphabet.size(), false);
    for (const auto& [letter, image] : parsed) {
        int idx = s.index_of(letter);
        if (has_rule[idx])
            throw std::invalid_argument(std::string("duplicate rule for '") + letter + "'");
        has_rule[idx] = true;
        s.images[idx] = image;
    }
    for (std::size_t i = 0; i < s.alphabet.size(); ++i)
        if (!has_rule[i])
            throw std::invalid_argument(std::string("letter '") + s.alphabet[i] +
                                        "' appears in an image but has no rule");
    return s;
}

std::vector<std::vector<Integer>> subst_matrix(const SubstitutionSystem& s) {
    std::size_t n = s.alphabet.size();
    std::vector<std::vector<Integer>> m(n, std::vector<Integer>(n, 0));
    for (std::size_t j = 0; j < n; ++j)
        for (char ch : s.images[j]) m[s.index_of(ch)][j] += 1;
    return m;
}

std::vector<std::vector<Integer>> int_matrix_power(
    const std::vector<std::vector<Integer>>& m, int exp) {
    if (exp < 0) throw std::invalid_argument("int_matrix_power: negative exponent");
    std::size_t n = m.size();
    std::vector<std::vector<Integer>> r(n, std::vector<Integer>(n, 0));
    for (std::size_t i = 0; i < n; ++i) r[i][i] = 1;
    for (int k = 0; k < exp; ++k) {
        std::vector<std::vector<Integer>> t(n, std::vector<Integer>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l)
                for (std::size_t j = 0; j < n; ++j) t[i][j] += r[i][l] * m[l][j];
        r.swap(t);
    }
    return r;
}

bool is_primitive(const SubstitutionSystem& s) {
    auto m = subst_matrix(s);
    std::size_t n = m.size();
    std::vector<std::vector<bool>> b(n, std::vector<bool>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b[i][j] = m[i][j] > 0;
    int bound = static_cast<int>(n * n) + 1;
    for (int k = 1; k <= bound; ++k) {
        bool all = true;
        for (const auto& row : b)
            for (bool entry : row) all = all && entry;
        if (all) return true;
        std::vector<std::vector<bool>> t(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l)
                if (b[i][l])
                    for (std::size_t j = 0; j < n; ++j)
                        t[i][j] = t[i][j] || (m[l][j] > 0);
        b.swap(t);
    }
    return false;
}

namespace {

void power_iteration(const std::vector<std::vector<double>>& m,
                     std::vector<double>& v, double& lambda) {
    std::size_t n = m.size();
    v.assign(n, 1.0 / static_cast<double>(n));
    lambda = 0.0;
    for (int it = 0; it < 200000; ++it) {
        std::vector<double> w(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) w[i] += m[i][j] * v[j];
        double norm = 0.0;
        for (double x : w) norm += std::fabs(x);
        for (double& x : w) x /= norm;
        double resid = 0.0;
        for (std::size_t i = 0; i < n; ++i) resid = std::max(resid, std::fabs(w[i] - v[i]));
        bool settled = std::fabs(norm - lambda) < 1e-14 * std::max(1.0, norm);
        v.swap(w);
        lambda = norm;
        if (it > 3 && settled && resid < 1e-13) break;
    }
}

bool rational_sqrt(const Rational& r, Rational& root) {
    if (r < 0) return false;
    Integer num = boost::multiprecision::numerator(r);
    Integer den = boost::multiprecision::denominator(r);
    Integer sn = isqrt_floor(num), sd = isqrt_floor(den);
    if (sn * sn != num || sd * sd != den) return false;
    root = Rational(sn, sd);
    return true;
}

// Characteristic polynomial (monic, coefficients low to high) for n <= 3.
std::vector<Rational> char_poly(const std::vector<std::vector<Integer>>& m) {
    std::size_t n = m.size();
    if (n == 1) return {Rational(-m[0][0]), Rational(1)};
    if (n == 2) {
        Integer tr = m[0][0] + m[1][1];
        Integer det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        return {Rational(det), Rational(-tr), Rational(1)};
    }
    if (n == 3) {
        Integer tr = m[0][0] + m[1][1] + m[2][2];
        Integer minors = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) +
                         (m[0][0] * m[2][2] - m[0][2] * m[2][0]) +
                         (m[1][1] * m[2][2] - m[1][2] * m[2][1]);
        Integer det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                      m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                      m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        return {Rational(-det), Rational(minors), Rational(-tr), Rational(1)};
    }
    return {};
}

Rational poly_eval(const std::vector<Rational>& p, const Rational& x) {
    Rational acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

std::vector<Rational> poly_deflate(const std::vector<Rational>& p, const Rational& root) {
    // Synthetic division by (x - root); remainder must vanish.
    std::vector<Rational> q(p.size() - 1);
    Rational carry = p.back();
    for (std::size_t i = p.size() - 1; i-- > 0;) {
        q[i] = carry;
        carry = p[i] + carry * root;
    }
    if (carry != 0) throw std::logic_error("poly_deflate: nonzero remainder");
    return q;
}

// All roots of the characteristic polynomial inside Q(sqrt2), if the
// polynomial splits there; empty otherwise.
std::vector<QuadRat> split_roots(std::vector<Rational> p) {
    std::vector<QuadRat> roots;
    if (p.empty()) return roots;
    Rational bound = 1;
    for (const Rational& c : p) {
        Rational a = boost::multiprecision::abs(c);
        if (a > bound) bound = a;
    }
    Rational bound_up = bound + 1;
    Integer b = boost::multiprecision::numerator(bound_up);
    for (Integer r = -b; r <= b && p.size() > 1; ++r) {
        while (p.size() > 1 && poly_eval(p, Rational(r)) == 0) {
            roots.push_back(QuadRat(Rational(r), 0));
            p = poly_deflate(p, Rational(r));
        }
    }
    if (p.size() == 2) {
        roots.push_back(QuadRat(-p[0] / p[1], 0));
        return roots;
    }
    if (p.size() == 3) {
        Rational B = p[1] / p[2], C = p[0] / p[2];
        Rational disc = B * B - 4 * C;
        Rational s;
        if (rational_sqrt(disc, s)) {
            roots.push_back(QuadRat((-B + s) / 2, 0));
            roots.push_back(QuadRat((-B - s) / 2, 0));
            return roots;
        }
        if (rational_sqrt(disc / 2, s)) {
            roots.push_back(QuadRat(-B / 2, s / 2));
            roots.push_back(QuadRat(-B / 2, -s / 2));
            return roots;
        }
        return {};
    }
    if (p.size() > 1) return {};
    return roots;
}

// One kernel vector of a singular matrix over Q(sqrt2).
std::vector<QuadRat> kernel_vector(std::vector<std::vector<QuadRat>> a) {
    int n = static_cast<int>(a.size());
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < n && row < n; ++col) {
        int pr = -1;
        for (int r = row; r < n; ++r)
            if (!a[r][col].is_zero()) { pr = r; break; }
        if (pr < 0) continue;
        std::swap(a[row], a[pr]);
        QuadRat inv = a[row][col].inverse();
        for (int c = col; c < n; ++c) a[row][c] = a[row][c] * inv;
        for (int r = 0; r < n; ++r) {
            if (r == row || a[r][col].is_zero()) continue;
            QuadRat f = a[r][col];
            for (int c = col; c < n; ++c) a[r][c] = a[r][c] - f * a[row][c];
        }
        pivot_col.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(n, false);
    for (int c : pivot_col) is_pivot[c] = true;
    int free_col = -1;
    for (int c = 0; c < n; ++c)
        if (!is_pivot[c]) { free_col = c; break; }
    if (free_col < 0) throw std::domain_error("kernel_vector: matrix is nonsingular");
    std::vector<QuadRat> v(n);
    v[free_col] = QuadRat(Rational(1), Rational(0));
    for (int r = 0; r < row; ++r) v[pivot_col[r]] = -a[r][free_col];
    return v;
}

} // namespace

PFData pf_data(const SubstitutionSystem& s) {
    if (!is_primitive(s)) throw std::domain_error("pf_data: system is not primitive");
    auto m = subst_matrix(s);
    std::size_t n = m.size();
    std::vector<std::vector<double>> md(n, std::vector<double>(n));
    std::vector<std::vector<double>> mtd(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            md[i][j] = m[i][j].convert_to<double>();
            mtd[j][i] = md[i][j];
        }

    PFData out;
    std::vector<double> freq, len;
    double lam_right, lam_left;
    power_iteration(md, freq, lam_right);
    power_iteration(mtd, len, lam_left);
    out.inflation = (lam_right + lam_left) / 2;
    double fsum = 0.0;
    for (double f : freq) fsum += f;
    out.frequencies.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.frequencies[i] = freq[i] / fsum;
    out.lengths.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.lengths[i] = len[i] / len[0];

    out.exact_available = false;
    auto roots = split_roots(char_poly(m));
    if (roots.size() == n) {
        std::size_t dominant = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (roots[i] > roots[dominant]) dominant = i;
        QuadRat lam = roots[dominant];
        if (std::fabs(to_double(lam) - out.inflation) < 1e-9 * std::max(1.0, out.inflation)) {
            std::vector<std::vector<QuadRat>> a(n, std::vector<QuadRat>(n));
            std::vector<std::vector<QuadRat>> at(n, std::vector<QuadRat>(n));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    QuadRat entry(Rational(m[i][j]), 0);
                    a[i][j] = entry;
                    at[j][i] = entry;
                    if (i == j) {
                        a[i][j] = a[i][j] - lam;
                        at[j][i] = at[j][i] - lam;
                    }
                }
            std::vector<QuadRat> f = kernel_vector(a);
            std::vector<QuadRat> l = kernel_vector(at);
            QuadRat fsum_exact;
            for (const QuadRat& x : f) fsum_exact = fsum_exact + x;
            out.inflation_exact = lam;
            out.frequencies_exact.resize(n);
            out.lengths_exact.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                out.frequencies_exact[i] = f[i] / fsum_exact;
                out.lengths_exact[i] = l[i] / l[0];
            }
            bool positive = true;
            for (std::size_t i = 0; i < n; ++i)
                positive = positive && sign_of(out.frequencies_exact[i]) > 0 &&
                           sign_of(out.lengths_exact[i]) > 0;
            if (positive) {
                out.exact_available = true;
                out.inflation = to_double(lam);
                for (std::size_t i = 0; i < n; ++i) {
                    out.frequencies[i] = to_double(out.frequencies_exact[i]);
                    out.lengths[i] = to_double(out.lengths_exact[i]);
                }
            }
        }
    }
    if (!out.exact_available) {
        out.inflation_exact = QuadRat();
        out.frequencies_exact.clear();
        out.lengths_exact.clear();
    }
    return out;
}

FixedPointPatch fixed_point_patch(const SubstitutionSystem& s, char left, char right, int n) {
    s.index_of(left);
    s.index_of(right);
    // Legality: the adjacent pair left,right recurs inside substituted words.
    bool legal = false;
    for (char letter : s.alphabet) {
        std::string w = s.iterate(letter, 5);
        for (std::size_t i = 0; i + 1 < w.size() && !legal; ++i)
            legal = w[i] == left && w[i + 1] == right;
        if (legal) break;
    }
    if (!legal) {
        std::ostringstream msg;
        msg << "fixed_point_patch: seed pair " << left << "|" << right
            << " never occurs in substituted words";
        throw std::domain_error(msg.str());
    }
    FixedPointPatch p;
    p.system = s;
    p.left_seed = left;
    p.right_seed = right;
    p.iterations = n;
    p.left_word = s.iterate(left, n);
    p.right_word = s.iterate(right, n);
    return p;
}

FixedPointPatch one_sided_patch(const SubstitutionSystem& s, char seed, int n) {
    FixedPointPatch p;
    p.system = s;
    p.left_seed = seed;
    p.right_seed = seed;
    p.iterations = n;
    p.left_word.clear();
    p.right_word = s.iterate(seed, n);
    return p;
}

bool GeometricPointSets::contains(const QuadRat& x) const {
    for (char letter : alphabet)
        if (contains(letter, x)) return true;
    return false;
}

bool GeometricPointSets::contains(char letter, const QuadRat& x) const {
    auto it = per_letter.find(letter);
    if (it == per_letter.end()) return false;
    const auto& v = it->second;
    auto pos = std::lower_bound(v.begin(), v.end(), x);
    return pos != v.end() && *pos == x;
}

GeometricPointSets geometric_points(const FixedPointPatch& patch,
                                    const std::map<char, QuadRat>& lengths,
                                    AnchorSide anchor) {
    for (char letter : patch.system.alphabet) {
        auto it = lengths.find(letter);
        if (it == lengths.end() || sign_of(it->second) <= 0)
            throw std::invalid_argument("geometric_points: missing or non-positive length");
    }
    GeometricPointSets out;
    out.alphabet = patch.system.alphabet;
    out.anchor = anchor;
    for (char letter : out.alphabet) out.per_letter[letter];

    QuadRat pos;
    for (char ch : patch.right_word) {
        const QuadRat& len = lengths.at(ch);
        QuadRat next = pos + len;
        out.per_letter[ch].push_back(anchor == AnchorSide::RightEnd ? next : pos);
        pos = next;
    }
    out.right_extent = pos;
    pos = QuadRat();
    for (auto it = patch.left_word.rbegin(); it != patch.left_word.rend(); ++it) {
        const QuadRat& len = lengths.at(*it);
        QuadRat prev = pos - len;
        out.per_letter[*it].push_back(anchor == AnchorSide::RightEnd ? pos : prev);
        pos = prev;
    }
    out.left_extent = pos;
    for (auto& [letter, v] : out.per_letter) std::sort(v.begin(), v.end());
    return out;
}

SimilarityReport self_similarity_check(const GeometricPointSets& points,
                                       const QuadRat& factor, const QuadRat& lo,
                                       const QuadRat& hi,
                                       std::optional<char> target_letter) {
    if (sign_of(factor - QuadRat(Rational(1), 0)) < 0)
        throw std::invalid_argument("self_similarity_check: factor must be >= 1");
    if (factor * hi > points.right_extent || factor * lo < points.left_extent)
        throw std::invalid_argument("self_similarity_check: scaled range escapes the patch");
    SimilarityReport rep{true, 0, {}};
    for (const auto& [letter, v] : points.per_letter) {
        for (const QuadRat& x : v) {
            if (x < lo || x > hi) continue;
            ++rep.checked;
            QuadRat y = factor * x;
            bool hit = target_letter ? points.contains(*target_letter, y) : points.contains(y);
            if (!hit) {
                rep.ok = false;
                if (rep.counterexamples.size() < 16) rep.counterexamples.push_back(x);
            }
        }
    }
    return rep;
}

CoincidenceReport dekking_coincidence(const SubstitutionSystem& s, int max_depth) {
    auto len = s.constant_length();
    if (!len) throw std::domain_error("dekking_coincidence: system is not constant length");
    if (max_depth < 1) throw std::invalid_argument("dekking_coincidence: max_depth must be >= 1");
    CoincidenceReport rep{*len, false, max_depth, -1};
    for (int d = 1; d <= max_depth; ++d) {
        std::vector<std::string> words;
        for (char letter : s.alphabet) words.push_back(s.iterate(letter, d));
        for (std::size_t j = 0; j < words[0].size(); ++j) {
            bool same = true;
            for (std::size_t i = 1; i < words.size(); ++i) same = same && words[i][j] == words[0][j];
            if (same) {
                rep.has_coincidence = true;
                rep.depth = d;
                rep.position = static_cast<long>(j);
                return rep;
            }
        }
    }
    return rep;
}

namespace {

// Greedy block recode; throws when the pair is torn.
std::string recode_word(const std::string& w, const std::string& pair, char new_letter) {
    std::string out;
    for (std::size_t i = 0; i < w.size();) {
        if (w[i] == pair[0]) {
            if (i + 1 >= w.size() || w[i + 1] != pair[1])
                throw std::domain_error("recode_pairs: first letter of the pair not followed by the second");
            out += new_letter;
            i += 2;
        } else if (w[i] == pair[1]) {
            throw std::domain_error("recode_pairs: second letter of the pair without the first before it");
        } else {
            out += w[i];
            ++i;
        }
    }
    return out;
}

} // namespace

RecodeResult recode_pairs(const FixedPointPatch& patch,
                          const std::map<char, QuadRat>& lengths,
                          const std::string& pair, char new_letter) {
    if (pair.size() != 2 || pair[0] == pair[1])
        throw std::invalid_argument("recode_pairs: pair must be two distinct letters");
    const SubstitutionSystem& s = patch.system;
    s.index_of(pair[0]);
    s.index_of(pair[1]);
    for (char letter : s.alphabet)
        if (letter == new_letter)
            throw std::invalid_argument("recode_pairs: replacement letter already in use");

    bool present = patch.left_word.find(pair) != std::string::npos ||
                   patch.right_word.find(pair) != std::string::npos;
    if (!present) {
        RecodeResult vacuous{s, patch, lengths, false};
        return vacuous;
    }

    RecodeResult out;
    out.pair_present = true;
    out.system.alphabet.clear();
    out.system.images.clear();
    for (char letter : s.alphabet) {
        if (letter == pair[1]) continue;
        if (letter == pair[0]) {
            out.system.alphabet.push_back(new_letter);
            out.system.images.push_back(recode_word(s.rule(pair[0]) + s.rule(pair[1]),
                                                    pair, new_letter));
        } else {
            out.system.alphabet.push_back(letter);
            out.system.images.push_back(recode_word(s.rule(letter), pair, new_letter));
        }
    }
    out.patch.system = out.system;
    out.patch.iterations = patch.iterations;
    out.patch.left_word = recode_word(patch.left_word, pair, new_letter);
    out.patch.right_word = recode_word(patch.right_word, pair, new_letter);
    out.patch.left_seed = out.patch.left_word.empty() ? patch.left_seed : out.patch.left_word.back();
    out.patch.right_seed = out.patch.right_word.empty() ? patch.right_seed : out.patch.right_word.front();
    for (char letter : out.system.alphabet) {
        if (letter == new_letter)
            out.lengths[letter] = lengths.at(pair[0]) + lengths.at(pair[1]);
        else
            out.lengths[letter] = lengths.at(letter);
    }
    return out;
}

} // namespace padicms
