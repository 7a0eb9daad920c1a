#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "padicms/chair.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <set>

using namespace padicms;

namespace {

Vec2I pt(long x, long y) { return Vec2I(Integer(x), Integer(y)); }

std::vector<Vec2I> pts(std::initializer_list<std::pair<long, long>> xs) {
    std::vector<Vec2I> v;
    for (const auto& [x, y] : xs) v.push_back(pt(x, y));
    return v;
}

bool holds(const std::vector<Vec2I>& sorted, const Vec2I& v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
}

} // namespace

TEST_CASE("inflation and placements act as expected on sample points") {
    AffineMap2 T = chair_inflation();
    CHECK(T.apply(Vec2Q(Rational(0), Rational(0))) == Vec2Q(Rational(1, 2), Rational(1, 2)));
    CHECK(T.apply(Vec2Q(Rational(1), Rational(1))) == Vec2Q(Rational(-3, 2), Rational(5, 2)));
    CHECK_THROWS(T.apply_integer(pt(0, 0)));

    auto place = chair_placements();
    CHECK(place[0].apply_integer(pt(5, -3)) == pt(5, -3));
    CHECK(place[1].apply_integer(pt(1, 0)) == pt(1, 1));  // R(1,0)+e1 = (0,1)+(1,0)
    CHECK(place[2].apply_integer(pt(1, 0)) == pt(0, 1));  // -x + (1,1)
    CHECK(place[3].apply_integer(pt(1, 0)) == pt(0, 2));  // R(1,0)+e2
    for (int l = 0; l < 4; ++l) CHECK(place[l].linear.det() == Rational(1));

    auto steps = chair_class_steps();
    CHECK(steps == std::array<int, 4>{0, 1, 2, 1});
}

TEST_CASE("conjugated placement maps at level one") {
    AffineMap2 T = chair_inflation();
    AffineMap2 T_inv = T.inverse();
    auto place = chair_placements();
    auto conj = [&](int l) { return affine_compose(T, affine_compose(place[l], T_inv)); };

    CHECK(conj(0).apply_integer(pt(7, -4)) == pt(7, -4));
    CHECK(conj(1).apply_integer(pt(0, 0)) == pt(1, 2));
    CHECK(conj(1).apply_integer(pt(1, 0)) == pt(1, 3)); // R(1,0)+(1,2)
    CHECK(conj(2).apply_integer(pt(0, 0)) == pt(-1, 3));
    CHECK(conj(3).apply_integer(pt(0, 0)) == pt(-1, 0));
}

TEST_CASE("patch boxes transform and count integer points") {
    RatBox b0 = chair_patch_box(0);
    CHECK(b0.x_lo == Rational(-1, 2));
    CHECK(b0.x_hi == Rational(1, 2));
    CHECK(b0.integer_point_count() == 1);

    RatBox b1 = chair_patch_box(1);
    CHECK(b1.x_lo == Rational(-1, 2));
    CHECK(b1.x_hi == Rational(3, 2));
    CHECK(b1.y_lo == Rational(-1, 2));
    CHECK(b1.y_hi == Rational(3, 2));
    CHECK(b1.integer_point_count() == 4);

    RatBox b2 = chair_patch_box(2);
    CHECK(b2.x_lo == Rational(-5, 2));
    CHECK(b2.x_hi == Rational(3, 2));
    CHECK(b2.y_lo == Rational(-1, 2));
    CHECK(b2.y_hi == Rational(7, 2));
    CHECK(b2.integer_point_count() == 16);

    RatBox b3 = chair_patch_box(3);
    CHECK(b3.x_lo == Rational(-13, 2));
    CHECK(b3.x_hi == Rational(3, 2));
    CHECK(b3.y_lo == Rational(-9, 2));
    CHECK(b3.y_hi == Rational(7, 2));
    CHECK(b3.integer_point_count() == 64);

    CHECK(b2.contains(pt(-2, 0)));
    CHECK(b2.contains(pt(1, 3)));
    CHECK(!b2.contains(pt(2, 0)));
    CHECK(!b2.contains(pt(0, -1)));
    CHECK_THROWS_AS(chair_patch_box(-1), std::invalid_argument);
}

TEST_CASE("recursion stages at levels one and two match hand expansion") {
    ChairState st = chair_recursion(2);
    CHECK(st.max_level == 2);

    CHECK(st.stage(0, 0) == pts({{0, 0}}));
    CHECK(st.stage(0, 1).empty());

    CHECK(st.stage(1, 0) == pts({{0, 0}}));
    CHECK(st.stage(1, 1) == pts({{0, 1}, {1, 0}}));
    CHECK(st.stage(1, 2) == pts({{1, 1}}));
    CHECK(st.stage(1, 3).empty());

    CHECK(st.stage(2, 0) == pts({{-2, 2}, {0, 0}}));
    CHECK(st.stage(2, 1) == pts({{-1, 0}, {0, 1}, {1, 0}, {1, 2}}));
    CHECK(st.stage(2, 2) == pts({{-2, 0}, {-1, 1}, {-1, 3}, {0, 2}, {1, 1}, {1, 3}}));
    CHECK(st.stage(2, 3) == pts({{-2, 1}, {-2, 3}, {-1, 2}, {0, 3}}));

    CHECK_THROWS_AS(st.stage(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(st.stage(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(chair_recursion(-1), std::invalid_argument);
    CHECK_THROWS_AS(chair_recursion(13), std::invalid_argument);
}

TEST_CASE("stages are nested and partition each patch box") {
    ChairState st = chair_recursion(6);
    for (int i = 0; i < 6; ++i)
        for (int k = 0; k < 4; ++k)
            for (const Vec2I& t : st.stage(i, k)) CHECK(holds(st.stage(i + 1, k), t));

    Integer total = 0;
    for (int k = 0; k < 4; ++k) total += Integer(st.stage(6, k).size());
    CHECK(total == int_pow(Integer(4), 6));
    CHECK(total == chair_patch_box(6).integer_point_count());
}

TEST_CASE("orientation by descent matches the recursion everywhere in the patch") {
    DescentResult origin = class_by_descent(pt(0, 0));
    CHECK(origin.k == 0);
    CHECK(origin.entry_level == 0);
    CHECK(origin.path.empty());

    DescentResult d11 = class_by_descent(pt(1, 1));
    CHECK(d11.k == 2);
    CHECK(d11.entry_level == 1);
    CHECK(d11.path == std::vector<int>{2});

    ChairState st = chair_recursion(5);
    for (int k = 0; k < 4; ++k)
        for (const Vec2I& t : st.stage(5, k)) CHECK(class_by_descent(t).k == k);

    // far outside the small patches
    DescentResult far = class_by_descent(pt(1000, -1000));
    CHECK(far.entry_level > 5);
    CHECK(far.k == class_by_descent(pt(1000, -1000)).k);
}

TEST_CASE("single-point window at level zero") {
    ChairState st = chair_recursion(0);
    for (ChairWindowMode mode : {ChairWindowMode::Conservative, ChairWindowMode::Refined}) {
        ChairWindows w = chair_windows(st, mode);
        CHECK(w.omega[0].cosets.size() == 1);
        CHECK(w.omega[0].cosets[0] == Coset({Integer(0), Integer(0)}, 2, Integer(1)));
        CHECK(w.measure(0) == Rational(1, 16));
        CHECK(w.measure(1) == Rational(0));
        CHECK(w.omega[3].cosets.empty());
        CHECK(w.deficit() == Rational(15, 16));
    }
}

TEST_CASE("conservative window measures grow with the level but stay truncated") {
    Rational prev(0);
    for (int i = 0; i <= 5; ++i) {
        ChairState st = chair_recursion(i);
        ChairWindows w = chair_windows(st, ChairWindowMode::Conservative);
        Rational total = w.total_measure();
        CHECK(total > prev);
        CHECK(total < Rational(1));
        prev = total;
    }
    // the per-point coset measures cannot exceed one conservative coset per point
    ChairState st = chair_recursion(4);
    ChairWindows w = chair_windows(st, ChairWindowMode::Conservative);
    Rational naive(0);
    for (int k = 0; k < 4; ++k) {
        for (int i = 0; i <= 4; ++i) {
            for (const Vec2I& t : st.stage(i, k)) {
                if (i > 0 && holds(st.stage(i - 1, k), t)) continue;
                naive += Rational(1) / int_pow(Integer(4), i + 2);
            }
        }
    }
    CHECK(w.total_measure() <= naive);
    CHECK(w.total_measure() == Rational(991, 4096));
}

TEST_CASE("refined windows close most of the measure gap") {
    ChairState st = chair_recursion(8);
    ChairWindows w = chair_windows(st, ChairWindowMode::Refined);
    CHECK(w.total_measure() >= Rational(99, 100));
    CHECK(w.total_measure() == Rational(8135, 8192));
    CHECK(w.deficit() == Rational(57, 8192));
}

TEST_CASE("windows agree with the recursion on the whole generated patch") {
    ChairState st = chair_recursion(6);
    for (ChairWindowMode mode : {ChairWindowMode::Conservative, ChairWindowMode::Refined}) {
        ChairWindows w = chair_windows(st, mode);
        ChairOracleReport at3 = chair_oracle_compare(w, st, 3);
        CHECK(at3.ok());
        CHECK(at3.agreed == 64);
        ChairOracleReport at6 = chair_oracle_compare(w, st, 6);
        CHECK(at6.ok());
        CHECK(at6.agreed == 4096);
    }
    ChairWindows w = chair_windows(st);
    CHECK(w.mode == ChairWindowMode::Refined);
    CHECK_THROWS_AS(chair_oracle_compare(w, st, 7), std::invalid_argument);
}

TEST_CASE("stage translates by their modulus keep their orientation inside the patch") {
    ChairState st = chair_recursion(6);
    ChairPeriodicityReport rep = chair_periodicity_check(st, 6);
    CHECK(rep.ok());
    CHECK(rep.patch_level == 6);
    CHECK(rep.checked == 6400);
    CHECK_THROWS_AS(chair_periodicity_check(st, 7), std::invalid_argument);
}

TEST_CASE("model set labels in a box agree with descent") {
    ChairState st = chair_recursion(6);
    ChairWindows w = chair_windows(st);
    ChairLabels box = chair_model_set(w, pt(-10, -10), pt(10, 10));
    CHECK(box.conflicts.empty());
    CHECK(box.labels.size() + box.undecided.size() == 441);
    for (const auto& [v, k] : box.labels) CHECK(class_by_descent(v).k == k);

    // the level-two patch box is fully decided
    ChairLabels small = chair_model_set(w, pt(-2, 0), pt(1, 3));
    CHECK(small.undecided.empty());
    CHECK(small.conflicts.empty());
    CHECK(small.labels.size() == 16);
    for (const auto& [v, k] : small.labels) CHECK(holds(st.stage(2, k), v));

    CHECK_THROWS_AS(chair_model_set(w, pt(1, 0), pt(0, 0)), std::invalid_argument);
}

TEST_CASE("refined windows never conflict on a much larger box") {
    ChairState st = chair_recursion(6);
    ChairWindows w = chair_windows(st);
    ChairLabels big = chair_model_set(w, pt(-30, -30), pt(30, 30));
    CHECK(big.conflicts.empty());
    std::size_t n = std::size_t(61) * 61;
    CHECK(big.labels.size() + big.undecided.size() == n);
    CHECK(big.labels.size() >= n * 9 / 10);
}

TEST_CASE("level json holds the sorted stage sets") {
    ChairState st = chair_recursion(2);
    std::string text = chair_level_json(st, 1);
    CHECK(text == chair_level_json(st, 1));
    nlohmann::json j = nlohmann::json::parse(text);
    CHECK(j["level"] == 1);
    CHECK(j["sets"]["0"] == nlohmann::json::parse("[[0,0]]"));
    CHECK(j["sets"]["1"] == nlohmann::json::parse("[[0,1],[1,0]]"));
    CHECK(j["sets"]["2"] == nlohmann::json::parse("[[1,1]]"));
    CHECK(j["sets"]["3"] == nlohmann::json::parse("[]"));
    CHECK_THROWS_AS(chair_level_json(st, 3), std::invalid_argument);
}

TEST_CASE("svg output is deterministic with one square per point") {
    ChairState st = chair_recursion(3);
    std::string one = chair_svg(st, 1);
    CHECK(one == chair_svg(st, 1));
    std::size_t rects = 0;
    for (std::size_t at = one.find("<rect "); at != std::string::npos;
         at = one.find("<rect ", at + 1))
        ++rects;
    CHECK(rects == 4);

    std::string three = chair_svg(st, 3);
    rects = 0;
    for (std::size_t at = three.find("<rect "); at != std::string::npos;
         at = three.find("<rect ", at + 1))
        ++rects;
    CHECK(rects == 64);
    CHECK(three.find("#1b9e77") != std::string::npos);
    CHECK(three.find("#e7298a") != std::string::npos);
    CHECK(three.find("width=\"160\"") != std::string::npos); // 8 columns at 20 px

    std::string empty = chair_svg_points({});
    CHECK(empty.find("<svg") != std::string::npos);
    CHECK(empty.find("<rect") == std::string::npos);
    CHECK_THROWS_AS(chair_svg_points({}, 0), std::invalid_argument);
}

TEST_CASE("refined mode refuses a state too deep for its reference patch") {
    ChairState fake;
    fake.max_level = 11;
    fake.per_level.resize(12);
    CHECK_THROWS_AS(chair_windows(fake, ChairWindowMode::Refined), std::invalid_argument);
}
