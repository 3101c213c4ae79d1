#include "doctest.h"

#include <cmath>
#include <numbers>

#include "surfacelab/boundary.hpp"

using namespace surfacelab;

namespace {

constexpr double kPi = std::numbers::pi;

double angle_gap(double a, double b) {
    double d = ccw_distance(a, b);
    return std::min(d, 2 * kPi - d);
}

double projective_gap(const Vec& a, const Vec& b) {
    Vec x = a.normalized(), y = b.normalized();
    return std::min((x - y).norm(), (x + y).norm());
}

double subspace_gap(const Mat& a, const Mat& b) {
    Mat qa = orthonormalize<double>(a), qb = orthonormalize<double>(b);
    return (qa - qb * (qb.transpose() * qa)).norm();
}

Vec veronese(const Eigen::Vector2d& v, int n) {
    const int k = n - 1;
    Vec out(n);
    for (int i = 0; i <= k; ++i) out(i) = std::tgamma(k + 1) / (std::tgamma(i + 1) * std::tgamma(k - i + 1)) * std::pow(v(0), k - i) * std::pow(v(1), i);
    return out;
}

Mat diag(std::initializer_list<double> d) {
    Vec v(static_cast<Eigen::Index>(d.size()));
    int i = 0;
    for (double x : d) v(i++) = x;
    return v.asDiagonal();
}

const char* kWords[] = {"a", "b", "cD", "aBc", "abCd", "BdAc", "aacb", "dcBA"};

}  // namespace

TEST_CASE("circle coordinate round trip") {
    for (double t : {0.0, 0.3, kPi, 4.0, 6.2}) {
        Eigen::Vector2d v = circle_vector(t);
        CHECK(circle_angle(v(0), v(1)) == doctest::Approx(t).epsilon(1e-14));
        CHECK(circle_angle(-v(0), -v(1)) == doctest::Approx(t).epsilon(1e-14));
    }
}

TEST_CASE("fixed_points_psl2") {
    auto [att, rep] = fixed_points_psl2(diag({2, 0.5}));
    // infinity sits at angle 0, the origin of the real line at angle pi
    CHECK(att == doctest::Approx(0.0));
    CHECK(rep == doctest::Approx(kPi));
    auto [att2, rep2] = fixed_points_psl2(diag({0.5, 2}));
    CHECK(att2 == doctest::Approx(kPi));
    CHECK(rep2 == doctest::Approx(0.0));

    Mat m = evaluate(fuchsian_canonical(), Word::parse("aBc"));
    auto fp = fixed_points_psl2(m);
    auto fi = fixed_points_psl2(m.inverse());
    CHECK(angle_gap(fp.first, fi.second) < 1e-12);
    CHECK(angle_gap(fp.second, fi.first) < 1e-12);

    Mat g = evaluate(fuchsian_canonical(), Word::parse("dA"));
    auto fc = fixed_points_psl2(g * m * g.inverse());
    Eigen::Vector2d ga = g * circle_vector(fp.first), gr = g * circle_vector(fp.second);
    CHECK(angle_gap(fc.first, circle_angle(ga(0), ga(1))) < 1e-12);
    CHECK(angle_gap(fc.second, circle_angle(gr(0), gr(1))) < 1e-12);

    Mat rot(2, 2);
    rot << std::cos(0.4), std::sin(0.4), -std::sin(0.4), std::cos(0.4);
    CHECK_THROWS_WITH(fixed_points_psl2(rot), "not hyperbolic");
    Mat par(2, 2);
    par << 1, 1, 0, 1;
    CHECK_THROWS_WITH(fixed_points_psl2(par), "not hyperbolic");
}

TEST_CASE("circle_order") {
    CHECK(circle_order(0.0, kPi / 2, kPi) == Orientation::Positive);
    CHECK(circle_order(kPi / 2, 0.0, kPi) == Orientation::Negative);
    CHECK(circle_order(0.0, kPi, kPi / 2) == Orientation::Negative);
    CHECK(circle_order(1.0, 1.0, 2.0) == Orientation::Degenerate);
    CHECK(circle_order(0.0, 2 * kPi - 1e-13, 1.0) == Orientation::Degenerate);
    CHECK(circle_order(kPi, 3 * kPi / 2, kPi / 2) == Orientation::Positive);
}

TEST_CASE("BoundaryPoint angles match the canonical Moebius action") {
    const auto rep = fuchsian_canonical();
    for (const char* s : kWords) {
        Word w = Word::parse(s);
        auto fp = fixed_points_psl2(evaluate(rep, w));
        auto p = BoundaryPoint::fixed_point(w);
        CHECK(angle_gap(p.angle, fp.first) < 1e-12);
        CHECK(angle_gap(p.other_pole().angle, fp.second) < 1e-12);
        CHECK(angle_gap(BoundaryPoint::fixed_point(w.power(3)).angle, p.angle) < 1e-12);
        CHECK(angle_gap(BoundaryPoint::fixed_point(w.inverse(), Pole::Repelling).angle, p.angle) < 1e-12);
        Word g = Word::parse("Bd");
        Eigen::Vector2d gv = evaluate(rep, g) * circle_vector(p.angle);
        CHECK(angle_gap(p.translated(g).angle, circle_angle(gv(0), gv(1))) < 1e-12);
        CHECK(angle_gap(BoundaryPoint::at_angle(p.angle).translated(g).angle, circle_angle(gv(0), gv(1))) < 1e-12);
    }
    CHECK_THROWS_AS(BoundaryPoint::fixed_point(Word::parse("aA")), Error);
    CHECK(BoundaryPoint::fixed_point(Word::parse("ab"), Pole::Repelling).str() == "a b-");
}

TEST_CASE("matrix flags of a diagonal matrix") {
    Mat128 m = widen(diag({4, 1, 0.25}));
    auto [att, rep] = matrix_flags(m, m.inverse());
    Vec line = att.line.cast<double>(), cov = att.covector.cast<double>();
    CHECK(projective_gap(line, Vec::Unit(3, 0)) < 1e-15);
    // the covector kills span(e1, e2)
    CHECK(projective_gap(cov, Vec::Unit(3, 2)) < 1e-15);
    CHECK(projective_gap(rep.line.cast<double>(), Vec::Unit(3, 2)) < 1e-15);
    CHECK(projective_gap(rep.covector.cast<double>(), Vec::Unit(3, 0)) < 1e-15);
}

TEST_CASE("limit flags of symmetric powers") {
    for (int n : {2, 3, 4}) {
        LimitCurve curve(irreducible_embed(fuchsian_canonical(), n));
        CHECK(curve.supports_free_points());
        for (const char* s : kWords) {
            auto p = BoundaryPoint::fixed_point(Word::parse(s));
            for (auto q : {p, p.other_pole()}) {
                auto [line, cov] = curve.flag(q);
                CHECK(projective_gap(line, veronese(circle_vector(q.angle), n)) < 1e-8);
                CHECK(std::abs(line.dot(cov)) < 1e-12);
                auto [fl, fc] = curve.flag(BoundaryPoint::at_angle(q.angle));
                CHECK(projective_gap(fl, line) < 1e-8);
                CHECK(projective_gap(fc, cov) < 1e-8);
            }
        }
    }
}

TEST_CASE("limit flags are equivariant for a deformed representation") {
    auto rep = deform(irreducible_embed(fuchsian_canonical(), 3), 11, 1e-2);
    LimitCurve curve(rep);
    CHECK_FALSE(curve.supports_free_points());
    CHECK_THROWS_AS(curve.flag(BoundaryPoint::at_angle(1.0)), Error);
    for (const char* s : kWords) {
        auto p = BoundaryPoint::fixed_point(Word::parse(s));
        auto [line, cov] = curve.flag(p);
        for (const char* gs : {"a", "Cd", "bAd"}) {
            Word g = Word::parse(gs);
            auto [gl, gc] = curve.flag(p.translated(g));
            Mat rg = evaluate(rep, g);
            CHECK(projective_gap(gl, rg * line) < 1e-8);
            CHECK(projective_gap(gc, (cov.transpose() * rg.inverse()).transpose()) < 1e-8);
        }
        auto [pl, pc] = curve.flag(BoundaryPoint::fixed_point(Word::parse(s).power(2)));
        CHECK(projective_gap(pl, line) < 1e-12);
        auto [il, ic] = curve.flag(BoundaryPoint::fixed_point(Word::parse(s).inverse(), Pole::Repelling));
        CHECK(projective_gap(il, line) < 1e-12);
        CHECK(projective_gap(ic, cov) < 1e-12);
    }
    CHECK_THROWS_WITH(limit_flag(trivial_representation({GroupKind::SpecialLinear, 3}), BoundaryPoint::fixed_point(Word::parse("a"))),
                      "not proximal at this word");
}

TEST_CASE("attracting Lagrangians") {
    MatX<real128> q = attracting_subspace(widen(diag({2, 3, 0.5, 1.0 / 3})));
    Mat e12 = Mat::Zero(4, 2);
    e12(0, 0) = e12(1, 1) = 1;
    CHECK(subspace_gap(narrow(q), e12) < 1e-15);

    auto rep2 = fuchsian_canonical();
    auto rep = diagonal_embed(rep2, 2);
    LimitCurve curve(rep);
    CHECK(curve.supports_free_points());
    for (const char* s : kWords) {
        Word w = Word::parse(s);
        auto p = BoundaryPoint::fixed_point(w);
        LagrangianFrame L = curve.lagrangian(p);
        CHECK(isotropy_residual(L) < 1e-12);
        Eigen::Vector2d v = circle_vector(p.angle);
        Mat copy = Mat::Zero(4, 2);
        copy(0, 0) = copy(1, 1) = v(0);
        copy(2, 0) = copy(3, 1) = v(1);
        CHECK(subspace_gap(L.frame, copy) < 1e-8);
        CHECK(subspace_gap(curve.lagrangian(BoundaryPoint::at_angle(p.angle)).frame, copy) < 1e-8);
        CHECK(subspace_gap(curve.lagrangian(BoundaryPoint::fixed_point(w.inverse(), Pole::Repelling)).frame, L.frame) < 1e-12);
    }

    auto def = deform(rep, 5, 1e-2);
    LimitCurve dcurve(def);
    for (const char* s : kWords) {
        auto p = BoundaryPoint::fixed_point(Word::parse(s), Pole::Repelling);
        LagrangianFrame L = dcurve.lagrangian(p);
        CHECK(isotropy_residual(L) < 1e-8);
        Word g = Word::parse("cA");
        CHECK(subspace_gap(dcurve.lagrangian(p.translated(g)).frame, evaluate(def, g) * L.frame) < 1e-8);
    }
    CHECK_THROWS_WITH(limit_lagrangian(trivial_representation({GroupKind::Symplectic, 2}), BoundaryPoint::fixed_point(Word::parse("a"))),
                      "no dominated splitting at this word");
    CHECK_THROWS_AS(limit_lagrangian(irreducible_embed(rep2, 3), BoundaryPoint::fixed_point(Word::parse("a"))), Error);
}
