#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "surfacelab/representation.hpp"

using namespace surfacelab;

namespace {

Mat diag2(double a, double b) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

Mat random_sl2(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Mat m(2, 2);
    do { m << g(rng), g(rng), g(rng), g(rng); } while (std::abs(m.determinant()) < 0.1);
    double det = m.determinant();
    if (det < 0) m.col(0) *= -1, det = -det;
    return m / std::sqrt(det);
}

std::vector<double> sorted_real_eigs(const Mat& m) {
    Eigen::EigenSolver<Mat> es(m, false);
    std::vector<double> out;
    for (int i = 0; i < m.rows(); ++i) {
        CHECK(std::abs(es.eigenvalues()(i).imag()) < 1e-9 * std::abs(es.eigenvalues()(i)));
        out.push_back(es.eigenvalues()(i).real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("canonical Fuchsian group") {
    auto rep = fuchsian_canonical();
    CHECK(rep.relator_residual() <= 1e-8);
    CHECK(rep.group_residual() <= 1e-10);
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(rep.image(i).trace()) > 2.0);
        // regular octagon with angles pi/4: |trace| = 2 + sqrt 2
        CHECK(std::abs(std::abs(rep.image(i).trace()) - (2.0 + std::sqrt(2.0))) < 1e-12);
    }
}

TEST_CASE("evaluate") {
    auto rep = fuchsian_canonical();
    CHECK((evaluate(rep, Word()) - Mat::Identity(2, 2)).norm() == 0.0);
    Word w = Word::parse("a b C d A");
    CHECK((evaluate(rep, w * w.inverse()) - Mat::Identity(2, 2)).norm() < 1e-15 * evaluate(rep, w).squaredNorm());
    Word u = Word::parse("a c"), v = Word::parse("D b b");
    CHECK((evaluate(rep, u * v) - evaluate(rep, u) * evaluate(rep, v)).norm() < 1e-13);
    CHECK((evaluate(rep, genus2().relator) - Mat::Identity(2, 2)).norm() < 1e-6);
    Mat wm = evaluate(rep, w);
    CHECK((evaluate(rep, w * genus2().relator) - wm).norm() <= wm.norm() * rep.relator_residual() * 2 + 1e-12);
}

TEST_CASE("FN chart") {
    auto c = FNCoordinates::canonical();
    // |tr a| = 2 + sqrt 2 gives cosh(l/2) = 1 + 1/sqrt 2
    CHECK(c.lengths[0] == doctest::Approx(2 * std::acosh(1 + 1 / std::sqrt(2.0))).epsilon(1e-12));
    auto rep0 = fuchsian_genus2(c);
    CHECK((rep0.image(0) - fuchsian_canonical().image(0)).norm() < 1e-10);

    FNCoordinates f = c;
    f.lengths = {1.3, 3.0, 5.5};
    f.twists = {0.4, -0.7, 1.1};
    auto rep = fuchsian_genus2(f);
    CHECK(rep.relator_residual() <= 1e-8);
    for (std::size_t i = 0; i < 3; ++i) {
        double tr = std::abs(evaluate(rep, pants_curves()[i]).trace());
        CHECK(2 * std::acosh(tr / 2) == doctest::Approx(f.lengths[i]).epsilon(1e-9));
    }
    for (int i = 0; i < 4; ++i) CHECK(std::abs(rep.image(i).trace()) > 2.0);

    FNCoordinates bad = c;
    bad.lengths[1] = 0.0;
    CHECK_THROWS_AS(fuchsian_genus2(bad), Error);
}

TEST_CASE("irreducible_embed") {
    CHECK((irreducible_embed(LinearRepresentation({GroupKind::SpecialLinear, 2}, {diag2(2, 0.5), diag2(1, 1), diag2(1, 1), diag2(1, 1)}), 3).image(0) -
           Mat(Eigen::Vector3d(4, 1, 0.25).asDiagonal())).norm() < 1e-15);
    for (int n = 2; n <= 5; ++n) CHECK((symmetric_power(Mat::Identity(2, 2), n) - Mat::Identity(n, n)).norm() == 0.0);
    double lam = 1.7;
    auto eig = sorted_real_eigs(symmetric_power(diag2(lam, 1 / lam), 4));
    std::vector<double> expect{std::pow(lam, -3), 1 / lam, lam, std::pow(lam, 3)};
    for (int i = 0; i < 4; ++i) CHECK(eig[static_cast<std::size_t>(i)] == doctest::Approx(expect[static_cast<std::size_t>(i)]).epsilon(1e-12));

    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        Mat M = random_sl2(rng), N = random_sl2(rng);
        for (int n = 2; n <= 5; ++n) {
            Mat lhs = symmetric_power(M * N, n), rhs = symmetric_power(M, n) * symmetric_power(N, n);
            CHECK((lhs - rhs).norm() <= 1e-12 * lhs.norm());
            CHECK(std::abs(symmetric_power(M, n).determinant() - 1.0) < 1e-10 * std::pow(M.norm(), n * (n - 1)));
        }
    }
    CHECK_THROWS_AS(irreducible_embed(fuchsian_canonical(), 1), Error);
}

TEST_CASE("diagonal_embed") {
    std::mt19937_64 rng(5);
    for (int n = 1; n <= 3; ++n) {
        std::vector<Mat> g;
        for (int k = 0; k < 4; ++k) g.push_back(random_sl2(rng));
        auto sp = diagonal_embed(LinearRepresentation({GroupKind::SpecialLinear, 2}, g), n);
        Mat J = standard_form(n);
        for (int k = 0; k < 4; ++k) CHECK((sp.image(k).transpose() * J * sp.image(k) - J).norm() < 1e-10 * sp.image(k).squaredNorm());
    }
    auto id = diagonal_embed(trivial_representation({GroupKind::SpecialLinear, 2}), 2);
    CHECK((id.image(0) - Mat::Identity(4, 4)).norm() == 0.0);
    double lam = 2.5;
    auto rep = diagonal_embed(LinearRepresentation({GroupKind::SpecialLinear, 2}, {diag2(lam, 1 / lam), diag2(1, 1), diag2(1, 1), diag2(1, 1)}), 2);
    auto eig = sorted_real_eigs(rep.image(0));
    CHECK(eig[0] == doctest::Approx(1 / lam));
    CHECK(eig[1] == doctest::Approx(1 / lam));
    CHECK(eig[2] == doctest::Approx(lam));
    CHECK(eig[3] == doctest::Approx(lam));
    CHECK_THROWS_AS(diagonal_embed(fuchsian_canonical(), 0), Error);
}

TEST_CASE("deform") {
    auto s2 = irreducible_embed(fuchsian_canonical(), 3);
    auto same = deform(s2, 9, 0.0);
    CHECK((same.image(0) - s2.image(0)).norm() == 0.0);

    auto d = deform(s2, 11, 1e-2);
    CHECK(d.relator_residual() <= 1e-8);
    CHECK(d.group_residual() <= 1e-10);
    CHECK((d.image(0) - s2.image(0)).norm() > 1e-4);
    auto d2 = deform(s2, 11, 1e-2);
    CHECK((d2.image(2) - d.image(2)).norm() == 0.0);

    auto eig = sorted_real_eigs(d.image(0));
    for (std::size_t i = 1; i < eig.size(); ++i) CHECK(std::abs(eig[i] - eig[i - 1]) > 1e-3);

    auto sp = deform(diagonal_embed(fuchsian_canonical(), 2), 4, 1e-2);
    CHECK(sp.relator_residual() <= 1e-8);
    Mat J = standard_form(2);
    for (int k = 0; k < 4; ++k) CHECK((sp.image(k).transpose() * J * sp.image(k) - J).norm() < 1e-8);
}
