#include "doctest.h"

#include <cmath>
#include <random>

#include "surfacelab/spd.hpp"
#include "surfacelab/symplectic.hpp"

using namespace surfacelab;

namespace {

Mat diag2(double a, double b) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

Mat random_unit_spd(std::mt19937_64& rng, int n) { return unit_determinant(random_spd(rng, n, 0.3)); }

}  // namespace

TEST_CASE("spd distance examples") {
    const Mat I = Mat::Identity(2, 2);
    const Mat Q = diag2(std::exp(2.0), std::exp(-2.0));
    CHECK(spd_distance(I, I) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(spd_distance(I, Q) == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-13));
    CHECK(spd_distance(Q, I) == doctest::Approx(spd_distance(I, Q)).epsilon(1e-13));
    Mat bad = I;
    bad(0, 0) = -1;
    CHECK_THROWS_WITH(spd_distance(I, bad), "not symmetric positive definite");
    Mat asym = I;
    asym(0, 1) = 0.5;
    CHECK_THROWS(spd_distance(asym, I));
}

TEST_CASE("spd distance is invariant under congruence") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int n : {2, 3, 4}) {
        for (int trial = 0; trial < 5; ++trial) {
            Mat P = random_unit_spd(rng, n), Q = random_unit_spd(rng, n);
            Mat h(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) h(i, j) = g(rng) + (i == j ? 2.0 : 0.0);
            CHECK(std::abs(spd_distance(congruence(h, P), congruence(h, Q)) - spd_distance(P, Q)) < 1e-9);
        }
    }
}

TEST_CASE("spd geodesics") {
    const Mat I = Mat::Identity(2, 2);
    const Mat Q = diag2(std::exp(2.0), std::exp(-2.0));
    CHECK((spd_geodesic(I, Q, 0.0) - I).norm() == 0.0);
    CHECK((spd_geodesic(I, Q, 1.0) - Q).norm() == 0.0);
    CHECK((spd_geodesic(I, Q, 0.5) - diag2(std::exp(1.0), std::exp(-1.0))).norm() < 1e-12);

    std::mt19937_64 rng(5);
    for (int n : {2, 3}) {
        Mat P = random_unit_spd(rng, n), R = random_unit_spd(rng, n);
        const double d = spd_distance(P, R);
        CHECK((spd_geodesic(P, R, 0.5) - spd_geodesic(R, P, 0.5)).norm() < 1e-10 * P.norm());
        for (double t : {0.1, 0.3, 0.77}) {
            const Mat X = spd_geodesic(P, R, t);
            CHECK(std::abs(spd_distance(P, X) - t * d) < 1e-9);
            CHECK(std::abs(spd_distance(X, R) - (1 - t) * d) < 1e-9);
        }
    }
}

TEST_CASE("whitened exponential and logarithm") {
    std::mt19937_64 rng(8);
    for (int n : {2, 3, 4}) {
        Mat X = random_unit_spd(rng, n), Q = random_unit_spd(rng, n);
        const Mat V = spd_log_at(X, Q);
        CHECK(V.norm() == doctest::Approx(spd_distance(X, Q)).epsilon(1e-10));
        CHECK((spd_exp_at(X, V) - Q).norm() < 1e-10 * Q.norm());
        CHECK(std::abs(V.trace()) < 1e-10);
    }
}

TEST_CASE("weighted karcher mean") {
    const Mat I = Mat::Identity(2, 2);
    const Mat Q = diag2(std::exp(2.0), std::exp(-2.0));
    // two points: the weighted mean sits on the geodesic at the weight fraction
    Mat m = weighted_karcher_mean({I, Q}, {1.0, 3.0}, I);
    CHECK((m - spd_geodesic(I, Q, 0.75)).norm() < 1e-10);

    std::mt19937_64 rng(21);
    for (int n : {2, 3}) {
        std::vector<Mat> pts;
        std::vector<double> ws;
        std::uniform_real_distribution<double> u(0.2, 2.0);
        for (int i = 0; i < 6; ++i) {
            pts.push_back(random_unit_spd(rng, n));
            ws.push_back(u(rng));
        }
        const Mat mean = weighted_karcher_mean(pts, ws, Mat::Identity(n, n), 1e-14, 200);
        Mat grad = Mat::Zero(n, n);
        for (std::size_t i = 0; i < pts.size(); ++i) grad += ws[i] * spd_log_at(mean, pts[i]);
        CHECK(grad.norm() < 1e-10);
        CHECK(std::abs(mean.determinant() - 1.0) < 1e-10);
    }
    CHECK_THROWS(weighted_karcher_mean({I}, {0.0}, I));
    CHECK_THROWS(weighted_karcher_mean({}, {}, I));
}

TEST_CASE("unit determinant rescaling") {
    Mat P = diag2(4.0, 1.0);
    CHECK(unit_determinant(P).determinant() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS(unit_determinant(diag2(-1.0, 1.0)));
}
