#include "surfacelab/symplectic.hpp"

namespace surfacelab {

using Eigen::MatrixXd;

MatrixXd random_spd(std::mt19937_64& rng, int n, double floor) {
    std::normal_distribution<double> g;
    MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = g(rng);
    return a * a.transpose() + floor * MatrixXd::Identity(n, n);
}

MatrixXd random_symplectic(std::mt19937_64& rng, int n, double scale) {
    std::normal_distribution<double> g;
    auto sym = [&] {
        MatrixXd s(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) s(i, j) = s(j, i) = scale * g(rng);
        return s;
    };
    MatrixXd I = MatrixXd::Identity(n, n);
    MatrixXd upper = MatrixXd::Identity(2 * n, 2 * n), lower = upper, block = upper;
    upper.topRightCorner(n, n) = sym();
    lower.bottomLeftCorner(n, n) = sym();
    MatrixXd A(n, n);
    do {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = (i == j ? 1.0 : 0.0) + scale * 0.5 * g(rng);
    } while (std::abs(A.determinant()) < 0.2);
    block.topLeftCorner(n, n) = A;
    block.bottomRightCorner(n, n) = A.transpose().inverse();
    MatrixXd upper2 = MatrixXd::Identity(2 * n, 2 * n);
    upper2.topRightCorner(n, n) = sym();
    return upper * lower * block * upper2;
}

LagrangianFrame graph_frame(const MatrixXd& Q) {
    const long n = Q.rows();
    MatrixXd f(2 * n, n);
    f << MatrixXd::Identity(n, n), Q;
    return LagrangianFrame(f);
}

LagrangianFrame horizontal_frame(int n) {
    MatrixXd f = MatrixXd::Zero(2 * n, n);
    f.topRows(n) = MatrixXd::Identity(n, n);
    return LagrangianFrame(f);
}

LagrangianFrame vertical_frame(int n) {
    MatrixXd f = MatrixXd::Zero(2 * n, n);
    f.bottomRows(n) = MatrixXd::Identity(n, n);
    return LagrangianFrame(f);
}

PositiveConfiguration random_positive_configuration(std::mt19937_64& rng, int n, bool nested) {
    MatrixXd Q1 = random_spd(rng, n);
    MatrixXd Q2 = nested ? MatrixXd(Q1 + random_spd(rng, n)) : random_spd(rng, n);
    MatrixXd M = random_symplectic(rng, n, 0.7);
    auto move = [&M](const LagrangianFrame& L) { return LagrangianFrame(M * L.frame); };
    PositiveConfiguration c;
    c.E = move(horizontal_frame(n));
    c.F1 = move(graph_frame(Q1));
    c.G = move(vertical_frame(n));
    c.F2 = move(graph_frame(Q2));
    c.nested = nested;
    return c;
}

}  // namespace surfacelab
