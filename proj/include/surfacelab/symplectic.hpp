#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <random>

#include "surfacelab/word.hpp"

namespace surfacelab {

template <class T>
using MatX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

// 2n x n frame of an isotropic n-plane; the form is [[0, I], [-I, 0]].
template <class T>
struct LagrangianFrameT {
    MatX<T> frame;

    LagrangianFrameT() = default;
    explicit LagrangianFrameT(MatX<T> f) : frame(std::move(f)) {}
    int n() const { return static_cast<int>(frame.cols()); }
};

using LagrangianFrame = LagrangianFrameT<double>;

template <class T>
MatX<T> symplectic_form(int n) {
    MatX<T> J = MatX<T>::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        J(i, n + i) = T(1);
        J(n + i, i) = T(-1);
    }
    return J;
}

// modified Gram-Schmidt, columns in place
template <class T>
MatX<T> orthonormalize(MatX<T> q) {
    using std::sqrt;
    for (int j = 0; j < q.cols(); ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (int k = 0; k < j; ++k) {
                T d = q.col(k).dot(q.col(j));
                q.col(j) -= d * q.col(k);
            }
        T nrm = sqrt(q.col(j).squaredNorm());
        if (nrm == T(0)) throw Error("rank deficient frame");
        q.col(j) /= nrm;
    }
    return q;
}

template <class T>
T isotropy_residual(const LagrangianFrameT<T>& L) {
    MatX<T> J = symplectic_form<T>(L.n());
    MatX<T> r = L.frame.transpose() * J * L.frame;
    using std::sqrt;
    return sqrt(r.squaredNorm()) / L.frame.squaredNorm();
}

// determinant floor for orthonormalized frames, tied to the working precision
template <class T>
T transversality_floor() {
    return std::numeric_limits<T>::epsilon() < T(1e-20) ? T(1e-25) : T(1e-10);
}

template <class T>
bool is_transverse(const LagrangianFrameT<T>& a, const LagrangianFrameT<T>& b) {
    if (a.n() != b.n()) throw Error("frames of different size");
    const int n = a.n();
    MatX<T> m(2 * n, 2 * n);
    m << orthonormalize<T>(a.frame), orthonormalize<T>(b.frame);
    using std::abs;
    return abs(m.determinant()) >= transversality_floor<T>();
}

template <class T>
MatX<T> pairing_matrix(const LagrangianFrameT<T>& la, const LagrangianFrameT<T>& lb) {
    if (la.n() != lb.n()) throw Error("frames of different size");
    return la.frame.transpose() * symplectic_form<T>(la.n()) * lb.frame;
}

template <class T>
T cross_ratio_B(const LagrangianFrameT<T>& L1, const LagrangianFrameT<T>& L2, const LagrangianFrameT<T>& L3,
                const LagrangianFrameT<T>& L4) {
    if (!is_transverse(L4, L1) || !is_transverse(L2, L3)) throw Error("denominator Lagrangians not transverse");
    return pairing_matrix(L1, L2).determinant() * pairing_matrix(L3, L4).determinant() /
           (pairing_matrix(L1, L4).determinant() * pairing_matrix(L3, L2).determinant());
}

// u in G split as u_F + u_L; positive when u -> omega(u_F, u_L) is positive definite on G
template <class T>
bool is_positive_triple(const LagrangianFrameT<T>& F, const LagrangianFrameT<T>& G, const LagrangianFrameT<T>& L) {
    if (!is_transverse(F, L)) throw Error("positivity needs F transverse to L");
    const int n = F.n();
    MatX<T> f = orthonormalize<T>(F.frame), l = orthonormalize<T>(L.frame), g = orthonormalize<T>(G.frame);
    MatX<T> basis(2 * n, 2 * n);
    basis << f, l;
    MatX<T> coef = basis.partialPivLu().solve(g);
    MatX<T> a = coef.topRows(n), b = coef.bottomRows(n);
    MatX<T> gram = a.transpose() * (f.transpose() * symplectic_form<T>(n) * l) * b;
    MatX<T> sym = (gram + gram.transpose()) / T(2);
    Eigen::SelfAdjointEigenSolver<MatX<T>> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0) > T(1e-10);
}

// S preserves E and F; returns B(E, G, F, S G)
template <class T>
T symplectic_period(const MatX<T>& S, const LagrangianFrameT<T>& E, const LagrangianFrameT<T>& F,
                    const LagrangianFrameT<T>& G) {
    auto invariant = [&S](const LagrangianFrameT<T>& X) {
        MatX<T> q = orthonormalize<T>(X.frame);
        MatX<T> img = S * q;
        MatX<T> off = img - q * (q.transpose() * img);
        using std::sqrt;
        return sqrt(off.squaredNorm()) <= T(1e-8) * sqrt(img.squaredNorm());
    };
    if (!invariant(E) || !invariant(F)) throw Error("symplectic_period: S does not preserve E and F");
    if (!is_transverse(E, F)) throw Error("symplectic_period: E and F not transverse");
    return cross_ratio_B(E, G, F, LagrangianFrameT<T>(MatX<T>(S * G.frame)));
}

// Random Sp(2n) element as a product of elementary symplectic blocks.
Eigen::MatrixXd random_symplectic(std::mt19937_64& rng, int n, double scale = 1.0);
Eigen::MatrixXd random_spd(std::mt19937_64& rng, int n, double floor = 0.05);

// graph {(x, Q x)}
LagrangianFrame graph_frame(const Eigen::MatrixXd& Q);
LagrangianFrame horizontal_frame(int n);
LagrangianFrame vertical_frame(int n);

struct PositiveConfiguration {
    LagrangianFrame E, F1, G, F2;
    bool nested = false;  // generated with Q2 - Q1 positive definite
};

// (E, F1, G) and (E, F2, G) positive by construction, moved by a random symplectic matrix
PositiveConfiguration random_positive_configuration(std::mt19937_64& rng, int n, bool nested);

}  // namespace surfacelab
