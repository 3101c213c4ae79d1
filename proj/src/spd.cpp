#include "surfacelab/spd.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace surfacelab {

namespace {

template <class F>
Mat spectral_apply(const Mat& S, F f) {
    Eigen::SelfAdjointEigenSolver<Mat> es(S);
    Vec d = es.eigenvalues().unaryExpr(f);
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

Mat symmetrize(const Mat& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

void spd_check(const Mat& P) {
    if (P.rows() != P.cols() || P.rows() == 0) throw Error("not symmetric positive definite");
    if ((P - P.transpose()).norm() > 1e-10 * std::max(1.0, P.norm())) throw Error("not symmetric positive definite");
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(P), Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues()(0) > 0)) throw Error("not symmetric positive definite");
}

Mat sym_exp(const Mat& S) { return spectral_apply(symmetrize(S), [](double x) { return std::exp(x); }); }
Mat sym_log(const Mat& P) { return spectral_apply(symmetrize(P), [](double x) { return std::log(x); }); }
Mat spd_sqrt(const Mat& P) { return spectral_apply(symmetrize(P), [](double x) { return std::sqrt(x); }); }
Mat spd_inv_sqrt(const Mat& P) { return spectral_apply(symmetrize(P), [](double x) { return 1.0 / std::sqrt(x); }); }

double spd_distance(const Mat& P, const Mat& Q) {
    spd_check(P);
    spd_check(Q);
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(symmetrize(Q), symmetrize(P), Eigen::EigenvaluesOnly);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double l = std::log(es.eigenvalues()(i));
        acc += l * l;
    }
    return std::sqrt(acc);
}

Mat spd_geodesic(const Mat& P, const Mat& Q, double t) {
    spd_check(P);
    spd_check(Q);
    if (t == 0.0) return P;
    if (t == 1.0) return Q;
    Mat h = spd_sqrt(P), hi = spd_inv_sqrt(P);
    Mat inner = symmetrize(hi * Q * hi);
    return symmetrize(h * spectral_apply(inner, [t](double x) { return std::pow(x, t); }) * h);
}

Mat spd_log_at(const Mat& X, const Mat& Q) {
    Mat hi = spd_inv_sqrt(X);
    return sym_log(hi * Q * hi);
}

Mat spd_exp_at(const Mat& X, const Mat& S) {
    Mat h = spd_sqrt(X);
    return symmetrize(h * sym_exp(S) * h);
}

Mat weighted_karcher_mean(const std::vector<Mat>& points, const std::vector<double>& weights, const Mat& start, double tol,
                          int maxIter) {
    if (points.size() != weights.size() || points.empty()) throw Error("karcher mean needs matching nonempty inputs");
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0)) throw Error("karcher mean needs positive weights");
        total += w;
    }
    Mat X = start;
    for (int it = 0; it < maxIter; ++it) {
        Mat h = spd_sqrt(X), hi = spd_inv_sqrt(X);
        Mat step = Mat::Zero(X.rows(), X.cols());
        for (std::size_t i = 0; i < points.size(); ++i) step += weights[i] * sym_log(hi * points[i] * hi);
        step /= total;
        X = symmetrize(h * sym_exp(step) * h);
        if (step.norm() < tol) break;
    }
    return X;
}

Mat unit_determinant(const Mat& P) {
    const double det = P.determinant();
    if (!(det > 0)) throw Error("not symmetric positive definite");
    return P / std::pow(det, 1.0 / static_cast<double>(P.rows()));
}

}  // namespace surfacelab
