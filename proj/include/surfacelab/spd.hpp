#pragma once

#include <vector>

#include "surfacelab/representation.hpp"

namespace surfacelab {

// Throws unless P is symmetric (1e-10 relative) and positive definite.
void spd_check(const Mat& P);

Mat sym_exp(const Mat& S);
Mat sym_log(const Mat& P);
Mat spd_sqrt(const Mat& P);
Mat spd_inv_sqrt(const Mat& P);

// Frobenius norm of log(P^-1/2 Q P^-1/2)
double spd_distance(const Mat& P, const Mat& Q);
Mat spd_geodesic(const Mat& P, const Mat& Q, double t);

// Tangent vectors at X are written in whitened form X^-1/2 V X^-1/2, where the metric is Frobenius.
Mat spd_log_at(const Mat& X, const Mat& Q);
Mat spd_exp_at(const Mat& X, const Mat& S);

// minimizer of sum w_i d(X, Q_i)^2 for positive weights
Mat weighted_karcher_mean(const std::vector<Mat>& points, const std::vector<double>& weights, const Mat& start,
                          double tol = 1e-13, int maxIter = 50);

// rescale to determinant 1
Mat unit_determinant(const Mat& P);

// congruence action g . P = g P g^T
inline Mat congruence(const Mat& g, const Mat& P) { return g * P * g.transpose(); }

}  // namespace surfacelab
