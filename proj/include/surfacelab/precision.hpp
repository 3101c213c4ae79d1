#pragma once

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>
#include <Eigen/Dense>

namespace surfacelab {

using real128 = boost::multiprecision::float128;
using Mat128 = Eigen::Matrix<real128, Eigen::Dynamic, Eigen::Dynamic>;
using Vec128 = Eigen::Matrix<real128, Eigen::Dynamic, 1>;

inline Mat128 widen(const Eigen::MatrixXd& m) { return m.cast<real128>(); }
inline Eigen::MatrixXd narrow(const Mat128& m) { return m.cast<double>(); }

}  // namespace surfacelab
