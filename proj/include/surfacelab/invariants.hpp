#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "surfacelab/representation.hpp"

namespace surfacelab {

// Lift of an SL(2) element to the universal cover of the circle, acting on vector angles.
// The sign is fixed so that the trace is nonnegative; this lift has a fixed point whenever
// the element is hyperbolic.
class LiftedCircleMap {
public:
    explicit LiftedCircleMap(const Mat& m);

    const Mat& matrix() const { return m_; }
    // vector angle alpha of (cos alpha, sin alpha) to the lifted image angle
    double apply(double alpha) const;
    double apply_inverse(double alpha) const;
    // sampled range of apply(alpha) - alpha
    std::pair<double, double> translation_window() const { return window_; }

private:
    Mat m_, inv_;
    std::pair<double, double> window_;
};

// Translation number of the lifted relator in full turns of the circle coordinate.
// Counterclockwise turns count positive.
int euler_number(const LinearRepresentation& rep);
int toledo_product(const std::vector<LinearRepresentation>& reps);
bool milnor_wood_check(int tau, int n, int genus);

struct IntersectionRow {
    Word word;
    double lengthG = 0.0, lengthG0 = 0.0, ratio = 0.0;
};

struct IntersectionEstimate {
    double estimate = 0.0;
    long count = 0;
    int maxLen = 0;
};

// mean over conjugacy classes of lambda_g0 / lambda_g
IntersectionEstimate intersection(const FNCoordinates& g, const FNCoordinates& g0, int maxLen,
                                  const std::function<void(const IntersectionRow&)>& sink = {});

}  // namespace surfacelab
