#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "surfacelab/boundary.hpp"

namespace surfacelab {

// (y - x)(t - z) / ((y - z)(t - x)) on homogeneous coordinates of RP^1
double classical_cross_ratio(const Eigen::Vector2d& x, const Eigen::Vector2d& y, const Eigen::Vector2d& z,
                             const Eigen::Vector2d& t);
Eigen::Vector2d projective_point(double x);
Eigen::Vector2d projective_infinity();

enum class CrossRatioKind { Classical, Hitchin, Maximal, Custom };

class CrossRatioEvaluator {
public:
    using Function = std::function<real128(const BoundaryPoint&, const BoundaryPoint&, const BoundaryPoint&,
                                           const BoundaryPoint&)>;

    CrossRatioEvaluator(CrossRatioKind kind, std::string name, Function f, bool freePoints);

    real128 evaluate_hp(const BoundaryPoint& x, const BoundaryPoint& y, const BoundaryPoint& z, const BoundaryPoint& t) const;
    double operator()(const BoundaryPoint& x, const BoundaryPoint& y, const BoundaryPoint& z, const BoundaryPoint& t) const;

    CrossRatioKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    bool supports_free_points() const { return freePoints_; }

private:
    CrossRatioKind kind_;
    std::string name_;
    Function f_;
    bool freePoints_;
};

// on the canonical Fuchsian circle
CrossRatioEvaluator classical_evaluator();
CrossRatioEvaluator hitchin_cross_ratio(const LinearRepresentation& rep);
CrossRatioEvaluator maximal_cross_ratio(const LinearRepresentation& rep);

struct AxiomReport {
    int samples = 0;
    // symmetry, vanishing, cocycle_fourth, cocycle_third, normalization
    std::map<std::string, double> maxViolation;
    long genericZero = 0;  // distinct quadruples with |b| < 1e-12
    long genericOne = 0;   // distinct quadruples with |b - 1| < 1e-12
    double invariance = 0.0;
    long evaluationErrors = 0;
    std::string firstError;
    double tolerance = 1e-8;

    double worst() const;
    bool pass() const;
};

// Random quadruples of fixed points of words up to length 5.
AxiomReport check_axioms(const CrossRatioEvaluator& b, int sampleSize, std::uint64_t seed);

// log |b(g-, g y, g+, y)|
double period(const CrossRatioEvaluator& b, const Word& gamma, const BoundaryPoint& y);
// a fixed point of a short word away from both poles of gamma
BoundaryPoint default_period_base(const Word& gamma);
double period(const CrossRatioEvaluator& b, const Word& gamma);

// u on the arc from x to y through z with log b(x, u, y, z) = t
BoundaryPoint flow_point(const CrossRatioEvaluator& b, const BoundaryPoint& x, const BoundaryPoint& z,
                         const BoundaryPoint& y, double t);

struct PeriodRow {
    Word word;
    double length = 0.0;  // translation length in the base metric
    double period = 0.0;
    double ratio = 0.0;
};

struct PeriodComparison {
    long count = 0;
    double minRatio = 0.0, maxRatio = 0.0;
    double A = 0.0;  // max(maxRatio, 1 / minRatio)
};

PeriodComparison compare_periods(const CrossRatioEvaluator& b, const FNCoordinates& fnBase, int maxLen,
                                 const std::function<void(const PeriodRow&)>& sink = {});

struct PeriodIdentityReport {
    long count = 0;
    double maxError = 0.0;  // absolute
    Word worstWord;
};

// compares period(b, w) with oracle(w) over conjugacy classes up to maxLen
PeriodIdentityReport check_period_identity(const CrossRatioEvaluator& b, int maxLen,
                                           const std::function<double(const Word&)>& oracle);

}  // namespace surfacelab
