#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

#include "surfacelab/precision.hpp"
#include "surfacelab/representation.hpp"
#include "surfacelab/symplectic.hpp"

namespace surfacelab {

enum class Pole { Attracting, Repelling };

inline Pole opposite(Pole p) { return p == Pole::Attracting ? Pole::Repelling : Pole::Attracting; }

// Circle coordinate: the angle phi stands for the line through (cos phi/2, -sin phi/2).
Eigen::Vector2d circle_vector(double angle);
double circle_angle(double x, double y);

// A fixed point of a group element, or (empty word) a bare circle point.
// Angles are measured on the canonical Fuchsian circle.
struct BoundaryPoint {
    Word word;
    Pole pole = Pole::Attracting;
    double angle = 0.0;

    static BoundaryPoint fixed_point(const Word& w, Pole pole = Pole::Attracting);
    static BoundaryPoint at_angle(double angle);

    bool is_free() const { return word.empty(); }
    // the other fixed point of the same element
    BoundaryPoint other_pole() const;
    // g . p; the word becomes reduce(g w g^-1), which is freely but not cyclically reduced
    BoundaryPoint translated(const Word& g) const;
    std::string str() const;
};

// attracting and repelling angle of the Moebius action
std::pair<double, double> fixed_points_psl2(const Mat& m);

enum class Orientation { Negative = -1, Degenerate = 0, Positive = 1 };

Orientation circle_order(double x, double y, double z);
Orientation circle_order(const BoundaryPoint& x, const BoundaryPoint& y, const BoundaryPoint& z);

// positive angular distance from a to b going counterclockwise, in [0, 2pi)
double ccw_distance(double a, double b);

struct Flag128 {
    Vec128 line;      // unit vector
    Vec128 covector;  // unit covector vanishing on the hyperplane of the flag
};

// Attracting and repelling flags of a proximal matrix (no spectral gap check).
std::pair<Flag128, Flag128> matrix_flags(const Mat128& m, const Mat128& minv);
// span of the generalized eigenspaces with |lambda| above the middle gap
MatX<real128> attracting_subspace(const Mat128& m);

// Limit curve of a representation evaluated at fixed points. Cached per core word.
// Bare circle points are supported for exact symmetric powers and diagonal copies of the canonical group.
class LimitCurve {
public:
    explicit LimitCurve(LinearRepresentation rep);

    const LinearRepresentation& rep() const { return rep_; }
    bool supports_free_points() const { return freeModel_ != FreeModel::None; }

    Flag128 flag_hp(const BoundaryPoint& p) const;
    MatX<real128> lagrangian_hp(const BoundaryPoint& p) const;  // orthonormal 2n x n frame

    std::pair<Vec, Vec> flag(const BoundaryPoint& p) const;
    LagrangianFrame lagrangian(const BoundaryPoint& p) const;

private:
    enum class FreeModel { None, Symmetric, Diagonal };

    struct CoreData {
        std::optional<std::pair<Flag128, Flag128>> flags;  // attracting, repelling
        std::optional<std::pair<MatX<real128>, MatX<real128>>> lagrangians;
    };

    Mat lift(const Mat& m2) const;
    const CoreData& core_flags(const Word& core) const;
    const CoreData& core_lagrangians(const Word& core) const;
    Mat128 hp_evaluate(const Word& w) const;

    LinearRepresentation rep_;
    FreeModel freeModel_ = FreeModel::None;
    mutable std::mutex mutex_;
    mutable std::map<Word, std::unique_ptr<CoreData>> cache_;
};

// limit curve of the canonical Fuchsian group, shared
const LimitCurve& canonical_limit_curve();

std::pair<Vec, Vec> limit_flag(const LinearRepresentation& rep, const BoundaryPoint& p);
LagrangianFrame limit_lagrangian(const LinearRepresentation& rep, const BoundaryPoint& p);

// true when every generator image agrees with the reference within tol (relative)
bool same_images(const LinearRepresentation& a, const LinearRepresentation& b, double tol = 1e-12);

}  // namespace surfacelab
