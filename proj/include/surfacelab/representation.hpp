#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "surfacelab/word.hpp"

namespace surfacelab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

enum class GroupKind { SpecialLinear, Symplectic };

struct GroupTag {
    GroupKind kind = GroupKind::SpecialLinear;
    int n = 2;  // SL(n) or Sp(2n)

    int dim() const { return kind == GroupKind::Symplectic ? 2 * n : n; }
    std::string str() const;
    bool operator==(const GroupTag&) const = default;
};

// standard form [[0, I], [-I, 0]]
Mat standard_form(int n);

class LinearRepresentation {
public:
    LinearRepresentation() = default;
    LinearRepresentation(GroupTag tag, std::vector<Mat> images);

    const GroupTag& tag() const { return tag_; }
    int dim() const { return tag_.dim(); }
    int generators() const { return static_cast<int>(images_.size()); }
    const Presentation& presentation() const { return presentation_; }

    const Mat& image(int gen) const { return images_[static_cast<std::size_t>(gen)]; }
    const Mat& inverse_image(int gen) const { return inverses_[static_cast<std::size_t>(gen)]; }
    const Mat& letter(Letter l) const { return l.sign() > 0 ? image(l.gen()) : inverse_image(l.gen()); }
    const std::vector<Mat>& images() const { return images_; }

    // operator norm of rho(relator) - I
    double relator_residual() const { return residual_; }
    // max over generators of |det - 1| and, for Sp, |M^T J M - J|
    double group_residual() const;

private:
    GroupTag tag_;
    std::vector<Mat> images_;
    std::vector<Mat> inverses_;
    Presentation presentation_;
    double residual_ = 0.0;
};

Mat evaluate(const LinearRepresentation& rep, const Word& w);

struct FNCoordinates {
    std::array<double, 3> lengths{};
    std::array<double, 3> twists{};

    static FNCoordinates canonical();
    std::array<double, 6> packed() const;
    static FNCoordinates unpack(const std::array<double, 6>& x);
};

// Pants curves of the chart: a, c and the separating curve [a,b].
const std::array<Word, 3>& pants_curves();

LinearRepresentation fuchsian_canonical();
LinearRepresentation fuchsian_genus2(const FNCoordinates& fn);
LinearRepresentation trivial_representation(GroupTag tag, int genus = 2);

Mat symmetric_power(const Mat& m2, int n);
LinearRepresentation irreducible_embed(const LinearRepresentation& rep2, int n);
LinearRepresentation diagonal_embed(const LinearRepresentation& rep2, int n);
// block i of the result carries factors[i]
LinearRepresentation diagonal_embed(const std::vector<LinearRepresentation>& factors);

// Lie algebra basis of the tangent space at the identity for the tag.
std::vector<Mat> lie_algebra_basis(const GroupTag& tag);

struct TraceConstraint {
    Word word;
    double target;
};

// Newton on generators exp(X_g) M_g until rho(relator) = I and the trace constraints hold.
LinearRepresentation newton_project(const LinearRepresentation& rep,
                                    const std::vector<TraceConstraint>& traces = {},
                                    double tol = 1e-8, int maxIter = 100);

LinearRepresentation deform(const LinearRepresentation& rep, std::uint64_t seed, double eps);

// conjugate every image by g
LinearRepresentation conjugate(const LinearRepresentation& rep, const Mat& g);

}  // namespace surfacelab
