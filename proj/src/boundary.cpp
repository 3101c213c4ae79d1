#include "surfacelab/boundary.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "surfacelab/spectral.hpp"

namespace surfacelab {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double wrap(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;
    return a;
}


template <class V>
V unit(V v) {
    using std::sqrt;
    return v / sqrt(v.squaredNorm());
}

// largest column / row of a rank-one limit
Vec128 dominant_column(const Mat128& m) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < m.cols(); ++j)
        if (m.col(j).squaredNorm() > m.col(best).squaredNorm()) best = j;
    return unit<Vec128>(m.col(best));
}

Vec128 dominant_row(const Mat128& m) { return dominant_column(Mat128(m.transpose())); }

real128 max_abs(const Mat128& m) {
    using std::abs;
    real128 out = 0;
    for (Eigen::Index i = 0; i < m.size(); ++i) out = std::max(out, real128(abs(m.data()[i])));
    return out;
}

// normalized limit of m^(2^k)
Mat128 rank_one_limit(Mat128 m) {
    m /= max_abs(m);
    real128 last = 1;
    for (int k = 0; k < 200; ++k) {
        Mat128 next = m * m;
        next /= max_abs(next);
        real128 diff = max_abs(next - m);
        // quadratic convergence until the rounding floor
        if (diff < real128(1e-26) || (diff < real128(1e-16) && diff >= last)) return next;
        last = diff;
        m = std::move(next);
    }
    throw Error("not proximal at this word");
}

}  // namespace

MatX<real128> attracting_subspace(const Mat128& m) {
    const int n = static_cast<int>(m.rows() / 2);
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> g;
    Mat128 q(m.rows(), n);
    for (Eigen::Index i = 0; i < q.size(); ++i) q.data()[i] = g(rng);
    q = orthonormalize<real128>(q);
    const Mat128 step = m / max_abs(m);
    for (int it = 0; it < 20000; ++it) {
        Mat128 next = orthonormalize<real128>(Mat128(step * q));
        Mat128 off = next - q * (q.transpose() * next);
        q = std::move(next);
        if (off.squaredNorm() < real128(1e-60)) return q;
    }
    throw Error("no dominated splitting at this word");
}

std::pair<Flag128, Flag128> matrix_flags(const Mat128& m, const Mat128& minv) {
    Mat128 fwd = rank_one_limit(m);
    Mat128 bwd = rank_one_limit(minv);
    // column of the forward limit: attracting line; its row kills the repelling hyperplane
    return {Flag128{dominant_column(fwd), dominant_row(bwd)}, Flag128{dominant_column(bwd), dominant_row(fwd)}};
}

const LimitCurve& canonical_limit_curve() {
    static const LimitCurve curve(fuchsian_canonical());
    return curve;
}

Eigen::Vector2d circle_vector(double angle) { return {std::cos(angle / 2), -std::sin(angle / 2)}; }

double circle_angle(double x, double y) { return wrap(-2 * std::atan2(y, x)); }

BoundaryPoint BoundaryPoint::fixed_point(const Word& w, Pole pole) {
    BoundaryPoint p;
    p.word = reduce(w);
    if (p.word.empty()) throw Error("trivial element has no fixed point");
    p.pole = pole;
    Vec128 v = canonical_limit_curve().flag_hp(p).line;
    p.angle = circle_angle(static_cast<double>(v(0)), static_cast<double>(v(1)));
    return p;
}

BoundaryPoint BoundaryPoint::at_angle(double angle) {
    BoundaryPoint p;
    p.angle = wrap(angle);
    return p;
}

BoundaryPoint BoundaryPoint::other_pole() const {
    if (is_free()) throw Error("a free point has no other pole");
    return fixed_point(word, opposite(pole));
}

BoundaryPoint BoundaryPoint::translated(const Word& g) const {
    if (!is_free()) return fixed_point(g * word * g.inverse(), pole);
    Eigen::Vector2d v = evaluate(fuchsian_canonical(), g) * circle_vector(angle);
    return at_angle(circle_angle(v(0), v(1)));
}

std::string BoundaryPoint::str() const {
    if (is_free()) {
        std::ostringstream os;
        os.precision(17);
        os << "@" << angle;
        return os.str();
    }
    return word.str() + (pole == Pole::Attracting ? "+" : "-");
}

std::pair<double, double> fixed_points_psl2(const Mat& m) {
    if (m.rows() != 2 || m.cols() != 2) throw Error("fixed_points_psl2 needs a 2x2 matrix");
    const double tr = m.trace(), det = m.determinant();
    const double disc = tr * tr - 4 * det;
    if (!(std::abs(tr) > 2 * std::sqrt(std::abs(det))) || disc <= 0) throw Error("not hyperbolic");
    const double big = (std::abs(tr) + std::sqrt(disc)) / 2 * (tr < 0 ? -1 : 1);
    const double small = det / big;
    auto eigvec = [&m](double lam) {
        Eigen::Vector2d a(m(0, 1), lam - m(0, 0)), b(lam - m(1, 1), m(1, 0));
        Eigen::Vector2d v = a.squaredNorm() > b.squaredNorm() ? a : b;
        return circle_angle(v(0), v(1));
    };
    return {eigvec(big), eigvec(small)};
}

double ccw_distance(double a, double b) { return wrap(b - a); }

Orientation circle_order(double x, double y, double z) {
    auto close = [](double a, double b) {
        double d = ccw_distance(a, b);
        return std::min(d, kTwoPi - d) < 1e-12;
    };
    if (close(x, y) || close(y, z) || close(x, z)) return Orientation::Degenerate;
    return ccw_distance(x, y) < ccw_distance(x, z) ? Orientation::Positive : Orientation::Negative;
}

Orientation circle_order(const BoundaryPoint& x, const BoundaryPoint& y, const BoundaryPoint& z) {
    return circle_order(x.angle, y.angle, z.angle);
}

bool same_images(const LinearRepresentation& a, const LinearRepresentation& b, double tol) {
    if (!(a.tag() == b.tag()) || a.generators() != b.generators()) return false;
    for (int g = 0; g < a.generators(); ++g)
        if ((a.image(g) - b.image(g)).norm() > tol * (1 + b.image(g).norm())) return false;
    return true;
}

LimitCurve::LimitCurve(LinearRepresentation rep) : rep_(std::move(rep)) {
    const GroupTag& t = rep_.tag();
    if (t.kind == GroupKind::SpecialLinear && t.n >= 2 && same_images(rep_, irreducible_embed(fuchsian_canonical(), t.n)))
        freeModel_ = FreeModel::Symmetric;
    else if (t.kind == GroupKind::Symplectic && same_images(rep_, diagonal_embed(fuchsian_canonical(), t.n)))
        freeModel_ = FreeModel::Diagonal;
}

Mat LimitCurve::lift(const Mat& m2) const {
    if (freeModel_ == FreeModel::Symmetric) return symmetric_power(m2, rep_.tag().n);
    const int n = rep_.tag().n;
    Mat big = Mat::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        big(i, i) = m2(0, 0);
        big(i, n + i) = m2(0, 1);
        big(n + i, i) = m2(1, 0);
        big(n + i, n + i) = m2(1, 1);
    }
    return big;
}

Mat128 LimitCurve::hp_evaluate(const Word& w) const {
    Mat128 out = Mat128::Identity(rep_.dim(), rep_.dim());
    for (Letter l : w) {
        Mat128 g = widen(rep_.image(l.gen()));
        out = out * (l.sign() > 0 ? g : Mat128(g.inverse()));
    }
    return out;
}

namespace {

// representative hyperbolic element whose attracting point is the given angle
Mat attracting_at(double angle) {
    auto rot = [](double t) {
        Mat r(2, 2);
        r << std::cos(t / 2), std::sin(t / 2), -std::sin(t / 2), std::cos(t / 2);
        return r;
    };
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 0.5;
    return rot(angle) * d * rot(-angle);
}

}  // namespace

const LimitCurve::CoreData& LimitCurve::core_flags(const Word& core) const {
    auto& slot = cache_[core];
    if (!slot) slot = std::make_unique<CoreData>();
    if (slot->flags) return *slot;
    SpectrumSummary s = spectrum(rep_, core);
    const auto& m = s.moduli;
    const std::size_t n = m.size();
    if (m[n - 1] - m[n - 2] < 1e-8 * m[n - 1] || m[1] - m[0] < 1e-8 * m[1]) throw Error("not proximal at this word");
    slot->flags = matrix_flags(hp_evaluate(core), hp_evaluate(core.inverse()));
    return *slot;
}

const LimitCurve::CoreData& LimitCurve::core_lagrangians(const Word& core) const {
    auto& slot = cache_[core];
    if (!slot) slot = std::make_unique<CoreData>();
    if (slot->lagrangians) return *slot;
    SpectrumSummary s = spectrum(rep_, core);
    for (double m : s.moduli)
        if (std::abs(m - 1.0) <= 1e-8) throw Error("no dominated splitting at this word");
    slot->lagrangians = std::make_pair(attracting_subspace(hp_evaluate(core)), attracting_subspace(hp_evaluate(core.inverse())));
    return *slot;
}

Flag128 LimitCurve::flag_hp(const BoundaryPoint& p) const {
    if (p.is_free()) {
        if (!supports_free_points()) throw Error("free boundary points need an exact symmetric or diagonal copy of the canonical group");
        Mat128 g = widen(lift(attracting_at(p.angle)));
        return matrix_flags(g, g.inverse()).first;
    }
    std::lock_guard<std::mutex> lock(mutex_);
    ConjugateSplit split = split_conjugate(p.word);
    const CoreData& d = core_flags(split.core);
    Flag128 f = p.pole == Pole::Attracting ? d.flags->first : d.flags->second;
    if (split.conjugator.empty()) return f;
    f.line = unit<Vec128>(hp_evaluate(split.conjugator) * f.line);
    f.covector = unit<Vec128>(Vec128((f.covector.transpose() * hp_evaluate(split.conjugator.inverse())).transpose()));
    return f;
}

MatX<real128> LimitCurve::lagrangian_hp(const BoundaryPoint& p) const {
    if (rep_.tag().kind != GroupKind::Symplectic) throw Error("limit_lagrangian needs a symplectic representation");
    MatX<real128> q;
    if (p.is_free()) {
        if (!supports_free_points()) throw Error("free boundary points need an exact symmetric or diagonal copy of the canonical group");
        q = attracting_subspace(widen(lift(attracting_at(p.angle))));
    } else {
        std::lock_guard<std::mutex> lock(mutex_);
        ConjugateSplit split = split_conjugate(p.word);
        const CoreData& d = core_lagrangians(split.core);
        q = p.pole == Pole::Attracting ? d.lagrangians->first : d.lagrangians->second;
        if (!split.conjugator.empty()) q = orthonormalize<real128>(Mat128(hp_evaluate(split.conjugator) * q));
    }
    if (isotropy_residual(LagrangianFrameT<real128>(q)) > real128(1e-8)) throw Error("limit subspace is not Lagrangian");
    return q;
}

std::pair<Vec, Vec> LimitCurve::flag(const BoundaryPoint& p) const {
    Flag128 f = flag_hp(p);
    return {f.line.cast<double>(), f.covector.cast<double>()};
}

LagrangianFrame LimitCurve::lagrangian(const BoundaryPoint& p) const { return LagrangianFrame(narrow(lagrangian_hp(p))); }

std::pair<Vec, Vec> limit_flag(const LinearRepresentation& rep, const BoundaryPoint& p) { return LimitCurve(rep).flag(p); }

LagrangianFrame limit_lagrangian(const LinearRepresentation& rep, const BoundaryPoint& p) {
    return LimitCurve(rep).lagrangian(p);
}

}  // namespace surfacelab
