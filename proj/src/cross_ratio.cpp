#include "surfacelab/cross_ratio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "surfacelab/spectral.hpp"
#include "surfacelab/symplectic.hpp"

namespace surfacelab {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double angle_gap(double a, double b) {
    double d = ccw_distance(a, b);
    return std::min(d, kTwoPi - d);
}

real128 det2(const Vec128& a, const Vec128& b) { return a(0) * b(1) - a(1) * b(0); }

Vec128 circle_line(const BoundaryPoint& p) {
    if (!p.is_free()) return canonical_limit_curve().flag_hp(p).line;
    Eigen::Vector2d v = circle_vector(p.angle);
    return widen(v);
}

void require_nonzero(const real128& d) {
    using std::abs;
    if (abs(d) < real128(1e-32)) throw Error("degenerate quadruple");
}

double relative_gap(double a, double b) {
    double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

const std::vector<Word>& sample_classes() {
    static const std::vector<Word> classes = enumerate_conjugacy_classes(5);
    return classes;
}

BoundaryPoint random_fixed_point(std::mt19937_64& rng) {
    const auto& cls = sample_classes();
    const Word& w = cls[std::uniform_int_distribution<std::size_t>(0, cls.size() - 1)(rng)];
    int rot = std::uniform_int_distribution<int>(0, static_cast<int>(w.size()) - 1)(rng);
    Pole pole = std::uniform_int_distribution<int>(0, 1)(rng) ? Pole::Attracting : Pole::Repelling;
    return BoundaryPoint::fixed_point(w.rotated(rot), pole);
}

Word random_word(std::mt19937_64& rng, int len) {
    std::vector<Letter> letters;
    while (static_cast<int>(letters.size()) < len) {
        Letter l = Letter::from_code(std::uniform_int_distribution<int>(0, 7)(rng));
        if (!letters.empty() && letters.back().inverse() == l) continue;
        letters.push_back(l);
    }
    return Word(letters);
}

}  // namespace

double classical_cross_ratio(const Eigen::Vector2d& x, const Eigen::Vector2d& y, const Eigen::Vector2d& z,
                             const Eigen::Vector2d& t) {
    auto d = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a(0) * b(1) - a(1) * b(0); };
    auto degenerate = [&d](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        return std::abs(d(a, b)) <= 1e-14 * a.norm() * b.norm();
    };
    if (degenerate(y, z) || degenerate(t, x)) throw Error("degenerate quadruple");
    return d(y, x) * d(t, z) / (d(y, z) * d(t, x));
}

Eigen::Vector2d projective_point(double x) { return {x, 1.0}; }
Eigen::Vector2d projective_infinity() { return {1.0, 0.0}; }

CrossRatioEvaluator::CrossRatioEvaluator(CrossRatioKind kind, std::string name, Function f, bool freePoints)
    : kind_(kind), name_(std::move(name)), f_(std::move(f)), freePoints_(freePoints) {}

real128 CrossRatioEvaluator::evaluate_hp(const BoundaryPoint& x, const BoundaryPoint& y, const BoundaryPoint& z,
                                         const BoundaryPoint& t) const {
    if (!freePoints_ && (x.is_free() || y.is_free() || z.is_free() || t.is_free()))
        throw Error("this cross ratio is only defined at fixed points");
    return f_(x, y, z, t);
}

double CrossRatioEvaluator::operator()(const BoundaryPoint& x, const BoundaryPoint& y, const BoundaryPoint& z,
                                       const BoundaryPoint& t) const {
    return static_cast<double>(evaluate_hp(x, y, z, t));
}

CrossRatioEvaluator classical_evaluator() {
    auto f = [](const BoundaryPoint& x, const BoundaryPoint& y, const BoundaryPoint& z, const BoundaryPoint& t) {
        Vec128 vx = circle_line(x), vy = circle_line(y), vz = circle_line(z), vt = circle_line(t);
        real128 den1 = det2(vy, vz), den2 = det2(vt, vx);
        require_nonzero(den1);
        require_nonzero(den2);
        return det2(vy, vx) * det2(vt, vz) / (den1 * den2);
    };
    return CrossRatioEvaluator(CrossRatioKind::Classical, "classical", f, true);
}

CrossRatioEvaluator hitchin_cross_ratio(const LinearRepresentation& rep) {
    if (rep.tag().kind != GroupKind::SpecialLinear) throw Error("hitchin_cross_ratio needs an SL(n) representation");
    auto curve = std::make_shared<const LimitCurve>(rep);
    auto f = [curve](const BoundaryPoint& x, const BoundaryPoint& y, const BoundaryPoint& z, const BoundaryPoint& t) {
        Flag128 fx = curve->flag_hp(x), fy = curve->flag_hp(y), fz = curve->flag_hp(z), ft = curve->flag_hp(t);
        real128 den1 = fx.line.dot(ft.covector), den2 = fz.line.dot(fy.covector);
        require_nonzero(den1);
        require_nonzero(den2);
        return fx.line.dot(fy.covector) * fz.line.dot(ft.covector) / (den1 * den2);
    };
    return CrossRatioEvaluator(CrossRatioKind::Hitchin, "hitchin " + rep.tag().str(), f, curve->supports_free_points());
}

CrossRatioEvaluator maximal_cross_ratio(const LinearRepresentation& rep) {
    if (rep.tag().kind != GroupKind::Symplectic) throw Error("maximal_cross_ratio needs an Sp(2n) representation");
    auto curve = std::make_shared<const LimitCurve>(rep);
    auto f = [curve](const BoundaryPoint& x, const BoundaryPoint& y, const BoundaryPoint& z, const BoundaryPoint& t) {
        using F = LagrangianFrameT<real128>;
        return cross_ratio_B(F(curve->lagrangian_hp(x)), F(curve->lagrangian_hp(y)), F(curve->lagrangian_hp(z)),
                             F(curve->lagrangian_hp(t)));
    };
    return CrossRatioEvaluator(CrossRatioKind::Maximal, "maximal " + rep.tag().str(), f, curve->supports_free_points());
}

double AxiomReport::worst() const {
    double w = 0.0;
    for (const auto& [name, v] : maxViolation) w = std::max(w, v);
    return w;
}

bool AxiomReport::pass() const {
    return worst() <= tolerance && invariance <= tolerance && genericZero == 0 && genericOne == 0 && evaluationErrors == 0;
}

AxiomReport check_axioms(const CrossRatioEvaluator& b, int sampleSize, std::uint64_t seed) {
    AxiomReport r;
    for (const char* k : {"symmetry", "vanishing", "cocycle_fourth", "cocycle_third", "normalization"}) r.maxViolation[k] = 0.0;
    std::mt19937_64 rng(seed);
    auto bump = [&r](const char* k, double v) {
        double& slot = r.maxViolation[k];
        slot = std::max(slot, std::isfinite(v) ? v : std::numeric_limits<double>::infinity());
    };
    for (int s = 0; s < sampleSize; ++s) {
        std::vector<BoundaryPoint> pts;
        while (pts.size() < 5) {
            BoundaryPoint p = random_fixed_point(rng);
            bool distinct = std::all_of(pts.begin(), pts.end(), [&p](const BoundaryPoint& q) { return angle_gap(p.angle, q.angle) > 1e-10; });
            if (distinct) pts.push_back(p);
        }
        const BoundaryPoint &x = pts[0], &y = pts[1], &z = pts[2], &t = pts[3], &w = pts[4];
        Word g = random_word(rng, std::uniform_int_distribution<int>(1, 4)(rng));
        try {
            double v = b(x, y, z, t);
            bump("symmetry", relative_gap(b(z, t, x, y), v));
            bump("vanishing", std::max(std::abs(b(x, x, z, t)), std::abs(b(x, y, z, z))));
            bump("cocycle_fourth", relative_gap(b(x, y, z, w) * b(x, w, z, t), v));
            bump("cocycle_third", relative_gap(b(x, y, w, t) * b(w, y, z, t), v));
            bump("normalization", std::max(std::abs(b(x, y, x, t) - 1.0), std::abs(b(x, y, z, y) - 1.0)));
            if (std::abs(v) < 1e-12) ++r.genericZero;
            if (std::abs(v - 1.0) < 1e-12) ++r.genericOne;
            double moved = b(x.translated(g), y.translated(g), z.translated(g), t.translated(g));
            r.invariance = std::max(r.invariance, relative_gap(moved, v));
        } catch (const Error& e) {
            if (r.evaluationErrors++ == 0) r.firstError = e.what();
        }
        ++r.samples;
    }
    return r;
}

double period(const CrossRatioEvaluator& b, const Word& gamma, const BoundaryPoint& y) {
    BoundaryPoint plus = BoundaryPoint::fixed_point(gamma, Pole::Attracting);
    BoundaryPoint minus = BoundaryPoint::fixed_point(gamma, Pole::Repelling);
    if (angle_gap(y.angle, plus.angle) < 1e-10 || angle_gap(y.angle, minus.angle) < 1e-10)
        throw Error("period: base point is a fixed point of gamma");
    using std::abs;
    using std::log;
    return static_cast<double>(log(abs(b.evaluate_hp(minus, y.translated(gamma), plus, y))));
}

BoundaryPoint default_period_base(const Word& gamma) {
    BoundaryPoint plus = BoundaryPoint::fixed_point(gamma, Pole::Attracting);
    BoundaryPoint minus = BoundaryPoint::fixed_point(gamma, Pole::Repelling);
    for (double sep : {1e-2, 1e-6}) {
        for (const char* s : {"ab", "cD", "aC", "bd", "Bc", "dA"}) {
            BoundaryPoint y = BoundaryPoint::fixed_point(Word::parse(s));
            if (angle_gap(y.angle, plus.angle) > sep && angle_gap(y.angle, minus.angle) > sep) return y;
        }
    }
    throw Error("no base point away from the poles");
}

double period(const CrossRatioEvaluator& b, const Word& gamma) { return period(b, gamma, default_period_base(gamma)); }

BoundaryPoint flow_point(const CrossRatioEvaluator& b, const BoundaryPoint& x, const BoundaryPoint& z, const BoundaryPoint& y,
                         double t) {
    if (!b.supports_free_points()) throw Error("flow_point needs a cross ratio defined on free circle points");
    Orientation o = circle_order(x, z, y);
    if (o == Orientation::Degenerate) throw Error("flow_point needs distinct points");
    const double s = o == Orientation::Positive ? 1.0 : -1.0;
    const double span = s > 0 ? ccw_distance(x.angle, y.angle) : ccw_distance(y.angle, x.angle);
    const double thetaZ = s > 0 ? ccw_distance(x.angle, z.angle) : ccw_distance(z.angle, x.angle);
    auto point = [&](double theta) { return BoundaryPoint::at_angle(x.angle + s * theta); };
    auto f = [&](double theta) {
        using std::abs;
        using std::log;
        return static_cast<double>(log(abs(b.evaluate_hp(x, point(theta), y, z))));
    };

    std::vector<double> grid{thetaZ};
    for (int i = 1; i < 34; ++i) grid.push_back(span * i / 34.0);
    std::sort(grid.begin(), grid.end());
    double prev = -std::numeric_limits<double>::infinity();
    for (double th : grid) {
        double v = th == thetaZ ? 0.0 : f(th);
        if (!(v > prev)) throw Error("not a strict cross ratio on this arc");
        prev = v;
    }
    if (t == 0.0) return point(thetaZ);

    double lo = t > 0 ? thetaZ : 0.0, hi = t > 0 ? span : thetaZ;
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 400; ++it) {
        mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double v = f(mid);
        if (std::abs(v - t) <= 1e-10) break;
        (v < t ? lo : hi) = mid;
    }
    return point(mid);
}

PeriodComparison compare_periods(const CrossRatioEvaluator& b, const FNCoordinates& fnBase, int maxLen,
                                 const std::function<void(const PeriodRow&)>& sink) {
    const LinearRepresentation base = fuchsian_genus2(fnBase);
    PeriodComparison out;
    out.minRatio = std::numeric_limits<double>::infinity();
    out.maxRatio = 0.0;
    for_each_conjugacy_class(maxLen, [&](const Word& w) {
        PeriodRow row;
        row.length = translation_length_h2(evaluate(base, w));
        row.period = period(b, w);
        row.ratio = row.period / row.length;
        out.minRatio = std::min(out.minRatio, row.ratio);
        out.maxRatio = std::max(out.maxRatio, row.ratio);
        ++out.count;
        if (sink) {
            row.word = w;
            sink(row);
        }
    });
    out.A = out.count ? std::max(out.maxRatio, 1.0 / out.minRatio) : 0.0;
    return out;
}

PeriodIdentityReport check_period_identity(const CrossRatioEvaluator& b, int maxLen,
                                           const std::function<double(const Word&)>& oracle) {
    PeriodIdentityReport r;
    for_each_conjugacy_class(maxLen, [&](const Word& w) {
        double err = std::abs(period(b, w) - oracle(w));
        if (!(err <= r.maxError)) {
            r.maxError = std::isnan(err) ? std::numeric_limits<double>::infinity() : err;
            r.worstWord = w;
        }
        ++r.count;
    });
    return r;
}

}  // namespace surfacelab
