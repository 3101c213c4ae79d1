#include "surfacelab/invariants.hpp"

#include <cmath>
#include <numbers>
#include <optional>

namespace surfacelab {

namespace {

constexpr double kPi = std::numbers::pi;

double displacement(const Mat& m, double alpha) {
    const double c = std::cos(alpha), s = std::sin(alpha);
    const double x = m(0, 0) * c + m(0, 1) * s, y = m(1, 0) * c + m(1, 1) * s;
    return std::atan2(c * y - s * x, c * x + s * y);
}

double acosh_trace(const Eigen::Matrix2d& m) {
    double tr = std::abs(m.trace());
    if (!(tr > 2.0)) throw Error("not hyperbolic");
    return 2.0 * std::acosh(tr / 2.0);
}

}  // namespace

LiftedCircleMap::LiftedCircleMap(const Mat& m) {
    if (m.rows() != 2 || m.cols() != 2) throw Error("LiftedCircleMap needs a 2x2 matrix");
    m_ = m.trace() < 0 ? Mat(-m) : m;
    inv_ = m_.inverse();
    window_ = {kPi, -kPi};
    for (int k = 0; k < 64; ++k) {
        double d = displacement(m_, 2 * kPi * k / 64);
        window_.first = std::min(window_.first, d);
        window_.second = std::max(window_.second, d);
    }
}

double LiftedCircleMap::apply(double alpha) const { return alpha + displacement(m_, alpha); }
double LiftedCircleMap::apply_inverse(double alpha) const { return alpha + displacement(inv_, alpha); }

int euler_number(const LinearRepresentation& rep) {
    if (rep.dim() != 2) throw Error("euler_number needs an SL(2) representation");
    const Word& rel = rep.presentation().relator;
    std::vector<LiftedCircleMap> lifts;
    for (int g = 0; g < rep.generators(); ++g) lifts.emplace_back(rep.image(g));
    std::optional<long> turns;
    for (double alpha0 : {0.1, 0.9, 2.0, 2.7}) {
        double alpha = alpha0;
        for (std::size_t k = rel.size(); k-- > 0;) {
            const Letter l = rel[k];
            const LiftedCircleMap& f = lifts[static_cast<std::size_t>(l.gen())];
            alpha = l.sign() > 0 ? f.apply(alpha) : f.apply_inverse(alpha);
        }
        // vector angle alpha is -1/2 of the circle coordinate; one full turn is a shift by pi
        const double t = -(alpha - alpha0) / kPi;
        const long r = std::lround(t);
        if (std::abs(t - static_cast<double>(r)) > 1e-6) throw Error("lift failed");
        if (turns && *turns != r) throw Error("lift failed");
        turns = r;
    }
    return static_cast<int>(*turns);
}

int toledo_product(const std::vector<LinearRepresentation>& reps) {
    if (reps.empty()) throw Error("toledo_product needs at least one factor");
    int tau = 0;
    for (const auto& r : reps) tau += euler_number(r);
    return tau;
}

bool milnor_wood_check(int tau, int n, int genus) {
    if (genus < 2) throw Error("milnor_wood_check needs genus >= 2");
    return std::abs(tau) <= n * (2 * genus - 2);
}

IntersectionEstimate intersection(const FNCoordinates& g, const FNCoordinates& g0, int maxLen,
                                  const std::function<void(const IntersectionRow&)>& sink) {
    if (maxLen < 1) throw Error("intersection needs maxLen >= 1");
    const LinearRepresentation rg = fuchsian_genus2(g), rg0 = fuchsian_genus2(g0);
    std::vector<Eigen::Matrix2d> a, a0;
    for (int k = 0; k < rg.generators(); ++k) {
        a.push_back(rg.image(k));
        a.push_back(rg.inverse_image(k));
        a0.push_back(rg0.image(k));
        a0.push_back(rg0.inverse_image(k));
    }
    IntersectionEstimate out;
    out.maxLen = maxLen;
    double sum = 0.0;
    for_each_conjugacy_class(maxLen, [&](const Word& w) {
        Eigen::Matrix2d m = Eigen::Matrix2d::Identity(), m0 = Eigen::Matrix2d::Identity();
        for (Letter l : w) {
            m = m * a[static_cast<std::size_t>(l.code)];
            m0 = m0 * a0[static_cast<std::size_t>(l.code)];
        }
        IntersectionRow row;
        row.lengthG = acosh_trace(m);
        row.lengthG0 = acosh_trace(m0);
        row.ratio = row.lengthG0 / row.lengthG;
        sum += row.ratio;
        ++out.count;
        if (sink) {
            row.word = w;
            sink(row);
        }
    });
    out.estimate = out.count ? sum / static_cast<double>(out.count) : 0.0;
    return out;
}

}  // namespace surfacelab
