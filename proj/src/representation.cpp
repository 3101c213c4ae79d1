#include "surfacelab/representation.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

namespace surfacelab {

std::string GroupTag::str() const {
    return kind == GroupKind::Symplectic ? "Sp(" + std::to_string(2 * n) + ")" : "SL(" + std::to_string(n) + ")";
}

Mat standard_form(int n) {
    Mat J = Mat::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n) = Mat::Identity(n, n);
    J.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
    return J;
}

namespace {

Mat group_inverse(const GroupTag& tag, const Mat& m) {
    if (m.rows() == 2) {
        Mat inv(2, 2);
        inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
        return inv / (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
    }
    if (tag.kind == GroupKind::Symplectic) {
        Mat J = standard_form(tag.n);
        return -J * m.transpose() * J;
    }
    return m.partialPivLu().inverse();
}

double operator_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

}  // namespace

LinearRepresentation::LinearRepresentation(GroupTag tag, std::vector<Mat> images)
    : tag_(tag), images_(std::move(images)) {
    if (images_.empty() || images_.size() % 2 != 0) throw Error("need an even, nonzero number of generators");
    for (const Mat& m : images_)
        if (m.rows() != tag_.dim() || m.cols() != tag_.dim()) throw Error("image size does not match group tag");
    presentation_ = Presentation::surface(static_cast<int>(images_.size() / 2));
    inverses_.reserve(images_.size());
    for (const Mat& m : images_) inverses_.push_back(group_inverse(tag_, m));
    Mat r = evaluate(*this, presentation_.relator);
    residual_ = operator_norm(r - Mat::Identity(dim(), dim()));
}

double LinearRepresentation::group_residual() const {
    double worst = 0.0;
    for (const Mat& m : images_) {
        worst = std::max(worst, std::abs(m.determinant() - 1.0));
        if (tag_.kind == GroupKind::Symplectic) {
            Mat J = standard_form(tag_.n);
            worst = std::max(worst, (m.transpose() * J * m - J).norm());
        }
    }
    return worst;
}

Mat evaluate(const LinearRepresentation& rep, const Word& w) {
    Mat out = Mat::Identity(rep.dim(), rep.dim());
    for (Letter l : w) out = out * rep.letter(l);
    return out;
}

std::array<double, 6> FNCoordinates::packed() const {
    return {lengths[0], lengths[1], lengths[2], twists[0], twists[1], twists[2]};
}

FNCoordinates FNCoordinates::unpack(const std::array<double, 6>& x) {
    FNCoordinates fn;
    for (int i = 0; i < 3; ++i) {
        fn.lengths[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
        fn.twists[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i + 3)];
    }
    return fn;
}

const std::array<Word, 3>& pants_curves() {
    static const std::array<Word, 3> curves{Word::parse("a"), Word::parse("c"), Word::parse("a b A B")};
    return curves;
}

namespace {

Mat rotation(double theta) {
    Mat r(2, 2);
    double c = std::cos(theta / 2), s = std::sin(theta / 2);
    r << c, s, -s, c;
    return r;
}

// Side pairing of the regular octagon with interior angles pi/4.
Mat octagon_pairing(int i, int j) {
    const double d = std::acosh(1.0 + std::sqrt(2.0));
    Mat t = Mat::Zero(2, 2);
    t(0, 0) = std::exp(d);
    t(1, 1) = std::exp(-d);
    return rotation(i * M_PI / 4) * t * rotation(M_PI - j * M_PI / 4);
}

double length_from_trace(double tr) {
    if (std::abs(tr) <= 2.0) throw Error("not hyperbolic");
    return 2.0 * std::acosh(std::abs(tr) / 2.0);
}

// one-parameter subgroup through m with translation length t
Mat hyperbolic_flow(const Mat& m, double t) {
    double tr = m.trace();
    double sgn = tr > 0 ? 1.0 : -1.0;
    double ch = std::abs(tr) / 2.0, sh = std::sqrt(ch * ch - 1.0);
    Mat N = (sgn * m - ch * Mat::Identity(2, 2)) / sh;
    return std::cosh(t / 2) * Mat::Identity(2, 2) + std::sinh(t / 2) * N;
}

}  // namespace

LinearRepresentation fuchsian_canonical() {
    static const LinearRepresentation rep = [] {
        std::vector<Mat> g{octagon_pairing(0, 2), octagon_pairing(3, 1), octagon_pairing(4, 6), octagon_pairing(7, 5)};
        // polish to the last bit
        return newton_project(LinearRepresentation({GroupKind::SpecialLinear, 2}, std::move(g)), {}, 1e-12);
    }();
    return rep;
}

FNCoordinates FNCoordinates::canonical() {
    static const FNCoordinates fn = [] {
        FNCoordinates c;
        LinearRepresentation rep = fuchsian_canonical();
        for (std::size_t i = 0; i < 3; ++i) c.lengths[i] = length_from_trace(evaluate(rep, pants_curves()[i]).trace());
        return c;
    }();
    return fn;
}

LinearRepresentation fuchsian_genus2(const FNCoordinates& fn) {
    for (double l : fn.lengths)
        if (!(l > 1e-6) || !std::isfinite(l)) throw Error("degenerate length in FN coordinates");
    for (double t : fn.twists)
        if (!std::isfinite(t)) throw Error("non-finite twist in FN coordinates");

    const FNCoordinates base = FNCoordinates::canonical();
    LinearRepresentation rep = fuchsian_canonical();
    std::array<double, 3> signs{};
    for (std::size_t i = 0; i < 3; ++i) signs[i] = evaluate(rep, pants_curves()[i]).trace() > 0 ? 1.0 : -1.0;

    double span = 0.0;
    for (std::size_t i = 0; i < 3; ++i) span = std::max(span, std::abs(std::log(fn.lengths[i] / base.lengths[i])));
    const int steps = std::max(1, static_cast<int>(std::ceil(span / 0.05)));
    for (int s = 1; s <= steps; ++s) {
        double u = static_cast<double>(s) / steps;
        std::vector<TraceConstraint> traces;
        for (std::size_t i = 0; i < 3; ++i) {
            double l = base.lengths[i] * std::pow(fn.lengths[i] / base.lengths[i], u);
            traces.push_back({pants_curves()[i], signs[i] * 2.0 * std::cosh(l / 2.0)});
        }
        try {
            rep = newton_project(rep, traces, 1e-11);
        } catch (const Error& e) {
            throw Error(std::string("uniformization failed: ") + e.what());
        }
    }

    std::vector<Mat> g = rep.images();
    if (fn.twists[0] != 0.0) g[1] = g[1] * hyperbolic_flow(g[0], fn.twists[0]);
    if (fn.twists[1] != 0.0) g[3] = g[3] * hyperbolic_flow(g[2], fn.twists[1]);
    if (fn.twists[2] != 0.0) {
        LinearRepresentation tmp({GroupKind::SpecialLinear, 2}, g);
        Mat e = hyperbolic_flow(evaluate(tmp, pants_curves()[2]), fn.twists[2]);
        Mat ei = group_inverse({GroupKind::SpecialLinear, 2}, e);
        g[2] = e * g[2] * ei;
        g[3] = e * g[3] * ei;
    }
    LinearRepresentation out({GroupKind::SpecialLinear, 2}, std::move(g));
    if (out.relator_residual() > 1e-8)
        throw Error("uniformization failed: relator residual " + std::to_string(out.relator_residual()));
    for (int i = 0; i < out.generators(); ++i)
        if (std::abs(out.image(i).trace()) <= 2.0) throw Error("uniformization failed: non-hyperbolic generator");
    return out;
}

LinearRepresentation trivial_representation(GroupTag tag, int genus) {
    return LinearRepresentation(tag, std::vector<Mat>(static_cast<std::size_t>(2 * genus), Mat::Identity(tag.dim(), tag.dim())));
}

Mat symmetric_power(const Mat& m2, int n) {
    const int k = n - 1;
    const double p = m2(0, 0), r = m2(1, 0), q = m2(0, 1), s = m2(1, 1);
    Mat out = Mat::Zero(n, n);
    for (int j = 0; j <= k; ++j) {
        // coefficients of (p + r t)^(k-j) (q + s t)^j
        std::vector<double> poly{1.0};
        auto mul = [&](double c0, double c1) {
            std::vector<double> next(poly.size() + 1, 0.0);
            for (std::size_t i = 0; i < poly.size(); ++i) {
                next[i] += c0 * poly[i];
                next[i + 1] += c1 * poly[i];
            }
            poly.swap(next);
        };
        for (int a = 0; a < k - j; ++a) mul(p, r);
        for (int b = 0; b < j; ++b) mul(q, s);
        for (int i = 0; i <= k; ++i) out(i, j) = poly[static_cast<std::size_t>(i)];
    }
    return out;
}

LinearRepresentation irreducible_embed(const LinearRepresentation& rep2, int n) {
    if (n < 2) throw Error("irreducible_embed needs n >= 2");
    if (rep2.dim() != 2) throw Error("irreducible_embed needs a 2x2 representation");
    std::vector<Mat> g;
    for (const Mat& m : rep2.images()) g.push_back(symmetric_power(m, n));
    return LinearRepresentation({GroupKind::SpecialLinear, n}, std::move(g));
}

LinearRepresentation diagonal_embed(const std::vector<LinearRepresentation>& factors) {
    const int n = static_cast<int>(factors.size());
    if (n < 1) throw Error("diagonal_embed needs n >= 1");
    const int gens = factors[0].generators();
    for (const auto& f : factors)
        if (f.dim() != 2 || f.generators() != gens) throw Error("diagonal_embed needs 2x2 factors on the same group");
    std::vector<Mat> g;
    for (int k = 0; k < gens; ++k) {
        Mat big = Mat::Zero(2 * n, 2 * n);
        for (int i = 0; i < n; ++i) {
            const Mat& m = factors[static_cast<std::size_t>(i)].image(k);
            big(i, i) = m(0, 0);
            big(i, n + i) = m(0, 1);
            big(n + i, i) = m(1, 0);
            big(n + i, n + i) = m(1, 1);
        }
        g.push_back(big);
    }
    return LinearRepresentation({GroupKind::Symplectic, n}, std::move(g));
}

LinearRepresentation diagonal_embed(const LinearRepresentation& rep2, int n) {
    if (n < 1) throw Error("diagonal_embed needs n >= 1");
    return diagonal_embed(std::vector<LinearRepresentation>(static_cast<std::size_t>(n), rep2));
}

std::vector<Mat> lie_algebra_basis(const GroupTag& tag) {
    std::vector<Mat> basis;
    const int d = tag.dim();
    auto unit = [d](int i, int j) { Mat e = Mat::Zero(d, d); e(i, j) = 1.0; return e; };
    if (tag.kind == GroupKind::SpecialLinear) {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (i != j) basis.push_back(unit(i, j));
        for (int i = 0; i + 1 < d; ++i) basis.push_back(unit(i, i) - unit(d - 1, d - 1));
    } else {
        const int n = tag.n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) basis.push_back(unit(i, j) - unit(n + j, n + i));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                basis.push_back(i == j ? unit(i, n + i) : Mat(unit(i, n + j) + unit(j, n + i)));
                basis.push_back(i == j ? unit(n + i, i) : Mat(unit(n + i, j) + unit(n + j, i)));
            }
    }
    return basis;
}

namespace {

struct Residual {
    Vec r;
    double relator = 0.0;
    double trace = 0.0;
};

Residual residual_of(const LinearRepresentation& rep, const std::vector<TraceConstraint>& traces) {
    const int d = rep.dim();
    Mat rel = evaluate(rep, rep.presentation().relator) - Mat::Identity(d, d);
    Residual out;
    out.r.resize(d * d + static_cast<long>(traces.size()));
    out.r.head(d * d) = Eigen::Map<const Vec>(rel.data(), d * d);
    for (std::size_t i = 0; i < traces.size(); ++i) {
        double v = evaluate(rep, traces[i].word).trace() - traces[i].target;
        out.r(d * d + static_cast<long>(i)) = v;
        out.trace = std::max(out.trace, std::abs(v));
    }
    out.relator = operator_norm(rel);
    return out;
}

// d/d eps of the product over w when M_g -> exp(eps E) M_g, as sum of s * A E B
struct Occurrence {
    int gen;
    double sign;
    Mat A, B;
};

std::vector<Occurrence> occurrences(const LinearRepresentation& rep, const Word& w) {
    const int d = rep.dim();
    const std::size_t L = w.size();
    std::vector<Mat> prefix(L + 1), suffix(L + 1);
    prefix[0] = Mat::Identity(d, d);
    for (std::size_t k = 0; k < L; ++k) prefix[k + 1] = prefix[k] * rep.letter(w[k]);
    suffix[L] = Mat::Identity(d, d);
    for (std::size_t k = L; k-- > 0;) suffix[k] = rep.letter(w[k]) * suffix[k + 1];
    std::vector<Occurrence> out;
    for (std::size_t k = 0; k < L; ++k) {
        if (w[k].sign() > 0)
            out.push_back({w[k].gen(), 1.0, prefix[k], suffix[k]});
        else
            out.push_back({w[k].gen(), -1.0, prefix[k + 1], suffix[k + 1]});
    }
    return out;
}

}  // namespace

LinearRepresentation newton_project(const LinearRepresentation& rep, const std::vector<TraceConstraint>& traces,
                                    double tol, int maxIter) {
    const int d = rep.dim();
    const auto basis = lie_algebra_basis(rep.tag());
    const int m = static_cast<int>(basis.size());
    const int G = rep.generators();

    LinearRepresentation cur = rep;
    Residual res = residual_of(cur, traces);
    auto merit = [](const Residual& r) { return r.r.norm(); };
    const double target = std::min(tol, 1e-13);

    for (int it = 0; it < maxIter && merit(res) > target; ++it) {
        Mat J = Mat::Zero(d * d + static_cast<long>(traces.size()), G * m);
        for (const auto& occ : occurrences(cur, cur.presentation().relator))
            for (int b = 0; b < m; ++b) {
                Mat t = occ.sign * occ.A * basis[static_cast<std::size_t>(b)] * occ.B;
                J.block(0, occ.gen * m + b, d * d, 1) += Eigen::Map<const Vec>(t.data(), d * d);
            }
        for (std::size_t i = 0; i < traces.size(); ++i)
            for (const auto& occ : occurrences(cur, traces[i].word))
                for (int b = 0; b < m; ++b)
                    J(d * d + static_cast<long>(i), occ.gen * m + b) +=
                        occ.sign * (occ.A * basis[static_cast<std::size_t>(b)] * occ.B).trace();

        Eigen::CompleteOrthogonalDecomposition<Mat> cod(J);
        cod.setThreshold(1e-11);
        Vec delta = cod.solve(res.r);

        double step = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 30; ++ls, step *= 0.5) {
            std::vector<Mat> g;
            for (int k = 0; k < G; ++k) {
                Mat X = Mat::Zero(d, d);
                for (int b = 0; b < m; ++b) X -= step * delta(k * m + b) * basis[static_cast<std::size_t>(b)];
                g.push_back(X.exp() * cur.image(k));
            }
            LinearRepresentation trial(cur.tag(), std::move(g));
            Residual tr = residual_of(trial, traces);
            if (merit(tr) < merit(res)) {
                cur = std::move(trial);
                res = std::move(tr);
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    if (res.relator > tol || res.trace > tol)
        throw Error("projection failed: relator residual " + std::to_string(res.relator) + ", trace residual " +
                    std::to_string(res.trace));
    return cur;
}

LinearRepresentation deform(const LinearRepresentation& rep, std::uint64_t seed, double eps) {
    if (eps == 0.0) return rep;
    if (!(eps > 0.0) || eps > 0.1) throw Error("deform needs 0 <= eps <= 0.1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const auto basis = lie_algebra_basis(rep.tag());
    std::vector<Mat> g;
    for (int k = 0; k < rep.generators(); ++k) {
        Mat X = Mat::Zero(rep.dim(), rep.dim());
        for (const Mat& e : basis) X += normal(rng) * e;
        X *= eps / X.norm();
        g.push_back(X.exp() * rep.image(k));
    }
    return newton_project(LinearRepresentation(rep.tag(), std::move(g)), {}, 1e-8);
}

LinearRepresentation conjugate(const LinearRepresentation& rep, const Mat& g) {
    Mat gi = g.inverse();
    std::vector<Mat> out;
    for (const Mat& m : rep.images()) out.push_back(g * m * gi);
    return LinearRepresentation(rep.tag(), std::move(out));
}

}  // namespace surfacelab
