#include "surfacelab/spectral.hpp"

#include "surfacelab/precision.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace surfacelab {

namespace {

using cplx = std::complex<double>;

template <class M>
std::vector<cplx> eigenvalues_of(const M& m) {
    std::vector<cplx> out;
    if (m.rows() == 2) {
        double tr = m.trace(), det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        double disc = tr * tr - 4 * det;
        if (disc >= 0) {
            double big = (std::abs(tr) + std::sqrt(disc)) / 2 * (tr < 0 ? -1 : 1);
            out = {cplx(big), cplx(big != 0 ? det / big : 0.0)};
        } else {
            double im = std::sqrt(-disc) / 2;
            out = {cplx(tr / 2, im), cplx(tr / 2, -im)};
        }
        return out;
    }
    Eigen::EigenSolver<M> es(m, false);
    for (int i = 0; i < m.rows(); ++i) out.push_back(es.eigenvalues()(i));
    return out;
}

bool by_modulus_desc(const cplx& a, const cplx& b) { return std::abs(a) > std::abs(b); }

SpectrumSummary combine(std::vector<cplx> big, std::vector<cplx> small) {
    const std::size_t n = big.size();
    std::sort(big.begin(), big.end(), by_modulus_desc);
    std::sort(small.begin(), small.end(), by_modulus_desc);
    std::vector<cplx> eig(n);
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) {
        eig[i] = big[i];
        eig[n - 1 - i] = 1.0 / small[i];
    }
    if (n % 2 == 1) {
        double prod = 1.0;
        for (std::size_t i = 0; i < n; ++i)
            if (i != half) prod *= std::abs(eig[i]);
        eig[half] = cplx(big[half].real() < 0 ? -1.0 / prod : 1.0 / prod);
    }
    SpectrumSummary s;
    for (const cplx& z : eig) {
        s.moduli.push_back(std::abs(z));
        if (std::abs(z.imag()) > 1e-8 * std::abs(z)) s.isRealSplit = false;
    }
    std::sort(s.moduli.begin(), s.moduli.end());
    for (std::size_t i = 1; i < n; ++i)
        if (s.moduli[i] - s.moduli[i - 1] <= 1e-8 * s.moduli[i]) s.isRealSplit = false;
    return s;
}

}  // namespace

SpectrumSummary spectrum(const Mat& m, const Mat& minv) {
    return combine(eigenvalues_of(m), eigenvalues_of(minv));
}

SpectrumSummary spectrum(const Mat& m) { return spectrum(m, m.partialPivLu().inverse()); }

namespace {

std::vector<cplx> eigenvalues_hp(const Mat128& m) {
    Eigen::EigenSolver<Mat128> es(m, false);
    std::vector<cplx> out;
    for (int i = 0; i < m.rows(); ++i)
        out.emplace_back(static_cast<double>(es.eigenvalues()(i).real()), static_cast<double>(es.eigenvalues()(i).imag()));
    return out;
}

Mat128 evaluate_hp(const LinearRepresentation& rep, const Word& w) {
    Mat128 out = Mat128::Identity(rep.dim(), rep.dim());
    for (Letter l : w) out = out * widen(rep.letter(l));
    return out;
}

}  // namespace

SpectrumSummary spectrum(const LinearRepresentation& rep, const Word& w) {
    return combine(eigenvalues_hp(evaluate_hp(rep, w)), eigenvalues_hp(evaluate_hp(rep, w.inverse())));
}

double eigen_period_sl(const SpectrumSummary& s) { return std::log(s.moduli.back() / s.moduli.front()); }
double eigen_period_sl(const Mat& m) { return eigen_period_sl(spectrum(m)); }

double c_value(const SpectrumSummary& s) {
    const std::size_t n = s.moduli.size() / 2;
    double c = 1.0;
    for (std::size_t i = n; i < 2 * n; ++i) c *= s.moduli[i];
    return c;
}

double c_value(const Mat& m) {
    if (m.rows() % 2 != 0 || m.rows() != m.cols()) throw Error("c_value needs a 2n x 2n matrix");
    const int n = static_cast<int>(m.rows() / 2);
    Mat J = standard_form(n);
    if ((m.transpose() * J * m - J).norm() > 1e-6 * std::max(1.0, m.squaredNorm())) throw Error("c_value: matrix is not symplectic");
    return c_value(spectrum(m, -J * m.transpose() * J));
}

double displacement(const SpectrumSummary& s, DisplacementKind kind) {
    if (kind == DisplacementKind::Riemannian) {
        double acc = 0.0;
        for (double m : s.moduli) acc += std::log(m) * std::log(m);
        return std::sqrt(acc);
    }
    // log of the mean, written to stay finite for huge moduli
    const double top = s.moduli.back();
    double acc = 0.0;
    for (double m : s.moduli) acc += (m / top) * (m / top);
    return 2 * std::log(top) + std::log(acc / static_cast<double>(s.moduli.size()));
}

double displacement(const Mat& m, DisplacementKind kind) { return displacement(spectrum(m), kind); }

double translation_length_h2(const Mat& m) {
    if (m.rows() != 2 || m.cols() != 2) throw Error("translation_length_h2 needs a 2x2 matrix");
    double tr = std::abs(m.trace());
    if (!(tr > 2.0)) throw Error("not hyperbolic");
    return 2.0 * std::acosh(tr / 2.0);
}

namespace {

template <int N>
struct FixedEval {
    using M = Eigen::Matrix<double, N, N>;
    std::vector<M> fwd, inv;

    explicit FixedEval(const LinearRepresentation& rep) {
        for (int g = 0; g < rep.generators(); ++g) {
            fwd.push_back(rep.image(g));
            inv.push_back(rep.inverse_image(g));
        }
    }
    SpectrumSummary operator()(const Word& w) const {
        M a = M::Identity(), b = M::Identity();
        for (std::size_t k = 0; k < w.size(); ++k) {
            Letter l = w[k];
            a = a * (l.sign() > 0 ? fwd : inv)[static_cast<std::size_t>(l.gen())];
            Letter r = w[w.size() - 1 - k].inverse();
            b = b * (r.sign() > 0 ? fwd : inv)[static_cast<std::size_t>(r.gen())];
        }
        return combine(eigenvalues_of(a), eigenvalues_of(b));
    }
};

std::function<SpectrumSummary(const Word&)> spectrum_evaluator(const LinearRepresentation& rep) {
    switch (rep.dim()) {
        case 2: return FixedEval<2>(rep);
        case 3: return FixedEval<3>(rep);
        case 4: return FixedEval<4>(rep);
        case 6: return FixedEval<6>(rep);
        default:
            return [&rep](const Word& w) { return spectrum(evaluate(rep, w), evaluate(rep, w.inverse())); };
    }
}

}  // namespace

WellDisplacingReport verify_well_displacing(const LinearRepresentation& rep, int maxLen,
                                            const std::function<void(const WellDisplacingRow&)>& sink,
                                            DisplacementKind kind) {
    WellDisplacingReport report;
    report.maxLen = maxLen;
    report.minChainSlack = std::numeric_limits<double>::infinity();
    report.minDisplacementByLength.assign(static_cast<std::size_t>(maxLen + 1), std::numeric_limits<double>::infinity());
    const bool sp = rep.tag().kind == GroupKind::Symplectic;
    const double n = rep.tag().n;
    auto eval = spectrum_evaluator(rep);

    for_each_conjugacy_class(maxLen, [&](const Word& w) {
        SpectrumSummary s = eval(w);
        WellDisplacingRow row;
        row.conjugacyLength = static_cast<int>(w.size());
        row.displacement = displacement(s, kind);
        double dp = displacement(s, DisplacementKind::Paper);
        if (sp) {
            row.period = 2 * std::log(c_value(s));
            row.slack = dp + std::log(2 * n) - row.period / n;
        } else {
            row.period = eigen_period_sl(s);
            row.slack = dp + std::log(n) - 2 / n * row.period;
        }
        ++report.classes;
        if (row.slack < -1e-9) ++report.chainViolations;
        if (row.slack < report.minChainSlack) {
            report.minChainSlack = row.slack;
            report.worstWord = w;
        }
        double& m = report.minDisplacementByLength[static_cast<std::size_t>(row.conjugacyLength)];
        m = std::min(m, row.displacement);
        if (sink) {
            row.word = w;
            sink(row);
        }
    }, rep.presentation());

    // last edge of the lower convex hull of (L, min displacement at L)
    const auto& m = report.minDisplacementByLength;
    const double mL = m[static_cast<std::size_t>(maxLen)];
    double A = -std::numeric_limits<double>::infinity();
    for (int L = 1; L < maxLen; ++L)
        if (std::isfinite(m[static_cast<std::size_t>(L)])) A = std::max(A, (mL - m[static_cast<std::size_t>(L)]) / (maxLen - L));
    if (!std::isfinite(A)) A = 0.0;
    report.A = std::max(0.0, A);
    report.B = -std::numeric_limits<double>::infinity();
    for (int L = 1; L <= maxLen; ++L)
        if (std::isfinite(m[static_cast<std::size_t>(L)])) report.B = std::max(report.B, report.A * L - m[static_cast<std::size_t>(L)]);
    return report;
}

std::vector<std::pair<Word, double>> displacement_spectrum(const LinearRepresentation& rep, const std::vector<Word>& words,
                                                           DisplacementKind kind) {
    auto eval = spectrum_evaluator(rep);
    std::vector<std::pair<Word, double>> out;
    for (const Word& w : words) out.emplace_back(w, w.empty() ? 0.0 : displacement(eval(w), kind));
    return out;
}

}  // namespace surfacelab
