#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "surfacelab/cross_ratio.hpp"
#include "surfacelab/energy.hpp"
#include "surfacelab/invariants.hpp"
#include "surfacelab/spectral.hpp"
#include "surfacelab/symplectic.hpp"

using namespace surfacelab;

namespace {

constexpr double kPi = std::numbers::pi;

// tolerances
constexpr double kAxiomTol = 1e-8;
constexpr int kAxiomSamples = 1000;
constexpr double kAxiomSeconds = 120;
constexpr int kPeriodMaxLen = 6;
constexpr double kPeriodTol = 1e-6;
constexpr int kKernelSamples = 1000;
constexpr double kKernelTol = 1e-8;
constexpr int kPositiveSamples = 10000;
constexpr int kDisplacingMaxLen = 10;
constexpr double kChainSlack = -1e-9;
constexpr double kFlowAdditivityTol = 1e-8;
constexpr double kFlowPeriodTol = 1e-7;
constexpr int kFlowPairs = 100;
constexpr int kEnergyResolution = 8;
constexpr double kGaussBonnetTol = 0.10;
constexpr double kEnergySeconds = 600;
constexpr double kToledoTol = 0.05;
constexpr int kToledoCoarse = 6, kToledoFine = 8, kToledoBudget = 6;
constexpr int kHopfResolution = 8, kHopfBudget = 6;
constexpr double kHopfFloorFactor = 10, kHopfStretchFactor = 5;
constexpr int kInterLow = 8, kInterHigh = 10;
constexpr double kInterSensitivity = 0.05;
constexpr double kAreaSlack = 1e-9;

// statements that are false as written; see README
const std::set<int> kKnownFailures{4, 11};

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double x, int digits = 6) {
    std::ostringstream s;
    s.precision(digits);
    s << x;
    return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double angle_gap(double a, double b) {
    const double d = ccw_distance(a, b);
    return std::min(d, 2 * kPi - d);
}

LinearRepresentation sym(int n) { return irreducible_embed(fuchsian_canonical(), n); }

Outcome axioms() {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    const std::vector<CrossRatioEvaluator> evs{classical_evaluator(), hitchin_cross_ratio(sym(3)), hitchin_cross_ratio(sym(4)),
                                               maximal_cross_ratio(diagonal_embed(fuchsian_canonical(), 2))};
    std::uint64_t seed = 11;
    for (const auto& b : evs) {
        const auto r = check_axioms(b, kAxiomSamples, seed++);
        o.pass = o.pass && r.samples == kAxiomSamples && r.evaluationErrors == 0 && r.worst() <= kAxiomTol;
        o.detail += b.name() + " " + fmt(r.worst(), 3) + "; ";
    }
    const double t = seconds_since(t0);
    o.pass = o.pass && t <= kAxiomSeconds;
    o.detail += fmt(t, 3) + " s";
    return o;
}

Outcome period_identity(const std::vector<std::pair<std::string, LinearRepresentation>>& reps, bool maximal) {
    Outcome o;
    for (const auto& [name, rep] : reps) {
        const auto b = maximal ? maximal_cross_ratio(rep) : hitchin_cross_ratio(rep);
        const auto r = check_period_identity(b, kPeriodMaxLen, [&rep, maximal](const Word& w) {
            const auto s = spectrum(rep, w);
            return maximal ? 2 * std::log(c_value(s)) : eigen_period_sl(s);
        });
        o.pass = o.pass && r.count > 0 && r.maxError <= kPeriodTol;
        o.detail += name + " " + std::to_string(r.count) + " classes err " + fmt(r.maxError, 3) + "; ";
    }
    return o;
}

Outcome lagrangian_kernel() {
    Outcome o;
    std::mt19937_64 rng(404);
    std::normal_distribution<double> gauss;
    double worst = 0.0;
    for (int i = 0; i < kKernelSamples; ++i) {
        const int n = 1 + i % 3;
        const Mat M = random_symplectic(rng, n);
        Mat D(n, n), Q(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) D(r, c) = gauss(rng) + (r == c ? 2.0 : 0.0);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c <= r; ++c) Q(r, c) = Q(c, r) = gauss(rng);
        Mat block = Mat::Zero(2 * n, 2 * n);
        block.topLeftCorner(n, n) = D;
        block.bottomRightCorner(n, n) = D.inverse().transpose();
        const Mat S = M * block * M.inverse();
        const LagrangianFrame E(M * horizontal_frame(n).frame), F(M * vertical_frame(n).frame), G = graph_frame(Q);
        const double expected = std::pow(D.determinant(), 2);
        const double got = symplectic_period<double>(S, E, F, G);
        worst = std::max(worst, std::abs(got - expected) / std::abs(expected));
    }
    const bool kernelOk = worst <= kKernelTol;

    long positiveViolations = 0, literalViolations = 0, correctedViolations = 0, extra = 0;
    for (int i = 0; i < kPositiveSamples; ++i) {
        const auto c = random_positive_configuration(rng, 1 + i % 3, i % 2 == 0);
        const double B = cross_ratio_B(c.E, c.F1, c.G, c.F2);
        if (!(B > 0)) ++positiveViolations;
        if (is_positive_triple(c.F1, c.F2, c.G)) {
            ++extra;
            if (!(B > 1)) ++literalViolations;
            if (!(B < 1) || !(cross_ratio_B(c.E, c.F2, c.G, c.F1) > 1)) ++correctedViolations;
        }
    }
    o.pass = kernelOk && positiveViolations == 0 && literalViolations == 0;
    o.detail = "period residual " + fmt(worst, 3) + "; B>0 violations " + std::to_string(positiveViolations) + "/" +
               std::to_string(kPositiveSamples) + "; B>1 violations " + std::to_string(literalViolations) + "/" +
               std::to_string(extra) + " (reversed order B(E,F2,G,F1)>1: " + std::to_string(correctedViolations) +
               " violations)";
    return o;
}

Outcome well_displacing() {
    Outcome o;
    const std::vector<std::pair<std::string, LinearRepresentation>> reps{
        {"fuchsian", fuchsian_canonical()},
        {"sym3", sym(4)},
        {"sp4", diagonal_embed(fuchsian_canonical(), 2)},
        {"trivial", trivial_representation({GroupKind::SpecialLinear, 3})}};
    for (const auto& [name, rep] : reps) {
        const auto r = verify_well_displacing(rep, kDisplacingMaxLen);
        const bool fitOk = name == "trivial" ? r.A == 0.0 : r.A > 0.0;
        o.pass = o.pass && r.chainViolations == 0 && r.minChainSlack >= kChainSlack && fitOk;
        o.detail += name + " A " + fmt(r.A, 4) + " slack " + fmt(r.minChainSlack, 3) + "; ";
    }
    return o;
}

Outcome toledo() {
    Outcome o;
    const auto rho = fuchsian_canonical();
    const int e = euler_number(rho);
    const int tau = toledo_product({rho, rho});
    bool invariant = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) invariant = invariant && euler_number(deform(rho, seed, 1e-2)) == e;
    o.pass = std::abs(e) == 2 && std::abs(tau) == 2 * 2 && milnor_wood_check(tau, 2, 2) && invariant;
    o.detail = "euler " + std::to_string(e) + ", toledo " + std::to_string(tau) + ", deformations " + (invariant ? "agree" : "differ");
    return o;
}

Outcome flows() {
    Outcome o;
    const auto classes = enumerate_conjugacy_classes(4);
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> pick(0, classes.size() - 1);
    std::uniform_real_distribution<double> time(-1.5, 1.5);
    double add = 0.0, per = 0.0;
    int pairs = 0;
    for (const auto& [name, b] : {std::pair{"classical", classical_evaluator()}, std::pair{"sym2", hitchin_cross_ratio(sym(3))}}) {
        const auto rep = name == std::string("classical") ? fuchsian_canonical() : sym(3);
        int done = 0;
        while (done < kFlowPairs) {
            const Word g = classes[pick(rng)], h = classes[pick(rng)];
            const Mat A = evaluate(rep, g), Bm = evaluate(rep, h);
            if ((A * Bm - Bm * A).norm() < 1e-9 * A.norm() * Bm.norm()) continue;
            const auto minus = BoundaryPoint::fixed_point(g, Pole::Repelling), plus = BoundaryPoint::fixed_point(g);
            const auto y = BoundaryPoint::fixed_point(h, done % 2 ? Pole::Repelling : Pole::Attracting);
            const double s = time(rng), t = time(rng);
            const auto us = flow_point(b, minus, y, plus, s);
            add = std::max(add, angle_gap(flow_point(b, minus, us, plus, t).angle, flow_point(b, minus, y, plus, s + t).angle));
            const auto landed = flow_point(b, minus, y, plus, period(b, g, y));
            per = std::max(per, angle_gap(landed.angle, y.translated(g).angle));
            ++done;
            ++pairs;
        }
    }
    o.pass = add <= kFlowAdditivityTol && per <= kFlowPeriodTol;
    o.detail = std::to_string(pairs) + " pairs, additivity " + fmt(add, 3) + ", period " + fmt(per, 3);
    return o;
}

Outcome energy() {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    const auto rho = fuchsian_canonical();
    const auto D = build_domain(FNCoordinates::canonical(), kEnergyResolution);
    const auto r = relax(D, rho);
    const double kappa = energy_normalization(rho.tag());
    const double E = kappa * r.energies.back(), A = kappa * discrete_area(D, r.map).area;
    const bool gb = D.triangles.size() >= 512 && r.converged && std::abs(E - 4 * kPi) <= kGaussBonnetTol * 4 * kPi;
    bool areaOk = A <= E * (1 + kAreaSlack);

    const std::vector<double> scales{0.25, 0.5, 1.0, 2.0, 4.0};
    std::vector<FNCoordinates> ray;
    for (double s : scales) {
        auto fn = FNCoordinates::canonical();
        fn.lengths[0] *= s;
        ray.push_back(fn);
    }
    const auto rows = energy_over_teich(rho, ray, kEnergyResolution);
    bool rayOk = true;
    std::string values;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rayOk = rayOk && rows[i].converged && rows[i].error.empty();
        areaOk = areaOk && rows[i].area <= rows[i].energy * (1 + kAreaSlack);
        values += fmt(rows[i].energy, 5) + (i + 1 < rows.size() ? " " : "");
    }
    rayOk = rayOk && rows[0].energy > rows[1].energy && rows[1].energy > rows[2].energy && rows[3].energy > rows[2].energy &&
            rows[4].energy > rows[3].energy;
    const double t = seconds_since(t0);
    o.pass = gb && areaOk && rayOk && t <= kEnergySeconds;
    o.detail = std::to_string(D.triangles.size()) + " triangles, E " + fmt(E, 7) + " vs 4pi, area " + fmt(A, 7) + "; ray " + values +
               "; " + fmt(t, 3) + " s";
    return o;
}

Outcome min_area_toledo() {
    Outcome o;
    const auto rho = diagonal_embed(fuchsian_canonical(), 2);
    const int tau = toledo_product({fuchsian_canonical(), fuchsian_canonical()});
    const double n = rho.tag().n;
    double deficit[2];
    int i = 0;
    for (int m : {kToledoCoarse, kToledoFine}) {
        const auto r = min_area(rho, kToledoBudget, m);
        const double scaled = n / (2 * kPi) * r.energy;
        deficit[i] = scaled - std::abs(tau);
        o.pass = o.pass && scaled >= (1 - kToledoTol) * std::abs(tau);
        o.detail += "m=" + std::to_string(m) + " " + fmt(scaled, 6) + "; ";
        ++i;
    }
    o.pass = o.pass && std::abs(deficit[1]) < std::abs(deficit[0]);
    o.detail += "|tau| " + std::to_string(std::abs(tau)) + ", deficit " + fmt(deficit[0], 4) + " -> " + fmt(deficit[1], 4);
    return o;
}

Outcome hopf() {
    Outcome o;
    const auto rho = sym(3);
    const double kappa = energy_normalization(rho.tag());
    const auto best = min_area(rho, kHopfBudget, kHopfResolution);
    const auto D = build_domain(best.fn, kHopfResolution);
    const auto r = relax(D, rho);
    const double q2 = hopf_differential(D, r.map, kappa).sup();
    const double floor = hopf_noise_floor(D, rho.tag());
    const double q3 = higher_differential(D, r.map, 3).sup();
    auto fn2 = best.fn;
    for (double& l : fn2.lengths) l *= 2;
    const auto D2 = build_domain(fn2, kHopfResolution);
    const auto r2 = relax(D2, rho);
    const double q2s = hopf_differential(D2, r2.map, kappa).sup();
    o.pass = r.converged && r2.converged && q2 <= kHopfFloorFactor * floor && q2s >= kHopfStretchFactor * q2;
    o.detail = "|q2| " + fmt(q2, 4) + ", floor " + fmt(floor, 4) + ", scaled |q2| " + fmt(q2s, 4) + ", |q3| " + fmt(q3, 4);
    return o;
}

Outcome intersections() {
    Outcome o;
    const auto g0 = FNCoordinates::canonical();
    const double self = intersection(g0, g0, kInterLow).estimate;
    const std::vector<double> pinch{1.0, 0.5, 0.25, 0.1};
    std::vector<double> hi, swapped;
    double sensitivity = 0.0;
    for (double p : pinch) {
        auto g = g0;
        g.lengths[0] *= p;
        const double low = intersection(g, g0, kInterLow).estimate;
        double reverse = 0.0;
        const auto high = intersection(g, g0, kInterHigh, [&reverse](const IntersectionRow& r) { reverse += r.lengthG / r.lengthG0; });
        hi.push_back(high.estimate);
        sensitivity = std::max(sensitivity, std::abs(high.estimate - low) / std::abs(high.estimate));
        swapped.push_back(reverse / static_cast<double>(high.count));
    }
    bool monotone = true, swappedMonotone = true;
    for (std::size_t i = 1; i < hi.size(); ++i) {
        monotone = monotone && hi[i] > hi[i - 1];
        swappedMonotone = swappedMonotone && swapped[i] > swapped[i - 1];
    }
    o.pass = self == 1.0 && monotone && sensitivity <= kInterSensitivity;
    o.detail = "inter(g0,g0) " + fmt(self, 17) + "; inter(g,g0) along pinch";
    for (double v : hi) o.detail += " " + fmt(v, 5);
    o.detail += "; L-sensitivity " + fmt(sensitivity, 3) + "; inter(g0,g)";
    for (double v : swapped) o.detail += " " + fmt(v, 5);
    o.detail += swappedMonotone ? " (rising)" : " (not rising)";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"cross ratio axioms", axioms},
        {"Hitchin period identity",
         [] {
             return period_identity({{"sym2", sym(3)},
                                     {"sym3", sym(4)},
                                     {"sym2 deformed", deform(sym(3), 21, 1e-2)},
                                     {"sym3 deformed", deform(sym(4), 22, 1e-2)}},
                                    false);
         }},
        {"maximal period identity", [] { return period_identity({{"sp4", diagonal_embed(fuchsian_canonical(), 2)}}, true); }},
        {"Lagrangian kernel", lagrangian_kernel},
        {"well displacing", well_displacing},
        {"Milnor-Wood and Toledo", toledo},
        {"flow solver", flows},
        {"energy and properness", energy},
        {"MinArea and Toledo", min_area_toledo},
        {"Hopf differential", hopf},
        {"intersection estimator", intersections},
    };
    std::vector<int> failed;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) failed.push_back(id);
    }
    bool unexpected = false;
    std::printf("%zu/%zu criteria pass", criteria.size() - failed.size(), criteria.size());
    for (int id : failed) {
        const bool known = kKnownFailures.count(id) > 0;
        unexpected = unexpected || !known;
        std::printf("%s %d%s", id == failed.front() ? "; failing:" : ",", id, known ? " (known)" : "");
    }
    std::printf("\n");
    return unexpected ? 1 : 0;
}
