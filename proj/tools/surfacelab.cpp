#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "surfacelab/cross_ratio.hpp"
#include "surfacelab/energy.hpp"
#include "surfacelab/invariants.hpp"
#include "surfacelab/spectral.hpp"

using namespace surfacelab;
using nlohmann::json;

namespace {

struct RunConfig {
    std::string command;
    std::string kind = "classical";  // classical, hitchin, maximal, trivial
    int n = 2;
    std::vector<double> lengths, twists;
    double eps = 0.0;
    std::uint64_t seed = 1;
    int maxLen = 6;
    int resolution = 8;
    double tol = 1e-6;
    int samples = 1000;
    int budget = 40;
    std::vector<double> scales{0.25, 0.5, 1.0, 2.0, 4.0};
    std::string out;
};

struct ConfigError : Error {
    using Error::Error;
};

void validate(const RunConfig& c) {
    if (!(c.tol > 0)) throw ConfigError("tolerance must be positive");
    if (c.maxLen < 1 || c.maxLen > 14) throw ConfigError("maxlen must be in 1..14");
    if (c.resolution < 1) throw ConfigError("resolution must be positive");
    if (c.samples < 1 || c.budget < 1) throw ConfigError("samples and budget must be positive");
    if (!c.lengths.empty() && c.lengths.size() != 3) throw ConfigError("--lengths takes three values");
    if (!c.twists.empty() && c.twists.size() != 3) throw ConfigError("--twists takes three values");
    for (double l : c.lengths)
        if (!(l > 0)) throw ConfigError("lengths must be positive");
    if (c.eps < 0) throw ConfigError("eps must be nonnegative");
    if (c.kind == "hitchin" && c.n < 2) throw ConfigError("hitchin needs n >= 2");
    if (c.kind == "maximal" && c.n < 1) throw ConfigError("maximal needs n >= 1");
    if (c.kind != "classical" && c.kind != "hitchin" && c.kind != "maximal" && c.kind != "trivial")
        throw ConfigError("unknown kind " + c.kind);
}

FNCoordinates fn_point(const RunConfig& c) {
    FNCoordinates fn = FNCoordinates::canonical();
    for (std::size_t i = 0; i < c.lengths.size(); ++i) fn.lengths[i] = c.lengths[i];
    for (std::size_t i = 0; i < c.twists.size(); ++i) fn.twists[i] = c.twists[i];
    return fn;
}

LinearRepresentation build_rep(const RunConfig& c) {
    const auto base = (c.lengths.empty() && c.twists.empty()) ? fuchsian_canonical() : fuchsian_genus2(fn_point(c));
    LinearRepresentation rep;
    if (c.kind == "classical") rep = base;
    else if (c.kind == "hitchin") rep = irreducible_embed(base, c.n);
    else if (c.kind == "maximal") rep = diagonal_embed(base, c.n);
    else rep = trivial_representation({GroupKind::SpecialLinear, c.n});
    if (c.eps > 0) rep = deform(rep, c.seed, c.eps);
    return rep;
}

std::string num(double x) {
    std::ostringstream s;
    s << std::setprecision(17) << x;
    return s.str();
}

class Report {
public:
    Report(const RunConfig& c) : dir_(c.out), name_(c.command) {
        summary_["command"] = c.command;
        summary_["config"] = {{"kind", c.kind}, {"n", c.n}, {"eps", c.eps}, {"seed", c.seed}, {"maxLen", c.maxLen},
                              {"resolution", c.resolution}, {"tol", c.tol}};
    }
    json& summary() { return summary_; }
    void header(std::initializer_list<std::string> cols) {
        std::string sep;
        for (const auto& col : cols) {
            csv_ << sep << col;
            sep = ",";
        }
        csv_ << "\n";
    }
    template <class... T>
    void row(const T&... cells) {
        std::string sep;
        ((csv_ << sep << cell(cells), sep = ","), ...);
        csv_ << "\n";
    }
    // whitespace table for gnuplot
    std::ostringstream& plot() { return plot_; }
    void check(const std::string& name, bool ok) {
        summary_["checks"][name] = ok;
        pass_ = pass_ && ok;
    }
    int finish() {
        summary_["pass"] = pass_;
        std::filesystem::create_directories(dir_);
        std::ofstream(dir_ / (name_ + ".json")) << summary_.dump(2) << "\n";
        std::ofstream(dir_ / (name_ + ".csv")) << csv_.str();
        if (!plot_.str().empty()) std::ofstream(dir_ / (name_ + ".dat")) << plot_.str();
        std::cout << name_ << ": " << (pass_ ? "pass" : "FAIL") << " (" << (dir_ / (name_ + ".json")).string() << ")\n";
        return pass_ ? 0 : 1;
    }

private:
    static std::string cell(double x) { return num(x); }
    static std::string cell(int x) { return std::to_string(x); }
    static std::string cell(long x) { return std::to_string(x); }
    static std::string cell(bool x) { return x ? "1" : "0"; }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    static std::string cell(const Word& w) { return w.empty() ? "e" : w.str(); }

    std::filesystem::path dir_;
    std::string name_;
    json summary_;
    std::ostringstream csv_, plot_;
    bool pass_ = true;
};

json fn_json(const FNCoordinates& fn) {
    return {{"lengths", fn.lengths}, {"twists", fn.twists}};
}

CrossRatioEvaluator evaluator(const RunConfig& c, const LinearRepresentation& rep) {
    if (c.kind == "classical" && c.eps == 0 && c.lengths.empty() && c.twists.empty()) return classical_evaluator();
    if (c.kind == "maximal") return maximal_cross_ratio(rep);
    if (c.kind == "trivial") throw ConfigError("the trivial representation has no cross ratio");
    return hitchin_cross_ratio(rep);
}

int run_rep_build(const RunConfig& c) {
    Report r(c);
    const auto rep = build_rep(c);
    r.summary()["group"] = rep.tag().str();
    r.summary()["relatorResidual"] = rep.relator_residual();
    r.summary()["groupResidual"] = rep.group_residual();
    r.header({"generator", "row", "col", "value"});
    for (int g = 0; g < rep.generators(); ++g)
        for (int i = 0; i < rep.dim(); ++i)
            for (int j = 0; j < rep.dim(); ++j) r.row(g, i, j, rep.image(g)(i, j));
    r.check("relator", rep.relator_residual() <= 1e-10);
    r.check("group", rep.group_residual() <= 1e-10);
    return r.finish();
}

int run_axioms(const RunConfig& c) {
    Report r(c);
    const auto rep = build_rep(c);
    const auto b = evaluator(c, rep);
    const auto a = check_axioms(b, c.samples, c.seed);
    r.summary()["evaluator"] = b.name();
    r.summary()["samples"] = a.samples;
    r.summary()["worst"] = a.worst();
    r.summary()["invariance"] = a.invariance;
    r.summary()["genericZero"] = a.genericZero;
    r.summary()["genericOne"] = a.genericOne;
    r.summary()["evaluationErrors"] = a.evaluationErrors;
    if (!a.firstError.empty()) r.summary()["firstError"] = a.firstError;
    r.header({"rule", "max_violation"});
    for (const auto& [rule, v] : a.maxViolation) r.row(rule, v);
    r.row("invariance", a.invariance);
    r.check("axioms", a.pass());
    return r.finish();
}

std::function<double(const Word&)> period_oracle(const RunConfig& c, const LinearRepresentation& rep) {
    if (c.kind == "maximal") return [rep](const Word& w) { return 2 * std::log(c_value(spectrum(rep, w))); };
    if (c.kind == "classical") return [rep](const Word& w) { return translation_length_h2(evaluate(rep, w)); };
    return [rep](const Word& w) { return eigen_period_sl(spectrum(rep, w)); };
}

int run_periods(const RunConfig& c) {
    Report r(c);
    const auto rep = build_rep(c);
    const auto b = evaluator(c, rep);
    const auto oracle = period_oracle(c, rep);
    r.header({"word", "lambda", "l_b", "ratio", "eigen_period"});
    double worst = 0.0;
    const auto cmp = compare_periods(b, fn_point(c), c.maxLen, [&](const PeriodRow& row) {
        const double exact = oracle(row.word);
        worst = std::max(worst, std::abs(row.period - exact));
        r.row(row.word, row.length, row.period, row.ratio, exact);
    });
    r.summary()["classes"] = cmp.count;
    r.summary()["minRatio"] = cmp.minRatio;
    r.summary()["maxRatio"] = cmp.maxRatio;
    r.summary()["A"] = cmp.A;
    r.summary()["periodIdentityError"] = worst;
    r.check("period identity", worst <= c.tol);
    return r.finish();
}

int run_displacing(const RunConfig& c) {
    Report r(c);
    const auto rep = build_rep(c);
    r.header({"word", "length", "displacement", "period", "slack"});
    const auto w = verify_well_displacing(rep, c.maxLen, [&](const WellDisplacingRow& row) {
        r.row(row.word, row.conjugacyLength, row.displacement, row.period, row.slack);
    });
    r.summary()["classes"] = w.classes;
    r.summary()["chainViolations"] = w.chainViolations;
    r.summary()["minChainSlack"] = w.minChainSlack;
    r.summary()["A"] = w.A;
    r.summary()["B"] = w.B;
    r.summary()["minDisplacementByLength"] = w.minDisplacementByLength;
    for (std::size_t L = 1; L < w.minDisplacementByLength.size(); ++L)
        r.plot() << L << " " << num(w.minDisplacementByLength[L]) << "\n";
    r.check("chain", w.chainViolations == 0 && w.minChainSlack >= -1e-9);
    return r.finish();
}

int run_invariants(const RunConfig& c) {
    Report r(c);
    const auto rep2 = (c.lengths.empty() && c.twists.empty()) ? fuchsian_canonical() : fuchsian_genus2(fn_point(c));
    const auto base = c.eps > 0 ? deform(rep2, c.seed, c.eps) : rep2;
    const int copies = c.kind == "maximal" ? c.n : 1;
    const int tau = toledo_product(std::vector<LinearRepresentation>(static_cast<std::size_t>(copies), base));
    r.summary()["euler"] = euler_number(base);
    r.summary()["toledo"] = tau;
    r.summary()["milnorWood"] = milnor_wood_check(tau, copies, 2);
    r.check("milnor wood", milnor_wood_check(tau, copies, 2));
    r.check("maximal", std::abs(tau) == 2 * copies);
    r.header({"word", "length_g", "length_g0", "ratio"});
    const auto est = intersection(fn_point(c), FNCoordinates::canonical(), c.maxLen, [&](const IntersectionRow& row) {
        r.row(row.word, row.lengthG, row.lengthG0, row.ratio);
    });
    r.summary()["intersection"] = {{"estimate", est.estimate}, {"classes", est.count}, {"maxLen", est.maxLen}};
    return r.finish();
}

RelaxOptions relax_options(const RunConfig& c) {
    RelaxOptions o;
    o.tol = c.tol;
    return o;
}

int run_energy_scan(const RunConfig& c) {
    Report r(c);
    const auto rep = build_rep(c);
    std::vector<FNCoordinates> family;
    for (double s : c.scales) {
        auto fn = fn_point(c);
        fn.lengths[0] *= s;
        family.push_back(fn);
    }
    const auto rows = energy_over_teich(rep, family, c.resolution, relax_options(c));
    r.header({"scale", "l1", "energy", "area", "iterations", "converged", "error"});
    json jrows = json::array();
    bool ok = true, areaBelow = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& e = rows[i];
        r.row(c.scales[i], e.fn.lengths[0], e.energy, e.area, e.iterations, e.converged, e.error);
        r.plot() << num(c.scales[i]) << " " << num(e.energy) << " " << num(e.area) << "\n";
        jrows.push_back({{"scale", c.scales[i]}, {"energy", e.energy}, {"area", e.area}, {"converged", e.converged}});
        ok = ok && e.converged && e.error.empty();
        areaBelow = areaBelow && e.area <= e.energy * (1 + 1e-9);
    }
    r.summary()["rows"] = jrows;
    r.check("converged", ok);
    r.check("area below energy", areaBelow);
    return r.finish();
}

int run_min_area(const RunConfig& c) {
    Report r(c);
    const auto rep = build_rep(c);
    const auto m = min_area(rep, c.budget, c.resolution, fn_point(c), relax_options(c));
    r.summary()["minArea"] = m.energy;
    r.summary()["fn"] = fn_json(m.fn);
    r.summary()["evaluations"] = m.evaluations;
    r.summary()["budgetExhausted"] = m.budgetExhausted;
    const double n = rep.tag().n;
    r.summary()["scaledMinArea"] = n / (2 * std::numbers::pi) * m.energy;
    r.header({"evaluation", "l1", "l2", "l3", "t1", "t2", "t3", "energy", "area", "converged"});
    bool ok = true;
    for (std::size_t i = 0; i < m.trace.size(); ++i) {
        const auto& e = m.trace[i];
        r.row(static_cast<int>(i), e.fn.lengths[0], e.fn.lengths[1], e.fn.lengths[2], e.fn.twists[0], e.fn.twists[1],
              e.fn.twists[2], e.energy, e.area, e.converged);
        r.plot() << i << " " << num(e.energy) << "\n";
        ok = ok && e.converged;
    }
    r.check("converged", ok);
    return r.finish();
}

int run_differentials(const RunConfig& c) {
    Report r(c);
    const auto rep = build_rep(c);
    const auto D = build_domain(fn_point(c), c.resolution);
    const auto res = relax(D, rep, relax_options(c));
    const double kappa = energy_normalization(rep.tag());
    const auto q2 = hopf_differential(D, res.map, kappa);
    const double floor = hopf_noise_floor(D, rep.tag());
    r.summary()["triangles"] = D.triangles.size();
    r.summary()["energy"] = kappa * res.energies.back();
    r.summary()["q2Sup"] = q2.sup();
    r.summary()["noiseFloor"] = floor;
    r.summary()["converged"] = res.converged;
    std::optional<Differential> q3;
    if (rep.dim() >= 3) {
        q3 = higher_differential(D, res.map, 3);
        r.summary()["q3Sup"] = q3->sup();
    }
    r.header({"triangle", "q2_re", "q2_im", "q3_re", "q3_im"});
    for (std::size_t t = 0; t < q2.values.size(); ++t) {
        const std::complex<double> v3 = q3 ? q3->values[t] : 0.0;
        r.row(static_cast<int>(t), q2.values[t].real(), q2.values[t].imag(), v3.real(), v3.imag());
    }
    r.check("converged", res.converged);
    return r.finish();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"surfacelab: numerical checks for genus 2 surface group representations"};
    app.require_subcommand(1);
    RunConfig c;
    if (const char* env = std::getenv("SURFACELAB_OUT")) c.out = env;
    else c.out = ".";

    auto common = [&c](CLI::App* s) {
        s->add_option("--kind", c.kind, "classical, hitchin, maximal or trivial")->capture_default_str();
        s->add_option("--n", c.n, "SL(n) for hitchin/trivial, Sp(2n) for maximal")->capture_default_str();
        s->add_option("--lengths", c.lengths, "Fenchel-Nielsen lengths")->expected(3);
        s->add_option("--twists", c.twists, "Fenchel-Nielsen twists")->expected(3);
        s->add_option("--eps", c.eps, "size of a random Newton-corrected deformation")->capture_default_str();
        s->add_option("--seed", c.seed)->capture_default_str();
        s->add_option("--maxlen", c.maxLen, "longest conjugacy class")->capture_default_str();
        s->add_option("--resolution", c.resolution, "mesh subdivision per octagon side")->capture_default_str();
        s->add_option("--tol", c.tol)->capture_default_str();
        s->add_option("--out", c.out, "output directory (default $SURFACELAB_OUT or .)");
    };
    std::map<std::string, std::function<int(const RunConfig&)>> commands{
        {"rep-build", run_rep_build},     {"axioms", run_axioms},           {"periods", run_periods},
        {"displacing", run_displacing},   {"invariants", run_invariants},   {"energy-scan", run_energy_scan},
        {"min-area", run_min_area},       {"differentials", run_differentials}};
    for (const auto& [name, fn] : commands) {
        auto* s = app.add_subcommand(name);
        common(s);
        if (name == "axioms") s->add_option("--samples", c.samples)->capture_default_str();
        if (name == "energy-scan") s->add_option("--scales", c.scales, "multipliers of the first length")->capture_default_str();
        if (name == "min-area") s->add_option("--budget", c.budget, "energy evaluations")->capture_default_str();
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }
    c.command = app.get_subcommands().front()->get_name();
    try {
        validate(c);
        return commands.at(c.command)(c);
    } catch (const ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << c.command << " failed: " << e.what() << "\n";
        return 1;
    }
}
