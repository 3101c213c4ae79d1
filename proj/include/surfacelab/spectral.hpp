#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "surfacelab/representation.hpp"

namespace surfacelab {

struct SpectrumSummary {
    std::vector<double> moduli;  // ascending
    bool isRealSplit = true;     // real eigenvalues with distinct moduli
};

// Large moduli come from m, small ones from minv, so both ends keep relative accuracy.
SpectrumSummary spectrum(const Mat& m, const Mat& minv);
// inverse by LU; small moduli lose accuracy once m is badly conditioned
SpectrumSummary spectrum(const Mat& m);
SpectrumSummary spectrum(const LinearRepresentation& rep, const Word& w);

double eigen_period_sl(const Mat& m);
double eigen_period_sl(const SpectrumSummary& s);

// product of the n largest moduli of a 2n x 2n symplectic matrix
double c_value(const Mat& m);
double c_value(const SpectrumSummary& s);

enum class DisplacementKind { Paper, Riemannian };
// Paper: log(mean |lambda|^2); Riemannian: sqrt(sum log^2 |lambda|)
double displacement(const Mat& m, DisplacementKind kind = DisplacementKind::Paper);
double displacement(const SpectrumSummary& s, DisplacementKind kind = DisplacementKind::Paper);

double translation_length_h2(const Mat& m);

struct WellDisplacingRow {
    Word word;
    int conjugacyLength = 0;
    double displacement = 0.0;
    double period = 0.0;  // eigen period (SL) or 2 log c (Sp)
    double slack = 0.0;
};

struct WellDisplacingReport {
    int maxLen = 0;
    long classes = 0;
    long chainViolations = 0;
    double minChainSlack = 0.0;
    Word worstWord;
    double A = 0.0, B = 0.0;
    std::vector<double> minDisplacementByLength;  // index = length
};

WellDisplacingReport verify_well_displacing(const LinearRepresentation& rep, int maxLen,
                                            const std::function<void(const WellDisplacingRow&)>& sink = {},
                                            DisplacementKind kind = DisplacementKind::Paper);

std::vector<std::pair<Word, double>> displacement_spectrum(const LinearRepresentation& rep, const std::vector<Word>& words,
                                                           DisplacementKind kind = DisplacementKind::Paper);

}  // namespace surfacelab
