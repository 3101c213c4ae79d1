#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "surfacelab/representation.hpp"
#include "surfacelab/spd.hpp"

namespace surfacelab {

// Triangulated fundamental octagon for a Fenchel-Nielsen point.
// Positions live in the unit-determinant 2x2 SPD model of the hyperbolic plane (distances scaled by sqrt 2).
struct TriangulatedDomain {
    struct Gluing {
        int vertex = 0, partner = 0;
        Word word;  // value(partner) = rho(word) . value(vertex)
    };
    // lifted point rho(word) . (class representative)
    struct Corner {
        int cls = 0;
        Word word;
    };
    // edge of the quotient: class a to class b seen through word, cotangent weight
    struct Edge {
        int a = 0, b = 0;
        Word word;
        double weight = 0.0;
    };

    FNCoordinates fn;
    int resolution = 0;
    Mat frame;  // positions are taken after conjugating the Fuchsian group by this matrix
    Mat basePoint;
    std::vector<Word> cornerWords;  // prefixes of the relator, corner k = cornerWords[k] . basePoint
    std::vector<Mat> positions;
    std::vector<std::array<Corner, 3>> triangles;        // positively oriented, after flips
    std::vector<std::array<Mat, 3>> trianglePositions;
    std::vector<std::array<double, 3>> cotangents;       // cot of the comparison angle at each corner
    int flips = 0;
    std::vector<int> vertexClass;
    std::vector<Word> vertexWord;  // value(v) = rho(vertexWord[v]) . value(representative of its class)
    std::vector<int> classRepresentative;
    std::vector<Gluing> sideGluings;
    std::vector<Edge> edges;

    int vertices() const { return static_cast<int>(positions.size()); }
    int classes() const { return static_cast<int>(classRepresentative.size()); }
};

// 8 * resolution^2 triangles, flipped until every cotangent weight is positive
TriangulatedDomain build_domain(const FNCoordinates& fn, int resolution);

struct EquivariantMeshMap {
    std::vector<Mat> values;                          // one per mesh vertex
    std::vector<std::array<Mat, 3>> triangleValues;  // at the lifted triangle corners
};

// value of every vertex from the class representatives
EquivariantMeshMap expand_map(const TriangulatedDomain& mesh, const LinearRepresentation& rep, const std::vector<Mat>& classValues);
double equivariance_residual(const TriangulatedDomain& mesh, const LinearRepresentation& rep, const EquivariantMeshMap& f);

struct WeightedEdge {
    int a = 0, b = 0;
    double weight = 0.0;
};
// 1/2 sum w d(P_a, P_b)^2
double dirichlet_sum(const std::vector<WeightedEdge>& edges, const std::vector<Mat>& values);

// Raw discrete energy 1/2 sum w d^2 with the SPD distance. Throws "not equivariant" above 1e-4.
double discrete_energy(const TriangulatedDomain& mesh, const LinearRepresentation& rep, const EquivariantMeshMap& f);

// Factor that turns raw energies and areas into the hyperbolic normalization:
// 3 / (n (n^2 - 1)) for SL(n), 1 / (2n) for Sp(2n).
double energy_normalization(const GroupTag& tag);

struct AreaReport {
    double area = 0.0;
    std::vector<int> flagged;  // triangles whose side lengths violate the triangle inequality
};
AreaReport discrete_area(const TriangulatedDomain& mesh, const EquivariantMeshMap& f);

struct RelaxOptions {
    int maxIters = 20000;
    double tol = 1e-6;
    const std::vector<Mat>* start = nullptr;  // class values
    double overRelaxation = 1.8;              // step past the neighbor mean along the geodesic; 1 is plain averaging
};

struct RelaxResult {
    EquivariantMeshMap map;
    std::vector<Mat> classValues;
    std::vector<double> energies;  // raw energy after each sweep, starting with the initial map
    int iterations = 0;
    double gradient = 0.0;  // max per-class gradient norm
    bool converged = false;
};

RelaxResult relax(const TriangulatedDomain& mesh, const LinearRepresentation& rep, const RelaxOptions& opts = {});

// per-class gradient of the raw energy, whitened at the class value
std::vector<Mat> energy_gradient(const TriangulatedDomain& mesh, const LinearRepresentation& rep, const std::vector<Mat>& classValues);

struct NotConverged : Error {
    std::vector<double> trajectory;
    NotConverged(std::vector<double> t) : Error("not converged"), trajectory(std::move(t)) {}
};

EquivariantMeshMap harmonic_relax(const TriangulatedDomain& mesh, const LinearRepresentation& rep, int maxIters, double tol);

struct Differential {
    std::vector<std::complex<double>> values;  // per triangle
    std::vector<int> flagged;                  // degenerate triangles, value set to 0
    double normalization = 1.0;                // factor applied to the trace polynomial
    double sup() const;
};

// kappa (g(f_x, f_x) - g(f_y, f_y) - 2 i g(f_x, f_y)) in the comparison chart of each triangle
Differential hopf_differential(const TriangulatedDomain& mesh, const EquivariantMeshMap& f, double kappa = 1.0);
// tr (X - iY)^k with X, Y the whitened partial derivatives
Differential higher_differential(const TriangulatedDomain& mesh, const EquivariantMeshMap& f, int k);

// Exact conformal equivariant map of the mesh's own hyperbolic structure, lifted to the tag
// (symmetric power for SL(n), diagonal copies for Sp(2n)); it is equivariant for the lift of fuchsian_genus2(mesh.fn).
EquivariantMeshMap conformal_reference_map(const TriangulatedDomain& mesh, const GroupTag& tag);
LinearRepresentation lifted_domain_group(const TriangulatedDomain& mesh, const GroupTag& tag);
// sup |q2| of the reference map: the discretization floor of the Hopf differential on this mesh
double hopf_noise_floor(const TriangulatedDomain& mesh, const GroupTag& tag);

struct EnergyRow {
    FNCoordinates fn;
    double energy = 0.0;  // normalized
    double area = 0.0;    // normalized
    int iterations = 0;
    bool converged = false;
    std::string error;
};

std::vector<EnergyRow> energy_over_teich(const LinearRepresentation& rep, const std::vector<FNCoordinates>& family,
                                         int resolution, const RelaxOptions& opts = {});

struct MinAreaResult {
    FNCoordinates fn;
    double energy = 0.0;  // normalized
    int evaluations = 0;
    bool budgetExhausted = false;
    std::vector<EnergyRow> trace;
};

// cyclic coordinate descent with golden-section line searches over (log lengths, twists)
MinAreaResult min_area(const LinearRepresentation& rep, int searchBudget, int resolution,
                       const FNCoordinates& start = FNCoordinates::canonical(), const RelaxOptions& opts = {});

}  // namespace surfacelab
