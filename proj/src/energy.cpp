#include "surfacelab/energy.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <tuple>

namespace surfacelab {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kMaxMove = 2.0;

double hyperbolic_distance(const Mat& P, const Mat& Q) { return spd_distance(P, Q) / kSqrt2; }

// Klein model point of a unit-determinant 2x2 SPD matrix
Eigen::Vector2d klein(const Mat& P) {
    const double s = P(0, 0) + P(1, 1);
    return {(P(0, 0) - P(1, 1)) / s, 2 * P(0, 1) / s};
}

// free reduction plus replacement of any piece longer than half a relator by the shorter complement
Word shorten(const Word& w, const Presentation& pres = genus2()) {
    std::vector<std::vector<Letter>> rels;
    for (const Word& r : {pres.relator, pres.relator.inverse()})
        for (std::size_t s = 0; s < r.size(); ++s) rels.push_back(r.rotated(s).letters());
    std::vector<Letter> cur = reduce(w).letters();
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < cur.size() && !changed; ++i)
            for (const auto& r : rels) {
                std::size_t k = 0;
                while (k < r.size() && i + k < cur.size() && cur[i + k] == r[k]) ++k;
                if (2 * k <= r.size()) continue;
                std::vector<Letter> next(cur.begin(), cur.begin() + static_cast<long>(i));
                for (std::size_t m = r.size(); m-- > k;) next.push_back(r[m].inverse());
                next.insert(next.end(), cur.begin() + static_cast<long>(i + k), cur.end());
                cur = reduce(Word(std::move(next))).letters();
                changed = true;
                break;
            }
    }
    return Word(std::move(cur));
}

double klein_orientation(const std::array<Mat, 3>& p) {
    const Eigen::Vector2d a = klein(p[0]), b = klein(p[1]), c = klein(p[2]);
    return (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
}

Mat from_klein(double x, double y) {
    const double d = std::sqrt(1 - x * x - y * y);
    Mat P(2, 2);
    P << (1 + x) / d, y / d, y / d, (1 - x) / d;
    return P;
}

// smallest of min(theta, pi - theta) over the interior angles of the corner octagon; -1 unless convex
double convexity_margin(const std::vector<Mat>& cornerImages, const Mat& p) {
    const std::size_t S = cornerImages.size();
    std::vector<Mat> C;
    for (const Mat& m : cornerImages) C.push_back(congruence(m, p));
    double margin = std::numbers::pi, sum = 0.0;
    for (std::size_t k = 0; k < S; ++k) {
        const Mat u = spd_log_at(C[k], C[(k + 1) % S]), v = spd_log_at(C[k], C[(k + S - 1) % S]);
        double th = std::atan2(u(0, 0) * v(0, 1) - u(0, 1) * v(0, 0), u(0, 0) * v(0, 0) + u(0, 1) * v(0, 1));
        if (th < 0) th += 2 * std::numbers::pi;
        sum += th;
        margin = std::min({margin, th, std::numbers::pi - th});
    }
    if (std::abs(sum - 2 * std::numbers::pi) > 1e-6 || margin <= 0) return -1.0;
    return margin;
}

// Karcher mean with backtracking; plain mean-of-logs steps overshoot for far apart corners
Mat corner_center(const std::vector<Mat>& pts) {
    auto spread = [&pts](const Mat& x) {
        double s = 0.0;
        for (const Mat& p : pts) s += std::pow(spd_distance(x, p), 2);
        return s;
    };
    Mat x = pts.front();
    double fx = spread(x);
    for (int it = 0; it < 500; ++it) {
        Mat step = Mat::Zero(x.rows(), x.cols());
        for (const Mat& p : pts) step += spd_log_at(x, p);
        step /= static_cast<double>(pts.size());
        if (step.norm() < 1e-13) break;
        double t = 1.0;
        for (; t > 1e-6; t /= 2) {
            Mat y = unit_determinant(spd_exp_at(x, t * step));
            const double fy = spread(y);
            if (fy < fx) {
                x = y;
                fx = fy;
                break;
            }
        }
        if (t <= 1e-6) break;
    }
    return x;
}

// base point whose corner octagon is convex with the best worst angle, by zooming grid search
Mat octagon_base_point(const std::vector<Mat>& cornerImages) {
    double cx = 0.0, cy = 0.0, half = 1.0, best = -1.0;
    const int N = 40;
    for (int round = 0; round < 6; ++round) {
        double bx = cx, by = cy;
        for (int i = 0; i <= N; ++i)
            for (int j = 0; j <= N; ++j) {
                const double x = cx + half * (2.0 * i / N - 1), y = cy + half * (2.0 * j / N - 1);
                if (x * x + y * y > 0.999) continue;
                const double m = convexity_margin(cornerImages, from_klein(x, y));
                if (m > best) {
                    best = m;
                    bx = x;
                    by = y;
                }
            }
        if (best <= 0) throw Error("no convex fundamental octagon for these coordinates");
        cx = bx;
        cy = by;
        half /= 4;
    }
    return from_klein(cx, cy);
}

double comparison_area(double a, double b, double c) {
    const double s = 0.5 * (a + b + c);
    const double h = s * (s - a) * (s - b) * (s - c);
    return h > 0 ? std::sqrt(h) : 0.0;
}

std::array<double, 3> comparison_cotangents(double a, double b, double c) {
    const double area = comparison_area(a, b, c);
    if (!(area > 0)) throw Error("degenerate mesh triangle");
    return {(b * b + c * c - a * a) / (4 * area), (a * a + c * c - b * b) / (4 * area), (a * a + b * b - c * c) / (4 * area)};
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

Mat diagonal_lift(const Mat& m2, int n) {
    Mat big = Mat::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        big(i, i) = m2(0, 0);
        big(i, n + i) = m2(0, 1);
        big(n + i, i) = m2(1, 0);
        big(n + i, n + i) = m2(1, 1);
    }
    return big;
}

struct Neighbor {
    int cls;
    double weight;
    Mat transform;  // neighbor value seen from this class: T X T^T
};

std::vector<std::vector<Neighbor>> neighbor_lists(const TriangulatedDomain& mesh, const LinearRepresentation& rep) {
    std::vector<std::vector<Neighbor>> nb(static_cast<std::size_t>(mesh.classes()));
    for (const auto& e : mesh.edges) {
        nb[static_cast<std::size_t>(e.a)].push_back({e.b, e.weight, evaluate(rep, e.word)});
        nb[static_cast<std::size_t>(e.b)].push_back({e.a, e.weight, evaluate(rep, e.word.inverse())});
    }
    return nb;
}

double class_energy(const TriangulatedDomain& mesh, const std::vector<Mat>& transforms, const std::vector<Mat>& X) {
    double e = 0.0;
    for (std::size_t i = 0; i < mesh.edges.size(); ++i) {
        const auto& edge = mesh.edges[i];
        const double d = spd_distance(X[static_cast<std::size_t>(edge.a)], congruence(transforms[i], X[static_cast<std::size_t>(edge.b)]));
        e += 0.5 * edge.weight * d * d;
    }
    return e;
}

Mat class_gradient(const std::vector<Neighbor>& nbs, const std::vector<Mat>& X, const Mat& x) {
    Mat g = Mat::Zero(x.rows(), x.cols());
    for (const Neighbor& n : nbs) g -= n.weight * spd_log_at(x, congruence(n.transform, X[static_cast<std::size_t>(n.cls)]));
    return g;
}

std::vector<std::vector<int>> color_classes(const std::vector<std::vector<Neighbor>>& nb) {
    std::vector<int> color(nb.size(), -1);
    int colors = 0;
    for (std::size_t r = 0; r < nb.size(); ++r) {
        std::vector<bool> used(static_cast<std::size_t>(colors) + 1, false);
        for (const Neighbor& n : nb[r])
            if (color[static_cast<std::size_t>(n.cls)] >= 0) used[static_cast<std::size_t>(color[static_cast<std::size_t>(n.cls)])] = true;
        int c = 0;
        while (used[static_cast<std::size_t>(c)]) ++c;
        color[r] = c;
        colors = std::max(colors, c + 1);
    }
    std::vector<std::vector<int>> out(static_cast<std::size_t>(colors));
    for (std::size_t r = 0; r < nb.size(); ++r) out[static_cast<std::size_t>(color[r])].push_back(static_cast<int>(r));
    return out;
}

}  // namespace

TriangulatedDomain build_domain(const FNCoordinates& fn, int m) {
    if (m < 1) throw Error("resolution must be positive");
    TriangulatedDomain D;
    D.fn = fn;
    D.resolution = m;
    LinearRepresentation rho0 = fuchsian_genus2(fn);
    const Word rel = rho0.presentation().relator;
    const int S = static_cast<int>(rel.size());
    std::vector<Word> W(static_cast<std::size_t>(S) + 1);
    for (int k = 0; k < S; ++k) W[static_cast<std::size_t>(k) + 1] = reduce(W[static_cast<std::size_t>(k)] * Word({rel[static_cast<std::size_t>(k)]}));
    D.cornerWords.assign(W.begin(), W.begin() + S);
    std::vector<Mat> cornerImages;
    for (const Word& w : D.cornerWords) cornerImages.push_back(evaluate(rho0, w));
    const Mat p0 = octagon_base_point(cornerImages);
    std::vector<Mat> corner;
    for (const Mat& g : cornerImages) corner.push_back(unit_determinant(congruence(g, p0)));
    // recenter so that the octagon sits around the identity; long gluing words stay well conditioned
    const Mat c0 = corner_center(corner);
    D.frame = spd_inv_sqrt(c0);
    rho0 = conjugate(rho0, D.frame);
    D.basePoint = unit_determinant(congruence(D.frame, p0));
    corner.clear();
    for (const Word& w : D.cornerWords) corner.push_back(unit_determinant(congruence(evaluate(rho0, w), D.basePoint)));
    const Mat center = Mat::Identity(2, 2);

    auto offset = [S](int r) { return r == 0 ? 0 : 1 + 4 * r * (r - 1) * S / 8; };
    auto idx = [&](int r, int k, int t) {
        if (r == 0) return 0;
        if (t == r) {
            k = (k + 1) % S;
            t = 0;
        }
        return offset(r) + k * r + t;
    };
    const int nv = offset(m + 1);
    D.positions.assign(static_cast<std::size_t>(nv), Mat());
    D.vertexClass.assign(static_cast<std::size_t>(nv), -1);
    D.vertexWord.assign(static_cast<std::size_t>(nv), Word());
    // starting rings are Klein-model homotheties of the boundary about the center
    D.positions[0] = center;
    for (int r = 1; r <= m; ++r)
        for (int k = 0; k < S; ++k)
            for (int t = 0; t < r; ++t) {
                const Mat& c0 = corner[static_cast<std::size_t>(k)];
                const Mat& c1 = corner[static_cast<std::size_t>((k + 1) % S)];
                Mat q = unit_determinant(spd_geodesic(c0, c1, static_cast<double>(t) / r));
                if (r < m) {
                    const Eigen::Vector2d z = klein(q) * (static_cast<double>(r) / m);
                    q = from_klein(z.x(), z.y());
                }
                D.positions[static_cast<std::size_t>(idx(r, k, t))] = unit_determinant(q);
            }

    // classes: interior points, one corner class, one class per glued pair of side points
    auto new_class = [&D](int v) {
        D.vertexClass[static_cast<std::size_t>(v)] = D.classes();
        D.classRepresentative.push_back(v);
    };
    for (int v = 0; v < offset(m); ++v) new_class(v);
    new_class(idx(m, 0, 0));
    auto partner_side = [&](int k) {
        for (int j = 0; j < S; ++j)
            if (rel[static_cast<std::size_t>(j)] == rel[static_cast<std::size_t>(k)].inverse()) return j;
        throw Error("relator letter without inverse");
    };
    for (int k = 0; k < S; ++k)
        if (k < partner_side(k))
            for (int t = 1; t < m; ++t) new_class(idx(m, k, t));
    for (int k = 1; k < S; ++k) {
        const int v = idx(m, k, 0);
        D.vertexClass[static_cast<std::size_t>(v)] = D.vertexClass[static_cast<std::size_t>(idx(m, 0, 0))];
        D.vertexWord[static_cast<std::size_t>(v)] = W[static_cast<std::size_t>(k)];
        D.sideGluings.push_back({idx(m, 0, 0), v, W[static_cast<std::size_t>(k)]});
    }
    for (int k = 0; k < S; ++k) {
        const int j = partner_side(k);
        if (k < j) continue;
        // side j at fraction s goes to side k at 1 - s
        const Word g = reduce(W[static_cast<std::size_t>(k) + 1] * W[static_cast<std::size_t>(j)].inverse());
        for (int t = 1; t < m; ++t) {
            const int v = idx(m, k, t), rep = idx(m, j, m - t);
            D.vertexClass[static_cast<std::size_t>(v)] = D.vertexClass[static_cast<std::size_t>(rep)];
            D.vertexWord[static_cast<std::size_t>(v)] = g;
            D.sideGluings.push_back({rep, v, g});
        }
    }
    // glued copies are placed exactly
    for (const auto& gl : D.sideGluings)
        D.positions[static_cast<std::size_t>(gl.partner)] =
            unit_determinant(congruence(evaluate(rho0, gl.word), D.positions[static_cast<std::size_t>(gl.vertex)]));

    std::vector<std::array<int, 3>> flat;
    for (int k = 0; k < S; ++k)
        for (int r = 0; r < m; ++r) {
            if (r == 0) {
                flat.push_back({0, idx(1, k, 0), idx(1, k, 1)});
                continue;
            }
            for (int t = 0; t <= r; ++t) flat.push_back({idx(r, k, t), idx(r + 1, k, t), idx(r + 1, k, t + 1)});
            for (int t = 0; t < r; ++t) flat.push_back({idx(r, k, t), idx(r + 1, k, t + 1), idx(r, k, t + 1)});
        }
    int positive = 0, negative = 0;
    for (const auto& tri : flat) {
        std::array<Mat, 3> p{D.positions[static_cast<std::size_t>(tri[0])], D.positions[static_cast<std::size_t>(tri[1])],
                             D.positions[static_cast<std::size_t>(tri[2])]};
        (klein_orientation(p) > 0 ? positive : negative)++;
    }
    if (positive != 0 && negative != 0) throw Error("fundamental polygon is not star-shaped from its center");
    if (negative > 0)
        for (auto& tri : flat) std::swap(tri[1], tri[2]);

    using Corner = TriangulatedDomain::Corner;
    for (const auto& tri : flat) {
        std::array<Corner, 3> c;
        for (std::size_t i = 0; i < 3; ++i)
            c[i] = {D.vertexClass[static_cast<std::size_t>(tri[i])], D.vertexWord[static_cast<std::size_t>(tri[i])]};
        D.triangles.push_back(c);
    }

    std::map<Word, Mat> images;
    auto position = [&](const Corner& c) {
        auto it = images.find(c.word);
        if (it == images.end()) it = images.emplace(c.word, evaluate(rho0, c.word)).first;
        return unit_determinant(congruence(it->second, D.positions[static_cast<std::size_t>(D.classRepresentative[static_cast<std::size_t>(c.cls)])]));
    };
    auto refresh = [&](std::size_t t) {
        const auto& tri = D.triangles[t];
        std::array<Mat, 3> p{position(tri[0]), position(tri[1]), position(tri[2])};
        D.cotangents[t] = comparison_cotangents(hyperbolic_distance(p[1], p[2]), hyperbolic_distance(p[0], p[2]), hyperbolic_distance(p[0], p[1]));
        D.trianglePositions[t] = p;
    };
    // edges of the quotient, matched through the Fuchsian images of their words
    struct QuotientEdge {
        int a = 0, b = 0;
        Word word;
        Mat image;
        double weight = 0.0;
        std::vector<std::pair<std::size_t, std::size_t>> sides;
    };
    auto collect = [&](bool cotangentWeights) {
        std::vector<QuotientEdge> out;
        std::map<std::pair<int, int>, std::vector<std::size_t>> byClasses;
        for (std::size_t t = 0; t < D.triangles.size(); ++t)
            for (std::size_t i = 0; i < 3; ++i) {
                const Corner& u = D.triangles[t][(i + 1) % 3];
                const Corner& w = D.triangles[t][(i + 2) % 3];
                int a = u.cls, b = w.cls;
                Word word = shorten(u.word.inverse() * w.word);
                if (a > b) {
                    std::swap(a, b);
                    word = word.inverse();
                }
                Mat image = evaluate(rho0, word);
                const double scale = 1e-6 * image.norm();
                auto& bucket = byClasses[{a, b}];
                std::size_t found = out.size();
                for (std::size_t k : bucket) {
                    if ((out[k].image - image).norm() < scale) found = k;
                    else if (a == b && (out[k].image - evaluate(rho0, word.inverse())).norm() < scale) found = k;
                    if (found != out.size()) break;
                }
                if (found == out.size()) {
                    bucket.push_back(found);
                    out.push_back({a, b, word, image, 0.0, {}});
                }
                out[found].weight += cotangentWeights ? 0.5 * D.cotangents[t][i] : 0.5;
                out[found].sides.emplace_back(t, i);
            }
        return out;
    };
    // equivariant Tutte embedding of the quotient graph spreads the vertices evenly before any flips
    {
        for (const auto& e : collect(false)) D.edges.push_back({e.a, e.b, e.word, 1.0});
        std::vector<Mat> start;
        for (int c = 0; c < D.classes(); ++c) start.push_back(D.positions[static_cast<std::size_t>(D.classRepresentative[static_cast<std::size_t>(c)])]);
        RelaxOptions o;
        o.tol = 1e-6;
        o.maxIters = 2000;
        o.start = &start;
        const RelaxResult r = relax(D, rho0, o);
        for (int v = 0; v < D.vertices(); ++v)
            D.positions[static_cast<std::size_t>(v)] = unit_determinant(congruence(
                evaluate(rho0, D.vertexWord[static_cast<std::size_t>(v)]), r.classValues[static_cast<std::size_t>(D.vertexClass[static_cast<std::size_t>(v)])]));
        D.edges.clear();
    }
    D.cotangents.resize(D.triangles.size());
    D.trianglePositions.resize(D.triangles.size());
    for (std::size_t t = 0; t < D.triangles.size(); ++t) {
        refresh(t);
        if (klein_orientation(D.trianglePositions[t]) <= 0) throw Error("mesh embedding folded over");
    }

    std::set<std::pair<std::size_t, std::size_t>> blocked;
    const int maxFlips = 20 * static_cast<int>(D.triangles.size());
    std::vector<QuotientEdge> quotient;
    for (;;) {
        quotient = collect(true);
        const QuotientEdge* worst = nullptr;
        for (const auto& e : quotient) {
            if (e.sides.size() != 2 || e.sides[0].first == e.sides[1].first) throw Error("mesh edge does not bound two triangles");
            if (e.weight <= 1e-12 && !blocked.count(e.sides[0]) && (!worst || e.weight < worst->weight)) worst = &e;
        }
        if (!worst) break;
        if (D.flips >= maxFlips) throw Error("edge flips did not make every cotangent weight positive");
        const auto [t1, i1] = worst->sides[0];
        const auto [t2, i2] = worst->sides[1];
        const Corner u = D.triangles[t1][(i1 + 1) % 3], v = D.triangles[t1][(i1 + 2) % 3], p = D.triangles[t1][i1];
        const Corner& v2 = D.triangles[t2][(i2 + 1) % 3];
        const Corner& u2 = D.triangles[t2][(i2 + 2) % 3];
        // the second triangle runs along the edge backwards; g moves the first copy onto it
        const Word g = shorten(u2.word * u.word.inverse());
        const Mat moved = congruence(evaluate(rho0, g), position(v));
        if (u2.cls != u.cls || v2.cls != v.cls || (moved - position(v2)).norm() > 1e-6 * moved.norm())
            throw Error("inconsistent mesh edge");
        const Corner& q = D.triangles[t2][i2];
        const Corner qd{q.cls, shorten(g.inverse() * q.word)};
        std::array<Corner, 3> n1{u, qd, p}, n2{qd, v, p};
        // keep each lift next to the domain: first corner at its class representative
        for (auto* tri : {&n1, &n2}) {
            const Word back = (*tri)[0].word.inverse();
            for (Corner& c : *tri) c.word = shorten(back * c.word);
        }
        if (klein_orientation({position(n1[0]), position(n1[1]), position(n1[2])}) <= 0 ||
            klein_orientation({position(n2[0]), position(n2[1]), position(n2[2])}) <= 0) {
            blocked.insert(worst->sides[0]);
            continue;
        }
        D.triangles[t1] = n1;
        D.triangles[t2] = n2;
        refresh(t1);
        refresh(t2);
        ++D.flips;
        blocked.clear();
    }
    for (const auto& e : quotient) {
        if (!(e.weight > 1e-12)) throw Error("mesh has a nonpositive cotangent weight");
        D.edges.push_back({e.a, e.b, e.word, e.weight});
    }
    return D;
}

EquivariantMeshMap expand_map(const TriangulatedDomain& mesh, const LinearRepresentation& rep, const std::vector<Mat>& classValues) {
    EquivariantMeshMap f;
    f.values.reserve(static_cast<std::size_t>(mesh.vertices()));
    for (int v = 0; v < mesh.vertices(); ++v) {
        const Mat& x = classValues[static_cast<std::size_t>(mesh.vertexClass[static_cast<std::size_t>(v)])];
        const Word& w = mesh.vertexWord[static_cast<std::size_t>(v)];
        f.values.push_back(w.empty() ? x : congruence(evaluate(rep, w), x));
    }
    for (const auto& tri : mesh.triangles) {
        std::array<Mat, 3> vals;
        for (std::size_t i = 0; i < 3; ++i) {
            const Mat& x = classValues[static_cast<std::size_t>(tri[i].cls)];
            vals[i] = tri[i].word.empty() ? x : congruence(evaluate(rep, tri[i].word), x);
        }
        f.triangleValues.push_back(vals);
    }
    return f;
}

double equivariance_residual(const TriangulatedDomain& mesh, const LinearRepresentation& rep, const EquivariantMeshMap& f) {
    if (static_cast<int>(f.values.size()) != mesh.vertices()) throw Error("map does not match the mesh");
    double worst = 0.0;
    for (const auto& gl : mesh.sideGluings) {
        const Mat expected = congruence(evaluate(rep, gl.word), f.values[static_cast<std::size_t>(gl.vertex)]);
        const Mat& got = f.values[static_cast<std::size_t>(gl.partner)];
        worst = std::max(worst, (got - expected).norm() / std::max(1.0, expected.norm()));
    }
    return worst;
}

double dirichlet_sum(const std::vector<WeightedEdge>& edges, const std::vector<Mat>& values) {
    double e = 0.0;
    for (const auto& edge : edges) {
        double d = spd_distance(values[static_cast<std::size_t>(edge.a)], values[static_cast<std::size_t>(edge.b)]);
        e += 0.5 * edge.weight * d * d;
    }
    return e;
}

double discrete_energy(const TriangulatedDomain& mesh, const LinearRepresentation& rep, const EquivariantMeshMap& f) {
    if (equivariance_residual(mesh, rep, f) > 1e-4) throw Error("not equivariant");
    double e = 0.0;
    for (const auto& edge : mesh.edges) {
        const Mat& x = f.values[static_cast<std::size_t>(mesh.classRepresentative[static_cast<std::size_t>(edge.a)])];
        const Mat& y = f.values[static_cast<std::size_t>(mesh.classRepresentative[static_cast<std::size_t>(edge.b)])];
        const double d = spd_distance(x, congruence(evaluate(rep, edge.word), y));
        e += 0.5 * edge.weight * d * d;
    }
    return e;
}

double energy_normalization(const GroupTag& tag) {
    const double n = tag.n;
    if (tag.kind == GroupKind::Symplectic) return 1.0 / (2 * n);
    if (tag.n < 2) throw Error("energy_normalization needs n >= 2");
    return 3.0 / (n * (n * n - 1));
}

AreaReport discrete_area(const TriangulatedDomain& mesh, const EquivariantMeshMap& f) {
    AreaReport r;
    if (f.triangleValues.size() != mesh.triangles.size()) throw Error("map does not match the mesh");
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& [p0, p1, p2] = f.triangleValues[t];
        const double a = spd_distance(p1, p2), b = spd_distance(p0, p2), c = spd_distance(p0, p1);
        const double slack = 1e-12 * (a + b + c);
        if (a > b + c + slack || b > a + c + slack || c > a + b + slack) {
            r.flagged.push_back(static_cast<int>(t));
            continue;
        }
        r.area += comparison_area(a, b, c);
    }
    return r;
}

std::vector<Mat> energy_gradient(const TriangulatedDomain& mesh, const LinearRepresentation& rep, const std::vector<Mat>& X) {
    auto nb = neighbor_lists(mesh, rep);
    std::vector<Mat> g;
    for (std::size_t r = 0; r < nb.size(); ++r) g.push_back(class_gradient(nb[r], X, X[r]));
    return g;
}

RelaxResult relax(const TriangulatedDomain& mesh, const LinearRepresentation& rep, const RelaxOptions& opts) {
    if (rep.generators() != 4) throw Error("relax needs a genus 2 representation");
    const auto nb = neighbor_lists(mesh, rep);
    const auto colors = color_classes(nb);
    std::vector<Mat> transforms;
    for (const auto& e : mesh.edges) transforms.push_back(evaluate(rep, e.word));
    const int dim = rep.dim();
    RelaxResult out;
    std::vector<Mat>& X = out.classValues;
    if (opts.start) {
        if (static_cast<int>(opts.start->size()) != mesh.classes()) throw Error("start map does not match the mesh");
        X = *opts.start;
    } else {
        X.assign(static_cast<std::size_t>(mesh.classes()), Mat::Identity(dim, dim));
    }
    out.energies.push_back(class_energy(mesh, transforms, X));
    std::vector<Mat> pts;
    std::vector<double> ws;
    const double omega = opts.overRelaxation;
    for (int it = 1; it <= opts.maxIters; ++it) {
        double worst = 0.0;
        for (const auto& color : colors)
            for (int r : color) {
                const auto& list = nb[static_cast<std::size_t>(r)];
                if (list.empty()) continue;
                pts.clear();
                ws.clear();
                for (const Neighbor& n : list) {
                    pts.push_back(congruence(n.transform, X[static_cast<std::size_t>(n.cls)]));
                    ws.push_back(n.weight);
                }
                Mat& x = X[static_cast<std::size_t>(r)];
                // the part of the energy that depends on x; an edge from the class to itself moves at both ends
                auto local = [&](const Mat& y) {
                    double e = 0.0;
                    for (std::size_t i = 0; i < list.size(); ++i) {
                        if (list[i].cls == r) {
                            const double d = spd_distance(y, congruence(list[i].transform, y));
                            e += 0.25 * ws[i] * d * d;
                        } else {
                            const double d = spd_distance(y, pts[i]);
                            e += 0.5 * ws[i] * d * d;
                        }
                    }
                    return e;
                };
                Mat g = Mat::Zero(dim, dim);
                {
                    Mat hi = spd_inv_sqrt(x);
                    for (std::size_t i = 0; i < pts.size(); ++i) g -= ws[i] * sym_log(hi * pts[i] * hi);
                }
                worst = std::max(worst, g.norm());
                if (g.norm() == 0.0) continue;
                const Mat mean = weighted_karcher_mean(pts, ws, x, 1e-12, 4);
                // long moves are capped so that early sweeps from a poor start stay well conditioned
                const double d = spd_distance(x, mean);
                double step = d < 1.0 ? omega : std::min(1.0, kMaxMove / d);
                const double e0 = local(x);
                for (int tries = 0; tries < 30; ++tries, step = step > 1.0 ? 1.0 : 0.5 * step) {
                    Mat y = unit_determinant(step == 1.0 ? mean : spd_geodesic(x, mean, step));
                    if (local(y) <= e0) {
                        x = y;
                        break;
                    }
                }
            }
        const double e = class_energy(mesh, transforms, X);
        out.energies.push_back(e);
        out.iterations = it;
        if (worst <= opts.tol) {
            double g = 0.0;
            for (std::size_t r = 0; r < nb.size(); ++r) g = std::max(g, class_gradient(nb[r], X, X[r]).norm());
            out.gradient = g;
            if (g <= opts.tol) {
                out.converged = true;
                break;
            }
        } else {
            out.gradient = worst;
        }
    }
    out.map = expand_map(mesh, rep, X);
    return out;
}

EquivariantMeshMap harmonic_relax(const TriangulatedDomain& mesh, const LinearRepresentation& rep, int maxIters, double tol) {
    RelaxOptions o;
    o.maxIters = maxIters;
    o.tol = tol;
    RelaxResult r = relax(mesh, rep, o);
    if (!r.converged) throw NotConverged(r.energies);
    return r.map;
}

double Differential::sup() const {
    double s = 0.0;
    for (const auto& z : values) s = std::max(s, std::abs(z));
    return s;
}

namespace {

// whitened partial derivatives in the comparison chart of a triangle; false when degenerate
bool chart_derivatives(const TriangulatedDomain& mesh, const EquivariantMeshMap& f, std::size_t t, Mat& X, Mat& Y) {
    const auto& [q0, q1, q2] = mesh.trianglePositions[t];
    const double a = hyperbolic_distance(q1, q2), b = hyperbolic_distance(q0, q2), c = hyperbolic_distance(q0, q1);
    const double cosA = (b * b + c * c - a * a) / (2 * b * c);
    const double x2 = b * cosA, y2 = b * std::sqrt(std::max(0.0, 1 - cosA * cosA));
    if (!(c > 0) || !(y2 > 1e-14 * c)) return false;
    std::vector<Mat> p(f.triangleValues[t].begin(), f.triangleValues[t].end());
    const Mat bar = weighted_karcher_mean(p, {1.0, 1.0, 1.0}, p[0]);
    const Mat v0 = spd_log_at(bar, p[0]), v1 = spd_log_at(bar, p[1]), v2 = spd_log_at(bar, p[2]);
    X = (v1 - v0) / c;
    Y = ((v2 - v0) - x2 * X) / y2;
    return true;
}

}  // namespace

Differential hopf_differential(const TriangulatedDomain& mesh, const EquivariantMeshMap& f, double kappa) {
    Differential d;
    d.normalization = kappa;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        Mat X, Y;
        if (!chart_derivatives(mesh, f, t, X, Y)) {
            d.flagged.push_back(static_cast<int>(t));
            d.values.emplace_back(0.0, 0.0);
            continue;
        }
        const double xx = (X * X).trace(), yy = (Y * Y).trace(), xy = (X * Y).trace();
        d.values.emplace_back(kappa * (xx - yy), -2 * kappa * xy);
    }
    return d;
}

Differential higher_differential(const TriangulatedDomain& mesh, const EquivariantMeshMap& f, int k) {
    if (k < 2) throw Error("higher_differential needs k >= 2");
    if (!f.values.empty() && k > f.values[0].rows()) throw Error("higher_differential needs k <= n");
    Differential d;
    using CMat = Eigen::MatrixXcd;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        Mat X, Y;
        if (!chart_derivatives(mesh, f, t, X, Y)) {
            d.flagged.push_back(static_cast<int>(t));
            d.values.emplace_back(0.0, 0.0);
            continue;
        }
        CMat Z = X.cast<std::complex<double>>() - std::complex<double>(0, 1) * Y.cast<std::complex<double>>();
        CMat P = CMat::Identity(Z.rows(), Z.cols());
        for (int i = 0; i < k; ++i) P = P * Z;
        d.values.push_back(P.trace());
    }
    return d;
}

LinearRepresentation lifted_domain_group(const TriangulatedDomain& mesh, const GroupTag& tag) {
    const LinearRepresentation rho0 = conjugate(fuchsian_genus2(mesh.fn), mesh.frame);
    if (tag.kind == GroupKind::Symplectic) return diagonal_embed(rho0, tag.n);
    return irreducible_embed(rho0, tag.n);
}

EquivariantMeshMap conformal_reference_map(const TriangulatedDomain& mesh, const GroupTag& tag) {
    Mat D;
    if (tag.kind == GroupKind::Symplectic) {
        D = Mat::Identity(2 * tag.n, 2 * tag.n);
    } else {
        Vec d(tag.n);
        for (int i = 0; i < tag.n; ++i) d(i) = binomial(tag.n - 1, i);
        D = unit_determinant(Mat(d.asDiagonal()));
    }
    auto lift = [&](const Mat& p) {
        const Mat h = spd_sqrt(p);
        const Mat L = tag.kind == GroupKind::Symplectic ? diagonal_lift(h, tag.n) : symmetric_power(h, tag.n);
        return unit_determinant(congruence(L, D));
    };
    EquivariantMeshMap f;
    for (const Mat& p : mesh.positions) f.values.push_back(lift(p));
    for (const auto& tri : mesh.trianglePositions) f.triangleValues.push_back({lift(tri[0]), lift(tri[1]), lift(tri[2])});
    return f;
}

double hopf_noise_floor(const TriangulatedDomain& mesh, const GroupTag& tag) {
    return hopf_differential(mesh, conformal_reference_map(mesh, tag), energy_normalization(tag)).sup();
}

std::vector<EnergyRow> energy_over_teich(const LinearRepresentation& rep, const std::vector<FNCoordinates>& family, int resolution,
                                         const RelaxOptions& opts) {
    if (family.empty()) throw Error("energy_over_teich needs a nonempty family");
    const double kappa = energy_normalization(rep.tag());
    std::vector<EnergyRow> rows;
    std::optional<std::vector<Mat>> warm;
    for (const auto& fn : family) {
        EnergyRow row;
        row.fn = fn;
        try {
            TriangulatedDomain mesh = build_domain(fn, resolution);
            RelaxOptions o = opts;
            if (warm) o.start = &*warm;
            RelaxResult r = relax(mesh, rep, o);
            row.energy = kappa * r.energies.back();
            row.area = kappa * discrete_area(mesh, r.map).area;
            row.iterations = r.iterations;
            row.converged = r.converged;
            warm = r.classValues;
        } catch (const Error& e) {
            row.error = e.what();
            row.energy = std::numeric_limits<double>::infinity();
        }
        rows.push_back(row);
    }
    return rows;
}

MinAreaResult min_area(const LinearRepresentation& rep, int searchBudget, int resolution, const FNCoordinates& start,
                       const RelaxOptions& opts) {
    if (searchBudget < 1) throw Error("min_area needs a positive budget");
    const double kappa = energy_normalization(rep.tag());
    MinAreaResult out;
    std::optional<std::vector<Mat>> warm;

    auto to_fn = [](const std::array<double, 6>& u) {
        FNCoordinates fn;
        for (int i = 0; i < 3; ++i) {
            fn.lengths[static_cast<std::size_t>(i)] = std::exp(u[static_cast<std::size_t>(i)]);
            fn.twists[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i) + 3];
        }
        return fn;
    };
    auto energy = [&](const std::array<double, 6>& u) {
        EnergyRow row;
        row.fn = to_fn(u);
        ++out.evaluations;
        try {
            TriangulatedDomain mesh = build_domain(row.fn, resolution);
            RelaxOptions o = opts;
            if (warm) o.start = &*warm;
            RelaxResult r = relax(mesh, rep, o);
            row.energy = kappa * r.energies.back();
            row.area = kappa * discrete_area(mesh, r.map).area;
            row.iterations = r.iterations;
            row.converged = r.converged;
            if (row.energy <= out.energy) warm = r.classValues;
        } catch (const Error& e) {
            row.error = e.what();
            row.energy = std::numeric_limits<double>::infinity();
        }
        out.trace.push_back(row);
        return row.energy;
    };

    std::array<double, 6> u{};
    for (int i = 0; i < 3; ++i) {
        u[static_cast<std::size_t>(i)] = std::log(start.lengths[static_cast<std::size_t>(i)]);
        u[static_cast<std::size_t>(i) + 3] = start.twists[static_cast<std::size_t>(i)];
    }
    out.energy = std::numeric_limits<double>::infinity();
    out.energy = energy(u);
    out.fn = to_fn(u);
    std::array<double, 6> h{0.4, 0.4, 0.4, 0.8, 0.8, 0.8};
    const double phi = (std::sqrt(5.0) - 1) / 2;
    while (out.evaluations < searchBudget) {
        for (std::size_t i = 0; i < 6 && out.evaluations < searchBudget; ++i) {
            double lo = u[i] - h[i], hi = u[i] + h[i];
            auto at = [&](double x) {
                auto v = u;
                v[i] = x;
                return energy(v);
            };
            double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
            double f1 = at(x1), f2 = out.evaluations < searchBudget ? at(x2) : std::numeric_limits<double>::infinity();
            for (int it = 0; it < 4 && out.evaluations < searchBudget; ++it) {
                if (f1 < f2) {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - phi * (hi - lo);
                    f1 = at(x1);
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + phi * (hi - lo);
                    f2 = at(x2);
                }
            }
            const double best = std::min(f1, f2);
            if (best < out.energy) {
                u[i] = f1 < f2 ? x1 : x2;
                out.energy = best;
                out.fn = to_fn(u);
            }
        }
        for (double& s : h) s *= 0.5;
    }
    out.budgetExhausted = true;
    return out;
}

}  // namespace surfacelab
