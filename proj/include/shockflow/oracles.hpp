#pragma once

// Independent reference constructions used to cross-check the main solvers
// (exact Welzl enclosing ball vs the hat-L minimizer, closed-form simplex
// distances vs the LP enumeration, ...). These deliberately share no code
// path with the implementations they certify.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "shockflow/errors.hpp"
#include "shockflow/rng.hpp"
#include "shockflow/vec.hpp"

namespace shockflow::oracle {

struct Ball {
    Vec center;
    double radius = 0.0;
};

namespace detail {

/// Smallest sphere with all points of r on its boundary and center in
/// their affine hull (circumsphere of an affinely independent set).
inline Ball circumsphere(const std::vector<Vec>& r) {
    Ball b;
    if (r.empty()) {
        b.radius = -1.0;
        return b;
    }
    if (r.size() == 1) {
        b.center = r[0];
        return b;
    }
    const std::size_t k = r.size() - 1;
    Mat g(k);
    Vec rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
        const Vec di = r[i + 1] - r[0];
        rhs[i] = 0.5 * norm2(di);
        for (std::size_t j = 0; j < k; ++j) g(i, j) = dot(di, r[j + 1] - r[0]);
    }
    Vec alpha;
    if (!solve_linear(g, rhs, alpha)) {
        b.radius = -1.0;  // degenerate support; caller retries without this point
        return b;
    }
    b.center = r[0];
    for (std::size_t i = 0; i < k; ++i) b.center += alpha[i] * (r[i + 1] - r[0]);
    b.radius = dist(b.center, r[0]);
    return b;
}

inline Ball welzl_rec(std::vector<Vec>& pts, std::size_t n, std::vector<Vec>& r,
                      std::size_t dim) {
    if (n == 0 || r.size() == dim + 1) return circumsphere(r);
    const Vec p = pts[n - 1];
    Ball b = welzl_rec(pts, n - 1, r, dim);
    if (b.radius >= 0.0 && dist(p, b.center) <= b.radius * (1.0 + 1e-12) + 1e-14) return b;
    r.push_back(p);
    b = welzl_rec(pts, n - 1, r, dim);
    r.pop_back();
    return b;
}

}  // namespace detail

/// Exact smallest enclosing Euclidean ball (Welzl's randomized recursion).
inline Ball welzl_ball(std::vector<Vec> pts, std::uint64_t seed = 12345) {
    if (pts.empty()) throw DomainError("welzl_ball needs points");
    const std::size_t d = pts[0].dim();
    Rng rng(seed);
    for (std::size_t i = pts.size(); i > 1; --i)
        std::swap(pts[i - 1], pts[std::size_t(rng.uniform() * double(i))]);
    std::vector<Vec> r;
    Ball b = detail::welzl_rec(pts, pts.size(), r, d);
    if (b.radius < 0.0) b = detail::circumsphere({pts[0]});
    return b;
}

/// Distance from q to the segment [a, b].
inline double point_segment_distance(const Vec& q, const Vec& a, const Vec& b) {
    const Vec ab = b - a;
    const double den = norm2(ab);
    if (den == 0.0) return dist(q, a);
    const double s = std::clamp(dot(q - a, ab) / den, 0.0, 1.0);
    return dist(q, axpy(s, ab, a));
}

/// Distance from q to the triangle (a,b,c); Ericson's region test.
inline double point_triangle_distance(const Vec& q, const Vec& a, const Vec& b, const Vec& c) {
    const Vec ab = b - a, ac = c - a, aq = q - a;
    const double d1 = dot(ab, aq), d2 = dot(ac, aq);
    if (d1 <= 0.0 && d2 <= 0.0) return dist(q, a);
    const Vec bq = q - b;
    const double d3 = dot(ab, bq), d4 = dot(ac, bq);
    if (d3 >= 0.0 && d4 <= d3) return dist(q, b);
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return dist(q, axpy(d1 / (d1 - d3), ab, a));
    const Vec cq = q - c;
    const double d5 = dot(ab, cq), d6 = dot(ac, cq);
    if (d6 >= 0.0 && d5 <= d6) return dist(q, c);
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return dist(q, axpy(d2 / (d2 - d6), ac, a));
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
        return dist(q, axpy((d4 - d3) / ((d4 - d3) + (d5 - d6)), c - b, b));
    const double sum = va + vb + vc;
    if (!(std::abs(sum) > 1e-300)) {  // collinear triangle: reduce to edges
        return std::min({point_segment_distance(q, a, b), point_segment_distance(q, a, c),
                         point_segment_distance(q, b, c)});
    }
    const double denom = 1.0 / sum;
    return dist(q, a + (vb * denom) * ab + (vc * denom) * ac);
}

/// Distance from q to the convex hull of up to four points in dimension
/// <= 3, via closed-form vertex/segment/triangle/tetrahedron cases.
inline double point_simplex_distance(const Vec& q, const std::vector<Vec>& pts) {
    if (!pts.empty() && q.dim() == 1) {
        double lo = pts[0][0], hi = pts[0][0];
        for (const auto& p : pts) {
            lo = std::min(lo, p[0]);
            hi = std::max(hi, p[0]);
        }
        return std::max({lo - q[0], q[0] - hi, 0.0});
    }
    if (pts.size() == 4 && q.dim() == 2) {
        double best = std::numeric_limits<double>::infinity();
        for (int f = 0; f < 4; ++f)
            best = std::min(best, point_triangle_distance(q, pts[(f + 1) % 4], pts[(f + 2) % 4],
                                                          pts[(f + 3) % 4]));
        return best;
    }
    switch (pts.size()) {
        case 0: throw DomainError("empty simplex");
        case 1: return dist(q, pts[0]);
        case 2: return point_segment_distance(q, pts[0], pts[1]);
        case 3: return point_triangle_distance(q, pts[0], pts[1], pts[2]);
        case 4: {
            // inside test: q on the inner side of each face plane
            bool inside = true;
            for (int f = 0; f < 4 && inside; ++f) {
                const Vec& a = pts[(f + 1) % 4];
                const Vec& b = pts[(f + 2) % 4];
                const Vec& c = pts[(f + 3) % 4];
                const Vec& opp = pts[f];
                // normal of plane(a,b,c)
                const Vec u = b - a, v = c - a;
                Vec nper(3);
                nper[0] = u[1] * v[2] - u[2] * v[1];
                nper[1] = u[2] * v[0] - u[0] * v[2];
                nper[2] = u[0] * v[1] - u[1] * v[0];
                const double side_q = dot(nper, q - a);
                const double side_o = dot(nper, opp - a);
                // flat tetrahedron: fall back to the face scan below
                if (std::abs(side_o) <= 1e-14 * (1.0 + norm(nper))) inside = false;
                if (side_q * side_o < 0.0) inside = false;
            }
            if (inside) return 0.0;
            double best = std::numeric_limits<double>::infinity();
            for (int f = 0; f < 4; ++f)
                best = std::min(best, point_triangle_distance(q, pts[(f + 1) % 4],
                                                              pts[(f + 2) % 4], pts[(f + 3) % 4]));
            return best;
        }
        default: throw DomainError("point_simplex_distance supports at most 4 points");
    }
}

}  // namespace shockflow::oracle
