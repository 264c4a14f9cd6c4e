#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "shockflow/errors.hpp"
#include "shockflow/vec.hpp"

namespace shockflow {

/// Outcome of a convex-hull membership query. Both answers carry a
/// checkable certificate: convex weights reconstructing the query point
/// when inside, a strictly separating direction when outside.
struct HullResult {
    bool inside = false;
    double distance = 0.0;          ///< distance from q to conv(points)
    std::vector<double> weights;    ///< lambda >= 0, sum 1, over all points
    Vec nearest;                    ///< sum_j lambda_j points_j
    Vec witness;                    ///< (q - points_j) . witness < 0 for all j, when outside
};

namespace detail {

/// Minimize |sum_j a_j u_j|^2 subject to sum a = 1, a unrestricted.
/// KKT system on the Gram matrix; a small ridge handles affine dependence.
inline bool affine_min_norm(const std::vector<Vec>& u, const std::vector<std::size_t>& s,
                            std::vector<double>& a_out) {
    const std::size_t m = s.size();
    Mat k(m + 1);
    Vec rhs(m + 1);
    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            k(i, j) = dot(u[s[i]], u[s[j]]);
            scale = std::max(scale, std::abs(k(i, j)));
        }
    for (std::size_t i = 0; i < m; ++i) {
        k(i, m) = 1.0;
        k(m, i) = 1.0;
    }
    rhs[m] = 1.0;
    Vec sol;
    if (!solve_linear(k, rhs, sol)) {
        for (std::size_t i = 0; i < m; ++i) k(i, i) += 1e-12 * (1.0 + scale);
        if (!solve_linear(k, rhs, sol)) return false;
    }
    a_out.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) a_out[i] = sol[i];
    return true;
}

}  // namespace detail

/// Nearest point of conv{points} to q via Wolfe's min-norm-point method
/// (an active-set scheme on the corral of support points). Exact up to
/// floating point for the small point sets used here.
inline HullResult nearest_hull_point(const Vec& q, const std::vector<Vec>& points,
                                     double tol = 1e-9) {
    const std::size_t n = points.size();
    if (n == 0) throw DomainError("hull query needs at least one point");
    const std::size_t d = q.dim();

    std::vector<Vec> u(n);  // translated so q sits at the origin
    double scale = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        u[j] = points[j] - q;
        scale = std::max(scale, norm(u[j]));
    }

    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j)
        if (norm2(u[j]) < norm2(u[best])) best = j;

    std::vector<std::size_t> s{best};
    std::vector<double> w{1.0};
    Vec z = u[best];

    const double eps_w = 1e-14;
    const int max_major = int(8 * (n + d) + 64);
    for (int major = 0; major < max_major; ++major) {
        // most improving vertex
        std::size_t jstar = 0;
        double mn = dot(u[0], z);
        for (std::size_t j = 1; j < n; ++j) {
            const double v = dot(u[j], z);
            if (v < mn) {
                mn = v;
                jstar = j;
            }
        }
        if (mn >= norm2(z) - tol * tol * scale - 1e-300) break;   // optimality
        if (std::find(s.begin(), s.end(), jstar) != s.end()) break;
        s.push_back(jstar);
        w.push_back(0.0);

        for (int minor = 0; minor < int(8 * (n + d) + 64); ++minor) {
            std::vector<double> a;
            if (!detail::affine_min_norm(u, s, a)) {
                s.pop_back();  // degenerate add; give up on this vertex
                w.pop_back();
                break;
            }
            bool interior = true;
            for (double ai : a)
                if (ai <= eps_w) {
                    interior = false;
                    break;
                }
            if (interior) {
                w = a;
                break;
            }
            // step from w toward a until the first weight hits zero
            double theta = 1.0;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (a[i] <= eps_w && w[i] > a[i])
                    theta = std::min(theta, w[i] / (w[i] - a[i]));
            std::vector<std::size_t> ns;
            std::vector<double> nw;
            for (std::size_t i = 0; i < s.size(); ++i) {
                const double wi = (1.0 - theta) * w[i] + theta * a[i];
                if (wi > eps_w) {
                    ns.push_back(s[i]);
                    nw.push_back(wi);
                }
            }
            if (ns.empty()) {  // numerical wipeout; keep the best single vertex
                ns.push_back(s[0]);
                nw.push_back(1.0);
            }
            s = std::move(ns);
            w = std::move(nw);
        }
        double tw = 0.0;
        for (double wi : w) tw += wi;
        for (double& wi : w) wi /= tw;
        z = Vec::zero(d);
        for (std::size_t i = 0; i < s.size(); ++i) z += w[i] * u[s[i]];
    }

    HullResult r;
    r.weights.assign(n, 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) r.weights[s[i]] = w[i];
    r.nearest = q + z;
    r.distance = norm(z);
    r.witness = z;
    return r;
}

/// Membership of q in conv{points} with mandatory certificates (Eq. style:
/// weights inside, strictly separating direction outside).
inline HullResult hull_membership(const Vec& q, const std::vector<Vec>& points,
                                  double tol = 1e-9) {
    HullResult r = nearest_hull_point(q, points, std::min(tol, 1e-9));
    r.inside = r.distance <= tol;
    return r;
}

}  // namespace shockflow
