#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "shockflow/branch_set.hpp"
#include "shockflow/errors.hpp"
#include "shockflow/hull.hpp"
#include "shockflow/lagrangian.hpp"
#include "shockflow/vec.hpp"

namespace shockflow {

/// hat L(v) = L(t,x,v) - min_i(-H_i + p_i.v) = max_i [L(v) + H_i - p_i.v],
/// the pointwise maximum of strictly convex functions whose unique
/// minimizer is the admissible velocity.
inline double hat_L(const BranchSet& b, const Vec& v) {
    if (!b.model()) throw DomainError("hat_L needs an attached Hamiltonian model");
    LagrangianView lag(*b.model());
    const double lv = lag.value(b.t(), b.x(), v);
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < b.size(); ++i)
        mx = std::max(mx, b[i].H - dot(b[i].p, v));
    return lv + mx;
}

struct AdmissibleResult {
    Vec v_star;
    Vec p_star;                           ///< grad_v L at v_star
    std::vector<std::size_t> active_set;  ///< I(v_star)
    std::vector<double> hull_weights;     ///< lambda over active_set entries
    double objective = 0.0;               ///< hat_L(v_star)
    double certificate_residual = 0.0;    ///< dist(p_star, conv{p_j : j in I(v_star)})
    int iterations = 0;
};

enum class ShockClass { restraining, nonrestraining };

inline const char* to_string(ShockClass c) {
    return c == ShockClass::restraining ? "restraining" : "nonrestraining";
}

namespace detail {

/// Rough Euclidean enclosing-ball center (Ritter-style); only a seed for
/// the active-set solver, not the Welzl construction used by tests.
inline Vec approx_ball_center(const std::vector<Vec>& pts) {
    std::size_t a = 0, bidx = 0;
    for (std::size_t j = 1; j < pts.size(); ++j)
        if (dist(pts[j], pts[a]) > dist(pts[bidx], pts[a])) bidx = j;
    std::size_t c = bidx;
    for (std::size_t j = 0; j < pts.size(); ++j)
        if (dist(pts[j], pts[bidx]) > dist(pts[c], pts[bidx])) c = j;
    Vec center = 0.5 * (pts[bidx] + pts[c]);
    double radius = 0.5 * dist(pts[bidx], pts[c]);
    for (int pass = 0; pass < 3; ++pass) {
        for (const auto& p : pts) {
            const double dd = dist(p, center);
            if (dd > radius) {
                const double shift = 0.5 * (dd - radius);
                center += (shift / dd) * (p - center);
                radius += shift;
            }
        }
    }
    return center;
}

struct MinimaxSolution {
    Vec p_star;                  ///< sum lambda_j p_j
    Vec v_star;                  ///< grad_p H(p_star)
    std::vector<double> lambda;  ///< full-length simplex weights
    double eta = 0.0;            ///< max_i (H_i - p_i.v_star)
    int iterations = 0;
};

/// Minimize hat L via its dual: maximize g(lambda) = sum lambda_i H_i -
/// H(sum lambda_i p_i) over the simplex. This is the epigraph active-set
/// scheme in multiplier space: the working set S is the active constraint
/// set of min L(v)+s, s >= H_i - p_i.v, and each inner step is a reduced
/// Newton (sequential quadratic) step. KKT of either form reads
/// grad L(v*) = sum lambda_j p_j, the Eq. 24 certificate.
inline MinimaxSolution minimize_hat_L(const HamiltonianModel& model, double t, const Vec& x,
                                      const std::vector<Vec>& momenta,
                                      const std::vector<double>& hvals) {
    const std::size_t n = momenta.size();
    const std::size_t d = momenta.empty() ? 0 : momenta[0].dim();
    if (n == 0) throw DomainError("minimax needs at least one branch");

    MinimaxSolution sol;
    sol.lambda.assign(n, 0.0);

    auto combine = [&](const std::vector<double>& lam) {
        Vec p = Vec::zero(d);
        for (std::size_t i = 0; i < n; ++i)
            if (lam[i] != 0.0) p += lam[i] * momenta[i];
        return p;
    };
    auto dual_value = [&](const std::vector<double>& lam) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += lam[i] * hvals[i];
        return s - model.value(t, x, combine(lam));
    };

    if (n == 1) {
        sol.lambda[0] = 1.0;
        sol.p_star = momenta[0];
        sol.v_star = model.grad(t, x, momenta[0]);
        sol.eta = hvals[0] - dot(momenta[0], sol.v_star);
        return sol;
    }

    double hscale = 1.0, pscale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        hscale = std::max(hscale, std::abs(hvals[i]));
        pscale = std::max(pscale, norm(momenta[i]));
    }
    const double tol_kkt = 1e-12 * (hscale + pscale * pscale + 1.0);

    // seed: branches seeing the max of H_i - p_i.c at the approximate ball center
    std::vector<std::size_t> support;
    {
        std::vector<Vec> vels(n);
        for (std::size_t i = 0; i < n; ++i) vels[i] = model.grad(t, x, momenta[i]);
        const Vec c = approx_ball_center(vels);
        double mx = -std::numeric_limits<double>::infinity();
        std::vector<double> gi(n);
        for (std::size_t i = 0; i < n; ++i) {
            gi[i] = hvals[i] - dot(momenta[i], c);
            mx = std::max(mx, gi[i]);
        }
        for (std::size_t i = 0; i < n; ++i)
            if (gi[i] >= mx - 1e-9 * (1.0 + std::abs(mx))) support.push_back(i);
    }
    std::vector<double> lam(n, 0.0);
    for (std::size_t i : support) lam[i] = 1.0 / double(support.size());

    double gval = dual_value(lam);
    const int max_outer = 400;
    int it = 0;
    for (; it < max_outer; ++it) {
        const Vec p = combine(lam);
        if (norm(p) > 1e8 * (1.0 + pscale))
            throw DomainBoundary("minimizer of hat L pushed to the domain boundary");
        const Vec v = model.grad(t, x, p);
        std::vector<double> gi(n);
        for (std::size_t i = 0; i < n; ++i) gi[i] = hvals[i] - dot(momenta[i], v);

        // eta = support-average of the tied values
        double eta = 0.0;
        for (std::size_t i : support) eta += gi[i];
        eta /= double(support.size());

        double spread = 0.0;
        for (std::size_t i : support) spread = std::max(spread, std::abs(gi[i] - eta));
        double viol = 0.0;
        std::size_t worst = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::find(support.begin(), support.end(), i) != support.end()) continue;
            if (gi[i] - eta > viol) {
                viol = gi[i] - eta;
                worst = i;
            }
        }
        if (spread <= tol_kkt && viol <= tol_kkt) break;

        // grow the support once the inner ties are resolved well below the
        // outstanding violation
        if (worst != n && viol > tol_kkt && spread <= std::max(tol_kkt, 1e-2 * viol)) {
            support.push_back(worst);
            // keep lam unchanged; next sweep redistributes
        }

        // reduced Newton step over the support, anchored at the heaviest index
        const std::size_t m = support.size();
        if (m == 1) {
            // single-vertex support that still violates: add and continue
            continue;
        }
        std::size_t anchor_pos = 0;
        for (std::size_t a = 1; a < m; ++a)
            if (lam[support[a]] > lam[support[anchor_pos]]) anchor_pos = a;
        std::swap(support[anchor_pos], support[m - 1]);
        const std::size_t i0 = support[m - 1];
        const Mat hh = model.hess(t, x, p);
        Mat r(m - 1);
        Vec grad_red(m - 1);
        std::vector<Vec> dp(m - 1);
        for (std::size_t a = 0; a + 1 < m; ++a) {
            dp[a] = momenta[support[a]] - momenta[i0];
            grad_red[a] = gi[support[a]] - gi[i0];
        }
        for (std::size_t a = 0; a + 1 < m; ++a)
            for (std::size_t b2 = 0; b2 < m - 1; ++b2) r(a, b2) = dot(dp[a], hh * dp[b2]);

        Vec step;
        double ridge = 0.0;
        for (int tries = 0; tries < 8; ++tries) {
            Mat rr = r;
            if (ridge > 0.0)
                for (std::size_t a = 0; a + 1 < m; ++a) rr(a, a) += ridge;
            if (solve_spd(rr, grad_red, step)) break;
            ridge = (ridge == 0.0) ? 1e-12 * (1.0 + pscale * pscale) : ridge * 100.0;
            step = Vec();
        }
        if (step.dim() == 0) throw NonConvergence("reduced Newton system unsolvable");

        // direction in full lambda space
        std::vector<double> dir(n, 0.0);
        for (std::size_t a = 0; a + 1 < m; ++a) {
            dir[support[a]] += step[a];
            dir[i0] -= step[a];
        }
        // longest feasible step keeping lambda >= 0
        double alpha_max = 1.0;
        double dirmax = 0.0;
        for (std::size_t i : support) {
            if (dir[i] < 0.0) alpha_max = std::min(alpha_max, -lam[i] / dir[i]);
            dirmax = std::max(dirmax, std::abs(dir[i]));
        }
        if (alpha_max * dirmax <= 1e-14) {
            // boundary step moves nothing: a negligible-weight index blocks
            // the direction; drop it and retry
            std::vector<std::size_t> ns;
            for (std::size_t i : support)
                if (!(lam[i] <= 1e-13 && dir[i] < 0.0)) ns.push_back(i);
            if (ns.size() == support.size() || ns.empty())
                throw NonConvergence("active-set step blocked without progress");
            for (std::size_t i = 0; i < n; ++i)
                if (std::find(ns.begin(), ns.end(), i) == ns.end()) lam[i] = 0.0;
            support = std::move(ns);
            double tot = 0.0;
            for (std::size_t i = 0; i < n; ++i) tot += lam[i];
            for (std::size_t i = 0; i < n; ++i) lam[i] /= tot;
            continue;
        }

        auto support_spread = [&](const std::vector<double>& lm) {
            const Vec vv = model.grad(t, x, combine(lm));
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (std::size_t i : support) {
                const double g = hvals[i] - dot(momenta[i], vv);
                lo = std::min(lo, g);
                hi = std::max(hi, g);
            }
            return hi - lo;
        };

        std::vector<double> cand(n);
        auto fill_cand = [&](double a) {
            for (std::size_t i = 0; i < n; ++i) cand[i] = lam[i] + a * dir[i];
            for (std::size_t i : support) cand[i] = std::max(cand[i], 0.0);
        };

        bool improved = false;
        // local phase: the feasible full Newton step converges quadratically
        // on the tie equations; g-comparisons drown in rounding there
        if (alpha_max >= 1.0) {
            fill_cand(1.0);
            if (support_spread(cand) <= 0.5 * spread) {
                lam = cand;
                gval = dual_value(lam);
                improved = true;
            }
        }
        if (!improved) {
            // global phase: strict ascent only; accepting flat moves lets
            // full steps hop between simplex vertices (g = 0 there) forever
            double alpha = alpha_max;
            for (int ls = 0; ls < 60; ++ls) {
                fill_cand(alpha);
                const double cv = dual_value(cand);
                if (cv > gval) {
                    lam = cand;
                    gval = cv;
                    improved = true;
                    break;
                }
                alpha *= 0.5;
            }
        }
        if (!improved) {
            if (spread <= 1e4 * tol_kkt && viol <= 1e4 * tol_kkt) break;
            throw NonConvergence("dual ascent stalled before reaching tolerance");
        }

        // prune (numerically) zeroed support entries; they return through the
        // violation check if genuinely active
        std::vector<std::size_t> ns;
        for (std::size_t i : support)
            if (lam[i] > 1e-14) ns.push_back(i);
        if (ns.empty()) ns.push_back(support[0]);
        for (std::size_t i = 0; i < n; ++i)
            if (std::find(ns.begin(), ns.end(), i) == ns.end()) lam[i] = 0.0;
        support = std::move(ns);
        double tot = 0.0;
        for (std::size_t i = 0; i < n; ++i) tot += lam[i];
        for (std::size_t i = 0; i < n; ++i) lam[i] /= tot;
    }
    if (it >= max_outer) throw NonConvergence("hat L minimization exceeded iteration budget");

    sol.lambda = lam;
    sol.p_star = combine(lam);
    sol.v_star = model.grad(t, x, sol.p_star);
    double eta = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        eta = std::max(eta, hvals[i] - dot(momenta[i], sol.v_star));
    sol.eta = eta;
    sol.iterations = it;
    return sol;
}

}  // namespace detail

/// The unique admissible velocity at the shock point described by b:
/// global minimizer of hat L, with the hull certificate of Eq.-24 type
/// evaluated through an independent membership solve.
inline AdmissibleResult admissible(const BranchSet& b) {
    if (!b.model()) throw DomainError("admissible needs an attached Hamiltonian model");
    const auto& model = *b.model();
    LagrangianView lag(model);

    std::vector<Vec> ps = b.momenta();
    std::vector<double> hs(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) hs[i] = b[i].H;

    const auto sol = detail::minimize_hat_L(model, b.t(), b.x(), ps, hs);

    AdmissibleResult r;
    r.v_star = sol.v_star;
    r.p_star = lag.momentum_of_velocity(b.t(), b.x(), sol.v_star);
    r.objective = hat_L(b, sol.v_star);
    r.iterations = sol.iterations;

    // active set: indices within 1e-7*(1+|objective|) of the max of H_i - p_i.v
    const double tol_act = 1e-7 * (1.0 + std::abs(r.objective));
    std::vector<double> gi(b.size());
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < b.size(); ++i) {
        gi[i] = b[i].H - dot(b[i].p, r.v_star);
        mx = std::max(mx, gi[i]);
    }
    for (std::size_t i = 0; i < b.size(); ++i)
        if (gi[i] >= mx - tol_act) r.active_set.push_back(i);

    std::vector<Vec> act_p;
    for (std::size_t i : r.active_set) act_p.push_back(b[i].p);
    const HullResult cert = hull_membership(r.p_star, act_p, 1e-6);
    r.certificate_residual = cert.distance;
    r.hull_weights.resize(r.active_set.size());
    double tot = 0.0;
    for (std::size_t k = 0; k < r.active_set.size(); ++k) {
        r.hull_weights[k] = sol.lambda[r.active_set[k]];
        tot += r.hull_weights[k];
    }
    if (tot > 0.0)
        for (double& w : r.hull_weights) w /= tot;
    return r;
}

struct BregmanBall {
    Vec center;
    double radius = 0.0;
    std::vector<std::size_t> support;
    std::vector<double> weights;  ///< simplex weights over support
};

/// Center of the smallest Bregman sphere containing all velocities:
/// argmin_v max_i D_L(v | v_i). Writing D_L(v|v_i) = L(v) + H(p_i) - p_i.v
/// with p_i = grad L(v_i) turns this into the same minimax problem as
/// hat L, so the equivalence with admissible() is structural.
inline BregmanBall smallest_bregman_ball(const LagrangianView& lag,
                                         const std::vector<Vec>& velocities, double t,
                                         const Vec& x) {
    if (velocities.empty()) throw DomainError("Bregman ball needs at least one velocity");
    for (const auto& v : velocities)
        if (!lag.in_domain(v)) throw DomainError("velocity outside dom L");

    std::vector<Vec> ps(velocities.size());
    std::vector<double> hs(velocities.size());
    for (std::size_t i = 0; i < velocities.size(); ++i) {
        ps[i] = lag.momentum_of_velocity(t, x, velocities[i]);
        hs[i] = dot(ps[i], velocities[i]) - lag.value(t, x, velocities[i]);
    }
    const auto sol = detail::minimize_hat_L(lag.model(), t, x, ps, hs);

    BregmanBall ball;
    ball.center = sol.v_star;
    double radius = 0.0;
    std::vector<double> div(velocities.size());
    for (std::size_t i = 0; i < velocities.size(); ++i) {
        div[i] = lag.bregman(t, x, ball.center, velocities[i]);
        radius = std::max(radius, div[i]);
    }
    ball.radius = radius;
    const double tol = 1e-7 * (1.0 + radius);
    for (std::size_t i = 0; i < velocities.size(); ++i)
        if (div[i] >= radius - tol) ball.support.push_back(i);
    double tot = 0.0;
    for (std::size_t i : ball.support) tot += sol.lambda[i];
    for (std::size_t i : ball.support)
        ball.weights.push_back(tot > 0.0 ? sol.lambda[i] / tot : 0.0);
    return ball;
}

inline BregmanBall smallest_bregman_ball(const LagrangianView& lag,
                                         const std::vector<Vec>& velocities) {
    const std::size_t d = velocities.empty() ? 0 : velocities[0].dim();
    return smallest_bregman_ball(lag, velocities, 0.0, Vec::zero(d));
}

/// Finite-difference surplus-action rates
///   [phi(t,x) + L(t,x,v) dt - phi(t+dt, x+v dt)] / dt
/// for each dt in dt_list; the rates approach hat_L(b, v) as dt drops.
inline std::vector<double> surplus_rate_check(const BranchSet& b,
                                              const std::function<double(double, const Vec&)>& phi,
                                              const Vec& v, const std::vector<double>& dt_list) {
    if (!b.model()) throw DomainError("surplus rate needs an attached model");
    LagrangianView lag(*b.model());
    const double lv = lag.value(b.t(), b.x(), v);
    double phi0 = 0.0;
    try {
        phi0 = phi(b.t(), b.x());
    } catch (const std::exception& e) {
        throw FieldError(std::string("field not evaluable at base point: ") + e.what());
    }
    if (!std::isfinite(phi0)) throw FieldError("field non-finite at base point");
    std::vector<double> rates;
    rates.reserve(dt_list.size());
    for (double dt : dt_list) {
        double phi1 = 0.0;
        try {
            phi1 = phi(b.t() + dt, axpy(dt, v, b.x()));
        } catch (const std::exception& e) {
            throw FieldError(std::string("field not evaluable at probe point: ") + e.what());
        }
        if (!std::isfinite(phi1)) throw FieldError("field non-finite at probe point");
        rates.push_back((phi0 + lv * dt - phi1) / dt);
    }
    return rates;
}

/// Restraining vs nonrestraining: nonrestraining when the Bregman-ball
/// support (= active set of the minimax) is a proper subset of the branch
/// set. Codimension-one shocks (two branches) are always restraining.
inline ShockClass classify_restraining(const BranchSet& b) {
    if (b.size() <= 2) return ShockClass::restraining;
    const AdmissibleResult r = admissible(b);
    return r.active_set.size() < b.size() ? ShockClass::nonrestraining
                                          : ShockClass::restraining;
}

inline ShockClass classify_restraining(const BranchSet& b, const AdmissibleResult& r) {
    if (b.size() <= 2) return ShockClass::restraining;
    return r.active_set.size() < b.size() ? ShockClass::nonrestraining
                                          : ShockClass::restraining;
}

}  // namespace shockflow
