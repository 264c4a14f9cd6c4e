#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <queue>
#include <vector>

#include "shockflow/branch_set.hpp"
#include "shockflow/errors.hpp"
#include "shockflow/hamiltonian.hpp"
#include "shockflow/lagrangian.hpp"
#include "shockflow/vec.hpp"

namespace shockflow {

/// Initial condition phi_0 for the Cauchy problem. Three representations:
/// a smooth closed-form callback (optionally with gradient), a pointwise
/// minimum of affine pieces p.y + c, or a uniform grid sample.
class InitialData {
public:
    enum class Kind { callback, min_affine, grid };

    struct AffinePiece {
        Vec p;
        double c = 0.0;
    };

    static InitialData callback(std::size_t d, std::function<double(const Vec&)> f,
                                std::function<Vec(const Vec&)> grad = nullptr) {
        InitialData id;
        id.kind_ = Kind::callback;
        id.dim_ = d;
        id.f_ = std::move(f);
        id.grad_ = std::move(grad);
        return id;
    }

    static InitialData min_affine(std::vector<AffinePiece> pieces) {
        if (pieces.empty()) throw DomainError("min_affine needs at least one piece");
        InitialData id;
        id.kind_ = Kind::min_affine;
        id.dim_ = pieces[0].p.dim();
        id.pieces_ = std::move(pieces);
        return id;
    }

    /// 1-d uniform grid sample on [lo, hi]; piecewise-linear in between.
    static InitialData grid1d(double lo, double hi, std::vector<double> values) {
        if (values.size() < 2) throw DomainError("grid sample needs at least two nodes");
        InitialData id;
        id.kind_ = Kind::grid;
        id.dim_ = 1;
        id.glo_ = lo;
        id.ghi_ = hi;
        id.gvals_ = std::move(values);
        return id;
    }

    Kind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }
    const std::vector<AffinePiece>& pieces() const { return pieces_; }

    double value(const Vec& y) const {
        switch (kind_) {
            case Kind::callback: return f_(y);
            case Kind::min_affine: {
                double mn = std::numeric_limits<double>::infinity();
                for (const auto& pc : pieces_) mn = std::min(mn, dot(pc.p, y) + pc.c);
                return mn;
            }
            case Kind::grid: {
                const double h = (ghi_ - glo_) / double(gvals_.size() - 1);
                double s = (y[0] - glo_) / h;
                s = std::clamp(s, 0.0, double(gvals_.size() - 1));
                const std::size_t i = std::min(std::size_t(s), gvals_.size() - 2);
                const double f = s - double(i);
                return gvals_[i] * (1.0 - f) + gvals_[i + 1] * f;
            }
        }
        return 0.0;
    }

    bool has_gradient() const {
        return kind_ == Kind::min_affine || (kind_ == Kind::callback && bool(grad_));
    }

    Vec gradient(const Vec& y) const {
        switch (kind_) {
            case Kind::callback:
                if (grad_) return grad_(y);
                break;
            case Kind::min_affine: {
                std::size_t best = 0;
                double mn = std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j < pieces_.size(); ++j) {
                    const double v = dot(pieces_[j].p, y) + pieces_[j].c;
                    if (v < mn) {
                        mn = v;
                        best = j;
                    }
                }
                return pieces_[best].p;
            }
            case Kind::grid: break;
        }
        // central differences as the generic fallback
        Vec g(dim_);
        const double h = 1e-6;
        for (std::size_t k = 0; k < dim_; ++k) {
            Vec a = y, b = y;
            a[k] += h;
            b[k] -= h;
            g[k] = (value(a) - value(b)) / (2.0 * h);
        }
        return g;
    }

    /// Lipschitz constant estimated from sampled gradients on |y-x| <= r.
    double lipschitz_estimate(const Vec& x, double r, std::size_t samples = 200) const {
        double lip = 0.0;
        if (kind_ == Kind::min_affine) {
            for (const auto& pc : pieces_) lip = std::max(lip, norm(pc.p));
            return lip;
        }
        std::uint64_t state = 88172645463325252ULL;
        auto next = [&] {  // xorshift; only drives sampling
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            return double(state >> 11) * 0x1.0p-53;
        };
        for (std::size_t s = 0; s < samples; ++s) {
            Vec y(dim_);
            for (std::size_t k = 0; k < dim_; ++k) y[k] = x[k] + (2.0 * next() - 1.0) * r;
            lip = std::max(lip, norm(gradient(y)));
        }
        return lip;
    }

private:
    Kind kind_ = Kind::callback;
    std::size_t dim_ = 1;
    std::function<double(const Vec&)> f_;
    std::function<Vec(const Vec&)> grad_;
    std::vector<AffinePiece> pieces_;
    double glo_ = 0.0, ghi_ = 0.0;
    std::vector<double> gvals_;
};

/// Search-window and resolution controls for the variational solve.
struct SearchSpec {
    double window_halfwidth = 0.0;   ///< 0: derive from (1 + v_max) t
    std::size_t points_per_dim = 0;  ///< 0: dimension-dependent default
    double cluster_merge = 1e-4;     ///< relative to the window width
    double value_tol = 1e-8;         ///< relative co-minimizer tolerance
};

struct ValueResult {
    double value = 0.0;
    std::vector<Vec> minimizer_points;
    std::vector<Vec> momenta;
    double hessian_min_eig = 0.0;
    bool degenerate_flat = false;  ///< minimum attained on a continuum
};

enum class PointClass { regular, shock, preshock };

inline const char* to_string(PointClass c) {
    switch (c) {
        case PointClass::regular: return "regular";
        case PointClass::shock: return "shock";
        case PointClass::preshock: return "preshock";
    }
    return "?";
}

namespace detail {

struct ScanGrid {
    Vec lo;
    double dx = 0.0;
    std::size_t npts = 0;  // per dimension
    std::size_t dim = 0;

    std::size_t total() const {
        std::size_t t = 1;
        for (std::size_t k = 0; k < dim; ++k) t *= npts;
        return t;
    }
    Vec point(std::size_t flat) const {
        Vec y(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            y[k] = lo[k] + double(flat % npts) * dx;
            flat /= npts;
        }
        return y;
    }
    bool on_boundary(std::size_t flat) const {
        for (std::size_t k = 0; k < dim; ++k) {
            const std::size_t i = flat % npts;
            if (i == 0 || i + 1 == npts) return true;
            flat /= npts;
        }
        return false;
    }
};

/// Coordinate-wise golden-section polish of f around y0 within +-h.
/// Derivative-free so kinks in phi_0 are handled, at the cost of a few
/// hundred evaluations.
inline Vec golden_polish(const std::function<double(const Vec&)>& f, Vec y0, double h,
                         int sweeps) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int s = 0; s < sweeps; ++s) {
        for (std::size_t k = 0; k < y0.dim(); ++k) {
            double a = y0[k] - h, b = y0[k] + h;
            auto eval = [&](double v) {
                Vec y = y0;
                y[k] = v;
                return f(y);
            };
            double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
            double f1 = eval(x1), f2 = eval(x2);
            for (int it = 0; it < 90 && (b - a) > 1e-13 * (1.0 + std::abs(y0[k])); ++it) {
                if (f1 < f2) {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - gr * (b - a);
                    f1 = eval(x1);
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + gr * (b - a);
                    f2 = eval(x2);
                }
            }
            y0[k] = 0.5 * (a + b);
        }
        h *= 0.25;
    }
    return y0;
}

}  // namespace detail

/// Viscosity-solution value by the least-action formula with straight-line
/// trajectories (valid for autonomous Hamiltonians):
///   phi(t,x) = min_y [phi_0(y) + t L((x-y)/t)].
/// Exact branch enumeration for min-affine data; window scan plus local
/// polish otherwise. Returns every co-minimizer cluster.
inline ValueResult hopf_lax_value(const HamiltonianModel& model, const InitialData& phi0,
                                  double t, const Vec& x, SearchSpec spec = {}) {
    if (!model.autonomous())
        throw DomainError("hopf_lax_value requires an autonomous Hamiltonian");
    if (!(t > 0.0)) throw DomainError("hopf_lax_value requires t > 0");
    const std::size_t d = model.dim();
    LagrangianView lag(model);

    ValueResult vr;

    if (phi0.kind() == InitialData::Kind::min_affine) {
        // exact: min_y over each affine piece gives p_j.x + c_j - t H(p_j)
        const auto& pieces = phi0.pieces();
        std::vector<double> vals(pieces.size());
        double mn = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pieces.size(); ++j) {
            vals[j] = dot(pieces[j].p, x) + pieces[j].c - t * model.value(pieces[j].p);
            mn = std::min(mn, vals[j]);
        }
        vr.value = mn;
        const double tol = spec.value_tol * (1.0 + std::abs(mn));
        double eig = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pieces.size(); ++j) {
            if (vals[j] > mn + tol) continue;
            const Vec vj = model.grad(pieces[j].p);
            vr.minimizer_points.push_back(axpy(-t, vj, x));
            vr.momenta.push_back(pieces[j].p);
            eig = std::min(eig, min_eigenvalue_sym(lag.hessian(vj)) / t);
        }
        vr.hessian_min_eig = eig;
        return vr;
    }

    // ---- generic route: window scan + polish ----
    double window = spec.window_halfwidth;
    if (window <= 0.0) {
        const double r0 = std::max(1.0, 2.0 * t);
        const double lip = phi0.lipschitz_estimate(x, r0);
        double vmax = 0.0;
        {
            std::uint64_t state = 2463534242ULL;
            for (int s = 0; s < 16; ++s) {
                Vec u(d);
                double nn = 0.0;
                for (std::size_t k = 0; k < d; ++k) {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    u[k] = double(state >> 11) * 0x1.0p-53 - 0.5;
                    nn += u[k] * u[k];
                }
                u *= (lip + 1e-9) / std::sqrt(std::max(nn, 1e-300));
                vmax = std::max(vmax, norm(model.grad(u)));
            }
        }
        window = (1.0 + vmax) * t;
    }

    std::size_t npts = spec.points_per_dim;
    if (npts == 0) npts = (d == 1) ? 801 : (d == 2) ? 161 : 41;

    detail::ScanGrid grid;
    grid.dim = d;
    grid.npts = npts;
    grid.dx = 2.0 * window / double(npts - 1);
    grid.lo = x;
    for (std::size_t k = 0; k < d; ++k) grid.lo[k] -= window;

    auto objective = [&](const Vec& y) -> double {
        const Vec v = (x - y) / t;
        if (!lag.in_domain(v)) return std::numeric_limits<double>::infinity();
        return phi0.value(y) + t * lag.value(v);
    };

    const std::size_t total = grid.total();
    std::vector<double> fv(total);
    double fmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < total; ++i) {
        fv[i] = objective(grid.point(i));
        fmin = std::min(fmin, fv[i]);
    }
    if (!std::isfinite(fmin)) throw WindowTooSmall("no feasible point in the search window");

    // flat continuum of minimizers (conjugate point): a connected near-min
    // component spanning many nodes
    {
        const double tau_flat = 1e-9 * (1.0 + std::abs(fmin));
        std::vector<char> near(total, 0);
        for (std::size_t i = 0; i < total; ++i) near[i] = fv[i] <= fmin + tau_flat;
        std::vector<char> seen(total, 0);
        std::size_t largest = 0, largest_seed = 0;
        for (std::size_t i = 0; i < total; ++i) {
            if (!near[i] || seen[i]) continue;
            std::size_t count = 0;
            std::queue<std::size_t> q;
            q.push(i);
            seen[i] = 1;
            while (!q.empty()) {
                const std::size_t cur = q.front();
                q.pop();
                ++count;
                std::size_t rem = cur;
                std::size_t stride = 1;
                for (std::size_t k = 0; k < d; ++k) {
                    const std::size_t idx = rem % npts;
                    if (idx > 0 && near[cur - stride] && !seen[cur - stride]) {
                        seen[cur - stride] = 1;
                        q.push(cur - stride);
                    }
                    if (idx + 1 < npts && near[cur + stride] && !seen[cur + stride]) {
                        seen[cur + stride] = 1;
                        q.push(cur + stride);
                    }
                    rem /= npts;
                    stride *= npts;
                }
            }
            if (count > largest) {
                largest = count;
                largest_seed = i;
            }
        }
        if (largest >= 5) {
            vr.degenerate_flat = true;
            vr.value = fmin;
            // representative: the near-min node closest to x
            std::size_t best = largest_seed;
            double bestd = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < total; ++i) {
                if (!near[i]) continue;
                const double dd = dist(grid.point(i), x);
                if (dd < bestd) {
                    bestd = dd;
                    best = i;
                }
            }
            const Vec y = grid.point(best);
            vr.minimizer_points.push_back(y);
            vr.momenta.push_back(lag.momentum_of_velocity((x - y) / t));
            vr.hessian_min_eig = 0.0;
            return vr;
        }
    }

    // local minima of the scan
    std::vector<std::size_t> local_minima;
    for (std::size_t i = 0; i < total; ++i) {
        bool ismin = true;
        std::size_t rem = i, stride = 1;
        for (std::size_t k = 0; k < d && ismin; ++k) {
            const std::size_t idx = rem % npts;
            if (idx > 0 && fv[i - stride] < fv[i]) ismin = false;
            if (idx + 1 < npts && fv[i + stride] < fv[i]) ismin = false;
            rem /= npts;
            stride *= npts;
        }
        if (ismin) local_minima.push_back(i);
    }
    std::sort(local_minima.begin(), local_minima.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    if (local_minima.size() > 64) local_minima.resize(64);

    struct Cand {
        Vec y;
        double f;
        bool boundary;
    };
    std::vector<Cand> cands;
    for (std::size_t i : local_minima) {
        const Vec y0 = grid.point(i);
        const Vec y = detail::golden_polish(objective, y0, grid.dx, 2 + int(d));
        cands.push_back({y, objective(y), grid.on_boundary(i)});
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : cands) best = std::min(best, c.f);

    const double vtol = spec.value_tol * (1.0 + std::abs(best));
    const double merge_r = spec.cluster_merge * 2.0 * window;
    vr.value = best;
    for (const auto& c : cands) {
        if (c.f > best + vtol) continue;
        if (c.boundary)
            throw WindowTooSmall("global minimizer touches the search window boundary");
        bool dup = false;
        for (const auto& y : vr.minimizer_points)
            if (dist(y, c.y) <= merge_r) {
                dup = true;
                break;
            }
        if (!dup) vr.minimizer_points.push_back(c.y);
    }
    for (const auto& y : vr.minimizer_points)
        vr.momenta.push_back(lag.momentum_of_velocity((x - y) / t));

    // curvature at the best minimizer by finite differences
    {
        const Vec& y = vr.minimizer_points.front();
        const double h = std::max(0.5 * grid.dx, 1e-5 * window);
        Mat hess(d);
        for (std::size_t a = 0; a < d; ++a) {
            Vec ya = y, yb = y;
            ya[a] += h;
            yb[a] -= h;
            hess(a, a) = (objective(ya) - 2.0 * objective(y) + objective(yb)) / (h * h);
            for (std::size_t b = a + 1; b < d; ++b) {
                Vec pp = y, pm = y, mp = y, mm = y;
                pp[a] += h;
                pp[b] += h;
                pm[a] += h;
                pm[b] -= h;
                mp[a] -= h;
                mp[b] += h;
                mm[a] -= h;
                mm[b] -= h;
                hess(a, b) = hess(b, a) =
                    (objective(pp) - objective(pm) - objective(mp) + objective(mm)) /
                    (4.0 * h * h);
            }
        }
        vr.hessian_min_eig = min_eigenvalue_sym(hess);
    }
    return vr;
}

struct Classification {
    PointClass cls = PointClass::regular;
    std::size_t branch_count = 1;
};

/// regular (one minimizer, genuine curvature), shock(k >= 2 clusters), or
/// preshock (conjugate point: one cluster with vanishing curvature).
inline Classification classify_point(const ValueResult& vr, double /*tol_cluster*/ = 1e-4,
                                     double tol_eig = 1e-5) {
    Classification c;
    c.branch_count = vr.minimizer_points.size();
    if (vr.minimizer_points.size() >= 2) {
        c.cls = PointClass::shock;
    } else if (vr.degenerate_flat || vr.hessian_min_eig <= tol_eig) {
        c.cls = PointClass::preshock;
    } else {
        c.cls = PointClass::regular;
    }
    return c;
}

/// Shock data for the admissible-velocity machinery: one branch per
/// minimizer cluster, momenta propagated along the extremal.
inline BranchSet branchset_at(std::shared_ptr<const HamiltonianModel> model,
                              const InitialData& phi0, double t, const Vec& x,
                              SearchSpec spec = {}) {
    const ValueResult vr = hopf_lax_value(*model, phi0, t, x, spec);
    const Classification c = classify_point(vr);
    if (c.cls == PointClass::preshock)
        throw PreshockError("branch momenta undefined at a conjugate point");
    return BranchSet::from_momenta(t, x, vr.momenta, std::move(model));
}

}  // namespace shockflow
