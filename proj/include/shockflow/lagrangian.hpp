#pragma once

#include <cmath>
#include <limits>

#include "shockflow/errors.hpp"
#include "shockflow/hamiltonian.hpp"
#include "shockflow/vec.hpp"

namespace shockflow {

/// Legendre-Fenchel conjugate view of a HamiltonianModel:
///   L(t,x,v) = sup_p [p.v - H(t,x,p)]
/// together with the two mutually inverse gradient maps
///   v = grad_p H(t,x,p)   and   p = grad_v L(t,x,v).
/// Cataloged kinds use closed forms; the custom kind solves the concave
/// maximization with damped Newton, falling back to coordinate-wise
/// bisection when the Newton system is degenerate.
class LagrangianView {
public:
    explicit LagrangianView(const HamiltonianModel& h) : h_(&h) {}

    const HamiltonianModel& model() const { return *h_; }
    std::size_t dim() const { return h_->dim(); }

    /// true when v lies in the (open) effective domain of L(t,x,.)
    bool in_domain(const Vec& v) const {
        if (h_->kind() == HamiltonianKind::relativistic)
            return norm(v) < 1.0 - kRelBoundary;
        return true;
    }

    double value(double t, const Vec& x, const Vec& v) const {
        switch (h_->kind()) {
            case HamiltonianKind::quadratic: {
                Vec p;
                if (!solve_spd(h_->quadratic_matrix(), v, p))
                    throw DomainError("quadratic form is not positive definite");
                return 0.5 * dot(v, p);
            }
            case HamiltonianKind::relativistic: {
                const double r2 = norm2(v);
                if (r2 >= (1.0 - kRelBoundary) * (1.0 - kRelBoundary))
                    throw DomainError("relativistic Lagrangian requires |v| < 1");
                return -std::sqrt(1.0 - r2);
            }
            case HamiltonianKind::power_law: {
                const double beta = h_->alpha() / (h_->alpha() - 1.0);
                return std::pow(norm(v), beta) / beta;
            }
            case HamiltonianKind::quad_quartic:
            case HamiltonianKind::custom: {
                const Vec p = momentum_of_velocity(t, x, v);
                return dot(p, v) - h_->value(t, x, p);
            }
        }
        return 0.0;
    }

    /// p = grad_v L(t,x,v), the inverse Legendre map: solves grad_p H(p) = v.
    Vec momentum_of_velocity(double t, const Vec& x, const Vec& v) const {
        switch (h_->kind()) {
            case HamiltonianKind::quadratic: {
                Vec p;
                if (!solve_spd(h_->quadratic_matrix(), v, p))
                    throw DomainError("quadratic form is not positive definite");
                return p;
            }
            case HamiltonianKind::relativistic: {
                const double r2 = norm2(v);
                if (r2 >= (1.0 - kRelBoundary) * (1.0 - kRelBoundary))
                    throw DomainError("relativistic momentum requires |v| < 1");
                return v / std::sqrt(1.0 - r2);
            }
            case HamiltonianKind::power_law: {
                const double r = norm(v);
                if (r == 0.0) return Vec::zero(dim());
                // radial: r_p^(alpha-1) = r_v
                return std::pow(r, 1.0 / (h_->alpha() - 1.0) - 1.0) * v;
            }
            case HamiltonianKind::quad_quartic: {
                const double r = norm(v);
                if (r == 0.0) return Vec::zero(dim());
                const double rp = solve_cubic_radial(h_->quartic_coeff(), r);
                return (rp / r) * v;
            }
            case HamiltonianKind::custom: return invert_gradient(t, x, v);
        }
        return Vec::zero(dim());
    }

    /// v = grad_p H(t,x,p), the forward Legendre map.
    Vec velocity_of_momentum(double t, const Vec& x, const Vec& p) const {
        return h_->grad(t, x, p);
    }

    /// Hessian of L at v; equals the inverse of the Hessian of H at the
    /// conjugate momentum.
    Mat hessian(double t, const Vec& x, const Vec& v) const {
        const Vec p = momentum_of_velocity(t, x, v);
        const Mat hh = h_->hess(t, x, p);
        const std::size_t d = dim();
        Mat inv(d);
        for (std::size_t j = 0; j < d; ++j) {
            Vec e(d);
            e[j] = 1.0;
            Vec col;
            if (!solve_spd(hh, e, col))
                throw NonConvergence("Hessian of H singular at the conjugate momentum");
            for (std::size_t i = 0; i < d; ++i) inv(i, j) = col[i];
        }
        return inv;
    }

    /// D_L(v | w) = L(v) - L(w) - grad L(w).(v - w); nonnegative, zero iff v == w.
    double bregman(double t, const Vec& x, const Vec& v, const Vec& w) const {
        if (!in_domain(v) || !in_domain(w))
            throw DomainError("Bregman divergence needs both arguments in dom L");
        const Vec pw = momentum_of_velocity(t, x, w);
        return value(t, x, v) - value(t, x, w) - dot(pw, v - w);
    }

    /// L(v) + H(p) - v.p  >= 0, zero exactly on Legendre pairs.
    double young_gap(double t, const Vec& x, const Vec& v, const Vec& p) const {
        return value(t, x, v) + h_->value(t, x, p) - dot(v, p);
    }

    // Autonomous conveniences.
    double value(const Vec& v) const { return value(0.0, Vec::zero(dim()), v); }
    Vec momentum_of_velocity(const Vec& v) const {
        return momentum_of_velocity(0.0, Vec::zero(dim()), v);
    }
    Vec velocity_of_momentum(const Vec& p) const {
        return velocity_of_momentum(0.0, Vec::zero(dim()), p);
    }
    Mat hessian(const Vec& v) const { return hessian(0.0, Vec::zero(dim()), v); }
    double bregman(const Vec& v, const Vec& w) const {
        return bregman(0.0, Vec::zero(dim()), v, w);
    }
    double young_gap(const Vec& v, const Vec& p) const {
        return young_gap(0.0, Vec::zero(dim()), v, p);
    }

    static constexpr double kGradTol = 1e-10;

private:
    static constexpr double kRelBoundary = 1e-12;

    // r (1 + c r^2) = target, r >= 0; monotone, so safeguarded Newton.
    static double solve_cubic_radial(double c, double target) {
        if (c == 0.0) return target;
        double r = target / (1.0 + c * target * target);
        r = std::max(r, 1e-300);
        for (int it = 0; it < 200; ++it) {
            const double f = r * (1.0 + c * r * r) - target;
            if (std::abs(f) <= 1e-14 * (1.0 + target)) return r;
            const double df = 1.0 + 3.0 * c * r * r;
            r -= f / df;
            if (r < 0.0) r = 0.0;
        }
        throw NonConvergence("radial cubic solve stalled");
    }

    // Damped Newton on grad_p H(p) = v for the custom kind, i.e. maximize
    // the strictly concave p.v - H(t,x,p). Falls back to coordinate-wise
    // bisection when the Newton system is near singular.
    Vec invert_gradient(double t, const Vec& x, const Vec& v) const {
        const std::size_t d = dim();
        Vec p = Vec::zero(d);
        double obj = dot(p, v) - h_->value(t, x, p);
        for (int it = 0; it < 200; ++it) {
            const Vec g = v - h_->grad(t, x, p);
            if (norm(g) <= kGradTol) return p;
            Vec step;
            if (solve_spd(h_->hess(t, x, p), g, step)) {
                double alpha = 1.0;
                bool ok = false;
                for (int ls = 0; ls < 60; ++ls) {
                    const Vec cand = axpy(alpha, step, p);
                    const double cobj = dot(cand, v) - h_->value(t, x, cand);
                    if (cobj > obj) {
                        p = cand;
                        obj = cobj;
                        ok = true;
                        break;
                    }
                    alpha *= 0.5;
                }
                if (ok) continue;
            }
            coordinate_bisect(t, x, v, p);
            obj = dot(p, v) - h_->value(t, x, p);
            if (norm(v - h_->grad(t, x, p)) <= kGradTol) return p;
        }
        if (norm(v - h_->grad(t, x, p)) <= 1e-8) return p;  // loose but usable
        throw NonConvergence("Legendre inversion for custom Hamiltonian stalled");
    }

    // One cycle of per-coordinate bisection on dH/dp_k = v_k with an
    // expanding bracket; dH/dp_k is increasing in p_k by convexity.
    void coordinate_bisect(double t, const Vec& x, const Vec& v, Vec& p) const {
        const std::size_t d = dim();
        for (int sweep = 0; sweep < 50; ++sweep) {
            for (std::size_t k = 0; k < d; ++k) {
                double lo = p[k] - 1.0, hi = p[k] + 1.0;
                auto deriv = [&](double pk) {
                    Vec q = p;
                    q[k] = pk;
                    return h_->grad(t, x, q)[k] - v[k];
                };
                int guard = 0;
                while (deriv(lo) > 0.0 && guard++ < 80) lo = p[k] - (p[k] - lo) * 2.0 - 1.0;
                guard = 0;
                while (deriv(hi) < 0.0 && guard++ < 80) hi = p[k] + (hi - p[k]) * 2.0 + 1.0;
                for (int it = 0; it < 100; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (deriv(mid) <= 0.0 ? lo : hi) = mid;
                }
                p[k] = 0.5 * (lo + hi);
            }
            if (norm(v - h_->grad(t, x, p)) <= kGradTol) return;
        }
    }

    const HamiltonianModel* h_;
};

}  // namespace shockflow
