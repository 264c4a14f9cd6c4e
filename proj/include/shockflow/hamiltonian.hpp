#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "shockflow/errors.hpp"
#include "shockflow/vec.hpp"

namespace shockflow {

enum class HamiltonianKind { quadratic, relativistic, power_law, quad_quartic, custom };

inline const char* to_string(HamiltonianKind k) {
    switch (k) {
        case HamiltonianKind::quadratic: return "quadratic";
        case HamiltonianKind::relativistic: return "relativistic";
        case HamiltonianKind::power_law: return "power";
        case HamiltonianKind::quad_quartic: return "quad_quartic";
        case HamiltonianKind::custom: return "custom";
    }
    return "?";
}

/// A smooth Hamiltonian H(t,x,p), strictly convex in p.
///
/// Cataloged kinds are autonomous closed forms:
///   quadratic      p.Ap/2 with A symmetric positive definite
///   relativistic   sqrt(1+|p|^2)
///   power_law      |p|^alpha / alpha, alpha > 1
///   quad_quartic   |p|^2/2 + c|p|^4/4, c >= 0
/// The custom kind wraps user callbacks (value/gradient/Hessian) and is
/// the only kind that may depend on (t,x).
class HamiltonianModel {
public:
    using ValueFn = std::function<double(double, const Vec&, const Vec&)>;
    using GradFn = std::function<Vec(double, const Vec&, const Vec&)>;
    using HessFn = std::function<Mat(double, const Vec&, const Vec&)>;

    static HamiltonianModel quadratic(Mat a) {
        HamiltonianModel m;
        m.kind_ = HamiltonianKind::quadratic;
        m.dim_ = a.size();
        m.a_ = std::move(a);
        return m;
    }
    static HamiltonianModel quadratic_identity(std::size_t d) {
        return quadratic(Mat::identity(d));
    }
    static HamiltonianModel relativistic(std::size_t d) {
        HamiltonianModel m;
        m.kind_ = HamiltonianKind::relativistic;
        m.dim_ = d;
        return m;
    }
    static HamiltonianModel power_law(std::size_t d, double alpha) {
        if (!(alpha > 1.0)) throw DomainError("power-law exponent must exceed 1");
        HamiltonianModel m;
        m.kind_ = HamiltonianKind::power_law;
        m.dim_ = d;
        m.alpha_ = alpha;
        return m;
    }
    static HamiltonianModel quad_quartic(std::size_t d, double c) {
        if (c < 0.0) throw DomainError("quartic coefficient must be nonnegative");
        HamiltonianModel m;
        m.kind_ = HamiltonianKind::quad_quartic;
        m.dim_ = d;
        m.c_ = c;
        return m;
    }
    static HamiltonianModel custom(std::size_t d, ValueFn value, GradFn grad, HessFn hess,
                                   bool time_space_dependent = false) {
        HamiltonianModel m;
        m.kind_ = HamiltonianKind::custom;
        m.dim_ = d;
        m.value_fn_ = std::move(value);
        m.grad_fn_ = std::move(grad);
        m.hess_fn_ = std::move(hess);
        m.autonomous_ = !time_space_dependent;
        return m;
    }

    HamiltonianKind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }
    bool autonomous() const { return autonomous_; }
    double alpha() const { return alpha_; }
    double quartic_coeff() const { return c_; }
    const Mat& quadratic_matrix() const { return a_; }

    double value(double t, const Vec& x, const Vec& p) const {
        switch (kind_) {
            case HamiltonianKind::quadratic: return 0.5 * dot(p, a_ * p);
            case HamiltonianKind::relativistic: return std::sqrt(1.0 + norm2(p));
            case HamiltonianKind::power_law: {
                const double r = norm(p);
                return std::pow(r, alpha_) / alpha_;
            }
            case HamiltonianKind::quad_quartic: {
                const double r2 = norm2(p);
                return 0.5 * r2 + 0.25 * c_ * r2 * r2;
            }
            case HamiltonianKind::custom: return value_fn_(t, x, p);
        }
        return 0.0;
    }

    Vec grad(double t, const Vec& x, const Vec& p) const {
        switch (kind_) {
            case HamiltonianKind::quadratic: return a_ * p;
            case HamiltonianKind::relativistic: return p / std::sqrt(1.0 + norm2(p));
            case HamiltonianKind::power_law: {
                const double r = norm(p);
                if (r == 0.0) return Vec::zero(dim_);
                return std::pow(r, alpha_ - 2.0) * p;
            }
            case HamiltonianKind::quad_quartic: return (1.0 + c_ * norm2(p)) * p;
            case HamiltonianKind::custom: return grad_fn_(t, x, p);
        }
        return Vec::zero(dim_);
    }

    Mat hess(double t, const Vec& x, const Vec& p) const {
        switch (kind_) {
            case HamiltonianKind::quadratic: return a_;
            case HamiltonianKind::relativistic: {
                const double s = std::sqrt(1.0 + norm2(p));
                Mat h = Mat::identity(dim_) * (1.0 / s);
                const double f = 1.0 / (s * s * s);
                for (std::size_t i = 0; i < dim_; ++i)
                    for (std::size_t j = 0; j < dim_; ++j) h(i, j) -= f * p[i] * p[j];
                return h;
            }
            case HamiltonianKind::power_law: {
                const double r = norm(p);
                if (r == 0.0) return Mat(dim_);  // singular at the origin for alpha > 2
                Mat h = Mat::identity(dim_) * std::pow(r, alpha_ - 2.0);
                const double f = (alpha_ - 2.0) * std::pow(r, alpha_ - 4.0);
                for (std::size_t i = 0; i < dim_; ++i)
                    for (std::size_t j = 0; j < dim_; ++j) h(i, j) += f * p[i] * p[j];
                return h;
            }
            case HamiltonianKind::quad_quartic: {
                Mat h = Mat::identity(dim_) * (1.0 + c_ * norm2(p));
                for (std::size_t i = 0; i < dim_; ++i)
                    for (std::size_t j = 0; j < dim_; ++j) h(i, j) += 2.0 * c_ * p[i] * p[j];
                return h;
            }
            case HamiltonianKind::custom: return hess_fn_(t, x, p);
        }
        return Mat(dim_);
    }

    // Autonomous convenience forms.
    double value(const Vec& p) const { return value(0.0, Vec::zero(dim_), p); }
    Vec grad(const Vec& p) const { return grad(0.0, Vec::zero(dim_), p); }
    Mat hess(const Vec& p) const { return hess(0.0, Vec::zero(dim_), p); }

private:
    HamiltonianKind kind_ = HamiltonianKind::quadratic;
    std::size_t dim_ = 1;
    Mat a_;
    double alpha_ = 2.0;
    double c_ = 0.0;
    bool autonomous_ = true;
    ValueFn value_fn_;
    GradFn grad_fn_;
    HessFn hess_fn_;
};

}  // namespace shockflow
