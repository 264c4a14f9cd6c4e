#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace shockflow {

/// Dense d-dimensional real vector (d is small: positions, velocities,
/// momenta all live in R^d with d typically 1..3).
class Vec {
public:
    Vec() = default;
    explicit Vec(std::size_t d, double fill = 0.0) : x_(d, fill) {}
    Vec(std::initializer_list<double> xs) : x_(xs) {}

    static Vec zero(std::size_t d) { return Vec(d); }

    std::size_t dim() const { return x_.size(); }
    bool empty() const { return x_.empty(); }

    double& operator[](std::size_t i) { return x_[i]; }
    double operator[](std::size_t i) const { return x_[i]; }

    double* data() { return x_.data(); }
    const double* data() const { return x_.data(); }

    auto begin() { return x_.begin(); }
    auto end() { return x_.end(); }
    auto begin() const { return x_.begin(); }
    auto end() const { return x_.end(); }

    Vec& operator+=(const Vec& o) {
        assert(dim() == o.dim());
        for (std::size_t i = 0; i < x_.size(); ++i) x_[i] += o.x_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        assert(dim() == o.dim());
        for (std::size_t i = 0; i < x_.size(); ++i) x_[i] -= o.x_[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (double& v : x_) v *= s;
        return *this;
    }
    Vec& operator/=(double s) { return *this *= (1.0 / s); }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend Vec operator/(Vec a, double s) { return a /= s; }
    friend Vec operator-(Vec a) { return a *= -1.0; }

    bool operator==(const Vec& o) const { return x_ == o.x_; }

private:
    std::vector<double> x_;
};

inline double dot(const Vec& a, const Vec& b) {
    assert(a.dim() == b.dim());
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline double dist(const Vec& a, const Vec& b) { return norm(a - b); }

inline Vec axpy(double alpha, const Vec& x, const Vec& y) {
    Vec r = y;
    for (std::size_t i = 0; i < r.dim(); ++i) r[i] += alpha * x[i];
    return r;
}

/// Dense square matrix, row major. Sized for the small systems that show
/// up here (KKT blocks, Hessians); not a general linear algebra type.
class Mat {
public:
    Mat() = default;
    explicit Mat(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}

    static Mat identity(std::size_t n) {
        Mat m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t size() const { return n_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    Mat& operator+=(const Mat& o) {
        assert(n_ == o.n_);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    Mat& operator*=(double s) {
        for (double& v : a_) v *= s;
        return *this;
    }
    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator*(Mat a, double s) { return a *= s; }
    friend Mat operator*(double s, Mat a) { return a *= s; }

    friend Vec operator*(const Mat& m, const Vec& v) {
        assert(m.n_ == v.dim());
        Vec r(m.n_);
        for (std::size_t i = 0; i < m.n_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < m.n_; ++j) s += m(i, j) * v[j];
            r[i] = s;
        }
        return r;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

/// Gaussian elimination with partial pivoting. Returns false when the
/// system is numerically singular (pivot below tol relative to scale).
inline bool solve_linear(Mat a, Vec b, Vec& out, double tol = 1e-12) {
    const std::size_t n = a.size();
    assert(b.dim() == n);
    std::vector<std::size_t> perm(n);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
    if (scale == 0.0) return false;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (std::abs(a(piv, k)) <= tol * scale) return false;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    Vec x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x[j];
        x[ii] = s / a(ii, ii);
    }
    out = x;
    return true;
}

/// Cholesky solve for symmetric positive definite systems.
inline bool solve_spd(const Mat& a, const Vec& b, Vec& out) {
    const std::size_t n = a.size();
    Mat l(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0) return false;
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    Vec y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    Vec x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
        x[ii] = s / l(ii, ii);
    }
    out = x;
    return true;
}

/// Smallest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
inline double min_eigenvalue_sym(Mat a, int sweeps = 64) {
    const std::size_t n = a.size();
    if (n == 1) return a(0, 0);
    for (int s = 0; s < sweeps; ++s) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
            }
        }
    }
    double mn = a(0, 0);
    for (std::size_t i = 1; i < n; ++i) mn = std::min(mn, a(i, i));
    return mn;
}

}  // namespace shockflow
