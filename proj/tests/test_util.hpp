#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "shockflow/hamiltonian.hpp"
#include "shockflow/rng.hpp"
#include "shockflow/vec.hpp"

namespace testutil {

using shockflow::HamiltonianModel;
using shockflow::Mat;
using shockflow::Rng;
using shockflow::Vec;

inline Mat random_spd(std::size_t d, Rng& rng) {
    Mat m(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
    Mat a(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) s += m(k, i) * m(k, j);
            a(i, j) = s;
        }
    for (std::size_t i = 0; i < d; ++i) a(i, i) += 0.3;
    return a;
}

/// Central-difference gradient of f at p.
inline Vec fd_grad(const std::function<double(const Vec&)>& f, const Vec& p, double h = 1e-6) {
    Vec g(p.dim());
    for (std::size_t k = 0; k < p.dim(); ++k) {
        Vec a = p, b = p;
        a[k] += h;
        b[k] -= h;
        g[k] = (f(a) - f(b)) / (2.0 * h);
    }
    return g;
}

/// Wrap a cataloged model as an opaque custom one (forces the iterative
/// conjugation path).
inline HamiltonianModel as_custom(const HamiltonianModel& m) {
    const HamiltonianModel copy = m;
    return HamiltonianModel::custom(
        m.dim(), [copy](double t, const Vec& x, const Vec& p) { return copy.value(t, x, p); },
        [copy](double t, const Vec& x, const Vec& p) { return copy.grad(t, x, p); },
        [copy](double t, const Vec& x, const Vec& p) { return copy.hess(t, x, p); });
}

}  // namespace testutil
