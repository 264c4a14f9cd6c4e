#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "shockflow/errors.hpp"
#include "shockflow/hamiltonian.hpp"
#include "shockflow/hull.hpp"
#include "shockflow/lagrangian.hpp"
#include "shockflow/vec.hpp"

namespace shockflow {

/// One smooth solution branch at a shock point: its momentum p = grad phi_i
/// and Hamiltonian value H_i = H(t,x,p_i).
struct Branch {
    Vec p;
    double H = 0.0;
    int label = -1;
};

/// Local shock data: the set of smooth branches meeting at (t,x), with an
/// optional attached Hamiltonian model. Momenta closer than 1e-12 are
/// considered the same branch and merged, keeping the smaller H.
class BranchSet {
public:
    BranchSet() = default;
    BranchSet(double t, Vec x, std::vector<Branch> branches,
              std::shared_ptr<const HamiltonianModel> model = nullptr)
        : t_(t), x_(std::move(x)), model_(std::move(model)) {
        if (branches.empty()) throw DomainError("BranchSet needs at least one branch");
        for (auto& b : branches) add_merged(std::move(b));
        for (std::size_t i = 0; i < branches_.size(); ++i)
            if (branches_[i].label < 0) branches_[i].label = int(i);
        if (model_) {
            for (const auto& b : branches_) {
                const double hv = model_->value(t_, x_, b.p);
                if (std::abs(hv - b.H) > 1e-10 * (1.0 + std::abs(hv)))
                    throw ValidationError("branch H inconsistent with attached model");
            }
        }
    }

    /// Branches evaluated through the model: H_i filled in from H(t,x,p_i).
    static BranchSet from_momenta(double t, Vec x, const std::vector<Vec>& momenta,
                                  std::shared_ptr<const HamiltonianModel> model) {
        std::vector<Branch> bs;
        bs.reserve(momenta.size());
        for (const auto& p : momenta) bs.push_back({p, model->value(t, x, p), -1});
        return BranchSet(t, std::move(x), std::move(bs), std::move(model));
    }

    double t() const { return t_; }
    const Vec& x() const { return x_; }
    std::size_t size() const { return branches_.size(); }
    std::size_t dim() const { return x_.dim(); }
    const Branch& operator[](std::size_t i) const { return branches_[i]; }
    const std::vector<Branch>& branches() const { return branches_; }
    const std::shared_ptr<const HamiltonianModel>& model() const { return model_; }

    std::vector<Vec> momenta() const {
        std::vector<Vec> ps;
        ps.reserve(branches_.size());
        for (const auto& b : branches_) ps.push_back(b.p);
        return ps;
    }

    /// Branch velocities v_i = grad_p H(t,x,p_i); needs an attached model.
    std::vector<Vec> velocities() const {
        if (!model_) throw DomainError("velocities need an attached Hamiltonian model");
        std::vector<Vec> vs;
        vs.reserve(branches_.size());
        for (const auto& b : branches_) vs.push_back(model_->grad(t_, x_, b.p));
        return vs;
    }

private:
    void add_merged(Branch b) {
        for (auto& e : branches_) {
            if (dist(e.p, b.p) <= 1e-12) {
                e.H = std::min(e.H, b.H);
                return;
            }
        }
        branches_.push_back(std::move(b));
    }

    double t_ = 0.0;
    Vec x_;
    std::vector<Branch> branches_;
    std::shared_ptr<const HamiltonianModel> model_;
};

/// Relevant index set I(v): branches attaining min_i(-H_i + p_i.v) within a
/// scale-aware tolerance tol*(1 + max_i |-H_i + p_i.v|).
inline std::vector<std::size_t> relevant_indices(const BranchSet& b, const Vec& v,
                                                 double tol = 1e-9) {
    std::vector<double> vals(b.size());
    double mn = std::numeric_limits<double>::infinity();
    double mxabs = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        vals[i] = -b[i].H + dot(b[i].p, v);
        mn = std::min(mn, vals[i]);
        mxabs = std::max(mxabs, std::abs(vals[i]));
    }
    const double tau = tol * (1.0 + mxabs);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < b.size(); ++i)
        if (vals[i] <= mn + tau) idx.push_back(i);
    return idx;
}

/// The superdifferential of phi at (t,x): the polytope in (s,p) space
/// spanned by the vertices (-H_i, p_i).
struct Superdifferential {
    std::vector<Vec> vertices;       ///< each of dimension d+1: (s, p)
    std::vector<bool> redundant;     ///< true when the vertex is inside the hull of the others
};

inline Superdifferential superdifferential_of(const BranchSet& b) {
    Superdifferential sd;
    const std::size_t d = b.dim();
    for (std::size_t i = 0; i < b.size(); ++i) {
        Vec sp(d + 1);
        sp[0] = -b[i].H;
        for (std::size_t k = 0; k < d; ++k) sp[k + 1] = b[i].p[k];
        sd.vertices.push_back(sp);
    }
    sd.redundant.assign(b.size(), false);
    if (b.size() >= 2) {
        for (std::size_t i = 0; i < b.size(); ++i) {
            std::vector<Vec> others;
            for (std::size_t j = 0; j < b.size(); ++j)
                if (j != i) others.push_back(sd.vertices[j]);
            sd.redundant[i] = hull_membership(sd.vertices[i], others, 1e-9).inside;
        }
    }
    return sd;
}

}  // namespace shockflow
