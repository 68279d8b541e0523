#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "ccsa/errors.hpp"
#include "ccsa/lp.hpp"

namespace ccsa::lp {

struct SimplexOptions {
    /// Feasibility / optimality tolerance.
    double tol = 1e-7;
    /// Hard iteration cap; <= 0 picks a size-dependent default.
    long long max_iterations = 0;
    enum class Engine { Auto, Dense, Sparse } engine = Engine::Auto;
    /// Devex reference pricing stalls far less on the degenerate hierarchy
    /// polytopes; Dantzig (largest coefficient) kept as the simple reference.
    enum class Pricing { Devex, Dantzig } pricing = Pricing::Devex;
};

namespace detail {

using Eigen::VectorXd;

struct SparseCol {
    std::vector<std::pair<int, double>> entries; // (row, value)
};

/// Maintains B^{-1} ops for the simplex. Dense variant keeps an explicit
/// inverse (reference implementation); sparse variant keeps an LU of a base
/// basis plus product-form eta updates.
class BasisEngine {
public:
    virtual ~BasisEngine() = default;
    virtual void reset(const std::vector<SparseCol*>& basis_cols) = 0;
    virtual void ftran(VectorXd& v) const = 0; // v := B^{-1} v
    virtual void btran(VectorXd& v) const = 0; // v := B^{-T} v
    /// Basis column at position r replaced; w = B^{-1} a_enter (pre-update).
    virtual void replace(int r, const VectorXd& w) = 0;
    virtual bool wants_refactor() const = 0;
};

class DenseEngine : public BasisEngine {
public:
    void reset(const std::vector<SparseCol*>& basis_cols) override {
        const int m = static_cast<int>(basis_cols.size());
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
        for (int k = 0; k < m; ++k)
            for (const auto& [i, a] : basis_cols[k]->entries) B(i, k) = a;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
        if (!lu.isInvertible()) throw solver_failure("simplex: singular basis");
        inv_ = lu.inverse();
    }

    void ftran(VectorXd& v) const override { v = inv_ * v; }

    void btran(VectorXd& v) const override { v = inv_.transpose() * v; }

    void replace(int r, const VectorXd& w) override {
        const double piv = w(r);
        inv_.row(r) /= piv;
        for (int i = 0; i < inv_.rows(); ++i) {
            if (i == r) continue;
            const double f = w(i);
            if (f != 0.0) inv_.row(i) -= f * inv_.row(r);
        }
    }

    bool wants_refactor() const override { return false; }

private:
    Eigen::MatrixXd inv_;
};

class SparseEngine : public BasisEngine {
public:
    void reset(const std::vector<SparseCol*>& basis_cols) override {
        const int m = static_cast<int>(basis_cols.size());
        std::vector<Eigen::Triplet<double>> trips;
        for (int k = 0; k < m; ++k)
            for (const auto& [i, a] : basis_cols[k]->entries) trips.emplace_back(i, k, a);
        Eigen::SparseMatrix<double> B(m, m);
        B.setFromTriplets(trips.begin(), trips.end());
        lu_.compute(B);
        if (lu_.info() != Eigen::Success) throw solver_failure("simplex: basis factorization failed");
        etas_.clear();
        eta_nnz_ = 0;
    }

    void ftran(VectorXd& v) const override {
        v = lu_.solve(v);
        for (const auto& e : etas_) {
            const double xr = v(e.r) / e.pivot;
            if (xr != 0.0) {
                for (const auto& [i, wi] : e.w) v(i) -= wi * xr;
            }
            v(e.r) = xr;
        }
    }

    void btran(VectorXd& v) const override {
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double cr = v(it->r);
            for (const auto& [i, wi] : it->w) cr -= v(i) * wi;
            v(it->r) = cr / it->pivot;
        }
        v = lu_.transpose().solve(v);
    }

    void replace(int r, const VectorXd& w) override {
        Eta e;
        e.r = r;
        e.pivot = w(r);
        for (int i = 0; i < w.size(); ++i)
            if (i != r && std::abs(w(i)) > 1e-13) e.w.emplace_back(i, w(i));
        eta_nnz_ += e.w.size();
        etas_.push_back(std::move(e));
    }

    bool wants_refactor() const override {
        // refactor when the update chain outweighs a fresh factorization
        return etas_.size() >= 256 || eta_nnz_ >= 200000;
    }

private:
    struct Eta {
        int r = 0;
        double pivot = 1.0;
        std::vector<std::pair<int, double>> w; // off-pivot entries
    };
    // mutable: Eigen's transpose() view is non-const although solving is
    mutable Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
    std::vector<Eta> etas_;
    std::size_t eta_nnz_ = 0;
};

enum class VarState : unsigned char { Basic, AtLower, AtUpper, AtZero };

class Simplex {
public:
    Simplex(const LPModel& model, const SimplexOptions& opt) : model_(model), opt_(opt) {
        model.validate();
        build();
    }

    LPSolution run() {
        LPSolution sol;
        if (m_ == 0) return solve_box_only();

        make_engine();
        long long limit = opt_.max_iterations > 0
                              ? opt_.max_iterations
                              : 20000 + 30LL * (m_ + static_cast<long long>(ncols_));

        // Phase 1: minimize total artificial mass.
        phase_ = 1;
        if (needs_phase1_) {
            Status st = iterate(limit);
            if (st == Status::IterationLimit) throw solver_failure("simplex: iteration limit in phase 1");
            if (st == Status::Unbounded) throw solver_failure("simplex: phase 1 unbounded");
            if (phase1_mass() > opt_.tol * 10.0 * (1.0 + max_abs_rhs_)) {
                sol.status = LPStatus::Infeasible;
                sol.iterations = iterations_;
                return sol;
            }
        }
        // Artificials are pinned at zero for phase 2.
        for (int j = first_artificial_; j < ncols_; ++j) {
            lo_[j] = 0.0;
            up_[j] = 0.0;
            if (state_[j] != VarState::Basic) state_[j] = VarState::AtLower;
        }

        phase_ = 2;
        Status st = iterate(limit);
        sol.iterations = iterations_;
        if (st == Status::IterationLimit) throw solver_failure("simplex: iteration limit in phase 2");
        if (st == Status::Unbounded) {
            sol.status = LPStatus::Unbounded;
            return sol;
        }
        sol.status = LPStatus::Optimal;
        sol.values.resize(model_.num_vars());
        for (int j = 0; j < model_.num_vars(); ++j) {
            double v = value_of(j);
            v = std::min(std::max(v, model_.lower[j]), model_.upper[j]); // absorb round-off
            sol.values[j] = v;
        }
        double obj = model_.objective_offset;
        for (int j = 0; j < model_.num_vars(); ++j) obj += model_.objective[j] * sol.values[j];
        sol.objective = obj;
        return sol;
    }

private:
    enum class Status { Optimal, Unbounded, IterationLimit };

    void build() {
        const int nvar = model_.num_vars();
        m_ = model_.num_rows();
        ncols_ = nvar + m_;
        cols_.resize(ncols_);
        lo_.resize(ncols_);
        up_.resize(ncols_);
        cost_.assign(ncols_, 0.0);
        max_abs_rhs_ = 0.0;

        for (int j = 0; j < nvar; ++j) {
            lo_[j] = model_.lower[j];
            up_[j] = model_.upper[j];
            cost_[j] = model_.objective[j];
        }
        for (int i = 0; i < m_; ++i) {
            for (const auto& [j, a] : model_.rows[i].coeffs)
                if (a != 0.0) cols_[j].entries.emplace_back(i, a);
            const int s = nvar + i;
            cols_[s].entries.emplace_back(i, 1.0);
            switch (model_.rows[i].rel) {
                case Relation::LessEq: lo_[s] = 0.0; up_[s] = kInf; break;
                case Relation::Eq: lo_[s] = 0.0; up_[s] = 0.0; break;
                case Relation::GreaterEq: lo_[s] = -kInf; up_[s] = 0.0; break;
            }
            max_abs_rhs_ = std::max(max_abs_rhs_, std::abs(model_.rows[i].rhs));
        }

        // Nonbasic starting point: finite bound nearest zero, or zero if free.
        state_.assign(ncols_, VarState::AtLower);
        for (int j = 0; j < ncols_; ++j) {
            if (std::isfinite(lo_[j])) state_[j] = VarState::AtLower;
            else if (std::isfinite(up_[j])) state_[j] = VarState::AtUpper;
            else state_[j] = VarState::AtZero;
        }

        // Row residuals decide between slack-basis and artificial columns.
        std::vector<double> resid(m_);
        for (int i = 0; i < m_; ++i) resid[i] = model_.rows[i].rhs;
        for (int j = 0; j < nvar; ++j) {
            const double v = nonbasic_value(j);
            if (v != 0.0)
                for (const auto& [i, a] : cols_[j].entries) resid[i] -= a * v;
        }
        basic_.resize(m_);
        xb_.resize(m_);
        needs_phase1_ = false;
        first_artificial_ = ncols_;
        for (int i = 0; i < m_; ++i) {
            const int s = nvar + i;
            if (resid[i] >= lo_[s] - 1e-12 && resid[i] <= up_[s] + 1e-12) {
                basic_[i] = s;
                state_[s] = VarState::Basic;
                xb_[i] = resid[i];
            } else {
                cols_.emplace_back();
                lo_.push_back(0.0);
                up_.push_back(kInf);
                cost_.push_back(0.0);
                const int a = ncols_++;
                cols_[a].entries.emplace_back(i, resid[i] >= 0 ? 1.0 : -1.0);
                basic_[i] = a;
                state_.push_back(VarState::Basic);
                xb_[i] = std::abs(resid[i]);
                needs_phase1_ = true;
            }
        }
        if (first_artificial_ == static_cast<int>(nvar + m_)) first_artificial_ = nvar + m_;
    }

    LPSolution solve_box_only() const {
        LPSolution sol;
        sol.values.resize(model_.num_vars());
        double obj = model_.objective_offset;
        for (int j = 0; j < model_.num_vars(); ++j) {
            const double c = model_.objective[j];
            double v;
            if (c > 0) v = model_.lower[j];
            else if (c < 0) v = model_.upper[j];
            else v = std::isfinite(model_.lower[j]) ? model_.lower[j]
                                                    : (std::isfinite(model_.upper[j]) ? model_.upper[j] : 0.0);
            if (!std::isfinite(v)) {
                sol.status = LPStatus::Unbounded;
                return sol;
            }
            sol.values[j] = v;
            obj += c * v;
        }
        sol.status = LPStatus::Optimal;
        sol.objective = obj;
        return sol;
    }

    void make_engine() {
        const bool dense = opt_.engine == SimplexOptions::Engine::Dense ||
                           (opt_.engine == SimplexOptions::Engine::Auto && m_ <= 300);
        if (dense) engine_ = std::make_unique<DenseEngine>();
        else engine_ = std::make_unique<SparseEngine>();
        refactor();
    }

    double nonbasic_value(int j) const {
        switch (state_[j]) {
            case VarState::AtLower: return lo_[j];
            case VarState::AtUpper: return up_[j];
            default: return 0.0;
        }
    }

    double value_of(int j) const {
        if (state_[j] == VarState::Basic) {
            for (int i = 0; i < m_; ++i)
                if (basic_[i] == j) return xb_[i];
        }
        return nonbasic_value(j);
    }

    double phase1_mass() const {
        double s = 0.0;
        for (int i = 0; i < m_; ++i)
            if (basic_[i] >= first_artificial_) s += std::max(0.0, xb_[i]);
        return s;
    }

    double cost_of(int j) const {
        if (phase_ == 1) return j >= first_artificial_ ? 1.0 : 0.0;
        return j < static_cast<int>(cost_.size()) ? cost_[j] : 0.0;
    }

    void refactor() {
        std::vector<SparseCol*> bc(m_);
        for (int i = 0; i < m_; ++i) bc[i] = &cols_[basic_[i]];
        engine_->reset(bc);
        updates_since_refactor_ = 0;
        if (!banned_.empty()) std::fill(banned_.begin(), banned_.end(), 0);
        recompute_basics();
    }

    void recompute_basics() {
        VectorXd rhs = VectorXd::Zero(m_);
        for (int i = 0; i < m_; ++i) rhs(i) = model_.rows[i].rhs;
        for (int j = 0; j < ncols_; ++j) {
            if (state_[j] == VarState::Basic) continue;
            const double v = nonbasic_value(j);
            if (v != 0.0)
                for (const auto& [i, a] : cols_[j].entries) rhs(i) -= a * v;
        }
        engine_->ftran(rhs);
        for (int i = 0; i < m_; ++i) xb_[i] = rhs(i);
    }

    Status iterate(long long limit) {
        int degenerate_streak = 0;
        bool bland = false;
        bool confirmed = false;
        const bool devex = opt_.pricing == SimplexOptions::Pricing::Devex;
        devex_.assign(ncols_, 1.0);
        banned_.assign(ncols_, 0);
        ban_streak_ = 0;
        while (true) {
            if (iterations_ >= limit) return Status::IterationLimit;
            if (engine_->wants_refactor()) refactor();

            // BTRAN for reduced costs.
            VectorXd y = VectorXd::Zero(m_);
            for (int i = 0; i < m_; ++i) y(i) = cost_of(basic_[i]);
            engine_->btran(y);

            int enter = -1, dir = 0;
            double best = -1.0;
            for (int j = 0; j < ncols_; ++j) {
                if (state_[j] == VarState::Basic || banned_[j]) continue;
                if (lo_[j] == up_[j]) continue; // fixed, incl. retired artificials
                if (phase_ == 2 && j >= first_artificial_) continue;
                double d = cost_of(j);
                for (const auto& [i, a] : cols_[j].entries) d -= y(i) * a;
                int cand_dir = 0;
                if ((state_[j] == VarState::AtLower || state_[j] == VarState::AtZero) &&
                    d < -opt_.tol)
                    cand_dir = +1;
                else if ((state_[j] == VarState::AtUpper || state_[j] == VarState::AtZero) &&
                         d > opt_.tol)
                    cand_dir = -1;
                if (cand_dir != 0) {
                    if (bland) { // first eligible index
                        enter = j;
                        dir = cand_dir;
                        break;
                    }
                    const double score = devex ? d * d / devex_[j] : std::abs(d);
                    if (score > best) {
                        best = score;
                        enter = j;
                        dir = cand_dir;
                    }
                }
            }
            if (enter < 0) {
                if (!confirmed) {
                    // Guard against drift: refactor, recompute, and re-price once.
                    refactor();
                    confirmed = true;
                    continue;
                }
                return Status::Optimal;
            }
            confirmed = false;

            auto ftran_entering = [&](VectorXd& out) {
                out.setZero();
                for (const auto& [i, a] : cols_[enter].entries) out(i) = a;
                engine_->ftran(out);
            };
            // residual of B w = a_enter; drift in the eta chain shows up here
            auto ftran_residual = [&](const VectorXd& out) {
                VectorXd r = VectorXd::Zero(m_);
                for (const auto& [i, a] : cols_[enter].entries) r(i) = a;
                for (int k = 0; k < m_; ++k) {
                    const double wk = out(k);
                    if (wk == 0.0) continue;
                    for (const auto& [i, a] : cols_[basic_[k]].entries) r(i) -= a * wk;
                }
                return r.cwiseAbs().maxCoeff();
            };
            VectorXd w(m_);
            ftran_entering(w);
            if (updates_since_refactor_ > 0 && ftran_residual(w) > 1e-7) {
                refactor();
                ftran_entering(w);
                if (ftran_residual(w) > 1e-5)
                    throw solver_failure("simplex: entering column solve is inaccurate");
            }

            // Ratio test with bound flip.
            const double piv_tol = 1e-9;
            double t_limit = up_[enter] - lo_[enter]; // +inf if a bound is infinite
            int leave = -1;
            double t = t_limit;
            int leave_to_upper = 0;
            auto ratio_test = [&]() {
                leave = -1;
                t = t_limit;
                leave_to_upper = 0;
                for (int i = 0; i < m_; ++i) {
                    const double delta = -dir * w(i);
                    if (std::abs(delta) <= piv_tol) continue;
                    const int bj = basic_[i];
                    double room, ti;
                    int to_upper;
                    if (delta > 0) {
                        room = up_[bj] - xb_[i];
                        if (!std::isfinite(room)) continue;
                        ti = std::max(room, 0.0) / delta;
                        to_upper = 1;
                    } else {
                        room = xb_[i] - lo_[bj];
                        if (!std::isfinite(room)) continue;
                        ti = std::max(room, 0.0) / (-delta);
                        to_upper = 0;
                    }
                    bool better = ti < t - 1e-12;
                    bool tie = !better && ti <= t + 1e-12 && leave >= 0;
                    if (bland) {
                        if (better || (tie && basic_[i] < basic_[leave])) {
                            t = std::min(t, ti);
                            leave = i;
                            leave_to_upper = to_upper;
                        }
                    } else if (better ||
                               (tie && (basic_[leave] < first_artificial_) &&
                                (basic_[i] >= first_artificial_ ||
                                 std::abs(w(i)) > std::abs(w(leave))))) {
                        // Ties prefer kicking artificials, then the larger pivot.
                        t = std::min(t, ti);
                        leave = i;
                        leave_to_upper = to_upper;
                    }
                }
            };
            ratio_test();
            if (leave >= 0 && std::abs(w(leave)) < 1e-6 && updates_since_refactor_ > 0) {
                // suspiciously small pivot: heal eta-chain drift and retry
                refactor();
                w.setZero();
                for (const auto& [i, a] : cols_[enter].entries) w(i) = a;
                engine_->ftran(w);
                ratio_test();
            }
            if (leave >= 0 && std::abs(w(leave)) < 1e-7) {
                // rescue: another blocking row within the ratio tolerance but
                // with a usable pivot element
                int alt = -1;
                for (int i = 0; i < m_; ++i) {
                    const double delta = -dir * w(i);
                    if (std::abs(delta) < 1e-7) continue;
                    const int bj = basic_[i];
                    double room = delta > 0 ? up_[bj] - xb_[i] : xb_[i] - lo_[bj];
                    if (!std::isfinite(room)) continue;
                    const double ti = std::max(room, 0.0) / std::abs(delta);
                    if (ti <= t + 1e-7 * (1.0 + std::abs(t)) &&
                        (alt < 0 || std::abs(w(i)) > std::abs(w(alt)))) {
                        alt = i;
                        leave_to_upper = delta > 0 ? 1 : 0;
                    }
                }
                if (alt >= 0) {
                    leave = alt;
                } else {
                    // a degenerate move over a near-zero element: skip this
                    // entering column until the next factorization
                    banned_[enter] = 1;
                    if (++ban_streak_ > 2 * ncols_)
                        throw solver_failure("simplex: numerical stall (ban loop)");
                    continue;
                }
            }
            ban_streak_ = 0;

            if (leave < 0 && !std::isfinite(t)) {
                if (phase_ == 1) throw solver_failure("simplex: unbounded phase 1 ray");
                return Status::Unbounded;
            }

            ++iterations_;
            if (t <= 1e-10) {
                if (++degenerate_streak > std::max(2000, 4 * m_) && !bland) bland = true;
            } else {
                degenerate_streak = 0;
            }

            if (leave < 0) {
                // Bound flip: entering variable crosses to its other bound.
                for (int i = 0; i < m_; ++i) xb_[i] -= dir * t * w(i);
                state_[enter] = (dir > 0) ? VarState::AtUpper : VarState::AtLower;
                continue;
            }

            if (devex && !bland) {
                // reference-weight update needs the pivot row of the old basis
                const double alpha_r = w(leave);
                const double gamma_q = std::max(devex_[enter], 1.0);
                VectorXd rho = VectorXd::Zero(m_);
                rho(leave) = 1.0;
                engine_->btran(rho);
                double maxw = 1.0;
                for (int j = 0; j < ncols_; ++j) {
                    if (state_[j] == VarState::Basic || lo_[j] == up_[j] || j == enter) continue;
                    if (phase_ == 2 && j >= first_artificial_) continue;
                    double alpha_j = 0;
                    for (const auto& [i, a] : cols_[j].entries) alpha_j += rho(i) * a;
                    if (alpha_j != 0.0) {
                        const double cand = (alpha_j / alpha_r) * (alpha_j / alpha_r) * gamma_q;
                        if (cand > devex_[j]) devex_[j] = cand;
                    }
                    maxw = std::max(maxw, devex_[j]);
                }
                devex_[basic_[leave]] = std::max(gamma_q / (alpha_r * alpha_r), 1.0);
                if (maxw > 1e8) devex_.assign(ncols_, 1.0);
            }

            const double enter_value = nonbasic_value(enter) + dir * t;
            for (int i = 0; i < m_; ++i) xb_[i] -= dir * t * w(i);
            const int out = basic_[leave];
            state_[out] = leave_to_upper ? VarState::AtUpper : VarState::AtLower;
            if (!std::isfinite(nonbasic_value(out)))
                state_[out] = leave_to_upper ? VarState::AtLower : VarState::AtUpper;
            basic_[leave] = enter;
            state_[enter] = VarState::Basic;
            xb_[leave] = enter_value;
            if (std::abs(w(leave)) < 1e-5) {
                refactor(); // pivot too small for a stable eta update
            } else {
                engine_->replace(leave, w);
                ++updates_since_refactor_;
            }
        }
    }

    const LPModel& model_;
    SimplexOptions opt_;
    int m_ = 0;
    int ncols_ = 0;
    int first_artificial_ = 0;
    bool needs_phase1_ = false;
    int phase_ = 1;
    long long iterations_ = 0;
    long long updates_since_refactor_ = 0;
    double max_abs_rhs_ = 0.0;
    std::vector<SparseCol> cols_;
    std::vector<double> lo_, up_, cost_;
    std::vector<int> basic_;
    std::vector<double> xb_;
    std::vector<VarState> state_;
    std::vector<double> devex_;
    std::vector<char> banned_;
    long long ban_streak_ = 0;
    std::unique_ptr<BasisEngine> engine_;
};

} // namespace detail

/// Solve to optimality (or proven INFEASIBLE/UNBOUNDED). Deterministic:
/// identical models yield identical solutions. Throws solver_failure when the
/// iteration limit is hit and invalid_argument for malformed models.
inline LPSolution solve(const LPModel& model, const SimplexOptions& opt = {}) {
    detail::Simplex s(model, opt);
    return s.run();
}

} // namespace ccsa::lp
