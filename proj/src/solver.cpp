#include "gptraj/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>
#include <ostream>

#include <Eigen/Sparse>
#include <spdlog/spdlog.h>

namespace gptraj {

int Problem::add_trajectory(GpTrajectory* traj) {
    trajs_.push_back(traj);
    return static_cast<int>(trajs_.size()) - 1;
}

int Problem::add_pose(Pose3* pose) {
    poses_.push_back(pose);
    return static_cast<int>(poses_.size()) - 1;
}

namespace {

// Huber: scales r (and J) by sqrt(rho'(s)) and returns 0.5 rho(s).
double robustify(double huber, Eigen::VectorXd& r, std::vector<Eigen::MatrixXd>* jac) {
    const double s = r.squaredNorm();
    if (huber <= 0 || s <= huber * huber) return 0.5 * s;
    const double w = std::sqrt(huber / std::sqrt(s));
    r *= w;
    if (jac)
        for (auto& J : *jac) J *= w;
    return 0.5 * (2.0 * huber * std::sqrt(s) - huber * huber);
}

double total_cost(const Problem& p, const EvalContext& ctx) {
    double c = 0;
    Eigen::VectorXd r;
    for (const auto& f : p.factors()) {
        f->evaluate(ctx, r, nullptr);
        c += robustify(f->huber, r, nullptr);
    }
    return c;
}

// Knots ordered by index then trajectory so coupled trajectories interleave; poses last.
bool block_order(const ParamRef& a, const ParamRef& b) {
    return std::make_tuple(a.kind, a.index, a.owner) < std::make_tuple(b.kind, b.index, b.owner);
}

struct Snapshot {
    std::vector<std::vector<SupportState>> knots;
    std::vector<Pose3> poses;

    explicit Snapshot(const Problem& p) {
        for (const GpTrajectory* t : p.trajectories()) knots.push_back(t->knots());
        for (const Pose3* T : p.poses()) poses.push_back(*T);
    }
    void restore(Problem& p) const {
        for (size_t i = 0; i < knots.size(); ++i) p.trajectories()[i]->knots() = knots[i];
        for (size_t i = 0; i < poses.size(); ++i) *p.poses()[i] = poses[i];
    }
};

}  // namespace

double Problem::cost() const {
    const EvalContext ctx = context();
    return total_cost(*this, ctx);
}

SolveReport solve(Problem& problem, const SolverOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    SolveReport rep;
    const EvalContext ctx = problem.context();
    const auto& factors = problem.factors();
    const size_t nf = factors.size();

    // Block layout over the free parameters touched by some factor.
    std::vector<std::vector<ParamRef>> fparams(nf);
    std::vector<ParamRef> blocks;
    for (size_t i = 0; i < nf; ++i) {
        fparams[i] = factors[i]->params(ctx);
        for (const ParamRef& p : fparams[i])
            if (!problem.is_frozen(p)) blocks.push_back(p);
    }
    std::sort(blocks.begin(), blocks.end(), block_order);
    blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
    std::map<ParamRef, int> block_id;
    std::vector<int> offset(blocks.size() + 1, 0);
    for (size_t b = 0; b < blocks.size(); ++b) {
        block_id[blocks[b]] = static_cast<int>(b);
        offset[b + 1] = offset[b] + blocks[b].dim();
    }
    const int n = offset.back();

    // Per factor: (position in its param list, block id) of free params, and dense slots for each block pair.
    std::vector<std::vector<std::pair<int, int>>> fblocks(nf);
    std::map<std::pair<int, int>, int> slot_of;
    std::vector<std::pair<int, int>> slot_pairs;
    std::vector<std::vector<int>> fslots(nf);
    for (size_t i = 0; i < nf; ++i) {
        for (size_t j = 0; j < fparams[i].size(); ++j) {
            const auto it = block_id.find(fparams[i][j]);
            if (it != block_id.end()) fblocks[i].emplace_back(static_cast<int>(j), it->second);
        }
        for (const auto& [pj, bj] : fblocks[i])
            for (const auto& [pk, bk] : fblocks[i]) {
                const auto key = std::minmax(bj, bk);
                auto [it, inserted] = slot_of.emplace(key, static_cast<int>(slot_pairs.size()));
                if (inserted) slot_pairs.push_back(key);
                fslots[i].push_back(it->second);
            }
    }
    std::vector<Eigen::MatrixXd> slots(slot_pairs.size());
    for (size_t s = 0; s < slots.size(); ++s)
        slots[s].resize(blocks[slot_pairs[s].first].dim(), blocks[slot_pairs[s].second].dim());

    auto finish = [&](bool converged, const std::string& msg) {
        rep.converged = converged;
        rep.message = msg;
        rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return rep;
    };

    ctx.clear_cache();
    double cost = total_cost(problem, ctx);
    rep.initial_cost = rep.final_cost = cost;
    if (!std::isfinite(cost)) return finish(false, "initial cost is not finite");
    if (n == 0) return finish(true, "no free parameters");
    if (cost < opts.cost_floor) return finish(true, "initial cost below floor");

    Eigen::VectorXd g(n);
    Eigen::SparseMatrix<double> H(n, n);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::NaturalOrdering<int>> ldlt;
    bool pattern_ready = false;
    double lambda = opts.lambda0;

    auto linearize = [&]() {
        ctx.clear_cache();
        g.setZero();
        for (auto& s : slots) s.setZero();
        Eigen::VectorXd r;
        std::vector<Eigen::MatrixXd> J;
        for (size_t i = 0; i < nf; ++i) {
            factors[i]->evaluate(ctx, r, &J);
            robustify(factors[i]->huber, r, &J);
            int s = 0;
            for (const auto& [pj, bj] : fblocks[i]) {
                g.segment(offset[bj], J[pj].cols()).noalias() += J[pj].transpose() * r;
                for (const auto& [pk, bk] : fblocks[i]) {
                    const int slot = fslots[i][s++];
                    if (bj <= bk) slots[slot].noalias() += J[pj].transpose() * J[pk];
                }
            }
        }
        std::vector<Eigen::Triplet<double>> trip;
        for (size_t s = 0; s < slots.size(); ++s) {
            const auto [bi, bj] = slot_pairs[s];
            const Eigen::MatrixXd& M = slots[s];
            for (int c = 0; c < M.cols(); ++c)
                for (int rr = 0; rr < M.rows(); ++rr) {
                    const int row = offset[bi] + rr, col = offset[bj] + c;
                    if (bi == bj) {
                        if (row >= col) trip.emplace_back(row, col, M(rr, c));
                    } else {
                        trip.emplace_back(col, row, M(rr, c));  // store in the lower triangle
                    }
                }
        }
        H.setFromTriplets(trip.begin(), trip.end());
    };

    Snapshot snap(problem);
    linearize();
    int it = 0;
    bool need_linearize = false;
    while (it < opts.max_iters) {
        if (need_linearize) {
            linearize();
            need_linearize = false;
        }
        ++it;
        Eigen::SparseMatrix<double> A = H;
        for (int i = 0; i < n; ++i) A.coeffRef(i, i) += lambda * std::max(H.coeff(i, i), 1e-9);
        if (!pattern_ready) {
            ldlt.analyzePattern(A);
            pattern_ready = true;
        }
        ldlt.factorize(A);
        IterationRecord rec;
        rec.iter = it;
        rec.lambda = lambda;
        Eigen::VectorXd dx;
        bool ok = ldlt.info() == Eigen::Success;
        if (ok) {
            dx = ldlt.solve(-g);
            ok = dx.allFinite();
        }
        if (!ok) {
            rec.cost = cost;
            rep.history.push_back(rec);
            lambda *= opts.lambda_up;
            spdlog::debug("normal equations not solvable at lambda={}", rec.lambda);
            if (lambda > 1e16) {
                rep.iterations = it;
                return finish(false, "normal equations rank-deficient");
            }
            continue;
        }
        rec.step_norm = dx.norm();

        // Predicted decrease of the Gauss-Newton model, in cost units.
        const Eigen::VectorXd Hdx = H.selfadjointView<Eigen::Lower>() * dx;
        const double predicted = -g.dot(dx) - 0.5 * dx.dot(Hdx);

        snap = Snapshot(problem);
        for (size_t b = 0; b < blocks.size(); ++b) {
            const ParamRef& p = blocks[b];
            if (p.kind == ParamRef::Knot) {
                SupportState& x = problem.trajectories()[p.owner]->knot(p.index);
                x = knot_plus(x, dx.segment<18>(offset[b]));
            } else {
                Pose3& T = *problem.poses()[p.index];
                T = se3::plus(T, dx.segment<6>(offset[b]));
            }
        }
        ctx.clear_cache();
        double new_cost;
        try {
            new_cost = total_cost(problem, ctx);
        } catch (const DomainError&) {
            new_cost = std::numeric_limits<double>::quiet_NaN();
        }
        if (std::isfinite(new_cost) && new_cost < cost) {
            rec.accepted = true;
            rec.cost = new_cost;
            rep.history.push_back(rec);
            const double rel = (cost - new_cost) / cost;
            cost = new_cost;
            lambda = std::max(lambda * opts.lambda_down, 1e-12);
            if (rel < opts.tol || cost < opts.cost_floor) {
                rep.iterations = it;
                rep.final_cost = cost;
                return finish(true, "relative cost decrease below tolerance");
            }
            need_linearize = true;
        } else {
            snap.restore(problem);
            ctx.clear_cache();
            rec.cost = cost;
            rep.history.push_back(rec);
            lambda *= opts.lambda_up;
            if (predicted < opts.tol * cost * 1e-3) {
                rep.iterations = it;
                rep.final_cost = cost;
                return finish(true, "no further decrease available");
            }
            if (lambda > 1e16) {
                rep.iterations = it;
                rep.final_cost = cost;
                return finish(false, "damping exceeded limit");
            }
        }
    }
    rep.iterations = it;
    rep.final_cost = cost;
    return finish(false, "maximum iterations reached");
}

void SolveReport::write(std::ostream& os) const {
    for (const IterationRecord& r : history)
        os << "iter=" << r.iter << " cost=" << r.cost << " lambda=" << r.lambda << " step=" << r.step_norm
           << " accepted=" << (r.accepted ? 1 : 0) << '\n';
    os << "summary iterations=" << iterations << " initial_cost=" << initial_cost << " final_cost=" << final_cost
       << " converged=" << (converged ? 1 : 0) << " wall_time_s=" << wall_time_s << " message=\"" << message
       << "\"\n";
}

}  // namespace gptraj
