#include "wdro/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace wdro {

namespace {

double pow_p(double d, double p) {
    if (p == 1.0) return d;
    if (p == 2.0) return d * d;
    return std::pow(d, p);
}

// ---------------------------------------------------------------------------
// Balanced transportation problem on the dense bipartite graph:
//   min sum c[i][j] x[i][j]   s.t.  row sums = a,  col sums = b,  x >= 0.
//
// Tree-basis pivoting. The entering arc comes from a block search over the
// arc list (deterministic: fixed block size, scan resumes where it stopped,
// first strict improvement within a block wins); after a long degenerate
// stall the rule falls back to lowest-index selection, which cannot cycle.
// The leaving arc is the minimum-ratio arc, ties broken by lowest arc index,
// so the returned plan is a deterministic function of the inputs.
// ---------------------------------------------------------------------------
class TransportationSimplex {
public:
    TransportationSimplex(std::vector<double> a, std::vector<double> b,
                          const std::vector<double>& cost)
        : a_(std::move(a)), b_(std::move(b)), cost_(cost),
          n_(a_.size()), m_(b_.size()), nodes_(n_ + m_) {}

    // Dense optimal plan.
    std::vector<std::vector<double>> solve() {
        build_initial_basis();
        const long total_arcs = static_cast<long>(n_) * static_cast<long>(m_);
        const long block = std::max<long>(10, std::lround(std::sqrt(static_cast<double>(total_arcs))));

        double maxc = 0.0;
        for (double c : cost_) maxc = std::max(maxc, std::abs(c));
        const double tol = 1e-11 * std::max(1.0, maxc);

        const long pivot_cap = 1000000 + 200 * static_cast<long>(nodes_);
        const long stall_limit = 100 + 4 * static_cast<long>(nodes_);
        long pivots = 0;
        long stalled = 0;
        bool bland = false;
        long next_pos = 0;

        while (true) {
            compute_potentials();

            long entering = -1;
            if (!bland) {
                double best = -tol;
                long count = 0;
                long pos = next_pos;
                for (long scanned = 0; scanned < total_arcs; ++scanned) {
                    const std::size_t i = static_cast<std::size_t>(pos) / m_;
                    const std::size_t j = static_cast<std::size_t>(pos) % m_;
                    const double r = cost_[i * m_ + j] - u_[i] - v_[j];
                    if (r < best) {
                        best = r;
                        entering = pos;
                    }
                    pos = pos + 1 == total_arcs ? 0 : pos + 1;
                    if (++count == block) {
                        count = 0;
                        if (entering >= 0) break;
                    }
                }
                next_pos = pos;
            } else {
                for (long pos = 0; pos < total_arcs; ++pos) {
                    const std::size_t i = static_cast<std::size_t>(pos) / m_;
                    const std::size_t j = static_cast<std::size_t>(pos) % m_;
                    if (cost_[i * m_ + j] - u_[i] - v_[j] < -tol) {
                        entering = pos;
                        break;
                    }
                }
            }
            if (entering < 0) break; // optimal

            const double theta = pivot(static_cast<std::size_t>(entering) / m_,
                                       static_cast<std::size_t>(entering) % m_);
            if (++pivots > pivot_cap)
                throw internal_error("transport solver pivot limit exceeded (" +
                                     std::to_string(n_) + "x" + std::to_string(m_) + ", " +
                                     std::to_string(pivots) + " pivots)");
            if (theta <= 0.0) {
                if (++stalled > stall_limit) bland = true;
            } else {
                stalled = 0;
            }
        }

        std::vector<std::vector<double>> plan(n_, std::vector<double>(m_, 0.0));
        for (const Arc& arc : arcs_)
            plan[arc.i][arc.j] = std::max(arc.flow, 0.0);
        return plan;
    }

private:
    struct Arc {
        std::size_t i = 0, j = 0;
        double flow = 0.0;
    };

    // Northwest-corner start: exactly n + m - 1 basic arcs forming a tree.
    void build_initial_basis() {
        arcs_.clear();
        arcs_.reserve(nodes_ - 1);
        adj_.assign(nodes_, {});
        std::vector<double> ra = a_, rb = b_;
        std::size_t i = 0, j = 0;
        while (true) {
            const double t = std::min(ra[i], rb[j]);
            add_arc(i, j, t);
            ra[i] -= t;
            rb[j] -= t;
            if (i + 1 == n_ && j + 1 == m_) break;
            if (i + 1 < n_ && (ra[i] <= rb[j] || j + 1 == m_))
                ++i;
            else
                ++j;
        }
    }

    void add_arc(std::size_t i, std::size_t j, double flow) {
        const int slot = static_cast<int>(arcs_.size());
        arcs_.push_back({i, j, flow});
        adj_[i].push_back(slot);
        adj_[n_ + j].push_back(slot);
    }

    // Tree traversal from node 0: potentials satisfying u_i + v_j = c_ij on
    // basic arcs, plus parent pointers for cycle recovery.
    void compute_potentials() {
        u_.assign(n_, 0.0);
        v_.assign(m_, 0.0);
        parent_node_.assign(nodes_, -1);
        parent_arc_.assign(nodes_, -1);
        depth_.assign(nodes_, 0);
        std::vector<char> seen(nodes_, 0);
        std::vector<std::size_t> stack = {0};
        seen[0] = 1;
        while (!stack.empty()) {
            const std::size_t node = stack.back();
            stack.pop_back();
            for (int slot : adj_[node]) {
                const Arc& arc = arcs_[static_cast<std::size_t>(slot)];
                const std::size_t other = (node == arc.i) ? n_ + arc.j : arc.i;
                if (seen[other]) continue;
                seen[other] = 1;
                if (other >= n_)
                    v_[other - n_] = cost_[arc.i * m_ + arc.j] - u_[arc.i];
                else
                    u_[other] = cost_[arc.i * m_ + arc.j] - v_[arc.j];
                parent_node_[other] = static_cast<long>(node);
                parent_arc_[other] = slot;
                depth_[other] = depth_[node] + 1;
                stack.push_back(other);
            }
        }
    }

    // Push flow around the unique cycle closed by arc (ei, ej); returns the
    // amount pushed (zero on a degenerate pivot).
    double pivot(std::size_t ei, std::size_t ej) {
        cycle_slots_.clear();
        cycle_aligned_.clear();

        std::size_t x = ei;
        std::size_t y = n_ + ej;
        // Arcs on the path ej -> LCA in traversal order, then LCA -> ei.
        up_from_target_.clear();
        up_from_source_.clear();
        while (depth_[x] > depth_[y]) {
            up_from_source_.push_back(parent_arc_[x]);
            x = static_cast<std::size_t>(parent_node_[x]);
        }
        while (depth_[y] > depth_[x]) {
            up_from_target_.push_back(parent_arc_[y]);
            y = static_cast<std::size_t>(parent_node_[y]);
        }
        while (x != y) {
            up_from_source_.push_back(parent_arc_[x]);
            up_from_target_.push_back(parent_arc_[y]);
            x = static_cast<std::size_t>(parent_node_[x]);
            y = static_cast<std::size_t>(parent_node_[y]);
        }

        // Travel direction: entering arc source -> target (aligned, +theta);
        // then target-side path upward; then source-side path downward. A
        // tree arc is aligned when the travel leaves its source endpoint.
        std::size_t from = n_ + ej;
        for (int slot : up_from_target_) {
            const Arc& arc = arcs_[static_cast<std::size_t>(slot)];
            cycle_slots_.push_back(slot);
            cycle_aligned_.push_back(from == arc.i);
            from = (from == arc.i) ? n_ + arc.j : arc.i;
        }
        for (auto it = up_from_source_.rbegin(); it != up_from_source_.rend(); ++it) {
            const Arc& arc = arcs_[static_cast<std::size_t>(*it)];
            // Traversal descends: it goes from the arc's parent-side endpoint.
            cycle_slots_.push_back(*it);
            cycle_aligned_.push_back(from == arc.i);
            from = (from == arc.i) ? n_ + arc.j : arc.i;
        }

        double theta = std::numeric_limits<double>::infinity();
        int leaving = -1;
        long leaving_key = 0;
        for (std::size_t k = 0; k < cycle_slots_.size(); ++k) {
            if (cycle_aligned_[k]) continue;
            const Arc& arc = arcs_[static_cast<std::size_t>(cycle_slots_[k])];
            const long key = static_cast<long>(arc.i) * static_cast<long>(m_) +
                             static_cast<long>(arc.j);
            if (arc.flow < theta || (arc.flow == theta && key < leaving_key)) {
                theta = arc.flow;
                leaving = cycle_slots_[k];
                leaving_key = key;
            }
        }
        if (leaving < 0)
            throw internal_error("transport solver: no blocking arc on pivot cycle");

        for (std::size_t k = 0; k < cycle_slots_.size(); ++k) {
            Arc& arc = arcs_[static_cast<std::size_t>(cycle_slots_[k])];
            arc.flow += cycle_aligned_[k] ? theta : -theta;
        }

        // Replace the leaving arc in place.
        Arc& slot_arc = arcs_[static_cast<std::size_t>(leaving)];
        detach(slot_arc.i, leaving);
        detach(n_ + slot_arc.j, leaving);
        slot_arc = {ei, ej, theta};
        adj_[ei].push_back(leaving);
        adj_[n_ + ej].push_back(leaving);
        return theta;
    }

    void detach(std::size_t node, int slot) {
        auto& list = adj_[node];
        list.erase(std::find(list.begin(), list.end(), slot));
    }

    std::vector<double> a_, b_;
    const std::vector<double>& cost_;
    std::size_t n_, m_, nodes_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<int>> adj_;
    std::vector<double> u_, v_;
    std::vector<long> parent_node_;
    std::vector<int> parent_arc_;
    std::vector<int> depth_;
    std::vector<int> cycle_slots_, up_from_target_, up_from_source_;
    std::vector<char> cycle_aligned_;
};

// ---------------------------------------------------------------------------
// Dense primal simplex with Bland's rule, specialized to the worst-case-risk
// LP: n marginal equalities plus one budget row. The stay-put plan gives a
// feasible starting basis outright, so no phase-1 is needed.
// ---------------------------------------------------------------------------
class WorstCaseSimplex {
public:
    WorstCaseSimplex(const std::vector<double>& weights, const std::vector<double>& fvals,
                     const std::vector<double>& cost_pow, const std::vector<std::size_t>& home,
                     double budget)
        : w_(weights), f_(fvals), d_(cost_pow), home_(home), budget_(budget),
          n_(weights.size()), k_(fvals.size()) {}

    std::vector<double> solve() {
        const std::size_t rows = n_ + 1;
        const std::size_t nvars = n_ * k_ + 1; // pi variables + budget slack
        const std::size_t slack = n_ * k_;

        tableau_.assign(rows * nvars, 0.0);
        rhs_.assign(rows, 0.0);
        basic_.assign(rows, 0);

        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < k_; ++j) {
                tableau_[i * nvars + i * k_ + j] = 1.0;
                tableau_[n_ * nvars + i * k_ + j] = d_[i * k_ + j];
            }
            rhs_[i] = w_[i];
            basic_[i] = i * k_ + home_[i];
        }
        tableau_[n_ * nvars + slack] = 1.0;
        rhs_[n_] = budget_;
        basic_[n_] = slack;

        // Reduced costs (maximization): rc = c - c_B^T B^{-1} A. The initial
        // basis matrix is the identity because d(z_i, home_i) = 0.
        rc_.assign(nvars, 0.0);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < k_; ++j) rc_[i * k_ + j] = f_[j];
        for (std::size_t i = 0; i < n_; ++i) {
            const double cb = f_[home_[i]];
            if (cb == 0.0) continue;
            for (std::size_t v = 0; v < nvars; ++v) rc_[v] -= cb * tableau_[i * nvars + v];
        }

        double scale = std::abs(budget_);
        for (double v : f_) scale = std::max(scale, std::abs(v));
        for (double v : d_) scale = std::max(scale, std::abs(v));
        const double tol = 1e-12 * std::max(1.0, scale);

        const long cap = 20000 + 50 * static_cast<long>(nvars);
        long iters = 0;
        while (true) {
            // Bland: lowest-index improving column.
            std::size_t entering = nvars;
            for (std::size_t v = 0; v < nvars; ++v) {
                if (rc_[v] > tol) {
                    entering = v;
                    break;
                }
            }
            if (entering == nvars) break;

            std::size_t pivot_row = rows;
            double best_ratio = 0.0;
            for (std::size_t r = 0; r < rows; ++r) {
                const double coef = tableau_[r * nvars + entering];
                if (coef <= tol) continue;
                const double ratio = std::max(rhs_[r], 0.0) / coef;
                if (pivot_row == rows || ratio < best_ratio - 1e-15 ||
                    (std::abs(ratio - best_ratio) <= 1e-15 && basic_[r] < basic_[pivot_row])) {
                    pivot_row = r;
                    best_ratio = ratio;
                }
            }
            if (pivot_row == rows)
                throw internal_error("worst-case LP reported unbounded; inputs are inconsistent");

            pivot(pivot_row, entering, nvars, rows);
            if (++iters > cap)
                throw internal_error("worst-case LP pivot limit exceeded (" +
                                     std::to_string(n_) + " atoms x " + std::to_string(k_) +
                                     " candidates)");
        }

        std::vector<double> x(nvars, 0.0);
        for (std::size_t r = 0; r < rows; ++r) x[basic_[r]] = std::max(rhs_[r], 0.0);
        x.resize(n_ * k_); // drop the slack
        return x;
    }

private:
    void pivot(std::size_t prow, std::size_t pcol, std::size_t nvars, std::size_t rows) {
        double* prow_ptr = &tableau_[prow * nvars];
        const double inv = 1.0 / prow_ptr[pcol];
        for (std::size_t v = 0; v < nvars; ++v) prow_ptr[v] *= inv;
        prow_ptr[pcol] = 1.0;
        rhs_[prow] *= inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == prow) continue;
            const double factor = tableau_[r * nvars + pcol];
            if (factor == 0.0) continue;
            double* row_ptr = &tableau_[r * nvars];
            for (std::size_t v = 0; v < nvars; ++v) row_ptr[v] -= factor * prow_ptr[v];
            row_ptr[pcol] = 0.0;
            rhs_[r] -= factor * rhs_[prow];
        }
        const double factor = rc_[pcol];
        if (factor != 0.0) {
            for (std::size_t v = 0; v < nvars; ++v) rc_[v] -= factor * prow_ptr[v];
            rc_[pcol] = 0.0;
        }
        basic_[prow] = pcol;
    }

    const std::vector<double>& w_;
    const std::vector<double>& f_;
    const std::vector<double>& d_;
    const std::vector<std::size_t>& home_;
    double budget_;
    std::size_t n_, k_;
    std::vector<double> tableau_, rhs_, rc_;
    std::vector<std::size_t> basic_;
};

} // namespace

double TransportPlan::row_sum(std::size_t i) const {
    double acc = 0.0;
    for (double v : plan[i]) acc += v;
    return acc;
}

double TransportPlan::col_sum(std::size_t j) const {
    double acc = 0.0;
    for (const auto& row : plan) acc += row[j];
    return acc;
}

WassersteinResult wasserstein(double p, const EmpiricalDistribution& a,
                              const EmpiricalDistribution& b, const InstanceSpace& space) {
    if (p < 1.0) throw data_error("wasserstein order must be >= 1");
    a.validate();
    b.validate();

    const std::size_t n = a.size(), m = b.size();
    std::vector<double> cost(n * m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            cost[i * m + j] = pow_p(distance(space, a.support[i], b.support[j]), p);

    TransportationSimplex solver(a.weights, b.weights, cost);
    WassersteinResult result;
    result.plan.source_support = a.support;
    result.plan.target_support = b.support;
    result.plan.order = p;
    result.plan.plan = solver.solve();

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) total += result.plan.plan[i][j] * cost[i * m + j];
    result.plan.cost = std::max(total, 0.0);
    result.value = p == 1.0 ? result.plan.cost : std::pow(result.plan.cost, 1.0 / p);
    return result;
}

WorstCaseCertificate primal_worst_case_risk(const Hypothesis& f, const EmpiricalDistribution& p_dist,
                                            const AmbiguityBall& ball,
                                            const std::vector<Point>& candidates,
                                            const InstanceSpace& space) {
    p_dist.validate();
    const CandidateSet cset = augment_candidates(p_dist, candidates, space);
    const std::size_t n = p_dist.size();
    const std::size_t k = cset.points.size();
    const double p = ball.order;

    std::vector<double> fvals(k);
    for (std::size_t j = 0; j < k; ++j) fvals[j] = f(cset.points[j]);
    std::vector<double> dpow(n * k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j)
            dpow[i * k + j] = pow_p(distance(space, p_dist.support[i], cset.points[j]), p);

    WorstCaseSimplex lp(p_dist.weights, fvals, dpow, cset.home, pow_p(ball.radius, p));
    const std::vector<double> x = lp.solve();

    WorstCaseCertificate cert;
    cert.plan.source_support = p_dist.support;
    cert.plan.target_support = cset.points;
    cert.plan.order = p;
    cert.plan.plan.assign(n, std::vector<double>(k, 0.0));

    std::vector<double> q(k, 0.0);
    double value = 0.0, moved_cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double mass = x[i * k + j];
            cert.plan.plan[i][j] = mass;
            q[j] += mass;
            value += mass * fvals[j];
            moved_cost += mass * dpow[i * k + j];
        }
    }
    cert.plan.cost = std::max(moved_cost, 0.0);
    cert.value = value;
    cert.distribution.support = cset.points;
    cert.distribution.weights = std::move(q);
    return cert;
}

void dump_plan_csv(const std::filesystem::path& path, const TransportPlan& plan) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot open " + path.string() + " for writing");
    char buf[64];
    out << "src\\tgt";
    for (std::size_t j = 0; j < plan.target_support.size(); ++j) out << ',' << j;
    out << '\n';
    for (std::size_t i = 0; i < plan.plan.size(); ++i) {
        out << i;
        for (double v : plan.plan[i]) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << ',' << buf;
        }
        out << '\n';
    }
}

} // namespace wdro
