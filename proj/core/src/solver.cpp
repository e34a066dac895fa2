#include "rootflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rootflow/dynamics.hpp"

namespace rootflow {

namespace {

double min_pairwise_gap(std::span<const Complex> x) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
            g = std::min(g, std::abs(x[i] - x[j]));
    return g;
}

double max_abs(std::span<const Complex> x) {
    double m = 0.0;
    for (const Complex& v : x) m = std::max(m, std::abs(v));
    return m;
}

struct NewtonResult {
    Complex z;
    bool converged = false;
};

NewtonResult newton_root(std::span<const Complex> coeffs, std::span<const Complex> dcoeffs,
                         Complex seed) {
    Complex z = seed;
    for (int it = 0; it < 64; ++it) {
        const Complex p = polyval(coeffs, z);
        const Complex dp = polyval(dcoeffs, z);
        if (dp == Complex(0.0)) return {z, false};
        const Complex step = p / dp;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return {z, false};
        z -= step;
        if (std::abs(step) < 1e-14 * (1.0 + std::abs(z))) return {z, true};
    }
    return {z, false};
}

}  // namespace

void IVP::validate() const {
    model.validate();
    const int N = static_cast<int>(x0.size());
    if (N < 2) throw std::invalid_argument("IVP: need at least two roots");
    if (model.dimension != N)
        throw std::invalid_argument("IVP: model dimension must equal the root count");
    if (m1 < 1) throw std::invalid_argument("IVP: m1 must be >= 1");
    if (model.order == 2) {
        if (xdot0.size() != x0.size())
            throw std::invalid_argument("IVP: second-order model needs initial velocities");
    } else if (!xdot0.empty()) {
        throw std::invalid_argument("IVP: first-order model takes no initial velocities");
    }
    if (!(sample_dt > 0.0)) throw std::invalid_argument("IVP: sample_dt must be positive");
    if (!(t_end > t0)) throw std::invalid_argument("IVP: t_end must exceed t0");
}

std::vector<int> track_assignment(std::span<const Complex> prev,
                                  std::span<const Complex> next, double eps,
                                  bool* ambiguous) {
    if (prev.size() != next.size())
        throw std::invalid_argument("track_assignment: size mismatch");
    if (ambiguous) *ambiguous = false;
    const int n = static_cast<int>(prev.size());
    std::vector<int> pi(n, 0);
    if (n == 0) return pi;

    // Hungarian algorithm with potentials; cost is the squared distance.
    constexpr double kInf = std::numeric_limits<double>::infinity();
    auto cost = [&](int i, int j) { return std::norm(prev[i - 1] - next[j - 1]); };
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            int j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    for (int j = 1; j <= n; ++j) pi[match[j] - 1] = j - 1;

    if (ambiguous && eps > 0.0) {
        // a single transposition that changes the total squared cost by
        // less than eps^2 means two tracks are effectively interchangeable
        for (int i = 1; i <= n && !*ambiguous; ++i)
            for (int k = i + 1; k <= n; ++k) {
                const double direct = cost(i, pi[i - 1] + 1) + cost(k, pi[k - 1] + 1);
                const double swapped = cost(i, pi[k - 1] + 1) + cost(k, pi[i - 1] + 1);
                if (swapped - direct < eps * eps) {
                    *ambiguous = true;
                    break;
                }
            }
    }
    return pi;
}

namespace {

struct TrackPoint {
    double t;
    CVec x;
};

class AlgebraicEngine {
public:
    AlgebraicEngine(const IVP& ivp, const SolverOptions& opt)
        : ivp_(ivp), opt_(opt), tables_(CoefficientTables::get(
                                     static_cast<int>(ivp.x0.size()), ivp.m1)) {
        const RootState init{ivp_.x0, ivp_.xdot0, ivp_.m1};
        require_separated(init.x, opt_.collision_eps);
        CoeffState c0 = coeff_state_from_roots(init, ivp_.t0);
        y0_ = std::move(c0.y);
        yd0_ = std::move(c0.ydot);
    }

    Trajectory run() {
        const int N = tables_->n_roots();
        Trajectory traj;
        traj.engine = "algebraic";
        traj.n_roots = N;
        traj.m1 = tables_->m1();
        traj.options = opt_;

        const long long steps =
            static_cast<long long>(std::floor((ivp_.t_end - ivp_.t0) / ivp_.sample_dt + 1e-9));
        traj.times.reserve(steps + 1);
        traj.states.reserve(steps + 1);

        TrackPoint cur{ivp_.t0, ivp_.x0};
        store(traj, cur);
        for (long long k = 1; k <= steps; ++k) {
            const double t = ivp_.t0 + static_cast<double>(k) * ivp_.sample_dt;
            cur = advance(cur, t, 0, traj);
            store(traj, cur);
        }
        return traj;
    }

private:
    void store(Trajectory& traj, const TrackPoint& p) {
        traj.times.push_back(p.t);
        traj.states.push_back(p.x);
        if (ivp_.model.order == 2) {
            const FlowState fl = model_flow(ivp_.model, ivp_.t0, p.t, y0_, yd0_);
            CVec vel(p.x.size());
            for (int n = 1; n <= tables_->n_roots(); ++n)
                vel[n - 1] = h_first(n, p.x, fl.y, fl.ydot, *tables_, opt_.collision_eps);
            traj.velocities.push_back(std::move(vel));
        }
    }

    struct Located {
        CVec x;
        bool ambiguous = false;
        int amb_first = 0;
        int amb_second = 0;
    };

    Located locate(double t, const TrackPoint& seed) {
        const int N = tables_->n_roots();
        const int m1 = tables_->m1();
        const FlowState fl = model_flow(ivp_.model, ivp_.t0, t, y0_, yd0_);
        const CVec eqn = multiple_root_equation(fl.y, *tables_);
        const CVec deqn = polyder(eqn);

        NewtonResult nr = newton_root(eqn, deqn, seed.x[0]);
        Complex x1 = nr.z;
        {
            // continuity guard: if the Newton iterate strayed past the
            // midpoint to any other branch, snap to the nearest root of the
            // full root set instead
            const CVec branch_roots = roots_of(eqn);
            Complex nearest = branch_roots[0];
            double d_near = std::numeric_limits<double>::infinity();
            double d_other = std::numeric_limits<double>::infinity();
            for (const Complex& r : branch_roots) {
                const double d = std::abs(r - seed.x[0]);
                if (d < d_near) {
                    d_other = d_near;
                    d_near = d;
                    nearest = r;
                } else {
                    d_other = std::min(d_other, d);
                }
            }
            if (!nr.converged || std::abs(x1 - seed.x[0]) > 0.5 * d_other)
                x1 = newton_root(eqn, deqn, nearest).z;
        }
        const double residual = std::abs(polyval(eqn, x1));
        if (residual > opt_.tol_root * polyval_scale(eqn, x1))
            throw solve_error("multiple-root tracking lost the branch (residual " +
                                  std::to_string(residual) + ")",
                              t);

        const std::span<const Complex> y_first(fl.y.data(), N);
        const CVec tail = extend_y(y_first, x1, *tables_);
        if (opt_.check_consistency) check_redundant_rows(y_first, x1, tail, t);

        CVec y_full(fl.y.begin(), fl.y.begin() + N);
        y_full.insert(y_full.end(), tail.begin(), tail.end());
        CVec poly = assemble_polynomial(y_full);
        for (int k = 0; k <= m1; ++k) poly = deflate(poly, x1);

        Located out;
        out.x.resize(N);
        out.x[0] = x1;
        const CVec simple = roots_of(poly);
        const std::span<const Complex> prev_simple(seed.x.data() + 1, N - 1);
        const double eps = collision_threshold(seed.x, opt_.collision_eps);
        bool amb = false;
        const std::vector<int> pi = track_assignment(prev_simple, simple, eps, &amb);
        for (int i = 0; i < N - 1; ++i) out.x[i + 1] = simple[pi[i]];
        if (amb) {
            out.ambiguous = true;
            // report the closest pair of newly extracted simple roots
            double best = std::numeric_limits<double>::infinity();
            for (int i = 1; i < N; ++i)
                for (int j = i + 1; j < N; ++j) {
                    const double d = std::abs(out.x[i] - out.x[j]);
                    if (d < best) {
                        best = d;
                        out.amb_first = i;
                        out.amb_second = j;
                    }
                }
        }
        return out;
    }

    void check_redundant_rows(std::span<const Complex> y, Complex x1,
                              const CVec& tail, double t) {
        // the dropped trailing rows of the root/coefficient system, re-derived
        // through xi; they must reproduce the extension
        const int N = tables_->n_roots();
        const int m1 = tables_->m1();
        const CVec xi = xi_from_y(y, x1, *tables_);
        CVec pow(N + m1 + 1);
        pow[0] = 1.0;
        for (int i = 1; i <= N + m1; ++i) pow[i] = pow[i - 1] * x1;
        double worst = 0.0;
        for (int k = 1; k <= m1; ++k) {
            const int n = N + k;
            Complex row = (n % 2 == 0 ? 1.0 : -1.0) *
                          static_cast<double>(binomial(m1, n)) * pow[n];
            for (int j = 1; j <= N; ++j) {
                const double b = static_cast<double>(binomial(m1, n - j));
                row += ((n + j) % 2 == 0 ? b : -b) * pow[n - j] * xi[j - 1];
            }
            worst = std::max(worst, std::abs(row - tail[k - 1]));
        }
        double mx = 1.0;
        for (const Complex& v : y) mx = std::max(mx, std::abs(v));
        const double scale = std::max(std::pow(1.0 + std::abs(x1), N + m1), mx);
        if (worst > 1e-9 * scale)
            throw solve_error("redundant coefficient rows are inconsistent (residual " +
                                  std::to_string(worst) + ")",
                              t);
    }

    TrackPoint advance(const TrackPoint& from, double t, int depth, Trajectory& traj) {
        Located loc = locate(t, from);
        const double gap = min_pairwise_gap(from.x);
        double moved = 0.0;
        for (std::size_t i = 0; i < loc.x.size(); ++i)
            moved = std::max(moved, std::abs(loc.x[i] - from.x[i]));
        const bool too_fast = moved > 0.25 * gap;
        if ((too_fast || loc.ambiguous) && depth < opt_.max_refine_depth) {
            const double tm = 0.5 * (from.t + t);
            if (tm > from.t && tm < t) {
                const TrackPoint mid = advance(from, tm, depth + 1, traj);
                return advance(mid, t, depth + 1, traj);
            }
        }
        if (loc.ambiguous)
            traj.branch_events.push_back({t, loc.amb_first, loc.amb_second});
        return TrackPoint{t, std::move(loc.x)};
    }

    const IVP& ivp_;
    SolverOptions opt_;
    std::shared_ptr<const CoefficientTables> tables_;
    CVec y0_;
    CVec yd0_;
};

}  // namespace

Trajectory solve_algebraic(const IVP& ivp, const SolverOptions& options) {
    ivp.validate();
    AlgebraicEngine engine(ivp, options);
    return engine.run();
}

namespace {

class DirectEngine {
public:
    DirectEngine(const IVP& ivp, const SolverOptions& opt)
        : ivp_(ivp), opt_(opt), tables_(CoefficientTables::get(
                                     static_cast<int>(ivp.x0.size()), ivp.m1)),
          second_(ivp.model.order == 2) {}

    Trajectory run() {
        const int N = tables_->n_roots();
        Trajectory traj;
        traj.engine = "direct";
        traj.n_roots = N;
        traj.m1 = tables_->m1();
        traj.options = opt_;

        CVec state = ivp_.x0;
        if (second_) state.insert(state.end(), ivp_.xdot0.begin(), ivp_.xdot0.end());

        const long long steps =
            static_cast<long long>(std::floor((ivp_.t_end - ivp_.t0) / ivp_.sample_dt + 1e-9));
        store(traj, ivp_.t0, state);
        for (long long k = 1; k <= steps; ++k) {
            const double t_next = ivp_.t0 + static_cast<double>(k) * ivp_.sample_dt;
            advance(state, ivp_.t0 + static_cast<double>(k - 1) * ivp_.sample_dt, t_next);
            store(traj, t_next, state);
        }
        return traj;
    }

private:
    void store(Trajectory& traj, double t, const CVec& state) {
        const int N = tables_->n_roots();
        traj.times.push_back(t);
        traj.states.push_back(CVec(state.begin(), state.begin() + N));
        if (second_) traj.velocities.push_back(CVec(state.begin() + N, state.end()));
    }

    CVec rhs(double t, const CVec& state) const {
        const int N = tables_->n_roots();
        RootState rs;
        rs.m1 = tables_->m1();
        rs.x.assign(state.begin(), state.begin() + N);
        if (second_) rs.xdot.assign(state.begin() + N, state.end());
        const CoeffState cs = coeff_state_from_roots(rs, t);
        CVec out(state.size());
        if (second_) {
            const CVec f = model_rhs(ivp_.model, t, cs.y, cs.ydot);
            for (int n = 0; n < N; ++n) out[n] = rs.xdot[n];
            for (int n = 1; n <= N; ++n)
                out[N + n - 1] = h_second(n, rs.x, rs.xdot, cs.y, cs.ydot, f, *tables_,
                                          opt_.collision_eps);
        } else {
            const CVec f = model_rhs(ivp_.model, t, cs.y);
            for (int n = 1; n <= N; ++n)
                out[n - 1] = h_first(n, rs.x, cs.y, f, *tables_, opt_.collision_eps);
        }
        return out;
    }

    // one interval [t_from, t_to] with collision-triggered step halving
    void advance(CVec& state, double t_from, double t_to) {
        const int N = tables_->n_roots();
        const double h_min = ivp_.sample_dt * std::ldexp(1.0, -52);
        double t = t_from;
        double h = t_to - t_from;
        while (t < t_to - 1e-15 * std::max(1.0, std::abs(t_to))) {
            h = std::min(h, t_to - t);
            CVec k1;
            try {
                k1 = rhs(t, state);
            } catch (const collision_error& e) {
                throw solve_error(std::string("collision reached: ") + e.what(), t);
            }
            // the first stage bounds the motion; keep each step well inside
            // the current minimal gap
            const double gap = min_pairwise_gap(std::span<const Complex>(state.data(), N));
            double speed = 0.0;
            for (int n = 0; n < N; ++n) speed = std::max(speed, std::abs(k1[n]));
            while (speed * h > 0.25 * gap) {
                h *= 0.5;
                if (h < h_min)
                    throw solve_error("step underflow near a root collision", t);
            }
            try {
                rk4_step(state, t, h, k1);
            } catch (const collision_error& e) {
                h *= 0.5;
                if (h < h_min)
                    throw solve_error(std::string("step underflow near a root collision: ") +
                                          e.what(),
                                      t);
                continue;
            }
            t += h;
            // relax the step back toward the sample interval
            h = std::min(2.0 * h, ivp_.sample_dt);
        }
    }

    void rk4_step(CVec& state, double t, double h, const CVec& k1) const {
        const std::size_t n = state.size();
        CVec tmp(n);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * h * k1[i];
        const CVec k2 = rhs(t + 0.5 * h, tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * h * k2[i];
        const CVec k3 = rhs(t + 0.5 * h, tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = state[i] + h * k3[i];
        const CVec k4 = rhs(t + h, tmp);
        for (std::size_t i = 0; i < n; ++i)
            state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    const IVP& ivp_;
    SolverOptions opt_;
    std::shared_ptr<const CoefficientTables> tables_;
    bool second_;
};

}  // namespace

Trajectory integrate_direct(const IVP& ivp, const SolverOptions& options) {
    ivp.validate();
    DirectEngine engine(ivp, options);
    return engine.run();
}

PeriodEstimate estimate_period(const Trajectory& traj, double candidate, int coordinate,
                               double tol) {
    const int n = traj.samples();
    if (n < 3) throw std::invalid_argument("estimate_period: trajectory too short");
    if (!(candidate > 0.0)) throw std::invalid_argument("estimate_period: bad candidate");
    const double span = traj.times.back() - traj.times.front();
    if (span < 2.0 * candidate - 1e-9)
        throw std::invalid_argument("estimate_period: trajectory must span two candidates");
    const double dt = span / (n - 1);
    const int n_coords = traj.n_roots;
    if (coordinate >= n_coords)
        throw std::invalid_argument("estimate_period: coordinate out of range");

    auto coord_abs_max = [&]() {
        double m = 0.0;
        for (const CVec& s : traj.states) {
            if (coordinate < 0)
                m = std::max(m, max_abs(s));
            else
                m = std::max(m, std::abs(s[coordinate]));
        }
        return m;
    };
    const double amp = 1.0 + coord_abs_max();
    auto defect_at = [&](int i, int k) {
        if (coordinate >= 0) return std::abs(traj.states[i + k][coordinate] -
                                             traj.states[i][coordinate]);
        double d = 0.0;
        for (int c = 0; c < n_coords; ++c)
            d = std::max(d, std::abs(traj.states[i + k][c] - traj.states[i][c]));
        return d;
    };

    struct Shift {
        int k;
        double period;
    };
    std::vector<Shift> shifts;
    for (int mult = 1; mult <= 4; ++mult) {
        const double period = mult * candidate;
        const int k = static_cast<int>(std::llround(period / dt));
        if (k <= 0 || k >= n) break;
        if (std::abs(k * dt - period) > 0.26 * dt) continue;  // off the sample grid
        if (span - period < candidate - 1e-9) break;          // too little overlap
        shifts.push_back({k, period});
    }

    double best_defect = std::numeric_limits<double>::infinity();
    for (const Shift& s : shifts) {
        double defect = 0.0;
        for (int i = 0; i + s.k < n; ++i) defect = std::max(defect, defect_at(i, s.k));
        defect /= amp;
        best_defect = std::min(best_defect, defect);
        if (defect < tol) return {PeriodVerdict::Periodic, s.period, defect};
    }

    // asymptotic recurrence: the defect must decay window over window and
    // end below tolerance
    for (const Shift& s : shifts) {
        const int overlap = n - s.k;
        const int windows = overlap / s.k;
        if (windows < 3) continue;
        std::vector<double> w(windows, 0.0);
        for (int j = 0; j < windows; ++j) {
            for (int i = j * s.k; i < (j + 1) * s.k; ++i)
                w[j] = std::max(w[j], defect_at(i, s.k));
            w[j] /= amp;
        }
        bool monotone = true;
        for (int j = 0; j + 1 < windows; ++j)
            if (w[j + 1] > 1.2 * w[j] + 1e-15) monotone = false;
        if (monotone && w.back() < tol && w.back() < 0.5 * w.front())
            return {PeriodVerdict::Asymptotic, s.period, w.back()};
    }
    return {PeriodVerdict::Aperiodic, 0.0, best_defect};
}

}  // namespace rootflow
