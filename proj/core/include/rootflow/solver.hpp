#pragma once

#include <span>
#include <string>
#include <vector>

#include "rootflow/models.hpp"
#include "rootflow/polynomial.hpp"
#include "rootflow/types.hpp"
#include "rootflow/vieta.hpp"

namespace rootflow {

struct SolverOptions {
    double tol_root = 1e-9;           // multiple-root equation residual, relative
    double tol_period = 1e-4;         // recurrence defect, relative
    double collision_eps = 1e-8;      // relative collision threshold
    bool check_consistency = false;   // re-derive the redundant trailing rows each sample
    int max_refine_depth = 32;        // sample bisection cap near branch exchanges
};

/// Annotation of a near-collision / possible branch exchange between two
/// tracked simple roots (0-based indices into the state vector).
struct BranchEvent {
    double time = 0.0;
    int first = 0;
    int second = 0;
};

/// Time-stamped root trajectory.  `states[k][0]` is the multiple root.
/// Velocities are filled for second-order problems.
struct Trajectory {
    std::vector<double> times;
    std::vector<CVec> states;
    std::vector<CVec> velocities;
    std::vector<BranchEvent> branch_events;
    std::string engine;  // "algebraic" or "direct"
    int n_roots = 0;
    int m1 = 1;
    SolverOptions options;

    int samples() const noexcept { return static_cast<int>(times.size()); }
};

/// Initial value problem: evolve the roots from x0 (and xdot0 when the
/// generating model is second order) over [t0, t_end], sampled every
/// sample_dt.  Roots must be pairwise distinct beyond the collision
/// threshold.
struct IVP {
    GeneratingModel model;
    int m1 = 1;
    CVec x0;
    CVec xdot0;
    double t0 = 0.0;
    double t_end = 1.0;
    double sample_dt = 1e-3;

    void validate() const;  // throws std::invalid_argument
};

/// The algebraic engine: coefficient initial data from the roots, exact
/// coefficient flow, multiple-root continuation on the degree-N companion
/// equation, trailing-coefficient extension, deflation, simple-root
/// extraction and continuity matching.
Trajectory solve_algebraic(const IVP& ivp, const SolverOptions& options = {});

/// Independent oracle: classical fourth-order one-step integration of the
/// nonlinear root system itself, with the coefficient data recomputed from
/// the state at every evaluation.  Halves the step near close encounters.
Trajectory integrate_direct(const IVP& ivp, const SolverOptions& options = {});

/// Minimal total squared distance assignment of `next` onto `prev`
/// (equal sizes).  Returns the permutation pi with next[pi[i]] matched to
/// prev[i].  Sets `ambiguous` (when non-null) if a single swap changes the
/// total squared cost by less than eps^2 -- the signature of two tracks
/// passing within the collision threshold.
std::vector<int> track_assignment(std::span<const Complex> prev,
                                  std::span<const Complex> next,
                                  double eps = 0.0, bool* ambiguous = nullptr);

enum class PeriodVerdict { Periodic, Asymptotic, Aperiodic };

struct PeriodEstimate {
    PeriodVerdict verdict = PeriodVerdict::Aperiodic;
    double period = 0.0;
    double defect = 0.0;  // relative recurrence defect at the accepted period
};

/// Tests the candidate period and its integer multiples (x1..x4, as far as
/// the trajectory span allows) and returns the least that recurs within
/// tol * (1 + max |x|).  When none recurs exactly, looks for a recurrence
/// defect that decays monotonically below tolerance in the final window
/// (asymptotic isochrony).  `coordinate` selects one root (0-based) or all
/// of them (-1).  Requires the trajectory to span at least two candidates.
PeriodEstimate estimate_period(const Trajectory& traj, double candidate,
                               int coordinate = -1, double tol = 1e-4);

}  // namespace rootflow
