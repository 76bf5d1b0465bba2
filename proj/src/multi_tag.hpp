#ifndef RISBC_MULTI_TAG_HPP
#define RISBC_MULTI_TAG_HPP

#include <complex>
#include <span>
#include <vector>

#include "single_tag.hpp"

namespace risbc::multi_tag {

using cplx = std::complex<double>;
using single_tag::SystemParams;

// One realization of all channels for K tags and an N-element surface.
// The solver variable theta is the conjugated reflection vector: the
// physical reflection coefficient of element n is conj(theta[n]), so the
// received coefficient of tag k reads b_k + theta^H a_k.
struct MultiTagInstance {
    SystemParams sys;
    std::vector<cplx> f;              // K emitter-tag channels
    std::vector<cplx> u;              // K tag-reader channels
    std::vector<std::vector<cplx>> g; // K x N surface-tag channels
    std::vector<cplx> h;              // N emitter-surface channels

    int tags() const { return static_cast<int>(f.size()); }
    int elements() const { return static_cast<int>(h.size()); }
    void validate() const;

    std::vector<cplx> a(int k) const;     // u_k g_{k,n} h_n
    cplx b(int k) const;                  // u_k f_k
    std::vector<cplx> a_bar(int k) const; // g_{k,n} h_n
    cplx b_bar(int k) const;              // f_k
};

// SINR of tag k from the raw channels with reflection coefficients
// c_n = eta_n exp(j theta_n) applied at the surface.
double sinr_from_reflection(const MultiTagInstance& inst, std::span<const cplx> reflection,
                            int k);

// SINR of tag k in the b + theta^H a parameterization.
double sinr(const MultiTagInstance& inst, std::span<const cplx> theta, int k);

double sum_rate(const MultiTagInstance& inst, std::span<const cplx> theta);

// Closed-form auxiliary update of the quadratic transform.
std::vector<double> optimal_lambda(const MultiTagInstance& inst, std::span<const cplx> theta);

// Transformed objective evaluated through the expanded quadratic
// coefficients (U_k, v_k, c_k). Throws if any log argument is
// nonpositive, which marks an infeasible (theta, lambda) pair.
double surrogate_objective(const MultiTagInstance& inst, std::span<const cplx> theta,
                           std::span<const double> lambda);

// True received power P |b_bar_k + theta^H a_bar_k|^2 at tag k (watts).
double received_power(const MultiTagInstance& inst, std::span<const cplx> theta, int k);

// First-order expansion of received_power around theta_prev; a global
// under-estimator of the true convex quadratic.
double linearized_power(const MultiTagInstance& inst, std::span<const cplx> theta_prev,
                        std::span<const cplx> theta, int k);

struct SolveOptions {
    int max_outer = 200;
    double rel_tol = 1e-4;    // normalized objective-gain stopping rule
    int max_inner = 400;      // projected-gradient steps per theta update
    bool enforce_eh = true;   // harvest constraints (1-beta) P_T,k >= P_b/phi
};

struct SolverState {
    std::vector<cplx> theta;
    std::vector<double> lambda;
    std::vector<double> trace; // sum rate after each outer iteration
    int iterations = 0;
    bool feasible = true;      // EH constraints hold (or were not requested)
    bool converged = false;
};

// One constrained theta update: projected gradient ascent on the
// surrogate with per-element disk constraints |theta_n| <= 1 and, when
// given, the K linearized EH half-spaces anchored at theta_prev.
// Never returns a point with a lower surrogate value than theta_prev.
std::vector<cplx> solve_theta(const MultiTagInstance& inst, std::span<const double> lambda,
                              std::span<const cplx> theta_prev, bool enforce_eh,
                              int max_inner);

// Alternating lambda / theta ascent until the normalized sum-rate gain
// drops below rel_tol. If the EH constraints are infeasible at both the
// co-phased and the zero initialization, the run is flagged infeasible
// and continues without them (best effort).
SolverState optimize_phases(const MultiTagInstance& inst, const SolveOptions& opts = {});

} // namespace risbc::multi_tag

#endif
