#include "multi_tag.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace risbc::multi_tag {

namespace {

cplx inner(std::span<const cplx> x, std::span<const cplx> y) // x^H y
{
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i)
        s += std::conj(x[i]) * y[i];
    return s;
}

// Received coefficients s_k = b_k + theta^H a_k for all tags.
std::vector<cplx> signals(const MultiTagInstance& inst, std::span<const cplx> theta)
{
    const int K = inst.tags();
    std::vector<cplx> s(K);
    for (int k = 0; k < K; ++k) {
        cplx acc = inst.b(k);
        const auto& gk = inst.g[static_cast<std::size_t>(k)];
        for (int n = 0; n < inst.elements(); ++n)
            acc += std::conj(theta[static_cast<std::size_t>(n)]) * inst.u[static_cast<std::size_t>(k)] *
                   gk[static_cast<std::size_t>(n)] * inst.h[static_cast<std::size_t>(n)];
        s[static_cast<std::size_t>(k)] = acc;
    }
    return s;
}

double sinr_from_signals(const MultiTagInstance& inst, const std::vector<cplx>& s, int k)
{
    const double bp = inst.sys.beta * inst.sys.tx_power_w;
    double own = bp * std::norm(s[static_cast<std::size_t>(k)]);
    double interference = 0.0;
    for (int i = 0; i < inst.tags(); ++i)
        if (i != k)
            interference += bp * std::norm(s[static_cast<std::size_t>(i)]);
    return own / (interference + inst.sys.noise_w);
}

struct EhHalfspace {
    std::vector<cplx> grad; // active gradient w; constraint Re{w^H theta} >= offset
    double offset = 0.0;
};

// Linearized (1-beta) P_T,k >= P_b/phi as a half-space in theta.
EhHalfspace eh_halfspace(const MultiTagInstance& inst, std::span<const cplx> theta_prev, int k)
{
    const double p = inst.sys.tx_power_w;
    auto abar = inst.a_bar(k);
    cplx sbar = inst.b_bar(k) + inner(theta_prev, abar);
    EhHalfspace hs;
    hs.grad.resize(abar.size());
    for (std::size_t n = 0; n < abar.size(); ++n)
        hs.grad[n] = p * std::conj(sbar) * abar[n];
    double p_at_prev = p * std::norm(sbar);
    double need = inst.sys.activation_w / inst.sys.phi / (1.0 - inst.sys.beta);
    // P_lin(theta) = p_at_prev + 2 Re{grad^H (theta - theta_prev)} >= need
    double re_prev = 0.0;
    for (std::size_t n = 0; n < hs.grad.size(); ++n)
        re_prev += std::real(std::conj(hs.grad[n]) * theta_prev[n]);
    hs.offset = 0.5 * (need - p_at_prev) + re_prev;
    return hs;
}

void project_disks(std::vector<cplx>& x)
{
    for (auto& v : x) {
        double m = std::abs(v);
        if (m > 1.0)
            v /= m;
    }
}

void project_halfspace(std::vector<cplx>& x, const EhHalfspace& hs)
{
    double re = 0.0, nn = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
        re += std::real(std::conj(hs.grad[n]) * x[n]);
        nn += std::norm(hs.grad[n]);
    }
    if (re >= hs.offset || nn == 0.0)
        return;
    double shift = (hs.offset - re) / nn;
    for (std::size_t n = 0; n < x.size(); ++n)
        x[n] += shift * hs.grad[n];
}

bool satisfies(const std::vector<cplx>& x, const std::vector<EhHalfspace>& hss, double tol)
{
    for (const auto& v : x)
        if (std::abs(v) > 1.0 + tol)
            return false;
    for (const auto& hs : hss) {
        double re = 0.0;
        for (std::size_t n = 0; n < x.size(); ++n)
            re += std::real(std::conj(hs.grad[n]) * x[n]);
        if (re < hs.offset - tol)
            return false;
    }
    return true;
}

// Dykstra's alternating projection onto the intersection of the unit
// disks and the EH half-spaces.
std::vector<cplx> project_feasible(std::vector<cplx> x, const std::vector<EhHalfspace>& hss)
{
    if (hss.empty()) {
        project_disks(x);
        return x;
    }
    const std::size_t n_sets = 1 + hss.size();
    std::vector<std::vector<cplx>> corr(n_sets, std::vector<cplx>(x.size(), cplx{0.0, 0.0}));
    for (int sweep = 0; sweep < 300; ++sweep) {
        double moved = 0.0;
        for (std::size_t s = 0; s < n_sets; ++s) {
            std::vector<cplx> y(x.size());
            for (std::size_t i = 0; i < x.size(); ++i)
                y[i] = x[i] + corr[s][i];
            std::vector<cplx> z = y;
            if (s == 0)
                project_disks(z);
            else
                project_halfspace(z, hss[s - 1]);
            for (std::size_t i = 0; i < x.size(); ++i) {
                corr[s][i] = y[i] - z[i];
                moved += std::norm(z[i] - x[i]);
                x[i] = z[i];
            }
        }
        if (moved < 1e-24)
            break;
    }
    return x;
}

// Fast surrogate evaluation through the received coefficients; equal to
// the expanded (U, v, c) form by construction.
double surrogate_from_signals(const MultiTagInstance& inst, const std::vector<cplx>& s,
                              std::span<const double> lambda)
{
    const double bp = inst.sys.beta * inst.sys.tx_power_w;
    const double root_bp = std::sqrt(bp);
    const int K = inst.tags();
    double total = 0.0;
    for (int k = 0; k < K; ++k) {
        double interference = 0.0;
        for (int i = 0; i < K; ++i)
            if (i != k)
                interference += bp * std::norm(s[static_cast<std::size_t>(i)]);
        double lk = lambda[static_cast<std::size_t>(k)];
        double arg = 1.0 + 2.0 * lk * root_bp * std::real(s[static_cast<std::size_t>(k)]) -
                     lk * lk * (interference + inst.sys.noise_w);
        if (!(arg > 0.0))
            throw std::domain_error("surrogate objective: nonpositive log argument");
        total += std::log2(arg);
    }
    return total;
}

} // namespace

void MultiTagInstance::validate() const
{
    sys.validate();
    const std::size_t K = f.size();
    const std::size_t N = h.size();
    if (K == 0)
        throw std::invalid_argument("MultiTagInstance: need at least one tag");
    if (u.size() != K || g.size() != K)
        throw std::invalid_argument("MultiTagInstance: per-tag channel counts differ");
    for (const auto& gk : g)
        if (gk.size() != N)
            throw std::invalid_argument("MultiTagInstance: surface vector length mismatch");
}

std::vector<cplx> MultiTagInstance::a(int k) const
{
    std::vector<cplx> out(h.size());
    for (std::size_t n = 0; n < h.size(); ++n)
        out[n] = u[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(k)][n] * h[n];
    return out;
}

cplx MultiTagInstance::b(int k) const
{
    return u[static_cast<std::size_t>(k)] * f[static_cast<std::size_t>(k)];
}

std::vector<cplx> MultiTagInstance::a_bar(int k) const
{
    std::vector<cplx> out(h.size());
    for (std::size_t n = 0; n < h.size(); ++n)
        out[n] = g[static_cast<std::size_t>(k)][n] * h[n];
    return out;
}

cplx MultiTagInstance::b_bar(int k) const
{
    return f[static_cast<std::size_t>(k)];
}

double sinr_from_reflection(const MultiTagInstance& inst, std::span<const cplx> reflection,
                            int k)
{
    const double bp = inst.sys.beta * inst.sys.tx_power_w;
    const int K = inst.tags();
    std::vector<double> power(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) {
        cplx acc = inst.f[static_cast<std::size_t>(i)];
        for (int n = 0; n < inst.elements(); ++n)
            acc += inst.g[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] *
                   reflection[static_cast<std::size_t>(n)] * inst.h[static_cast<std::size_t>(n)];
        power[static_cast<std::size_t>(i)] =
            bp * std::norm(inst.u[static_cast<std::size_t>(i)] * acc);
    }
    double interference = 0.0;
    for (int i = 0; i < K; ++i)
        if (i != k)
            interference += power[static_cast<std::size_t>(i)];
    return power[static_cast<std::size_t>(k)] / (interference + inst.sys.noise_w);
}

double sinr(const MultiTagInstance& inst, std::span<const cplx> theta, int k)
{
    return sinr_from_signals(inst, signals(inst, theta), k);
}

double sum_rate(const MultiTagInstance& inst, std::span<const cplx> theta)
{
    auto s = signals(inst, theta);
    double total = 0.0;
    for (int k = 0; k < inst.tags(); ++k)
        total += std::log2(1.0 + sinr_from_signals(inst, s, k));
    return total;
}

std::vector<double> optimal_lambda(const MultiTagInstance& inst, std::span<const cplx> theta)
{
    auto s = signals(inst, theta);
    const double bp = inst.sys.beta * inst.sys.tx_power_w;
    const int K = inst.tags();
    std::vector<double> lambda(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        double interference = 0.0;
        for (int i = 0; i < K; ++i)
            if (i != k)
                interference += bp * std::norm(s[static_cast<std::size_t>(i)]);
        lambda[static_cast<std::size_t>(k)] = std::sqrt(bp) *
                                              std::real(s[static_cast<std::size_t>(k)]) /
                                              (interference + inst.sys.noise_w);
    }
    return lambda;
}

double surrogate_objective(const MultiTagInstance& inst, std::span<const cplx> theta,
                           std::span<const double> lambda)
{
    const double bp = inst.sys.beta * inst.sys.tx_power_w;
    const double root_bp = std::sqrt(bp);
    const int K = inst.tags();
    const int N = inst.elements();

    // t_i = theta^H a_i once; the quadratic pieces follow from them.
    std::vector<cplx> t(static_cast<std::size_t>(K));
    std::vector<cplx> bk(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) {
        auto ai = inst.a(i);
        t[static_cast<std::size_t>(i)] = inner(theta, ai);
        bk[static_cast<std::size_t>(i)] = inst.b(i);
    }
    (void)N;

    double total = 0.0;
    for (int k = 0; k < K; ++k) {
        double lk = lambda[static_cast<std::size_t>(k)];
        // theta^H U_k theta with U_k = lambda_k^2 beta P sum_{i != k} a_i a_i^H
        double quad = 0.0;
        cplx lin_v = lk * root_bp * t[static_cast<std::size_t>(k)]; // theta^H v_k, first part
        double c_k = 2.0 * lk * root_bp * std::real(bk[static_cast<std::size_t>(k)]);
        double interference_const = 0.0;
        for (int i = 0; i < K; ++i) {
            if (i == k)
                continue;
            quad += lk * lk * bp * std::norm(t[static_cast<std::size_t>(i)]);
            lin_v -= lk * lk * bp * std::conj(bk[static_cast<std::size_t>(i)]) *
                     t[static_cast<std::size_t>(i)];
            interference_const += std::norm(bk[static_cast<std::size_t>(i)]);
        }
        c_k -= lk * lk * (bp * interference_const + inst.sys.noise_w);
        double arg = 1.0 - quad + 2.0 * std::real(lin_v) + c_k;
        if (!(arg > 0.0))
            throw std::domain_error("surrogate objective: nonpositive log argument");
        total += std::log2(arg);
    }
    return total;
}

double received_power(const MultiTagInstance& inst, std::span<const cplx> theta, int k)
{
    auto abar = inst.a_bar(k);
    cplx sbar = inst.b_bar(k) + inner(theta, abar);
    return inst.sys.tx_power_w * std::norm(sbar);
}

double linearized_power(const MultiTagInstance& inst, std::span<const cplx> theta_prev,
                        std::span<const cplx> theta, int k)
{
    const double p = inst.sys.tx_power_w;
    auto abar = inst.a_bar(k);
    cplx sbar = inst.b_bar(k) + inner(theta_prev, abar);
    double base = p * std::norm(sbar);
    cplx acc{0.0, 0.0};
    for (std::size_t n = 0; n < abar.size(); ++n) {
        cplx grad_n = p * std::conj(sbar) * abar[n]; // d P / d conj(theta_n)
        acc += std::conj(grad_n) * (theta[n] - theta_prev[n]);
    }
    return base + 2.0 * std::real(acc);
}

std::vector<cplx> solve_theta(const MultiTagInstance& inst, std::span<const double> lambda,
                              std::span<const cplx> theta_prev, bool enforce_eh,
                              int max_inner)
{
    const double bp = inst.sys.beta * inst.sys.tx_power_w;
    const double root_bp = std::sqrt(bp);
    const int K = inst.tags();
    const int N = inst.elements();

    std::vector<std::vector<cplx>> a(static_cast<std::size_t>(K));
    std::vector<cplx> b(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        a[static_cast<std::size_t>(k)] = inst.a(k);
        b[static_cast<std::size_t>(k)] = inst.b(k);
    }

    std::vector<EhHalfspace> hss;
    if (enforce_eh)
        for (int k = 0; k < K; ++k)
            hss.push_back(eh_halfspace(inst, theta_prev, k));

    auto sig = [&](const std::vector<cplx>& th) {
        std::vector<cplx> s(static_cast<std::size_t>(K));
        for (int k = 0; k < K; ++k) {
            cplx acc = b[static_cast<std::size_t>(k)];
            const auto& ak = a[static_cast<std::size_t>(k)];
            for (int n = 0; n < N; ++n)
                acc += std::conj(th[static_cast<std::size_t>(n)]) * ak[static_cast<std::size_t>(n)];
            s[static_cast<std::size_t>(k)] = acc;
        }
        return s;
    };
    auto value = [&](const std::vector<cplx>& th) {
        return surrogate_from_signals(inst, sig(th), lambda);
    };
    // Wirtinger gradient with respect to conj(theta).
    auto gradient = [&](const std::vector<cplx>& th) {
        auto s = sig(th);
        std::vector<double> args(static_cast<std::size_t>(K));
        for (int k = 0; k < K; ++k) {
            double interference = 0.0;
            for (int i = 0; i < K; ++i)
                if (i != k)
                    interference += bp * std::norm(s[static_cast<std::size_t>(i)]);
            double lk = lambda[static_cast<std::size_t>(k)];
            args[static_cast<std::size_t>(k)] =
                1.0 + 2.0 * lk * root_bp * std::real(s[static_cast<std::size_t>(k)]) -
                lk * lk * (interference + inst.sys.noise_w);
        }
        std::vector<cplx> coef(static_cast<std::size_t>(K), cplx{0.0, 0.0});
        constexpr double ln2 = std::numbers::ln2;
        for (int k = 0; k < K; ++k) {
            double lk = lambda[static_cast<std::size_t>(k)];
            double inv = 1.0 / (args[static_cast<std::size_t>(k)] * ln2);
            coef[static_cast<std::size_t>(k)] += lk * root_bp * inv;
            for (int i = 0; i < K; ++i)
                if (i != k)
                    coef[static_cast<std::size_t>(i)] -=
                        lk * lk * bp * inv * std::conj(s[static_cast<std::size_t>(i)]);
        }
        std::vector<cplx> gr(static_cast<std::size_t>(N), cplx{0.0, 0.0});
        for (int k = 0; k < K; ++k) {
            const auto& ak = a[static_cast<std::size_t>(k)];
            for (int n = 0; n < N; ++n)
                gr[static_cast<std::size_t>(n)] +=
                    coef[static_cast<std::size_t>(k)] * ak[static_cast<std::size_t>(n)];
        }
        return gr;
    };

    std::vector<cplx> th(theta_prev.begin(), theta_prev.end());
    double cur = value(th);
    double step = 1.0;
    for (int it = 0; it < max_inner; ++it) {
        auto gr = gradient(th);
        double gnorm2 = 0.0;
        for (const auto& v : gr)
            gnorm2 += std::norm(v);
        if (gnorm2 < 1e-28)
            break;
        bool advanced = false;
        while (step > 1e-20) {
            std::vector<cplx> cand(th);
            for (int n = 0; n < N; ++n)
                cand[static_cast<std::size_t>(n)] += step * gr[static_cast<std::size_t>(n)];
            cand = project_feasible(std::move(cand), hss);
            double fv;
            try {
                fv = value(cand);
            } catch (const std::domain_error&) {
                step *= 0.5;
                continue;
            }
            if (fv > cur) {
                th = std::move(cand);
                cur = fv;
                advanced = true;
                break;
            }
            step *= 0.5;
        }
        if (!advanced)
            break;
        step = std::min(step * 4.0, 1e12);
    }
    return th;
}

SolverState optimize_phases(const MultiTagInstance& inst, const SolveOptions& opts)
{
    inst.validate();
    const int K = inst.tags();
    const int N = inst.elements();

    // Local copy: the per-tag receive phase is free, so we rotate each
    // tag's (b_k, a_k) pair to keep the desired term real-positive
    // (Remark-style |.| ~ Re{.} alignment). SINRs are invariant.
    MultiTagInstance work = inst;

    auto true_feasible = [&](const std::vector<cplx>& th) {
        double need = work.sys.activation_w / work.sys.phi;
        for (int k = 0; k < K; ++k)
            if ((1.0 - work.sys.beta) * received_power(work, th, k) < need * (1.0 - 1e-12))
                return false;
        return true;
    };

    // Co-phased initialization from the tag-1 optimal phases.
    std::vector<cplx> theta(static_cast<std::size_t>(N));
    {
        auto a1 = work.a(0);
        double phase_b = std::arg(work.b(0));
        for (int n = 0; n < N; ++n)
            theta[static_cast<std::size_t>(n)] =
                std::polar(1.0, std::arg(a1[static_cast<std::size_t>(n)]) - phase_b);
    }

    SolverState st;
    st.feasible = true;
    bool enforce = opts.enforce_eh && work.sys.activation_w > 0.0;
    if (enforce && !true_feasible(theta)) {
        std::vector<cplx> zero(static_cast<std::size_t>(N), cplx{0.0, 0.0});
        if (true_feasible(zero)) {
            theta = std::move(zero);
        } else {
            st.feasible = false; // reported, then optimized without EH
            enforce = false;
        }
    }

    st.trace.push_back(sum_rate(work, theta));
    for (int outer = 0; outer < opts.max_outer; ++outer) {
        // Per-tag rephasing: rotating u_k rotates b_k and a_k together,
        // leaving every SINR and EH quantity unchanged while making the
        // desired terms real-positive at the current theta.
        for (int k = 0; k < K; ++k) {
            cplx s = work.b(k);
            auto ak = work.a(k);
            for (int n = 0; n < N; ++n)
                s += std::conj(theta[static_cast<std::size_t>(n)]) * ak[static_cast<std::size_t>(n)];
            work.u[static_cast<std::size_t>(k)] *= std::polar(1.0, -std::arg(s));
        }

        st.lambda = optimal_lambda(work, theta);
        theta = solve_theta(work, st.lambda, theta, enforce, opts.max_inner);
        double rate = sum_rate(work, theta);
        st.trace.push_back(rate);
        st.iterations = outer + 1;
        double gain = st.trace[st.trace.size() - 1] - st.trace[st.trace.size() - 2];
        if (gain < opts.rel_tol * std::max(1.0, std::fabs(rate))) {
            st.converged = true;
            break;
        }
    }
    st.theta = std::move(theta);
    return st;
}

} // namespace risbc::multi_tag
