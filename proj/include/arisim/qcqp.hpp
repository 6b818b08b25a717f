// SPDX-License-Identifier: Apache-2.0
//
// arisim - active RIS link-level simulator
//
// Convex QCQP kernels for the two subproblem shapes that appear in the
// joint design:
//
//   solve_ball_quadratic  maximize Re{lin^H x} - x^H Q x subject to one
//                         ball constraint, per-index convex quadratic
//                         upper bounds, and affine (minorant) lower
//                         bounds. Log-barrier interior point on the
//                         realified problem, with a phase-I feasibility
//                         stage when the start is not strictly interior.
//
//   solve_disk_quadratic  maximize Re{lin^H x} - x^H Q x subject to
//                         per-coordinate disk constraints |x_l|^2 <= r_l^2.
//                         Exact cyclic coordinate ascent: each coordinate
//                         has a closed-form optimum, clipped to its disk.
//
// Both solvers are deterministic given (inputs, x0) and report a KKT
// residual (stationarity + complementary slackness) measured on the
// internally normalized problem.

#ifndef ARISIM_QCQP_HPP
#define ARISIM_QCQP_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace arisim::qcqp {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

/// maximize Re{lin^H x} - x^H quad x, quad Hermitian PSD.
struct QuadraticObjective {
    CVec lin;
    CMat quad;
};

/// Affine minorant of a convex quadratic form: value(x) = 2 Re{g^H x} + offset.
struct AffineMinorant {
    CVec g;
    double offset = 0.0;

    double value(const CVec& x) const { return 2.0 * g.dot(x).real() + offset; }
};

/// First-order minorant of x^H G x at the anchor x_t:
///   l(x) = 2 Re{x_t^H G x} - x_t^H G x_t,
/// tight at x_t and a global lower bound for PSD G.
inline AffineMinorant mm_linearize(const CMat& g_mat, const CVec& anchor) {
    if (g_mat.rows() != g_mat.cols() || g_mat.rows() != anchor.size())
        throw std::invalid_argument("mm_linearize: dimension mismatch");
    AffineMinorant m;
    m.g = g_mat * anchor;
    m.offset = -anchor.dot(m.g).real(); // -x_t^H G x_t
    return m;
}

/// Constraint set for solve_ball_quadratic. All constraints are convex:
///   ||x||^2 <= ball_radius2
///   x^H G x <= bound            for each (G, bound) in quad_upper
///   minorant.value(x) >= bound  for each entry in affine_lower
struct ConstraintSet {
    std::optional<double> ball_radius2;
    std::vector<std::pair<CMat, double>> quad_upper;
    struct AffineLower {
        AffineMinorant minorant;
        double bound = 0.0;
    };
    std::vector<AffineLower> affine_lower;
};

enum class SolveStatus { converged, max_iter, infeasible };

struct SolveResult {
    CVec x;
    SolveStatus status = SolveStatus::converged;
    int iterations = 0;       // Newton steps or coordinate sweeps
    double kkt_residual = 0.0;
    double objective = 0.0;   // Re{lin^H x} - x^H quad x at the returned point
};

namespace detail {

// ---- complex <-> stacked real/imaginary ----

inline RVec realify(const CVec& x) {
    RVec z(2 * x.size());
    z.head(x.size()) = x.real();
    z.tail(x.size()) = x.imag();
    return z;
}

inline CVec complexify(const RVec& z) {
    const Eigen::Index n = z.size() / 2;
    CVec x(n);
    x.real() = z.head(n);
    x.imag() = z.tail(n);
    return x;
}

/// For Hermitian G, x^H G x = z^T Gt z with z = [Re x; Im x] and
/// Gt = [[Re G, -Im G], [Im G, Re G]] (symmetric).
inline RMat realify_hermitian(const CMat& g) {
    const Eigen::Index n = g.rows();
    RMat gt(2 * n, 2 * n);
    gt.topLeftCorner(n, n) = g.real();
    gt.bottomRightCorner(n, n) = g.real();
    gt.topRightCorner(n, n) = -g.imag();
    gt.bottomLeftCorner(n, n) = g.imag();
    return gt;
}

inline void require_hermitian_psd(const CMat& q, double herm_tol, double psd_tol,
                                  const char* who) {
    const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
    if ((q - q.adjoint()).cwiseAbs().maxCoeff() > herm_tol * scale)
        throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMat> es(q, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -psd_tol * std::max(1.0, es.eigenvalues().maxCoeff()))
        throw std::invalid_argument(std::string(who) + ": matrix is not PSD");
}

// ---- barrier machinery over real quadratic constraints ----

/// h(x) = x^T A x + b^T x + c <= 0; A empty means affine.
struct RealConstraint {
    RMat a;
    RVec b;
    double c = 0.0;

    double value(const RVec& x) const {
        double v = b.dot(x) + c;
        if (a.size() > 0) v += x.dot(a * x);
        return v;
    }
    RVec grad(const RVec& x) const {
        RVec g = b;
        if (a.size() > 0) g += 2.0 * (a * x);
        return g;
    }
};

struct BarrierProblem {
    RMat p;  // objective: x^T P x + q^T x (minimize); p may be 0-size for linear
    RVec q;
    std::vector<RealConstraint> cons;

    double objective(const RVec& x) const {
        double v = q.dot(x);
        if (p.size() > 0) v += x.dot(p * x);
        return v;
    }
    bool strictly_feasible(const RVec& x, double margin) const {
        for (const auto& h : cons)
            if (h.value(x) > -margin) return false;
        return true;
    }
    double max_violation(const RVec& x) const {
        double v = -std::numeric_limits<double>::infinity();
        for (const auto& h : cons) v = std::max(v, h.value(x));
        return v;
    }
};

struct CenterResult {
    bool converged = false;
    int newton_iters = 0;
};

/// Damped Newton minimization of t*F(x) + sum -log(-h_j(x)) from a strictly
/// feasible start. `x` is updated in place.
inline CenterResult newton_center(const BarrierProblem& bp, RVec& x, double t,
                                  int max_newton, double dec_tol) {
    const Eigen::Index n = x.size();
    CenterResult res;
    std::vector<double> d(bp.cons.size());

    for (int it = 0; it < max_newton; ++it) {
        RVec grad = t * bp.q;
        if (bp.p.size() > 0) grad += t * 2.0 * (bp.p * x);
        RMat hess = RMat::Zero(n, n);
        if (bp.p.size() > 0) hess += t * 2.0 * bp.p;

        for (std::size_t j = 0; j < bp.cons.size(); ++j) {
            d[j] = -bp.cons[j].value(x);
            if (d[j] <= 0.0) return res; // left the domain; should not happen
            const RVec gj = bp.cons[j].grad(x);
            grad += gj / d[j];
            hess += (gj * gj.transpose()) / (d[j] * d[j]);
            if (bp.cons[j].a.size() > 0) hess += (2.0 / d[j]) * bp.cons[j].a;
        }

        double ridge = 1e-13 * (1.0 + hess.trace() / static_cast<double>(n));
        RVec step;
        for (int attempt = 0; attempt < 4; ++attempt) {
            RMat hr = hess + ridge * RMat::Identity(n, n);
            Eigen::LDLT<RMat> ldlt(hr);
            step = ldlt.solve(-grad);
            if (ldlt.info() == Eigen::Success && step.allFinite()) break;
            ridge *= 1e3;
        }
        if (!step.allFinite()) return res;

        const double dec = -grad.dot(step); // Newton decrement^2
        ++res.newton_iters;
        if (dec / 2.0 < dec_tol) {
            res.converged = true;
            return res;
        }

        // backtrack into the domain, then Armijo
        auto phi = [&](const RVec& y) {
            double v = t * bp.objective(y);
            for (const auto& h : bp.cons) {
                const double hv = h.value(y);
                if (hv >= 0.0) return std::numeric_limits<double>::infinity();
                v -= std::log(-hv);
            }
            return v;
        };
        const double phi0 = phi(x);
        double alpha = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
            const RVec cand = x + alpha * step;
            const double phic = phi(cand);
            if (phic < phi0 - 1e-4 * alpha * dec) {
                x = cand;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) {
            res.converged = true; // no descent possible at line-search resolution
            return res;
        }
    }
    return res;
}

struct BarrierOutcome {
    bool converged = false;
    int newton_total = 0;
    double t_final = 1.0;
};

/// Standard barrier path following: center, multiply t, repeat until
/// m/t <= gap_tol. Early-exit hook lets phase I stop as soon as a strictly
/// feasible point of the original constraints is found.
template <typename EarlyExit>
BarrierOutcome barrier_minimize(const BarrierProblem& bp, RVec& x, int max_newton_total,
                                double gap_tol, EarlyExit early_exit) {
    BarrierOutcome out;
    const double m = static_cast<double>(bp.cons.size());
    double t = 1.0;
    while (out.newton_total < max_newton_total) {
        const int budget = std::min(200, max_newton_total - out.newton_total);
        const CenterResult c = newton_center(bp, x, t, budget, 1e-13);
        out.newton_total += c.newton_iters;
        out.t_final = t;
        if (early_exit(x)) {
            out.converged = true;
            return out;
        }
        if (!c.converged && c.newton_iters >= budget) return out;
        if (m / t <= gap_tol) {
            out.converged = c.converged;
            return out;
        }
        t *= 20.0;
    }
    return out;
}

} // namespace detail

/// KKT residual (stationarity + complementary slackness + dual feasibility)
/// for the ball-shape problem at a candidate point with multipliers implied
/// by the barrier. Exposed for solver verification.
struct KktTerms {
    double stationarity = 0.0;
    double complementarity = 0.0;
    double total() const { return stationarity + complementarity; }
};

/// Convex QCQP:  maximize Re{lin^H x} - x^H quad x  over `cons`.
///
/// Internally realifies and normalizes (variables by the ball radius,
/// constraints by their bounds, objective by its magnitude), runs a
/// phase-I feasibility stage when x0 is not strictly interior, then a
/// log-barrier path. Infeasible sets are reported via status, not thrown.
inline SolveResult solve_ball_quadratic(const QuadraticObjective& obj,
                                        const ConstraintSet& cons, const CVec& x0,
                                        double tol = 1e-7, int max_iter = 5000) {
    using namespace detail;
    const Eigen::Index nc = x0.size();
    if (obj.lin.size() != nc || obj.quad.rows() != nc || obj.quad.cols() != nc)
        throw std::invalid_argument("solve_ball_quadratic: dimension mismatch");
    require_hermitian_psd(obj.quad, 1e-12, 1e-8, "solve_ball_quadratic");

    const Eigen::Index n = 2 * nc;
    const double feas_tol = std::max(1e-8, tol);

    // variable scale from the ball radius when present
    const double sx = cons.ball_radius2 ? std::sqrt(*cons.ball_radius2) : 1.0;
    if (cons.ball_radius2 && !(*cons.ball_radius2 > 0.0))
        throw std::invalid_argument("solve_ball_quadratic: ball radius must be > 0");

    // normalized real constraints, each O(1) at its bound
    BarrierProblem bp;
    if (cons.ball_radius2) {
        RealConstraint h;
        h.a = RMat::Identity(n, n);
        h.b = RVec::Zero(n);
        h.c = -1.0;
        bp.cons.push_back(std::move(h));
    }
    for (const auto& [g_mat, bound] : cons.quad_upper) {
        if (g_mat.rows() != nc || g_mat.cols() != nc)
            throw std::invalid_argument("solve_ball_quadratic: constraint dimension mismatch");
        const double scale = std::max(std::abs(bound), 1e-300);
        RealConstraint h;
        h.a = realify_hermitian(g_mat) * (sx * sx / scale);
        h.b = RVec::Zero(n);
        h.c = -bound / scale;
        bp.cons.push_back(std::move(h));
    }
    for (const auto& al : cons.affine_lower) {
        if (al.minorant.g.size() != nc)
            throw std::invalid_argument("solve_ball_quadratic: affine dimension mismatch");
        // bound - offset - 2 Re{g^H x} <= 0
        const double rhs = al.bound - al.minorant.offset;
        RVec gt = realify(al.minorant.g);
        const double scale = std::max({std::abs(rhs), 2.0 * gt.norm() * sx, 1e-300});
        RealConstraint h;
        h.b = (-2.0 * sx / scale) * gt;
        h.c = rhs / scale;
        bp.cons.push_back(std::move(h));
    }

    // normalized objective (minimize)
    const RVec lin_r = realify(obj.lin);
    const RMat quad_r = realify_hermitian(obj.quad);
    const double f_scale =
        std::max({lin_r.norm() * sx, quad_r.cwiseAbs().maxCoeff() * sx * sx, 1e-300});
    bp.p = quad_r * (sx * sx / f_scale);
    bp.q = (-sx / f_scale) * lin_r;

    SolveResult res;
    res.x = CVec::Zero(nc);
    RVec z = realify(x0) / sx;
    int newton_used = 0;

    // phase I when the start is not strictly interior
    const double interior_margin = 1e-9;
    if (!bp.strictly_feasible(z, interior_margin)) {
        BarrierProblem ph1;
        ph1.q = RVec::Zero(n + 1);
        ph1.q(n) = 1.0; // minimize s
        for (const auto& h : bp.cons) {
            RealConstraint he;
            if (h.a.size() > 0) {
                he.a = RMat::Zero(n + 1, n + 1);
                he.a.topLeftCorner(n, n) = h.a;
            }
            he.b = RVec::Zero(n + 1);
            he.b.head(n) = h.b;
            he.b(n) = -1.0;
            he.c = h.c;
            ph1.cons.push_back(std::move(he));
        }
        { // keep s bounded below so phase I stays well posed
            RealConstraint floor;
            floor.b = RVec::Zero(n + 1);
            floor.b(n) = -1.0;
            floor.c = -10.0;
            ph1.cons.push_back(std::move(floor));
        }

        RVec ze(n + 1);
        ze.head(n) = z;
        ze(n) = std::max(0.0, bp.max_violation(z)) + 1.0;

        auto found_interior = [&](const RVec& y) {
            return bp.strictly_feasible(y.head(n), interior_margin);
        };
        const BarrierOutcome ph = barrier_minimize(ph1, ze, max_iter, 1e-10, found_interior);
        newton_used += ph.newton_total;

        if (!found_interior(ze)) {
            const double viol = bp.max_violation(ze.head(n));
            if (viol > feas_tol) {
                res.status = SolveStatus::infeasible;
                res.iterations = newton_used;
                res.x = complexify(ze.head(n)) * sx;
                return res;
            }
            // weakly feasible: open the set by a tolerated relaxation
            const double open_by = std::max(viol, 0.0) + 2.0 * interior_margin;
            for (auto& h : bp.cons) h.c -= open_by;
        }
        z = ze.head(n);
    }

    auto never = [](const RVec&) { return false; };
    const BarrierOutcome ph2 =
        barrier_minimize(bp, z, std::max(1, max_iter - newton_used), 1e-10, never);
    newton_used += ph2.newton_total;

    // KKT residual on the normalized problem. Multipliers for the
    // near-active constraints are fitted by nonnegative least squares
    // (clipped normal equations); inactive constraints get zero.
    {
        RVec grad_f = bp.q;
        if (bp.p.size() > 0) grad_f += 2.0 * (bp.p * z);

        std::vector<int> active;
        std::vector<double> slack(bp.cons.size());
        for (std::size_t j = 0; j < bp.cons.size(); ++j) {
            slack[j] = -bp.cons[j].value(z);
            if (slack[j] < 1e-6) active.push_back(static_cast<int>(j));
        }

        RVec u = RVec::Zero(static_cast<Eigen::Index>(active.size()));
        if (!active.empty()) {
            RMat nmat(n, static_cast<Eigen::Index>(active.size()));
            for (std::size_t a = 0; a < active.size(); ++a)
                nmat.col(static_cast<Eigen::Index>(a)) =
                    bp.cons[static_cast<std::size_t>(active[a])].grad(z);
            u = (nmat.transpose() * nmat +
                 1e-12 * RMat::Identity(nmat.cols(), nmat.cols()))
                    .ldlt()
                    .solve(-nmat.transpose() * grad_f);
            u = u.cwiseMax(0.0);
            grad_f += nmat * u;
        }
        double comp2 = 0.0;
        for (std::size_t a = 0; a < active.size(); ++a) {
            const double us = u(static_cast<Eigen::Index>(a)) *
                              slack[static_cast<std::size_t>(active[a])];
            comp2 += us * us;
        }
        res.kkt_residual = grad_f.norm() + std::sqrt(comp2);
    }

    res.x = complexify(z) * sx;
    res.iterations = newton_used;
    res.status = ph2.converged ? SolveStatus::converged : SolveStatus::max_iter;
    res.objective = obj.lin.dot(res.x).real() - res.x.dot(obj.quad * res.x).real();
    return res;
}

/// Separable-constraint concave QP:
///   maximize Re{lin^H x} - x^H quad x  s.t.  |x_l|^2 <= radii2_l.
///
/// Cyclic coordinate ascent with the closed-form per-coordinate optimum
/// projected onto its disk (magnitude rescaled, phase kept). Monotone in
/// the objective; stops when a sweep improves less than `tol` (relative)
/// and the KKT residual is resolved.
inline SolveResult solve_disk_quadratic(const QuadraticObjective& obj, const RVec& radii2,
                                        const CVec& x0, double tol = 1e-7,
                                        int max_iter = 5000) {
    using namespace detail;
    const Eigen::Index nl = radii2.size();
    if (obj.lin.size() != nl || obj.quad.rows() != nl || obj.quad.cols() != nl ||
        x0.size() != nl)
        throw std::invalid_argument("solve_disk_quadratic: dimension mismatch");
    if ((radii2.array() < 0.0).any())
        throw std::invalid_argument("solve_disk_quadratic: negative disk radius");
    require_hermitian_psd(obj.quad, 1e-12, 1e-8, "solve_disk_quadratic");

    const double s_obj = std::max(
        {obj.lin.cwiseAbs().maxCoeff(), obj.quad.cwiseAbs().maxCoeff(), 1e-300});

    // start from x0 projected onto the disks
    CVec x = x0;
    for (Eigen::Index l = 0; l < nl; ++l) {
        const double r = std::sqrt(radii2(l));
        const double m = std::abs(x(l));
        if (m > r) x(l) *= (r / m);
        if (r == 0.0) x(l) = 0.0;
    }

    CVec qx = obj.quad * x;
    auto objective = [&]() { return obj.lin.dot(x).real() - x.dot(qx).real(); };

    auto kkt_residual = [&]() {
        // gradient of the objective wrt conj(x), times 2: lin - 2 Q x
        const CVec grad = obj.lin - 2.0 * qx;
        double worst = 0.0;
        for (Eigen::Index l = 0; l < nl; ++l) {
            if (radii2(l) == 0.0) continue;
            const double r2 = radii2(l);
            const double m2 = std::norm(x(l));
            double rl;
            if (m2 < r2 * (1.0 - 1e-12)) {
                rl = std::abs(grad(l)); // interior: gradient must vanish
            } else {
                const double u = std::real(std::conj(x(l)) * grad(l)) / (2.0 * r2);
                rl = std::abs(grad(l) - 2.0 * u * x(l)) + std::max(0.0, -u) * std::sqrt(r2);
            }
            worst = std::max(worst, rl);
        }
        return worst / s_obj;
    };

    SolveResult res;
    double f_prev = objective();
    const double kkt_tol = 1e-7;
    int sweep = 0;
    for (; sweep < max_iter; ++sweep) {
        for (Eigen::Index l = 0; l < nl; ++l) {
            if (radii2(l) == 0.0) continue;
            const double qll = obj.quad(l, l).real();
            // c_l = lin_l - 2 sum_{m != l} Q_lm x_m
            const std::complex<double> c =
                obj.lin(l) - 2.0 * (qx(l) - obj.quad(l, l) * x(l));
            std::complex<double> xl_new;
            const double r = std::sqrt(radii2(l));
            if (qll > 1e-300) {
                xl_new = c / (2.0 * qll);
                const double m = std::abs(xl_new);
                if (m > r) xl_new *= (r / m);
            } else {
                const double cm = std::abs(c);
                xl_new = (cm > 0.0) ? (c / cm) * r : std::complex<double>(0.0, 0.0);
            }
            const std::complex<double> delta = xl_new - x(l);
            if (delta != std::complex<double>(0.0, 0.0)) {
                qx += obj.quad.col(l) * delta;
                x(l) = xl_new;
            }
        }
        const double f = objective();
        const double improvement = f - f_prev;
        f_prev = f;
        if (improvement < tol * (1.0 + std::abs(f))) {
            if (kkt_residual() <= kkt_tol) break;
            if (improvement <= 0.0 && sweep > 2) break; // stalled at resolution
        }
    }

    res.x = x;
    res.iterations = sweep;
    res.kkt_residual = kkt_residual();
    res.status = (sweep < max_iter) ? SolveStatus::converged : SolveStatus::max_iter;
    res.objective = f_prev;
    return res;
}

} // namespace arisim::qcqp

#endif // ARISIM_QCQP_HPP
