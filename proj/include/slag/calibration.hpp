#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "slag/common.hpp"
#include "slag/expsum.hpp"
#include "slag/registry.hpp"

namespace slag {

// An action together with a calibration phase theta (stored reduced to
// (-pi, pi]).
struct CalibrationSpec {
    HermannAction action;
    double theta = 0.0;

    CalibrationSpec() = default;
    CalibrationSpec(HermannAction a, double th)
        : action(std::move(a)), theta(reduce_angle(th)) {}
};

// F = e^{i theta} * prod_{m_v>0} sin^{m_v}(beta.tau)
//                 * prod_{m_h>0} cos^{m_h}(beta.tau)
// as a canonical exponential sum.  Roots carrying both multiplicities
// contribute both factors.
inline ExpPoly build_integrand(const CalibrationSpec& spec) {
    const auto& a = spec.action;
    ExpPoly F = ExpPoly::constant(a.frame, std::polar(1.0, spec.theta));
    for (const auto& rd : a.roots) {
        if (rd.m_v > 0)
            F = mul(F, from_trig_power(a.frame, TrigKind::sin, rd.lattice,
                                       rd.m_v));
        if (rd.m_h > 0)
            F = mul(F, from_trig_power(a.frame, TrigKind::cos, rd.lattice,
                                       rd.m_h));
    }
    return F;
}

// Direct product-of-factors evaluation, used as the independent oracle for
// the expanded integrand.
inline cplx integrand_direct(const CalibrationSpec& spec,
                             const std::vector<cplx>& tau) {
    const auto& a = spec.action;
    cplx F = std::polar(1.0, spec.theta);
    for (const auto& rd : a.roots) {
        auto lam = a.frame.frequency(rd.lattice);
        cplx arg{0.0, 0.0};
        for (int j = 0; j < a.rank; ++j) arg += lam[j] * tau[j];
        if (rd.m_v > 0) F *= std::pow(std::sin(arg), rd.m_v);
        if (rd.m_h > 0) F *= std::pow(std::cos(arg), rd.m_h);
    }
    return F;
}

// Fhat = iterated antiderivative of F over axes 1..r.  Since F is an
// exponential sum the result is order-independent; the canonical order is
// axis 1 first.
inline ExpPoly build_primitive(const CalibrationSpec& spec) {
    ExpPoly P = build_integrand(spec);
    for (int j = 0; j < spec.action.rank; ++j) P = P.antiderivative(j);
    return P;
}

struct Residual {
    double raw = 0.0;         // Im(F(tau) * prod tau_i')
    double normalized = 0.0;  // |raw| / (|F| * prod |tau_i'| + eps)
};

inline Residual residual(const ExpPoly& F, const std::vector<cplx>& tau,
                         const std::vector<cplx>& tau_prime) {
    cplx f = F.eval(tau);
    cplx prod{1.0, 0.0};
    double abs_prod = 1.0;
    for (const auto& tp : tau_prime) {
        prod *= tp;
        abs_prod *= std::abs(tp);
    }
    Residual r;
    r.raw = (f * prod).imag();
    r.normalized = std::abs(r.raw) / (std::abs(f) * abs_prod + 1e-300);
    return r;
}

inline Residual residual(const CalibrationSpec& spec,
                         const std::vector<cplx>& tau,
                         const std::vector<cplx>& tau_prime) {
    if (static_cast<int>(tau.size()) != spec.action.rank ||
        static_cast<int>(tau_prime.size()) != spec.action.rank)
        throw domain_error("residual: vector length does not match rank");
    return residual(build_integrand(spec), tau, tau_prime);
}

// One parameter axis of a profile curve: samples of s, tau(s) and tau'(s).
struct AxisCurve {
    std::vector<double> s;
    std::vector<cplx> tau;
    std::vector<cplx> tau_prime;

    size_t size() const { return s.size(); }

    void check() const {
        if (s.size() < 2 || tau.size() != s.size() ||
            tau_prime.size() != s.size())
            throw domain_error("axis curve arrays malformed");
        for (size_t i = 1; i < s.size(); ++i)
            if (!(s[i] > s[i - 1]))
                throw domain_error("curve parameter not strictly increasing");
    }

    // uniform spacing, validated
    double spacing() const {
        check();
        double h = s[1] - s[0];
        for (size_t i = 1; i + 1 < s.size(); ++i)
            if (std::abs((s[i + 1] - s[i]) - h) > 1e-12 * std::max(1.0, h))
                throw domain_error("curve samples are not uniformly spaced");
        return h;
    }

    // max deviation of the stored tau' from the 2nd-order central difference
    double derivative_defect() const {
        double h = spacing();
        double worst = 0.0;
        for (size_t i = 1; i + 1 < s.size(); ++i) {
            cplx fd = (tau[i + 1] - tau[i - 1]) / (2.0 * h);
            worst = std::max(worst, std::abs(fd - tau_prime[i]));
        }
        return worst;
    }
};

struct ProfileCurve {
    std::vector<AxisCurve> axes;  // one per rank component
    std::string action_name;
    double theta = 0.0;
    std::vector<cplx> seed;
    double step = 0.0;
    double level = 0.0;  // Im Fhat at the seed

    int rank() const { return static_cast<int>(axes.size()); }

    void check() const {
        if (axes.empty()) throw domain_error("profile curve has no axes");
        for (const auto& ax : axes) ax.check();
    }
};

// Compares the mixed derivative of s -> Fhat(tau_1(s_1),...,tau_r(s_r)),
// taken by 4th-order finite differences over all axes, against
// F(tau) * prod tau_i' at interior sample points.  Returns the max relative
// error.
inline double mixed_partial_check(const CalibrationSpec& spec,
                                  const ProfileCurve& curves, double h) {
    curves.check();
    const int r = spec.action.rank;
    if (curves.rank() != r)
        throw domain_error("mixed_partial_check: curve rank mismatch");
    if (!(h > 0.0)) throw domain_error("mixed_partial_check: h must be > 0");
    for (const auto& ax : curves.axes) {
        if (ax.size() < 5)
            throw domain_error("mixed_partial_check: curve shorter than stencil");
        if (std::abs(ax.spacing() - h) > 1e-9)
            throw domain_error(
                "mixed_partial_check: curve spacing does not match h");
    }

    ExpPoly F = build_integrand(spec);
    ExpPoly Fhat = build_primitive(spec);

    // 5-point 4th-order weights at offsets -2..2
    const double w[5] = {1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0,
                         -1.0 / 12.0};

    double worst = 0.0;
    std::vector<size_t> idx(r, 2);

    // iterate over the interior tensor grid (idx[j] in [2, n_j - 3])
    bool done = false;
    while (!done) {
        // finite-difference mixed derivative: tensor product of the per-axis
        // stencils applied to Fhat along the curve
        std::vector<int> off(r, -2);
        cplx fd{0.0, 0.0};
        while (true) {
            double weight = 1.0;
            std::vector<cplx> tau(r);
            for (int j = 0; j < r; ++j) {
                weight *= w[off[j] + 2] / h;
                tau[j] = curves.axes[j].tau[idx[j] + off[j]];
            }
            if (weight != 0.0) fd += weight * Fhat.eval(tau);
            int j = 0;
            for (; j < r; ++j) {
                if (off[j] < 2) {
                    ++off[j];
                    break;
                }
                off[j] = -2;
            }
            if (j == r) break;
        }

        std::vector<cplx> tau(r);
        cplx rhs{1.0, 0.0};
        for (int j = 0; j < r; ++j) {
            tau[j] = curves.axes[j].tau[idx[j]];
            rhs *= curves.axes[j].tau_prime[idx[j]];
        }
        rhs *= F.eval(tau);
        double denom = std::abs(rhs) + 1e-300;
        worst = std::max(worst, std::abs(fd - rhs) / denom);

        int j = 0;
        for (; j < r; ++j) {
            if (idx[j] + 3 < curves.axes[j].size()) {
                ++idx[j];
                break;
            }
            idx[j] = 2;
        }
        done = (j == r);
    }
    return worst;
}

}  // namespace slag
