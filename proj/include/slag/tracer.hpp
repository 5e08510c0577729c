#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "slag/calibration.hpp"
#include "slag/common.hpp"

namespace slag {

struct TraceOptions {
    double step = 1e-3;
    int max_steps = 2000;
    double correction_tol = 1e-12;  // Newton projection threshold on Im Fhat;
                                    // set to +inf to disable projection
    double stop_speed = 1e-9;       // halt when |F| falls below this
    bool normalize = true;          // trace with unit-speed field conj(F)/|F|

    void check() const {
        if (!(step > 0.0)) throw domain_error("trace: step must be > 0");
        if (!(correction_tol > 0.0))
            throw domain_error("trace: correction_tol must be > 0");
        if (stop_speed < 0.0)
            throw domain_error("trace: stop_speed must be >= 0");
        if (max_steps < 1) throw domain_error("trace: max_steps must be >= 1");
    }
};

struct VerifyReport {
    double max_raw_residual = 0.0;
    double max_normalized_residual = 0.0;
    double level_drift = 0.0;  // max |Im Fhat(tau(s)) - Im Fhat(tau(0))|
    int singular_hits = 0;     // samples with |F| < stop_speed
};

// Integrates tau' = conj(F(tau)) (optionally normalized to unit speed) with
// classical RK4.  For holomorphic Fhat with Fhat' = F the gradient of
// Im Fhat in (phi, rho) is (Im F, Re F), so Im(F * conj(F)) = 0 makes
// Im Fhat an exact invariant of the flow in continuous time; the traced
// trajectory is the level curve of Im Fhat through the seed and satisfies
// the calibration condition Im(F tau') = 0 by construction.  After each
// step one Newton projection tau -= i*(Im Fhat - L0)/F pulls the sample
// back onto the seed level when the offset exceeds correction_tol.
inline ProfileCurve trace_level_curve(const CalibrationSpec& spec, cplx seed,
                                      const TraceOptions& opts) {
    if (spec.action.rank != 1)
        throw domain_error("trace_level_curve: action rank must be 1");
    opts.check();

    ExpPoly F = build_integrand(spec);
    ExpPoly Fhat = build_primitive(spec);

    auto field = [&](cplx tau) -> cplx {
        cplx f = std::conj(F.eval(tau));
        if (opts.normalize) {
            double m = std::abs(f);
            if (m > 0.0) f /= m;
        }
        return f;
    };

    if (std::abs(F.eval(seed)) <= opts.stop_speed)
        throw domain_error("trace_level_curve: seed is a singular point");

    const double L0 = Fhat.eval(seed).imag();
    const double h = opts.step;

    ProfileCurve out;
    out.action_name = spec.action.name;
    out.theta = spec.theta;
    out.seed = {seed};
    out.step = h;
    out.level = L0;
    out.axes.resize(1);
    AxisCurve& ax = out.axes[0];

    cplx tau = seed;
    double s = 0.0;
    ax.s.push_back(s);
    ax.tau.push_back(tau);
    ax.tau_prime.push_back(field(tau));

    for (int k = 0; k < opts.max_steps; ++k) {
        cplx k1 = field(tau);
        cplx k2 = field(tau + 0.5 * h * k1);
        cplx k3 = field(tau + 0.5 * h * k2);
        cplx k4 = field(tau + h * k3);
        cplx next = tau + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        cplx f_next = F.eval(next);
        if (std::abs(f_next) <= opts.stop_speed) break;  // singular orbit ahead

        double offset = Fhat.eval(next).imag() - L0;
        if (std::abs(offset) > opts.correction_tol)
            next -= cplx(0.0, 1.0) * offset / f_next;

        if (std::abs(F.eval(next)) <= opts.stop_speed) break;

        tau = next;
        s += h;
        ax.s.push_back(s);
        ax.tau.push_back(tau);
        ax.tau_prime.push_back(field(tau));
    }
    if (ax.size() < 2)
        throw domain_error(
            "trace_level_curve: hit a singular point before the first step");
    return out;
}

// Evaluates the calibration residual at every sample (rank 2: on the tensor
// grid of the per-axis samples), the level drift of Im Fhat, and singular
// hits.
inline VerifyReport verify_curve(const CalibrationSpec& spec,
                                 const ProfileCurve& curves,
                                 double stop_speed = 1e-9) {
    curves.check();
    const int r = spec.action.rank;
    if (curves.rank() != r)
        throw domain_error("verify_curve: curve rank does not match action");

    ExpPoly F = build_integrand(spec);
    ExpPoly Fhat = build_primitive(spec);

    VerifyReport rep;
    std::vector<size_t> idx(r, 0);
    bool first = true;
    double level0 = 0.0;
    bool done = false;
    while (!done) {
        std::vector<cplx> tau(r), tp(r);
        for (int j = 0; j < r; ++j) {
            tau[j] = curves.axes[j].tau[idx[j]];
            tp[j] = curves.axes[j].tau_prime[idx[j]];
        }
        Residual res = residual(F, tau, tp);
        rep.max_raw_residual = std::max(rep.max_raw_residual, std::abs(res.raw));
        rep.max_normalized_residual =
            std::max(rep.max_normalized_residual, res.normalized);
        double level = Fhat.eval(tau).imag();
        if (first) {
            level0 = level;
            first = false;
        }
        rep.level_drift = std::max(rep.level_drift, std::abs(level - level0));
        if (std::abs(F.eval(tau)) < stop_speed) rep.singular_hits += 1;

        int j = 0;
        for (; j < r; ++j) {
            if (idx[j] + 1 < curves.axes[j].size()) {
                ++idx[j];
                break;
            }
            idx[j] = 0;
        }
        done = (j == r);
    }
    return rep;
}

struct SeedWindow {
    double phi_min = 0.0, phi_max = 0.0;
    double rho_min = 0.0, rho_max = 0.0;
};

// Samples Im Fhat - L on a grid over the (phi, rho) window and refines every
// sign change along a grid edge by bisection to |Im Fhat - L| <= 1e-10.
// Points with |F| <= stop_speed are excluded.
inline std::vector<cplx> scan_seeds(const CalibrationSpec& spec,
                                    const SeedWindow& window, int nx, int ny,
                                    double level = 0.0,
                                    double stop_speed = 1e-9) {
    if (spec.action.rank != 1)
        throw domain_error("scan_seeds: action rank must be 1");
    if (nx < 2 || ny < 2) throw domain_error("scan_seeds: grid must be >= 2x2");
    if (!(window.phi_max > window.phi_min) ||
        !(window.rho_max > window.rho_min))
        throw domain_error("scan_seeds: empty window");

    ExpPoly F = build_integrand(spec);
    ExpPoly Fhat = build_primitive(spec);
    auto g = [&](double phi, double rho) {
        return Fhat.eval(cplx(phi, rho)).imag() - level;
    };

    const double dphi = (window.phi_max - window.phi_min) / (nx - 1);
    const double drho = (window.rho_max - window.rho_min) / (ny - 1);
    std::vector<std::vector<double>> val(nx, std::vector<double>(ny));
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            val[i][j] = g(window.phi_min + i * dphi, window.rho_min + j * drho);

    auto bisect = [&](double pa, double ra, double pb, double rb,
                      double ga) -> cplx {
        for (int it = 0; it < 200; ++it) {
            double pm = 0.5 * (pa + pb), rm = 0.5 * (ra + rb);
            double gm = g(pm, rm);
            if (std::abs(gm) <= 1e-10) return cplx(pm, rm);
            if ((gm < 0.0) == (ga < 0.0)) {
                pa = pm;
                ra = rm;
                ga = gm;
            } else {
                pb = pm;
                rb = rm;
            }
        }
        return cplx(0.5 * (pa + pb), 0.5 * (ra + rb));
    };

    std::vector<cplx> seeds;
    auto consider = [&](double pa, double ra, double pb, double rb, double ga,
                        double gb) {
        if (ga == 0.0) {
            if (std::abs(F.eval(cplx(pa, ra))) > stop_speed)
                seeds.push_back(cplx(pa, ra));
            return;
        }
        if ((ga < 0.0) != (gb < 0.0)) {
            cplx z = bisect(pa, ra, pb, rb, ga);
            if (std::abs(Fhat.eval(z).imag() - level) <= 1e-10 &&
                std::abs(F.eval(z)) > stop_speed)
                seeds.push_back(z);
        }
    };
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            double p = window.phi_min + i * dphi;
            double r0 = window.rho_min + j * drho;
            if (i + 1 < nx)
                consider(p, r0, p + dphi, r0, val[i][j], val[i + 1][j]);
            if (j + 1 < ny)
                consider(p, r0, p, r0 + drho, val[i][j], val[i][j + 1]);
        }
    return seeds;
}

// --- Curve CSV ----------------------------------------------------------------

inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// header: axis,s,phi,rho,dphi,drho,abs_F,im_Fhat ; one row per sample.
// abs_F and im_Fhat are per-sample scalars only in rank one; rank-2 axes
// write nan there.
inline void write_curve_csv(std::ostream& os, const CalibrationSpec& spec,
                            const ProfileCurve& curves) {
    curves.check();
    ExpPoly F = build_integrand(spec);
    ExpPoly Fhat = build_primitive(spec);
    const bool scalar = curves.rank() == 1;
    os << "axis,s,phi,rho,dphi,drho,abs_F,im_Fhat\n";
    for (int a = 0; a < curves.rank(); ++a) {
        const AxisCurve& ax = curves.axes[a];
        for (size_t i = 0; i < ax.size(); ++i) {
            double absF = std::numeric_limits<double>::quiet_NaN();
            double imFh = std::numeric_limits<double>::quiet_NaN();
            if (scalar) {
                absF = std::abs(F.eval(ax.tau[i]));
                imFh = Fhat.eval(ax.tau[i]).imag();
            }
            os << (a + 1) << ',' << format_g17(ax.s[i]) << ','
               << format_g17(ax.tau[i].real()) << ','
               << format_g17(ax.tau[i].imag()) << ','
               << format_g17(ax.tau_prime[i].real()) << ','
               << format_g17(ax.tau_prime[i].imag()) << ','
               << format_g17(absF) << ',' << format_g17(imFh) << '\n';
        }
    }
}

inline ProfileCurve read_curve_csv(std::istream& is) {
    ProfileCurve out;
    std::string line;
    if (!std::getline(is, line))
        throw parse_error("curve csv: empty file");
    if (line.rfind("axis,", 0) != 0)
        throw parse_error("curve csv: missing header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        std::vector<double> v;
        while (std::getline(ls, field, ',')) v.push_back(std::stod(field));
        if (v.size() != 8) throw parse_error("curve csv: malformed row");
        int axis = static_cast<int>(v[0]);
        if (axis < 1 || axis > 4) throw parse_error("curve csv: bad axis");
        if (static_cast<int>(out.axes.size()) < axis) out.axes.resize(axis);
        AxisCurve& ax = out.axes[axis - 1];
        ax.s.push_back(v[1]);
        ax.tau.push_back(cplx(v[2], v[3]));
        ax.tau_prime.push_back(cplx(v[4], v[5]));
    }
    out.check();
    return out;
}

}  // namespace slag
