#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "slag/calibration.hpp"
#include "slag/common.hpp"
#include "slag/monge_ampere.hpp"

namespace slag {

using VecC = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;
using MatR = Eigen::MatrixXd;
using MatC = Eigen::MatrixXcd;

// (p, v) with p a unit vector and v tangent at p: a point of T S^n.
struct SphereTangent {
    VecR p;
    VecR v;

    SphereTangent(VecR p_, VecR v_) : p(std::move(p_)), v(std::move(v_)) {
        if (p.size() != v.size())
            throw domain_error("SphereTangent: p and v sizes differ");
        if (std::abs(p.norm() - 1.0) > 1e-12)
            throw domain_error("SphereTangent: base point not unit");
        if (std::abs(p.dot(v)) > 1e-12 * std::max(1.0, v.norm()))
            throw domain_error("SphereTangent: v not tangent at p");
    }
};

// A point of the complex quadric S^n_C(1) = { z : sum z_k^2 = 1 }.
struct QuadricPoint {
    VecC z;

    explicit QuadricPoint(VecC z_) : z(std::move(z_)) {
        cplx s{0.0, 0.0};
        for (int k = 0; k < z.size(); ++k) s += z[k] * z[k];
        if (std::abs(s - 1.0) > 1e-12)
            throw domain_error("QuadricPoint: sum z_k^2 != 1");
    }
};

struct LieGenerator {
    MatR X;

    explicit LieGenerator(MatR X_) : X(std::move(X_)) {
        if ((X + X.transpose()).norm() > 1e-14 * std::max(1.0, X.norm()))
            throw domain_error("LieGenerator: matrix not skew-symmetric");
    }
};

inline double sinh_over_t(double t) {
    if (t < 1e-4) {
        double t2 = t * t;
        return 1.0 + t2 / 6.0 + t2 * t2 / 120.0;
    }
    return std::sinh(t) / t;
}

// iota(Psi_p(v)) = cosh(|v|) p + i (sinh(|v|)/|v|) v
inline QuadricPoint embed(const SphereTangent& t) {
    const double nv = t.v.norm();
    VecC z = std::cosh(nv) * t.p.cast<cplx>() +
             cplx(0.0, 1.0) * sinh_over_t(nv) * t.v.cast<cplx>();
    return QuadricPoint(std::move(z));
}

// |z|^2 - 1, compensated; on the quadric this equals cosh(2|v|) - 1 >= 0.
inline double quadric_w(const VecC& z) {
    std::vector<double> comps;
    comps.reserve(2 * z.size());
    for (int k = 0; k < z.size(); ++k) {
        comps.push_back(z[k].real());
        comps.push_back(z[k].imag());
    }
    return compensated_dot_minus(comps, comps, 1.0);
}

// (arccosh(|z|^2)/2)^2 + 1, extended real-analytically through |z|^2 = 1
// via arccosh(1+w) = 2 asinh(sqrt(w/2)); the branch w < 0 (reached only by
// ambient finite-difference stencil points) continues as -(asin)^2.
inline double quadric_psi1(const VecC& z) {
    const double w = quadric_w(z);
    if (w >= 0.0) {
        double u = std::asinh(std::sqrt(0.5 * w));
        return u * u + 1.0;
    }
    double u = std::asin(std::sqrt(-0.5 * w));
    return 1.0 - u * u;
}

inline SphereTangent unembed(const QuadricPoint& q) {
    const double w = quadric_w(q.z);
    if (w < -1e-12) throw domain_error("unembed: |z|^2 < 1, no real preimage");
    const double wc = std::max(w, 0.0);
    const double nv = std::asinh(std::sqrt(0.5 * wc));  // = arccosh(|z|^2)/2
    const double cosh_nv = std::sqrt(1.0 + 0.5 * wc);
    VecR p = q.z.real() / cosh_nv;
    VecR v = q.z.imag() / sinh_over_t(nv);
    p /= p.norm();  // scrub residual rounding
    v -= p.dot(v) * p;
    return SphereTangent(std::move(p), std::move(v));
}

// G-invariant potential psi_f(z) = f((arccosh(|z|^2)/2)^2 + 1)
inline double potential(const QuadricPoint& q, const ScalarProfile& profile) {
    if (quadric_w(q.z) < -1e-12)
        throw domain_error("potential: point below the quadric shell");
    return profile.f(quadric_psi1(q.z));
}

namespace detail {

// First four derivatives of q(w) = asinh(sqrt(w/2))^2.  Closed forms in
// t = sqrt(q), S = sinh 2t, C = cosh 2t away from w = 0; the alternating
// series near w = 0 where the closed forms cancel.
struct QDerivs {
    double d1, d2, d3, d4;

    explicit QDerivs(double w) {
        if (std::abs(w) < 0.01) {
            d1 = 0.5 +
                 w * (-1.0 / 6.0 +
                      w * (1.0 / 15.0 +
                           w * (-1.0 / 35.0 +
                                w * (4.0 / 315.0 +
                                     w * (-4.0 / 693.0 +
                                          w * (8.0 / 3003.0 -
                                               w * 8.0 / 6435.0))))));
            d2 = -1.0 / 6.0 +
                 w * (2.0 / 15.0 +
                      w * (-3.0 / 35.0 +
                           w * (16.0 / 315.0 +
                                w * (-20.0 / 693.0 +
                                     w * (16.0 / 1001.0 -
                                          w * 56.0 / 6435.0)))));
            d3 = 2.0 / 15.0 +
                 w * (-6.0 / 35.0 +
                      w * (16.0 / 105.0 +
                           w * (-80.0 / 693.0 +
                                w * (80.0 / 1001.0 - w * 112.0 / 2145.0))));
            d4 = -6.0 / 35.0 +
                 w * (32.0 / 105.0 +
                      w * (-80.0 / 231.0 +
                           w * (320.0 / 1001.0 - w * 112.0 / 429.0)));
            return;
        }
        const double t = w >= 0.0 ? std::asinh(std::sqrt(0.5 * w))
                                  : std::asin(std::sqrt(-0.5 * w));
        // for w < 0 the real-analytic continuation has t imaginary; the
        // even/odd structure below keeps everything real
        if (w >= 0.0) {
            const double S = std::sinh(2.0 * t), C = std::cosh(2.0 * t);
            d1 = t / S;
            d2 = (S - 2.0 * t * C) / (2.0 * S * S * S);
            const double S5 = std::pow(S, 5), S7 = std::pow(S, 7);
            d3 = (4.0 * t * S * S + 6.0 * t - 3.0 * C * S) / (2.0 * S5);
            d4 = (-3.0 * t * C * (4.0 * S * S + 10.0) + 11.0 * S * S * S +
                  15.0 * S) /
                 (2.0 * S7);
        } else {
            // t = i u: q = -u^2, S = i sin 2u, C = cos 2u
            const double u = t;
            const double S = std::sin(2.0 * u), C = std::cos(2.0 * u);
            d1 = u / S;
            d2 = -(S - 2.0 * u * C) / (2.0 * S * S * S);
            const double S5 = std::pow(S, 5), S7 = std::pow(S, 7);
            d3 = (-4.0 * u * S * S + 6.0 * u - 3.0 * C * S) / (2.0 * S5);
            d4 = -(-3.0 * u * C * (-4.0 * S * S + 10.0) -
                   11.0 * S * S * S + 15.0 * S) /
                 (2.0 * S7);
        }
    }
};

// psi(z) - psi(base), evaluated through quartic Taylor expansions of q in
// the compensated increment delta w and of f in delta psi1.  Differencing
// raw O(1) potential values at finite-difference steps h ~ 1e-5 leaves
// eps/h^2 ~ 1e-6 of roundoff in second derivatives; this path keeps the
// estimator noise near 1e-10.
class PotentialDiff {
  public:
    PotentialDiff(const ScalarProfile& profile, const VecC& base)
        : w0_(quadric_w(base)), q0_(w0_) {
        base_coords_.reserve(2 * base.size());
        for (int k = 0; k < base.size(); ++k) {
            base_coords_.push_back(base[k].real());
            base_coords_.push_back(base[k].imag());
        }
        const double y0 = quadric_psi1(base);
        const double P = profile.a * std::log(y0) + profile.b;
        if (!(P > 0.0))
            throw domain_error("potential: a log y + b <= 0 at base point");
        const double r = profile.r, a = profile.a;
        const double invr = 1.0 / r;
        f1_ = std::pow(P, invr);
        f2_ = invr * (a / y0) * std::pow(P, invr - 1.0);
        const double u = (invr - 1.0) * a * std::pow(P, invr - 2.0) -
                         std::pow(P, invr - 1.0);
        f3_ = (a / r) * u / (y0 * y0);
        const double up =
            (a / y0) * ((invr - 1.0) * (invr - 2.0) * a * std::pow(P, invr - 3.0) -
                        (invr - 1.0) * std::pow(P, invr - 2.0));
        f4_ = (a / r) * (up / (y0 * y0) - 2.0 * u / (y0 * y0 * y0));
    }

    double operator()(const VecC& z) const {
        std::vector<double> coords;
        coords.reserve(2 * z.size());
        for (int k = 0; k < z.size(); ++k) {
            coords.push_back(z[k].real());
            coords.push_back(z[k].imag());
        }
        // w(z) - w(base) accurate relative to the increment itself; rounding
        // each w to a double first would cap the Hessian at ~1e-7
        const double dw = compensated_squares_diff(coords, base_coords_);
        const double dq =
            dw * (q0_.d1 +
                  dw * (q0_.d2 / 2.0 +
                        dw * (q0_.d3 / 6.0 + dw * q0_.d4 / 24.0)));
        return dq * (f1_ + dq * (f2_ / 2.0 + dq * (f3_ / 6.0 + dq * f4_ / 24.0)));
    }

  private:
    double w0_;
    QDerivs q0_;
    std::vector<double> base_coords_;
    double f1_, f2_, f3_, f4_;
};

}  // namespace detail

namespace detail {

// exactly representable +/- displacements around x (nominally h); using the
// raw h would make the realized steps asymmetric by ~eps*x, which leaks
// first-derivative error of size eps*psi'/h^2 into second differences
struct SnappedStep {
    double plus, minus;
    SnappedStep(double x, double h) {
        volatile double up = x + h;
        plus = up - x;
        volatile double dn = x - h;
        minus = x - dn;
    }
};

}  // namespace detail

// Mixed complex Hessian h_jk = d^2 psi / dz_j dz_bar_k of the ambient
// extension, by central finite differences of step `h` in the 2(n+1) real
// coordinates:
//   h_jk = (psi_{x_j x_k} + psi_{y_j y_k} + i (psi_{x_j y_k} - psi_{y_j x_k}))/4
inline MatC mixed_hessian(const QuadricPoint& q, const ScalarProfile& profile,
                          double h = 1e-5) {
    const int m = static_cast<int>(q.z.size());
    detail::PotentialDiff dpsi(profile, q.z);

    const int dim = 2 * m;
    auto coord = [&](int a) {
        return a < m ? q.z[a].real() : q.z[a - m].imag();
    };
    std::vector<detail::SnappedStep> step;
    step.reserve(dim);
    for (int a = 0; a < dim; ++a) step.emplace_back(coord(a), h);

    auto shifted = [&](int a, double da, int b, double db) {
        VecC z = q.z;
        auto bump = [&](int c, double amt) {
            int k = c % m;
            if (c < m)
                z[k] += amt;
            else
                z[k] += cplx(0.0, amt);
        };
        bump(a, da);
        if (b >= 0) bump(b, db);
        return dpsi(z);
    };

    MatR R(dim, dim);  // real Hessian over (x_0..x_{m-1}, y_0..y_{m-1})
    for (int a = 0; a < dim; ++a) {
        const double hp = step[a].plus, hm_ = step[a].minus;
        // asymmetric 3-point second difference with dpsi(base) = 0
        R(a, a) = 2.0 *
                  (hm_ * shifted(a, hp, -1, 0.0) +
                   hp * shifted(a, -hm_, -1, 0.0)) /
                  (hp * hm_ * (hp + hm_));
        for (int b = a + 1; b < dim; ++b) {
            const double gp = step[b].plus, gm = step[b].minus;
            double v = (shifted(a, hp, b, gp) - shifted(a, hp, b, -gm) -
                        shifted(a, -hm_, b, gp) + shifted(a, -hm_, b, -gm)) /
                       ((hp + hm_) * (gp + gm));
            R(a, b) = v;
            R(b, a) = v;
        }
    }

    MatC hm(m, m);
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
            hm(j, k) = 0.25 * cplx(R(j, k) + R(m + j, m + k),
                                   R(j, m + k) - R(m + j, k));
    return hm;
}

inline void require_tangent(const QuadricPoint& q, const VecC& u,
                            const char* who) {
    cplx s{0.0, 0.0};
    for (int k = 0; k < q.z.size(); ++k) s += q.z[k] * u[k];
    if (std::abs(s) > 1e-10 * std::max(1.0, u.norm()))
        throw domain_error(std::string(who) + ": argument not tangent to the quadric");
}

// omega(u, w) = 2 Im(u^dagger h w); antisymmetric, and omega(u, iu) =
// 2 u^dagger h u > 0 for the convex profiles.
inline double kahler_form(const QuadricPoint& q, const ScalarProfile& profile,
                          const VecC& u, const VecC& w, double h = 1e-5) {
    require_tangent(q, u, "kahler_form");
    require_tangent(q, w, "kahler_form");
    MatC hm = mixed_hessian(q, profile, h);
    cplx s = u.adjoint() * (hm * w);
    return 2.0 * s.imag();
}

inline double kahler_form(const MatC& hm, const VecC& u, const VecC& w) {
    cplx s = u.adjoint() * (hm * w);
    return 2.0 * s.imag();
}

// moment(q)(X) = -Im (dbar psi)(X*_q), X*_q = X z; dbar psi from central
// finite differences of the potential at step `h`.
inline double moment(const QuadricPoint& q, const LieGenerator& gen,
                     const ScalarProfile& profile, double h = 1e-6) {
    const int m = static_cast<int>(q.z.size());
    if (gen.X.rows() != m)
        throw domain_error("moment: generator size mismatch");
    detail::PotentialDiff dpsi(profile, q.z);
    VecC Xz = gen.X.cast<cplx>() * q.z;

    cplx acc{0.0, 0.0};
    for (int k = 0; k < m; ++k) {
        detail::SnappedStep sx(q.z[k].real(), h), sy(q.z[k].imag(), h);
        VecC zp = q.z, zm = q.z;
        zp[k] += sx.plus;
        zm[k] -= sx.minus;
        double px = (dpsi(zp) - dpsi(zm)) / (sx.plus + sx.minus);
        zp = q.z;
        zm = q.z;
        zp[k] += cplx(0.0, sy.plus);
        zm[k] -= cplx(0.0, sy.minus);
        double py = (dpsi(zp) - dpsi(zm)) / (sy.plus + sy.minus);
        cplx psi_zbar = 0.5 * cplx(px, py);
        acc += psi_zbar * std::conj(Xz[k]);
    }
    return -acc.imag();
}

// The factorized moment expression in adapted coordinates,
//   -2 (log(|v|^2 + 1) + b)^{1/r} * (X p).v ,
// written exactly as printed (prefactor without the constant a); shares its
// zero set and sign with the finite-difference moment.
inline double moment_factorized(const QuadricPoint& q, const LieGenerator& gen,
                                const ScalarProfile& profile) {
    SphereTangent t = unembed(q);
    double pref =
        -2.0 * std::pow(std::log(t.v.squaredNorm() + 1.0) + profile.b,
                        1.0 / profile.r);
    return pref * (gen.X * t.p).dot(t.v);
}

// Residue-chart value of the invariant holomorphic n-form: in the chart
// dropping the coordinate k* of largest modulus,
//   Omega(u_1..u_n) = (-1)^{k*} / (2 z_{k*}) * det(retained components),
// rows in increasing index order.  Chart-independent; at z = e_1 with the
// standard real frame the value is +1/2.
inline cplx holomorphic_volume(const QuadricPoint& q,
                               const std::vector<VecC>& frame) {
    const int m = static_cast<int>(q.z.size());
    const int n = m - 1;
    if (static_cast<int>(frame.size()) != n)
        throw domain_error("holomorphic_volume: frame must have n vectors");
    for (const auto& u : frame) require_tangent(q, u, "holomorphic_volume");

    int kstar = 0;
    for (int k = 1; k < m; ++k)
        if (std::abs(q.z[k]) > std::abs(q.z[kstar])) kstar = k;
    if (std::abs(q.z[kstar]) < 1e-6)
        throw error("holomorphic_volume: all coordinates near zero");

    MatC M(n, n);
    int row = 0;
    for (int k = 0; k < m; ++k) {
        if (k == kstar) continue;
        for (int c = 0; c < n; ++c) M(row, c) = frame[c][k];
        ++row;
    }
    double sign = (kstar % 2 == 0) ? 1.0 : -1.0;
    return sign / (2.0 * q.z[kstar]) * M.determinant();
}

// n complex vectors spanning the holomorphic tangent space at z
inline std::vector<VecC> tangent_basis(const QuadricPoint& q) {
    const int m = static_cast<int>(q.z.size());
    int kstar = 0;
    for (int k = 1; k < m; ++k)
        if (std::abs(q.z[k]) > std::abs(q.z[kstar])) kstar = k;
    std::vector<VecC> basis;
    for (int k = 0; k < m; ++k) {
        if (k == kstar) continue;
        VecC u = VecC::Zero(m);
        u[k] = 1.0;
        u[kstar] = -q.z[k] / q.z[kstar];
        basis.push_back(std::move(u));
    }
    return basis;
}

// ratio det(h restricted to a tangent basis) / |Omega(basis)|^2; basis
// independent, and constant over the quadric exactly when the volume-form
// normalization condition holds.
inline double volume_ratio(const QuadricPoint& q, const ScalarProfile& profile,
                           const std::vector<VecC>& basis, double h = 1e-5) {
    const int n = static_cast<int>(basis.size());
    MatC hm = mixed_hessian(q, profile, h);
    MatC Hr(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) Hr(a, b) = basis[a].adjoint() * (hm * basis[b]);
    cplx omega = holomorphic_volume(q, basis);
    return Hr.determinant().real() / std::norm(omega);
}

inline double volume_ratio(const QuadricPoint& q,
                           const ScalarProfile& profile, double h = 1e-5) {
    return volume_ratio(q, profile, tangent_basis(q), h);
}

// --- sphere model: H = SO(p) x SO(n+1-p), section in the (e_1, e_{n+1}) plane

inline MatR rotation_generator(int m, int a, int b) {
    MatR X = MatR::Zero(m, m);
    X(a, b) = 1.0;
    X(b, a) = -1.0;
    return X;
}

// all generators of so(p) + so(n+1-p), block-embedded
inline std::vector<LieGenerator> sphere_h_generators(int n, int p_split) {
    if (p_split < 1 || p_split > n)
        throw domain_error("sphere_h_generators: need 1 <= p <= n");
    const int m = n + 1;
    std::vector<LieGenerator> gens;
    for (int a = 0; a < p_split; ++a)
        for (int b = a + 1; b < p_split; ++b)
            gens.push_back(LieGenerator(rotation_generator(m, a, b)));
    for (int a = p_split; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            gens.push_back(LieGenerator(rotation_generator(m, a, b)));
    return gens;
}

// point of the complexified section: tau = phi + i rho over the geodesic
// p(phi) = cos(phi) e_1 + sin(phi) e_{n+1}
inline SphereTangent sphere_section_point(int n, double phi, double rho) {
    const int m = n + 1;
    VecR p = VecR::Zero(m), t = VecR::Zero(m);
    p[0] = std::cos(phi);
    p[m - 1] = std::sin(phi);
    t[0] = -std::sin(phi);
    t[m - 1] = std::cos(phi);
    return SphereTangent(p, rho * t);
}

struct LagrangianFrame {
    std::vector<VecC> vectors;
    bool rank_ok = true;
    double min_singular_value = 0.0;
};

// Frame of T L_tau at the embedded curve point: the fundamental vectors
// X z of the active H-generators (rotations pairing e_1 with the first
// block, and e_{n+1} with the second block) plus the embedded curve
// tangent.  Near points where a sin/cos factor vanishes some X z degenerate;
// that is reported as rank deficiency, not an error.
inline LagrangianFrame lagrangian_frame(const SphereTangent& curve_point,
                                        int p_split, cplx curve_tangent) {
    const int m = static_cast<int>(curve_point.p.size());
    const int n = m - 1;
    if (p_split < 1 || p_split > n)
        throw domain_error("lagrangian_frame: need 1 <= p_split <= n");
    for (int k = 1; k + 1 < m; ++k)
        if (std::abs(curve_point.p[k]) > 1e-10 ||
            std::abs(curve_point.v[k]) > 1e-10)
            throw domain_error(
                "lagrangian_frame: curve point not on the section");

    const double phi = std::atan2(curve_point.p[m - 1], curve_point.p[0]);
    VecR that = VecR::Zero(m);
    that[0] = -std::sin(phi);
    that[m - 1] = std::cos(phi);
    const double rho = that.dot(curve_point.v);
    const cplx tau(phi, rho);

    VecC z = VecC::Zero(m);
    z[0] = std::cos(tau);
    z[m - 1] = std::sin(tau);

    LagrangianFrame out;
    for (int a = 1; a < p_split; ++a) {
        MatR X = rotation_generator(m, 0, a);
        out.vectors.push_back(X.cast<cplx>() * z);  // = -cos(tau) e_a
    }
    for (int b = p_split; b < n; ++b) {
        MatR X = rotation_generator(m, b, m - 1);
        out.vectors.push_back(X.cast<cplx>() * z);  // = sin(tau) e_b
    }
    VecC tangent = VecC::Zero(m);
    tangent[0] = -std::sin(tau) * curve_tangent;
    tangent[m - 1] = std::cos(tau) * curve_tangent;
    out.vectors.push_back(std::move(tangent));

    // real-linear independence of the n vectors in R^{2m}
    MatR A(2 * m, n);
    for (int c = 0; c < n; ++c)
        for (int k = 0; k < m; ++k) {
            A(k, c) = out.vectors[c][k].real();
            A(m + k, c) = out.vectors[c][k].imag();
        }
    Eigen::JacobiSVD<MatR> svd(A);
    out.min_singular_value = svd.singularValues().tail(1)(0);
    out.rank_ok =
        out.min_singular_value > 1e-8 * std::max(1.0, svd.singularValues()(0));
    return out;
}

// matrix exponential of a (small-norm after scaling) matrix, for applying
// group elements exp(tX) in invariance checks
inline MatR expm(const MatR& X) {
    int squarings = 0;
    MatR A = X;
    while (A.norm() > 0.5) {
        A *= 0.5;
        ++squarings;
    }
    MatR term = MatR::Identity(A.rows(), A.cols());
    MatR sum = term;
    for (int k = 1; k <= 18; ++k) {
        term = term * A / static_cast<double>(k);
        sum += term;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

// --- embedded-curve verification ------------------------------------------------

struct QuadricCurveReport {
    double max_omega_defect = 0.0;
    double phase_drift_rad = 0.0;
    double moment_max_on_level = 0.0;
    int samples = 0;
    double mean_phase = 0.0;  // circular mean of arg Omega(frame)
    bool any_rank_deficient = false;

    nlohmann::json to_json() const {
        return nlohmann::json{{"max_omega_defect", max_omega_defect},
                              {"phase_drift_rad", phase_drift_rad},
                              {"moment_max_on_level", moment_max_on_level},
                              {"samples", samples},
                              {"mean_phase", mean_phase},
                              {"any_rank_deficient", any_rank_deficient}};
    }
};

inline double angle_diff(double a, double b) {
    return reduce_angle(a - b);
}

// Walks a traced rank-one profile curve through the embedding, builds the
// Lagrangian frame at every stride-th sample and accumulates the omega
// defect, the holomorphic-volume phase drift and the moment-map residual.
inline QuadricCurveReport verify_embedded_curve(int n, int p_split,
                                                const ScalarProfile& profile,
                                                const AxisCurve& curve,
                                                size_t stride = 1,
                                                double fd_step = 1e-5) {
    curve.check();
    auto gens = sphere_h_generators(n, p_split);
    QuadricCurveReport rep;
    double phase0 = 0.0;
    bool have_phase0 = false;
    cplx phase_acc{0.0, 0.0};

    for (size_t i = 0; i < curve.size(); i += stride) {
        const cplx tau = curve.tau[i];
        SphereTangent pt = sphere_section_point(n, tau.real(), tau.imag());
        QuadricPoint q = embed(pt);
        LagrangianFrame fr =
            lagrangian_frame(pt, p_split, curve.tau_prime[i]);
        if (!fr.rank_ok) {
            rep.any_rank_deficient = true;
            continue;
        }

        MatC hm = mixed_hessian(q, profile, fd_step);
        for (size_t a = 0; a < fr.vectors.size(); ++a)
            for (size_t b = a + 1; b < fr.vectors.size(); ++b)
                rep.max_omega_defect =
                    std::max(rep.max_omega_defect,
                             std::abs(kahler_form(hm, fr.vectors[a],
                                                  fr.vectors[b])));

        cplx om = holomorphic_volume(q, fr.vectors);
        double ph = std::arg(om);
        if (!have_phase0) {
            phase0 = ph;
            have_phase0 = true;
        }
        rep.phase_drift_rad = std::max(
            rep.phase_drift_rad, std::abs(angle_diff(ph, phase0)));
        phase_acc += std::polar(1.0, ph);

        for (const auto& g : gens)
            rep.moment_max_on_level = std::max(
                rep.moment_max_on_level, std::abs(moment(q, g, profile)));
        rep.samples += 1;
    }
    rep.mean_phase = std::arg(phase_acc);
    return rep;
}

}  // namespace slag
