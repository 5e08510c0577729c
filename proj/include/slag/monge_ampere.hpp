#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "slag/common.hpp"

namespace slag {

namespace quad {

// Gauss-Kronrod 7-15 panel; returns the K15 value and the |K15-G7| gap.
inline std::pair<double, double> gk15(
    const std::function<double(double)>& f, double lo, double hi) {
    static const double xk[8] = {
        0.991455371120812639206854697526, 0.949107912342758524526189684048,
        0.864864423359769072789712788641, 0.741531185599394439863864773281,
        0.586087235467691130294144838259, 0.405845151377397166906606412077,
        0.207784955007898467600689403773, 0.0};
    static const double wk[8] = {
        0.022935322010529224963732008058, 0.063092092629978553290700663189,
        0.104790010322250183839876322542, 0.140653259715525918745189590510,
        0.169004726639267902826583426599, 0.190350578064785409913256402421,
        0.204432940075298892414161999234, 0.209482141084727828012999174891};
    static const double wg[4] = {
        0.129484966168869693270611432679, 0.279705391489276667901467771424,
        0.381830050505118944950369775489, 0.417959183673469387755102040816};
    const double c = 0.5 * (lo + hi), hl = 0.5 * (hi - lo);
    double k15 = wk[7] * f(c);
    double g7 = wg[3] * f(c);
    for (int i = 0; i < 7; ++i) {
        double fa = f(c - hl * xk[i]);
        double fb = f(c + hl * xk[i]);
        k15 += wk[i] * (fa + fb);
        if (i % 2 == 1) g7 += wg[i / 2] * (fa + fb);
    }
    return {k15 * hl, std::abs(k15 - g7) * std::abs(hl)};
}

inline double adaptive(const std::function<double(double)>& f, double lo,
                       double hi, double abs_tol, int depth = 0) {
    auto [val, err] = gk15(f, lo, hi);
    if (err <= abs_tol || depth >= 30) return val;
    double mid = 0.5 * (lo + hi);
    return adaptive(f, lo, mid, 0.5 * abs_tol, depth + 1) +
           adaptive(f, mid, hi, 0.5 * abs_tol, depth + 1);
}

}  // namespace quad

// Radial profile f(y) = int_1^y (a log s + b)^{1/r} ds + c0 with closed-form
// derivatives f'(y) = (a log y + b)^{1/r} and
// f''(y) = (a/(r y)) (a log y + b)^{1/r - 1}.  Convex increasing on y >= 1;
// usable slightly below 1 as long as a log y + b > 0.
struct ScalarProfile {
    double a = 1.0;
    double b = 1.0;
    double c0 = 1.0;
    int r = 1;

    ScalarProfile() = default;
    ScalarProfile(double a_, double b_, double c0_, int r_)
        : a(a_), b(b_), c0(c0_), r(r_) {
        if (!(a > 0.0) || !(b > 0.0) || !(c0 > 0.0) || r < 1)
            throw domain_error("ScalarProfile: a, b, c0 must be > 0, r >= 1");
    }

    double fprime(double y) const {
        double base = a * std::log(y) + b;
        if (!(base > 0.0))
            throw domain_error("ScalarProfile: a log y + b <= 0");
        return std::pow(base, 1.0 / r);
    }

    double fsecond(double y) const {
        double base = a * std::log(y) + b;
        if (!(base > 0.0))
            throw domain_error("ScalarProfile: a log y + b <= 0");
        return (a / (r * y)) * std::pow(base, 1.0 / r - 1.0);
    }

    double f(double y) const { return c0 + segment(1.0, y); }

    // int_{y0}^{y1} f' ds; exact cancellation of the constant part, used by
    // the quadric module to difference the potential without forming f
    // values of size O(1).
    double segment(double y0, double y1) const {
        if (y0 == y1) return 0.0;
        return quad::adaptive([this](double s) { return fprime(s); }, y0, y1,
                              1e-12);
    }
};

// w-invariant generators rho_k: R^r -> R.  The first generator
// rho_1(x) = |x|^2 + 1 is built in with analytic derivatives; user
// extensions fall back to central differences at fd_step unless they carry
// their own derivatives.
struct Generator {
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<double(const Eigen::VectorXd&, int)> grad;          // optional
    std::function<double(const Eigen::VectorXd&, int, int)> hess;     // optional
};

class GeneratorSet {
  public:
    explicit GeneratorSet(int r, double fd_step = 1e-5)
        : r_(r), fd_step_(fd_step) {
        Generator rho1;
        rho1.value = [](const Eigen::VectorXd& x) {
            return x.squaredNorm() + 1.0;
        };
        rho1.grad = [](const Eigen::VectorXd& x, int i) { return 2.0 * x[i]; };
        rho1.hess = [](const Eigen::VectorXd&, int i, int j) {
            return i == j ? 2.0 : 0.0;
        };
        gens_.push_back(std::move(rho1));
    }

    void add(Generator g) { gens_.push_back(std::move(g)); }
    int count() const { return static_cast<int>(gens_.size()); }
    int dim() const { return r_; }

    double value(int k, const Eigen::VectorXd& x) const {
        return gens_[k].value(x);
    }

    double d1(int k, const Eigen::VectorXd& x, int i) const {
        if (gens_[k].grad) return gens_[k].grad(x, i);
        Eigen::VectorXd xp = x, xm = x;
        xp[i] += fd_step_;
        xm[i] -= fd_step_;
        return (gens_[k].value(xp) - gens_[k].value(xm)) / (2.0 * fd_step_);
    }

    double d2(int k, const Eigen::VectorXd& x, int i, int j) const {
        if (gens_[k].hess) return gens_[k].hess(x, i, j);
        const double h = fd_step_;
        if (i == j) {
            Eigen::VectorXd xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            return (gens_[k].value(xp) - 2.0 * gens_[k].value(x) +
                    gens_[k].value(xm)) /
                   (h * h);
        }
        Eigen::VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
        xpp[i] += h;
        xpp[j] += h;
        xpm[i] += h;
        xpm[j] -= h;
        xmp[i] -= h;
        xmp[j] += h;
        xmm[i] -= h;
        xmm[j] -= h;
        return (gens_[k].value(xpp) - gens_[k].value(xpm) -
                gens_[k].value(xmp) + gens_[k].value(xmm)) /
               (4.0 * h * h);
    }

  private:
    int r_;
    double fd_step_;
    std::vector<Generator> gens_;
};

// Potential in several invariants, f: R^l -> R; derivatives analytic when
// provided, else central differences at fd_step.
struct MultiProfile {
    int arity = 1;
    std::function<double(const Eigen::VectorXd&)> f;
    std::function<double(const Eigen::VectorXd&, int)> grad;       // optional
    std::function<double(const Eigen::VectorXd&, int, int)> hess;  // optional
    double fd_step = 1e-5;

    double d1(const Eigen::VectorXd& y, int k) const {
        if (grad) return grad(y, k);
        Eigen::VectorXd yp = y, ym = y;
        yp[k] += fd_step;
        ym[k] -= fd_step;
        return (f(yp) - f(ym)) / (2.0 * fd_step);
    }
    double d2(const Eigen::VectorXd& y, int k, int kh) const {
        if (hess) return hess(y, k, kh);
        const double h = fd_step;
        if (k == kh) {
            Eigen::VectorXd yp = y, ym = y;
            yp[k] += h;
            ym[k] -= h;
            return (f(yp) - 2.0 * f(y) + f(ym)) / (h * h);
        }
        Eigen::VectorXd ypp = y, ypm = y, ymp = y, ymm = y;
        ypp[k] += h;
        ypp[kh] += h;
        ypm[k] += h;
        ypm[kh] -= h;
        ymp[k] -= h;
        ymp[kh] += h;
        ymm[k] -= h;
        ymm[kh] -= h;
        return (f(ypp) - f(ypm) - f(ymp) + f(ymm)) / (4.0 * h * h);
    }
};

// Matrix with entries 2 x_i x_j f''(rho1(x)) + f'(rho1(x)) delta_ij,
// rho1(x) = |x|^2 + 1: the determinand of the single-invariant
// Monge-Ampere expression.
template <typename Profile>
Eigen::MatrixXd hessian_matrix(const Profile& profile,
                               const Eigen::VectorXd& x) {
    const double y = x.squaredNorm() + 1.0;
    const double fp = profile.fprime(y);
    const double fpp = profile.fsecond(y);
    Eigen::MatrixXd H = 2.0 * fpp * (x * x.transpose());
    H.diagonal().array() += fp;
    return H;
}

struct DetReport {
    bool assert_A_eq_B = true;   // det vs matrix-determinant-lemma, 1e-10 rel
    bool assert_C_eq_D = true;   // 2 f'' f'^{r-1} rho1 vs 2a/r, 1e-12 rel
    double max_rel_A_vs_B = 0.0;
    double max_rel_C_vs_D = 0.0;
    double max_dev_A_vs_C = 0.0;  // absolute deviations, recorded not asserted
    double mean_dev_A_vs_C = 0.0;
    double max_dev_A_vs_D = 0.0;
    double mean_dev_A_vs_D = 0.0;
    std::vector<Eigen::VectorXd> grid;

    nlohmann::json to_json() const {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& x : grid) {
            std::vector<double> v(x.data(), x.data() + x.size());
            pts.push_back(v);
        }
        return nlohmann::json{
            {"assert_A_eq_B", assert_A_eq_B},
            {"assert_C_eq_D", assert_C_eq_D},
            {"max_rel_A_vs_B", max_rel_A_vs_B},
            {"max_rel_C_vs_D", max_rel_C_vs_D},
            {"dev_A_vs_C",
             {{"max", max_dev_A_vs_C}, {"mean", mean_dev_A_vs_C}}},
            {"dev_A_vs_D",
             {{"max", max_dev_A_vs_D}, {"mean", mean_dev_A_vs_D}}},
            {"grid", pts}};
    }
};

// For each grid point computes
//   A: det of hessian_matrix (exact small-r determinant),
//   B: the matrix determinant lemma value f'^{r-1} (f' + 2 f'' |x|^2),
//   C: the claimed value 2 f'' f'^{r-1} rho1,
//   D: the constant 2a/r.
// A == B is unconditional linear algebra and asserted at 1e-10 relative;
// C == D is the closed-form chain d/dy (f')^r = a/y and asserted at 1e-12
// relative.  A vs C and A vs D differ in general; their deviation
// statistics are recorded without assertion.
inline DetReport det_report(const ScalarProfile& profile,
                            const std::vector<Eigen::VectorXd>& grid) {
    if (grid.empty()) throw domain_error("det_report: empty grid");
    DetReport rep;
    rep.grid = grid;
    double sum_ac = 0.0, sum_ad = 0.0;
    for (const auto& x : grid) {
        const double y = x.squaredNorm() + 1.0;
        const double fp = profile.fprime(y);
        const double fpp = profile.fsecond(y);
        const double A = hessian_matrix(profile, x).determinant();
        const double B =
            std::pow(fp, profile.r - 1) * (fp + 2.0 * fpp * x.squaredNorm());
        const double C = 2.0 * fpp * std::pow(fp, profile.r - 1) * y;
        const double D = 2.0 * profile.a / profile.r;

        double rel_ab = std::abs(A - B) / std::max(std::abs(A), std::abs(B));
        double rel_cd = std::abs(C - D) / std::max(std::abs(C), std::abs(D));
        rep.max_rel_A_vs_B = std::max(rep.max_rel_A_vs_B, rel_ab);
        rep.max_rel_C_vs_D = std::max(rep.max_rel_C_vs_D, rel_cd);
        if (rel_ab > 1e-10) rep.assert_A_eq_B = false;
        if (rel_cd > 1e-12) rep.assert_C_eq_D = false;

        rep.max_dev_A_vs_C = std::max(rep.max_dev_A_vs_C, std::abs(A - C));
        rep.max_dev_A_vs_D = std::max(rep.max_dev_A_vs_D, std::abs(A - D));
        sum_ac += std::abs(A - C);
        sum_ad += std::abs(A - D);
    }
    rep.mean_dev_A_vs_C = sum_ac / grid.size();
    rep.mean_dev_A_vs_D = sum_ad / grid.size();
    return rep;
}

// Assembles the general Monge-Ampere determinand
//   sum_k sum_kh (d2f/dy_kh dy_k)(rho(x)) drho_kh/dx_i drho_k/dx_j
//   + sum_k (df/dy_k)(rho(x)) d2rho_k/dx_i dx_j
// and returns its determinant.
inline double generic_ma_det(const GeneratorSet& gens,
                             const MultiProfile& f_multi,
                             const Eigen::VectorXd& x) {
    const int l = gens.count();
    if (l != f_multi.arity)
        throw domain_error("generic_ma_det: generator count " +
                           std::to_string(l) + " does not match f arity " +
                           std::to_string(f_multi.arity));
    const int r = static_cast<int>(x.size());
    Eigen::VectorXd y(l);
    for (int k = 0; k < l; ++k) y[k] = gens.value(k, x);

    Eigen::MatrixXd grad_rho(l, r);   // grad_rho(k, i) = drho_k/dx_i
    for (int k = 0; k < l; ++k)
        for (int i = 0; i < r; ++i) grad_rho(k, i) = gens.d1(k, x, i);

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(r, r);
    for (int k = 0; k < l; ++k) {
        for (int kh = 0; kh < l; ++kh) {
            double fkk = f_multi.d2(y, kh, k);
            if (fkk == 0.0) continue;
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j)
                    M(i, j) += fkk * grad_rho(kh, i) * grad_rho(k, j);
        }
        double fk = f_multi.d1(y, k);
        if (fk != 0.0)
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j)
                    M(i, j) += fk * gens.d2(k, x, i, j);
    }
    return M.determinant();
}

}  // namespace slag
