#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "slag/monge_ampere.hpp"

using namespace slag;
using Catch::Approx;

namespace {

struct QuadraticTestProfile {  // f(y) = y^2/2, so f' = y, f'' = 1
    double fprime(double y) const { return y; }
    double fsecond(double) const { return 1.0; }
};

std::vector<Eigen::VectorXd> random_grid(int r, int count, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::vector<Eigen::VectorXd> grid;
    for (int i = 0; i < count; ++i) {
        Eigen::VectorXd x(r);
        for (int j = 0; j < r; ++j) x[j] = u(rng);
        grid.push_back(std::move(x));
    }
    return grid;
}

}  // namespace

TEST_CASE("profile closed forms: (f')^r = a log y + b exactly") {
    for (int r : {1, 2, 3}) {
        ScalarProfile p(2.0, 1.3, 1.0, r);
        for (double y : {1.0, 1.5, 2.0, 5.0, 20.0}) {
            double lhs = std::pow(p.fprime(y), r);
            double rhs = 2.0 * std::log(y) + 1.3;
            CHECK(std::abs(lhs - rhs) <= 1e-14 * rhs);
        }
        CHECK(p.fprime(1.0) == Approx(std::pow(1.3, 1.0 / r)));
    }
    CHECK_THROWS_AS(ScalarProfile(-1.0, 1.0, 1.0, 1), domain_error);
}

TEST_CASE("quadrature f matches f' under numeric differentiation") {
    ScalarProfile p(1.0, 1.0, 1.0, 2);
    const double h = 1e-5;
    for (double y : {1.2, 1.7, 2.5, 4.0, 9.0}) {
        double fd = (p.f(y + h) - p.f(y - h)) / (2.0 * h);
        CHECK(std::abs(fd - p.fprime(y)) <= 1e-8 * p.fprime(y));
    }
    // f is convex increasing: f' > 0 and f'' > 0 on the domain
    for (double y : {1.0, 3.0, 10.0}) {
        CHECK(p.fprime(y) > 0.0);
        CHECK(p.fsecond(y) > 0.0);
    }
}

TEST_CASE("hessian_matrix: arithmetic and structure") {
    // r=1 with the test function f = y^2/2 at x=1: [2*1*1*1 + f'(2)] = [4]
    QuadraticTestProfile q;
    Eigen::VectorXd x1(1);
    x1 << 1.0;
    Eigen::MatrixXd H1 = hessian_matrix(q, x1);
    CHECK(H1(0, 0) == Approx(4.0));

    // x = 0: matrix is f'(1) I = b^{1/r} I
    ScalarProfile p(2.0, 1.7, 1.0, 2);
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(2);
    Eigen::MatrixXd H0 = hessian_matrix(p, x0);
    CHECK(H0(0, 0) == Approx(std::pow(1.7, 0.5)));
    CHECK(H0(0, 1) == Approx(0.0).margin(1e-16));
    CHECK(H0(1, 1) == Approx(std::pow(1.7, 0.5)));

    // r=3: symmetric, eigenvalues {f' (x2), f' + 2 f'' |x|^2}
    ScalarProfile p3(2.0, 1.0, 1.0, 3);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int it = 0; it < 10; ++it) {
        Eigen::VectorXd x(3);
        x << u(rng), u(rng), u(rng);
        Eigen::MatrixXd H = hessian_matrix(p3, x);
        CHECK((H - H.transpose()).norm() <= 1e-14);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        double y = x.squaredNorm() + 1.0;
        double fp = p3.fprime(y), fpp = p3.fsecond(y);
        auto ev = es.eigenvalues();
        CHECK(ev[0] == Approx(fp).epsilon(1e-10));
        CHECK(ev[1] == Approx(fp).epsilon(1e-10));
        CHECK(ev[2] == Approx(fp + 2.0 * fpp * x.squaredNorm()).epsilon(1e-10));
        CHECK(ev[0] > 0.0);  // positive definite
    }
}

TEST_CASE("det_report: unconditional identities and recorded deviations") {
    // C = 2a/r at every grid point, a=3, r=2 -> 3
    {
        ScalarProfile p(3.0, 1.0, 1.0, 2);
        auto rep = det_report(p, random_grid(2, 64, 7));
        CHECK(rep.assert_A_eq_B);
        CHECK(rep.assert_C_eq_D);
        CHECK(rep.max_rel_C_vs_D <= 1e-12);
    }
    // A = B via the matrix determinant lemma for r in {1,2,3}
    for (int r : {1, 2, 3}) {
        ScalarProfile p(1.4, 0.9, 1.0, r);
        auto rep = det_report(p, random_grid(r, 100, 17 + r));
        CHECK(rep.assert_A_eq_B);
        CHECK(rep.max_rel_A_vs_B <= 1e-10);
    }
    // r=1, a=b=1, x=0: A = f'(1) = 1, C = 2 f''(1) rho1 = 2, |A-C| = 1
    {
        ScalarProfile p(1.0, 1.0, 1.0, 1);
        std::vector<Eigen::VectorXd> grid{Eigen::VectorXd::Zero(1)};
        auto rep = det_report(p, grid);
        CHECK(rep.max_dev_A_vs_C == Approx(1.0));
        CHECK(rep.assert_A_eq_B);
        CHECK(rep.assert_C_eq_D);
    }
    CHECK_THROWS_AS(det_report(ScalarProfile(1, 1, 1, 1), {}), domain_error);
}

TEST_CASE("det_report JSON shape") {
    ScalarProfile p(3.0, 1.0, 1.0, 2);
    auto rep = det_report(p, random_grid(2, 4, 5));
    auto j = rep.to_json();
    CHECK(j.at("assert_A_eq_B").get<bool>());
    CHECK(j.at("assert_C_eq_D").get<bool>());
    CHECK(j.at("dev_A_vs_C").contains("max"));
    CHECK(j.at("dev_A_vs_D").contains("mean"));
    CHECK(j.at("grid").size() == 4);
}

TEST_CASE("generic_ma_det: single generator reduces to 2^r det(hessian)") {
    for (int r : {1, 2, 3}) {
        ScalarProfile p(2.0, 1.0, 1.0, r);
        GeneratorSet gens(r);
        MultiProfile f;
        f.arity = 1;
        f.f = [&p](const Eigen::VectorXd& y) { return p.f(y[0]); };
        f.grad = [&p](const Eigen::VectorXd& y, int) { return p.fprime(y[0]); };
        f.hess = [&p](const Eigen::VectorXd& y, int, int) {
            return p.fsecond(y[0]);
        };
        auto grid = random_grid(r, 20, 23 + r);
        for (const auto& x : grid) {
            double g = generic_ma_det(gens, f, x);
            double h = hessian_matrix(p, x).determinant();
            CHECK(g == Approx(std::pow(2.0, r) * h).epsilon(1e-10));
        }
    }
}

TEST_CASE("generic_ma_det: constant potential gives zero determinant") {
    GeneratorSet gens(2);
    MultiProfile f;
    f.arity = 1;
    f.f = [](const Eigen::VectorXd&) { return 3.0; };
    Eigen::VectorXd x(2);
    x << 0.4, -0.2;
    CHECK(generic_ma_det(gens, f, x) == Approx(0.0).margin(1e-10));
}

TEST_CASE("generic_ma_det: FD generator agrees with the analytic assembly") {
    // second generator rho_2 = x_1^4 + x_2^4, potential f = y_1^2 + y_1 y_2
    GeneratorSet fd_gens(2, 1e-5);
    Generator rho2_fd;
    rho2_fd.value = [](const Eigen::VectorXd& x) {
        return std::pow(x[0], 4) + std::pow(x[1], 4);
    };
    fd_gens.add(rho2_fd);

    GeneratorSet exact_gens(2);
    Generator rho2;
    rho2.value = rho2_fd.value;
    rho2.grad = [](const Eigen::VectorXd& x, int i) {
        return 4.0 * std::pow(x[i], 3);
    };
    rho2.hess = [](const Eigen::VectorXd& x, int i, int j) {
        return i == j ? 12.0 * x[i] * x[i] : 0.0;
    };
    exact_gens.add(rho2);

    MultiProfile f;
    f.arity = 2;
    f.f = [](const Eigen::VectorXd& y) { return y[0] * y[0] + y[0] * y[1]; };
    f.grad = [](const Eigen::VectorXd& y, int k) {
        return k == 0 ? 2.0 * y[0] + y[1] : y[0];
    };
    f.hess = [](const Eigen::VectorXd&, int k, int kh) {
        return (k == 0 && kh == 0) ? 2.0 : ((k != kh) ? 1.0 : 0.0);
    };

    for (const auto& x : random_grid(2, 10, 99)) {
        double with_fd = generic_ma_det(fd_gens, f, x);
        double analytic = generic_ma_det(exact_gens, f, x);
        CHECK(with_fd == Approx(analytic).epsilon(1e-6).margin(1e-6));
    }

    MultiProfile wrong;
    wrong.arity = 3;
    wrong.f = [](const Eigen::VectorXd&) { return 0.0; };
    CHECK_THROWS_AS(generic_ma_det(exact_gens, wrong, Eigen::VectorXd::Zero(2)),
                    domain_error);
}
