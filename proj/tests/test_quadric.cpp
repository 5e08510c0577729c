#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "slag/quadric.hpp"
#include "slag/tracer.hpp"

using namespace slag;
using Catch::Approx;

namespace {

std::mt19937_64& rng() {
    static std::mt19937_64 r(777);
    return r;
}

VecR random_unit(int m) {
    std::normal_distribution<double> g(0.0, 1.0);
    VecR p(m);
    for (int k = 0; k < m; ++k) p[k] = g(rng());
    return p / p.norm();
}

SphereTangent random_tangent(int m, double vmax = 1.0) {
    VecR p = random_unit(m);
    VecR v(m);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int k = 0; k < m; ++k) v[k] = g(rng());
    v -= p.dot(v) * p;
    std::uniform_real_distribution<double> u(0.05, vmax);
    v = v / v.norm() * u(rng());
    return SphereTangent(p, v);
}

MatR random_rotation(int m) {
    std::normal_distribution<double> g(0.0, 1.0);
    MatR X(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) X(i, j) = g(rng());
    MatR skew = 0.5 * (X - X.transpose());
    return expm(skew);
}

cplx quadric_sum(const VecC& z) {
    cplx s{0, 0};
    for (int k = 0; k < z.size(); ++k) s += z[k] * z[k];
    return s;
}

VecC random_tangent_vector(const QuadricPoint& q) {
    std::normal_distribution<double> g(0.0, 1.0);
    const int m = static_cast<int>(q.z.size());
    VecC u(m);
    for (int k = 0; k < m; ++k) u[k] = cplx(g(rng()), g(rng()));
    // project out the complex normal direction
    cplx zu = quadric_sum(q.z + u) - quadric_sum(q.z);  // approx 2 z.u
    zu = 0.0;
    for (int k = 0; k < m; ++k) zu += q.z[k] * u[k];
    cplx zz{0, 0};
    for (int k = 0; k < m; ++k) zz += q.z[k] * q.z[k];
    for (int k = 0; k < m; ++k) u[k] -= zu / zz * q.z[k];
    return u;
}

}  // namespace

TEST_CASE("embed: exact cases and membership") {
    VecR p(3);
    p << 1.0, 0.0, 0.0;
    QuadricPoint q0 = embed(SphereTangent(p, VecR::Zero(3)));
    CHECK((q0.z.real() - p).norm() <= 1e-15);
    CHECK(q0.z.imag().norm() <= 1e-15);

    VecR v(3);
    v << 0.0, 0.7, 0.0;
    QuadricPoint q1 = embed(SphereTangent(p, v));
    CHECK(q1.z[0] == cplx(std::cosh(0.7), 0.0));
    CHECK(std::abs(q1.z[1] - cplx(0.0, std::sinh(0.7))) <= 1e-15);
    CHECK(std::abs(quadric_sum(q1.z) - 1.0) <= 1e-12);

    for (int i = 0; i < 50; ++i) {
        QuadricPoint q = embed(random_tangent(4));
        CHECK(std::abs(quadric_sum(q.z) - 1.0) <= 1e-12);
    }
}

TEST_CASE("unembed: inverse of embed to 1e-10, domain errors") {
    VecR p(3);
    p << 1.0, 0.0, 0.0;
    VecC z(3);
    z << cplx(std::cosh(1.0), 0.0), cplx(0.0, std::sinh(1.0)), cplx(0.0, 0.0);
    SphereTangent t = unembed(QuadricPoint(z));
    CHECK((t.p - p).norm() <= 1e-12);
    CHECK(std::abs(t.v[1] - 1.0) <= 1e-12);

    // real points have v = 0
    SphereTangent t0 = unembed(QuadricPoint(p.cast<cplx>()));
    CHECK(t0.v.norm() <= 1e-12);

    for (int n : {2, 3}) {
        for (int i = 0; i < 50; ++i) {
            SphereTangent in = random_tangent(n + 1);
            SphereTangent out = unembed(embed(in));
            CHECK((in.p - out.p).norm() <= 1e-10);
            CHECK((in.v - out.v).norm() <= 1e-10);
        }
    }
}

TEST_CASE("psi_1 consistency: (arccosh(|z|^2)/2)^2 + 1 = |v|^2 + 1") {
    for (int i = 0; i < 100; ++i) {
        SphereTangent t = random_tangent(3);
        QuadricPoint q = embed(t);
        double lhs = quadric_psi1(q.z);
        double rhs = t.v.squaredNorm() + 1.0;
        CHECK(std::abs(lhs - rhs) <= 1e-10 * rhs);
    }
}

TEST_CASE("membership is preserved by the orthogonal action") {
    for (int i = 0; i < 25; ++i) {
        QuadricPoint q = embed(random_tangent(3));
        MatR R = random_rotation(3);
        VecC moved = R.cast<cplx>() * q.z;
        CHECK(std::abs(quadric_sum(moved) - 1.0) <= 1e-10);
    }
}

TEST_CASE("potential: section values and rotation invariance") {
    ScalarProfile profile(1.0, 1.0, 1.0, 1);
    VecR p(3);
    p << 0.0, 1.0, 0.0;
    CHECK(potential(embed(SphereTangent(p, VecR::Zero(3))), profile) ==
          Approx(1.0));  // f(1) = c0

    VecR v(3);
    v << 1.0, 0.0, 0.0;
    double f2 = potential(embed(SphereTangent(p, v)), profile);
    CHECK(f2 == Approx(profile.f(2.0)));

    for (int i = 0; i < 20; ++i) {
        QuadricPoint q = embed(random_tangent(3));
        MatR R = random_rotation(3);
        QuadricPoint moved(R.cast<cplx>() * q.z);
        CHECK(potential(moved, profile) ==
              Approx(potential(q, profile)).epsilon(1e-12));
    }
}

TEST_CASE("kahler form: antisymmetry, positivity, tangency check") {
    ScalarProfile profile(1.0, 1.0, 1.0, 1);
    for (int i = 0; i < 50; ++i) {
        QuadricPoint q = embed(random_tangent(3, 0.8));
        MatC h = mixed_hessian(q, profile);
        VecC u = random_tangent_vector(q);
        VecC w = random_tangent_vector(q);
        double uw = kahler_form(h, u, w);
        double wu = kahler_form(h, w, u);
        CHECK(uw == Approx(-wu).margin(1e-10));
        CHECK(std::abs(kahler_form(h, u, u)) <= 1e-10);
        VecC iu = cplx(0.0, 1.0) * u;
        CHECK(kahler_form(h, u, iu) > 0.0);
    }
    QuadricPoint q = embed(random_tangent(3, 0.5));
    VecC bad = VecC::Ones(3);
    CHECK_THROWS_AS(kahler_form(q, ScalarProfile(1, 1, 1, 1), bad, bad),
                    domain_error);
}

TEST_CASE("moment: zero section, level set, off-level sensitivity") {
    ScalarProfile profile(1.0, 1.0, 1.0, 1);
    const int n = 2, m = 3;
    auto gens = sphere_h_generators(n, 1);  // H = SO(2) on coords {2,3}
    REQUIRE(gens.size() == 1);

    // v = 0: moment vanishes for every generator
    for (int i = 0; i < 10; ++i) {
        VecR p = random_unit(m);
        QuadricPoint q = embed(SphereTangent(p, VecR::Zero(m)));
        for (const auto& g : gens)
            CHECK(std::abs(moment(q, g, profile)) <= 1e-9);
    }

    // p on the section, v normal to the orbit H.p: moment = 0
    SphereTangent on = sphere_section_point(n, 0.7, 0.45);
    for (const auto& g : gens)
        CHECK(std::abs(moment(embed(on), g, profile)) <= 1e-8);

    // v along the orbit direction: |moment| is large
    {
        VecR p = sphere_section_point(n, 0.7, 0.0).p;
        VecR v(m);
        v << 0.0, 0.5 * std::cos(0.0), 0.0;  // e_2 direction, tangent to orbit
        v -= p.dot(v) * p;
        v = v / v.norm() * 0.5;
        QuadricPoint q = embed(SphereTangent(p, v));
        double worst = 0.0;
        for (const auto& g : gens)
            worst = std::max(worst, std::abs(moment(q, g, profile)));
        CHECK(worst >= 1e-3);
    }
}

TEST_CASE("moment: finite differences agree with the closed radial form") {
    // mu(X) = -f'(psi1) q'(w) sinh(2|v|) (Xp . vhat), derived from the
    // invariant structure of the potential; independent check of the FD path
    ScalarProfile profile(1.3, 0.8, 1.0, 2);
    for (int i = 0; i < 20; ++i) {
        SphereTangent t = random_tangent(3, 1.2);
        QuadricPoint q = embed(t);
        MatR X = rotation_generator(3, i % 2, 2);
        LieGenerator g(X);
        double nv = t.v.norm();
        double w = std::cosh(2.0 * nv) - 1.0;
        double qprime =
            std::asinh(std::sqrt(0.5 * w)) / std::sqrt(w * (1.0 + 0.5 * w) * 2.0);
        double analytic = -profile.fprime(nv * nv + 1.0) * qprime *
                          std::sinh(2.0 * nv) * (X * t.p).dot(t.v / nv);
        double fd = moment(q, g, profile);
        CHECK(fd == Approx(analytic).epsilon(1e-6).margin(1e-10));
    }
}

TEST_CASE("factorized moment expression shares zero set and sign") {
    ScalarProfile profile(1.0, 1.0, 1.0, 1);
    auto gens = sphere_h_generators(2, 1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        SphereTangent t = random_tangent(3, 1.0);
        QuadricPoint q = embed(t);
        for (const auto& g : gens) {
            double fd = moment(q, g, profile);
            double fac = moment_factorized(q, g, profile);
            if (std::abs(fd) > 1e-6) {
                CHECK(fac * fd > 0.0);  // sign agreement
            } else {
                CHECK(std::abs(fac) <= 1e-4);
            }
        }
    }
}

TEST_CASE("holomorphic volume: chart value, overlap, degenerate frame") {
    // z = e_1, frame = standard tangent basis -> 1/2
    VecC z = VecC::Zero(3);
    z[0] = 1.0;
    QuadricPoint q(z);
    std::vector<VecC> frame(2, VecC::Zero(3));
    frame[0][1] = 1.0;
    frame[1][2] = 1.0;
    cplx om = holomorphic_volume(q, frame);
    CHECK(om.real() == Approx(0.5));
    CHECK(om.imag() == Approx(0.0).margin(1e-16));

    // chart overlap: drop-k and drop-k' values agree where both admissible;
    // exercised by rotating the point so the argmax coordinate changes
    for (int i = 0; i < 50; ++i) {
        QuadricPoint p1 = embed(random_tangent(3, 0.9));
        auto basis = tangent_basis(p1);
        cplx v1 = holomorphic_volume(p1, basis);
        // manually evaluate in a second admissible chart
        int m = 3;
        int kstar = 0;
        for (int k = 1; k < m; ++k)
            if (std::abs(p1.z[k]) > std::abs(p1.z[kstar])) kstar = k;
        int kother = -1;
        double best = -1.0;
        for (int k = 0; k < m; ++k)
            if (k != kstar && std::abs(p1.z[k]) > best) {
                best = std::abs(p1.z[k]);
                kother = k;
            }
        if (best < 0.2) continue;
        MatC M(2, 2);
        int row = 0;
        for (int k = 0; k < m; ++k) {
            if (k == kother) continue;
            for (int c = 0; c < 2; ++c) M(row, c) = basis[c][k];
            ++row;
        }
        double sign = (kother % 2 == 0) ? 1.0 : -1.0;
        cplx v2 = sign / (2.0 * p1.z[kother]) * M.determinant();
        CHECK(std::abs(v1 - v2) <= 1e-10 * std::max(1.0, std::abs(v1)));
    }

    // repeated vector: determinant vanishes
    std::vector<VecC> degenerate(2, VecC::Zero(3));
    degenerate[0][1] = 1.0;
    degenerate[1][1] = 1.0;
    CHECK(std::abs(holomorphic_volume(q, degenerate)) <= 1e-16);
}

TEST_CASE("lagrangian_frame: zero section, factorization, rank deficiency") {
    // v = 0, p_split = 1, n = 2: both frame vectors real
    SphereTangent pt = sphere_section_point(2, 0.6, 0.0);
    LagrangianFrame fr = lagrangian_frame(pt, 1, cplx(1.0, 0.0));
    REQUIRE(fr.vectors.size() == 2);
    CHECK(fr.rank_ok);
    for (const auto& u : fr.vectors)
        for (int k = 0; k < u.size(); ++k)
            CHECK(std::abs(u[k].imag()) <= 1e-14);

    // generator factorization: the orbit vector equals sin(tau) e_2 for
    // p_split=1 and -cos(tau) e_a for the first-block generators (p_split=2)
    cplx tau(0.6, 0.35);
    SphereTangent cpt = sphere_section_point(2, tau.real(), tau.imag());
    LagrangianFrame f1 = lagrangian_frame(cpt, 1, cplx(1.0, 0.0));
    CHECK(std::abs(f1.vectors[0][1] - std::sin(tau)) <= 1e-12);
    LagrangianFrame f2 = lagrangian_frame(cpt, 2, cplx(1.0, 0.0));
    CHECK(std::abs(f2.vectors[0][1] + std::cos(tau)) <= 1e-12);

    // direct matrix action agrees with the factorized form (the content of
    // the fundamental-vector-field identities along the section)
    VecC z = VecC::Zero(3);
    z[0] = std::cos(tau);
    z[2] = std::sin(tau);
    MatR X23 = rotation_generator(3, 1, 2);
    VecC direct = X23.cast<cplx>() * z;
    CHECK((direct - f1.vectors[0]).norm() <= 1e-12);

    // rank drops where the cos factor vanishes (p_split=2 at phi = pi/2)
    SphereTangent sing = sphere_section_point(2, slag::pi / 2.0, 0.0);
    LagrangianFrame fs = lagrangian_frame(sing, 2, cplx(1.0, 0.0));
    CHECK_FALSE(fs.rank_ok);

    // off-section points are rejected
    CHECK_THROWS_AS(lagrangian_frame(random_tangent(3), 1, cplx(1.0, 0.0)),
                    domain_error);
}

TEST_CASE("volume ratio: basis and rotation invariance, positivity") {
    ScalarProfile profile(1.0, 1.0, 1.0, 1);
    for (int i = 0; i < 6; ++i) {
        QuadricPoint q = embed(random_tangent(3, 0.8));
        double r1 = volume_ratio(q, profile);

        // random complex change of basis
        auto basis = tangent_basis(q);
        std::normal_distribution<double> g(0.0, 1.0);
        MatC S(2, 2);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) S(a, b) = cplx(g(rng()), g(rng()));
        if (std::abs(S.determinant()) < 0.3) continue;
        std::vector<VecC> basis2 = {S(0, 0) * basis[0] + S(1, 0) * basis[1],
                                    S(0, 1) * basis[0] + S(1, 1) * basis[1]};
        double r2 = volume_ratio(q, profile, basis2);
        CHECK(r2 == Approx(r1).epsilon(1e-8));

        MatR R = random_rotation(3);
        QuadricPoint moved(R.cast<cplx>() * q.z);
        double r3 = volume_ratio(moved, profile);
        CHECK(r3 == Approx(r1).epsilon(1e-8));

        CHECK(r1 > 0.0);
    }
}

TEST_CASE("tangent data invariants are enforced") {
    VecR p(3), v(3);
    p << 1.1, 0.0, 0.0;
    v << 0.0, 1.0, 0.0;
    CHECK_THROWS_AS(SphereTangent(p, v), domain_error);  // |p| != 1
    p << 1.0, 0.0, 0.0;
    v << 0.5, 1.0, 0.0;
    CHECK_THROWS_AS(SphereTangent(p, v), domain_error);  // p.v != 0
    VecC z(3);
    z << 2.0, 0.0, 0.0;
    CHECK_THROWS_AS(QuadricPoint(z), domain_error);  // sum z^2 != 1
    MatR notskew = MatR::Identity(3, 3);
    CHECK_THROWS_AS(LieGenerator(notskew), domain_error);
}

TEST_CASE("embedded curve verification in the n=3 model") {
    ActionCatalog cat = load_catalog();
    ScalarProfile profile(1.0, 1.0, 1.0, 1);
    TraceOptions opts;
    opts.max_steps = 300;
    CalibrationSpec spec(cat.lookup("sphere-n3-p2"), 0.0);
    ProfileCurve c = trace_level_curve(spec, cplx(0.6, 0.0), opts);
    QuadricCurveReport rep =
        verify_embedded_curve(3, 2, profile, c.axes[0], 60);
    CHECK(rep.samples >= 4);
    CHECK(rep.max_omega_defect <= 1e-6);
    CHECK(rep.phase_drift_rad <= 1e-4);
    CHECK(rep.moment_max_on_level <= 1e-8);
}

TEST_CASE("embedded curves at generic phases: Lagrangian, calibrated") {
    // curving trajectories (no axis/line symmetry): the sweep is Lagrangian
    // and the holomorphic-volume phase locks to -theta mod pi
    ActionCatalog cat = load_catalog();
    ScalarProfile profile(1.0, 1.0, 1.0, 1);
    struct Run {
        const char* action;
        int p_split;
        double theta;
        cplx seed;
    };
    for (const Run& run :
         {Run{"sphere-n2-p1", 1, slag::pi / 6.0, cplx(0.4, 0.2)},
          Run{"sphere-n2-p2", 2, 1.0, cplx(0.9, -0.15)}}) {
        TraceOptions opts;
        opts.max_steps = 1500;
        CalibrationSpec spec(cat.lookup(run.action), run.theta);
        ProfileCurve c = trace_level_curve(spec, run.seed, opts);
        QuadricCurveReport rep =
            verify_embedded_curve(2, run.p_split, profile, c.axes[0], 100);
        INFO(run.action << " theta=" << run.theta);
        CHECK(rep.samples >= 10);
        CHECK(rep.max_omega_defect <= 1e-6);
        CHECK(rep.phase_drift_rad <= 1e-4);
        CHECK(rep.moment_max_on_level <= 1e-8);
        double lock = std::abs(angle_diff(rep.mean_phase, -run.theta));
        if (lock > slag::pi / 2.0) lock = slag::pi - lock;
        CHECK(lock <= 1e-6);
    }
}

TEST_CASE("embedded traced curves are special Lagrangian (n=2, p=1)") {
    ActionCatalog cat = load_catalog();
    ScalarProfile profile(1.0, 1.0, 1.0, 1);

    TraceOptions opts;
    opts.max_steps = 600;

    CalibrationSpec s0(cat.lookup("sphere-n2-p1"), 0.0);
    ProfileCurve c0 = trace_level_curve(s0, cplx(0.5, 0.0), opts);
    QuadricCurveReport r0 =
        verify_embedded_curve(2, 1, profile, c0.axes[0], 60);

    CalibrationSpec s90(cat.lookup("sphere-n2-p1"), slag::pi / 2.0);
    ProfileCurve c90 = trace_level_curve(s90, cplx(slag::pi / 2.0, 0.1), opts);
    QuadricCurveReport r90 =
        verify_embedded_curve(2, 1, profile, c90.axes[0], 60);

    CHECK(r0.max_omega_defect <= 1e-6);
    CHECK(r90.max_omega_defect <= 1e-6);
    CHECK(r0.phase_drift_rad <= 1e-4);
    CHECK(r90.phase_drift_rad <= 1e-4);
    CHECK(r0.moment_max_on_level <= 1e-8);
    CHECK(r90.moment_max_on_level <= 1e-8);
    double diff = std::abs(angle_diff(r0.mean_phase, r90.mean_phase));
    if (diff > slag::pi / 2.0) diff = slag::pi - diff;
    CHECK(std::abs(diff - slag::pi / 2.0) <= 1e-3);
}
