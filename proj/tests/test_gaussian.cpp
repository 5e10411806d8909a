#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "qpt/gaussian.hpp"
#include "qpt/smalled.hpp"
#include "qpt/spectra.hpp"

using namespace qpt;
using namespace qpt::gaussian;

namespace {

QuadraticBosonForm random_pd_form(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXd m(2 * d, 2 * d);
    for (int i = 0; i < 2 * d; ++i)
        for (int j = 0; j < 2 * d; ++j) m(i, j) = g(rng);
    Eigen::MatrixXd h = m * m.transpose() + 0.3 * Eigen::MatrixXd::Identity(2 * d, 2 * d);
    return QuadraticBosonForm{h};
}

}  // namespace

TEST_CASE("ground state of a scaled-coordinate oscillator is the vacuum") {
    Eigen::MatrixXd h(2, 2);
    h << 0.7, 0.0, 0.0, 0.7;
    const auto st = ground_state_covariance(QuadraticBosonForm{h});
    CHECK(st.sigma(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(st.sigma(1, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(st.sigma(0, 1)) < 1e-14);
}

TEST_CASE("ground state of a mass-form oscillator") {
    const double e = 1.7;
    const auto st = ground_state_covariance(oscillator_form(e));
    CHECK(st.sigma(0, 0) == doctest::Approx(1.0 / (2.0 * e)).epsilon(1e-13));
    CHECK(st.sigma(1, 1) == doctest::Approx(e / 2.0).epsilon(1e-13));
    CHECK(std::abs(st.sigma(0, 1)) < 1e-14);
    CHECK(st.purity_det() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("two-mode dicke Williamson frequencies match the closed form") {
    DickeParams p{1.0, 1.3, 0.0};
    const double lc = p.lambda_c();
    for (double f = 0.0; f <= 0.999; f += 0.037) {
        p.lambda = f * lc;
        const auto wf = williamson(dicke_two_mode_form(p));
        const auto ref = spectra::dicke_quasiparticle_energies(p);
        CHECK(std::abs(wf.frequencies(0) - ref.e1) <= 1e-12);
        CHECK(std::abs(wf.frequencies(1) - ref.e2) <= 1e-12);
    }
}

TEST_CASE("non-positive-definite forms are rejected as phase boundary crossings") {
    DickeParams p{1.0, 1.0, 0.5001};
    CHECK_THROWS_AS(ground_state_covariance(dicke_two_mode_form(p)), phase_boundary_error);
}

TEST_CASE("symplectic propagator properties") {
    std::mt19937_64 rng(301);
    for (int rep = 0; rep < 20; ++rep) {
        const int d = 1 + (rep % 2);
        const auto form = random_pd_form(rng, d);
        const Eigen::MatrixXd om = symplectic_form(d);
        for (double t : {0.0, 0.3, 2.0, 17.0}) {
            const Eigen::MatrixXd s = symplectic_propagator(form, t);
            CHECK((s.transpose() * om * s - om).cwiseAbs().maxCoeff() <= 1e-10);
        }
        // purity is preserved along the flow
        const auto st = ground_state_covariance(form);
        const auto moved = evolve(st, random_pd_form(rng, d), 3.7);
        CHECK(moved.purity_det() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("evolution under the state's own Hamiltonian is stationary") {
    std::mt19937_64 rng(302);
    const auto form = random_pd_form(rng, 2);
    const auto st = ground_state_covariance(form);
    for (double t : {0.1, 1.0, 12.0}) {
        const auto moved = evolve(st, form, t);
        CHECK((moved.sigma - st.sigma).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("t = 0 evolution is the identity") {
    std::mt19937_64 rng(303);
    const auto form = random_pd_form(rng, 1);
    const auto st = ground_state_covariance(form);
    const auto same = evolve(st, random_pd_form(rng, 1), 0.0);
    CHECK((same.sigma - st.sigma).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("covariance of a frequency quench is pi/e' periodic") {
    const double e = 1.0, ep = 0.45;
    const auto st = ground_state_covariance(oscillator_form(e));
    const auto post = oscillator_form(ep);
    const double period = M_PI / ep;
    for (double t : {0.3, 1.7}) {
        const auto a = evolve(st, post, t);
        const auto b = evolve(st, post, t + period);
        CHECK((a.sigma - b.sigma).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("pure overlap values") {
    const auto vac = ground_state_covariance(QuadraticBosonForm{Eigen::Matrix2d::Identity()});
    CHECK(pure_overlap(vac, vac) == doctest::Approx(1.0).epsilon(1e-14));

    // vacuum vs squeezed vacuum: 1/cosh r, cross-checked against the
    // truncated-Fock oracle
    const double e = 2.4;  // squeeze r = ln(e)/2
    const double r = 0.5 * std::log(e);
    const auto sq = ground_state_covariance(oscillator_form(e));
    CHECK(pure_overlap(vac, sq) == doctest::Approx(1.0 / std::cosh(r)).epsilon(1e-12));
    const double fock = smalled::fock_ground_overlap(QuadraticBosonForm{Eigen::Matrix2d::Identity()},
                                                     oscillator_form(e), 256);
    CHECK(pure_overlap(vac, sq) == doctest::Approx(fock).epsilon(1e-8));

    // tensor product factorizes
    Eigen::MatrixXd h4 = Eigen::MatrixXd::Identity(4, 4);
    h4(2, 2) = e * e;  // mode 2 is the squeezed oscillator
    const auto prod = ground_state_covariance(QuadraticBosonForm{h4});
    const auto vac2 = ground_state_covariance(QuadraticBosonForm{Eigen::MatrixXd::Identity(4, 4)});
    CHECK(pure_overlap(vac2, prod) ==
          doctest::Approx(1.0 * (1.0 / std::cosh(r))).epsilon(1e-12));
}

TEST_CASE("dicke effective SP matches the closed-form quench formula") {
    DickeParams p{1.0, 1.0, 0.0};
    const auto q = QuenchSpec::from_detuning(p.lambda_c(), 1e-5, -1e-10);
    p.lambda = q.lambda;
    std::vector<double> times{0.0, 10.0, 100.0, 1000.0, 20000.0};
    const auto s = dicke_sp_effective(p, q, times);
    const double e = spectra::dicke_soft_energy(p, q.delta_lambda);
    const double ep = spectra::dicke_soft_energy(p, q.delta);
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(s.m_values[i] ==
              doctest::Approx(oscillator_quench_sp(e, ep, times[i])).epsilon(1e-9));
    }
    CHECK(s.m_values[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dicke effective SP handles a quench exactly onto the critical point") {
    DickeParams p{1.0, 1.0, 0.0};
    const auto q = QuenchSpec::from_detuning(p.lambda_c(), 1e-5, 0.0);
    p.lambda = q.lambda;
    const double e = spectra::dicke_soft_energy(p, q.delta_lambda);
    std::vector<double> times{0.0, 100.0, 2000.0};
    const auto s = dicke_sp_effective(p, q, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double h = 0.5 * e * times[i];
        CHECK(s.m_values[i] == doctest::Approx(1.0 / std::sqrt(1.0 + h * h)).epsilon(1e-9));
    }
}

TEST_CASE("unquenched dicke SP stays at 1") {
    DickeParams p{1.0, 1.0, 0.0};
    const auto q = QuenchSpec::from_detuning(p.lambda_c(), 0.0, -1e-3);
    p.lambda = q.lambda;
    const std::vector<double> times{0.0, 3.0, 90.0};
    const auto eff = dicke_sp_effective(p, q, times);
    const auto two = dicke_sp_two_mode(p, q, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(eff.m_values[i] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(two.m_values[i] == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("weak coupling switch-on perturbs the two-mode SP at second order") {
    DickeParams p{1.0, 1.0, 0.0};
    const std::vector<double> times{0.0, 1.0, 2.5, 5.0, 11.0};
    double prev_dip = 0.0;
    for (double lp : {1e-3, 2e-3}) {
        const auto q = QuenchSpec::from_lambdas(0.0, lp, p.lambda_c());
        DickeParams pp = p;
        pp.lambda = 0.0;
        const auto s = dicke_sp_two_mode(pp, q, times);
        double dip = 0.0;
        for (double m : s.m_values) dip = std::max(dip, 1.0 - m);
        if (prev_dip > 0.0) {
            // doubling lambda' quadruples the dip: 1 - M = O(lambda'^2)
            CHECK(dip / prev_dip == doctest::Approx(4.0).epsilon(0.05));
        }
        prev_dip = dip;
    }
}

TEST_CASE("two-mode SP tracks the effective single-mode SP in the soft-mode regime") {
    DickeParams p{1.0, 1.0, 0.0};
    const auto q = QuenchSpec::from_detuning(p.lambda_c(), 1e-5, -1e-10);
    p.lambda = q.lambda;
    const double ep = spectra::dicke_soft_energy(p, q.delta);
    std::vector<double> times;
    for (int i = 0; i < 25; ++i)
        times.push_back(10.0 * std::pow(0.3 / ep / 10.0, i / 24.0));
    const auto eff = dicke_sp_effective(p, q, times);
    const auto two = dicke_sp_two_mode(p, q, times);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
        worst = std::max(worst, std::abs(two.m_values[i] - eff.m_values[i]) / eff.m_values[i]);
    CHECK(worst <= 0.05);
}

TEST_CASE("super-radiant inputs are rejected") {
    DickeParams p{1.0, 1.0, 0.0};
    const auto bad_pre = QuenchSpec::from_detuning(p.lambda_c(), -1e-3, 1e-4);
    p.lambda = bad_pre.lambda;
    CHECK_THROWS_AS(dicke_sp_effective(p, bad_pre, {0.0}), phase_boundary_error);
    const auto bad_post = QuenchSpec::from_detuning(p.lambda_c(), 2e-3, 1e-3);
    p.lambda = bad_post.lambda;
    CHECK_THROWS_AS(dicke_sp_two_mode(p, bad_post, {0.0}), phase_boundary_error);
}
