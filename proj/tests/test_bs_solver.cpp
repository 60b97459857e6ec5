#include <catch2/catch_amalgamated.hpp>

#include "dshell/bs_solver.hpp"
#include "dshell/oracles.hpp"

using namespace dshell;

TEST_CASE("zero strength: zero BS spectrum, no bound states", "[bs_solver]") {
    auto zero = InteractionSpec::delta(0.0);
    for (auto g : {Geometry::modes_circle(1.0, 16), Geometry::modes_sphere(1.0, 16),
                   Geometry::nystrom(ClosedCurve::make_kite(), 48)}) {
        auto mu = bs_eigenvalues(-1.0, zero, g);
        for (double m : mu) CHECK(m == 0.0);
        CHECK(find_bound_states(zero, g, -9.0, -1e-6).empty());
        CHECK(count_bound_states(zero, g).count == 0);
    }
}

TEST_CASE("largest BS eigenvalue on the circle equals 2 I_0 K_0 at kappa=1", "[bs_solver][oracle]") {
    auto spec = InteractionSpec::delta(2.0);
    auto p = bessel_ik(0, 1.0);
    double expected = 2.0 * p.I * p.K;
    // mode backend
    auto mu_modes = bs_eigenvalues(-1.0, spec, Geometry::modes_circle(1.0, 32));
    CHECK(std::abs(mu_modes.front() - expected) < 1e-12);
    // Nystrom backend
    auto mu_dense = bs_eigenvalues(-1.0, spec, Geometry::nystrom(ClosedCurve::make_circle(1.0), 128));
    CHECK(std::abs(mu_dense.front() - expected) < 1e-8);
}

TEST_CASE("BS eigenvalues decrease as kappa increases", "[bs_solver]") {
    auto spec = InteractionSpec::delta(2.0);
    auto g = Geometry::modes_circle(1.0, 8);
    std::vector<double> prev;
    for (double kappa : {0.5, 1.0, 2.0, 4.0}) {
        auto mu = bs_eigenvalues(-kappa * kappa, spec, g);
        if (!prev.empty())
            for (std::size_t k = 0; k < mu.size(); ++k) CHECK(mu[k] < prev[k]);
        prev = mu;
    }
}

TEST_CASE("circle ground state matches the mode-0 transcendental root", "[bs_solver][oracle]") {
    // oracle: bisection on 2 I_0(k) K_0(k) = 1
    auto f = [](double k) { return 2.0 * bessel_ik(0, k).I * bessel_ik(0, k).K - 1.0; };
    auto kappa_star = oracle::bessel_root_bisect(f, 1e-4, 10.0, 1e-13);
    REQUIRE(kappa_star.has_value());
    double lambda_star = -(*kappa_star) * (*kappa_star);

    auto spec = InteractionSpec::delta(2.0);
    auto states = find_bound_states(spec, Geometry::modes_circle(1.0, 32), -16.0, -1e-6);
    REQUIRE(states.size() == 1);
    CHECK(states[0].mode == 0);
    CHECK(states[0].multiplicity == 1);
    CHECK(std::abs(states[0].lambda_star - lambda_star) / std::abs(lambda_star) < 1e-9);
    CHECK(states[0].residual < 1e-8);
}

TEST_CASE("circle crossings on modes l >= 1 carry multiplicity 2", "[bs_solver]") {
    auto spec = InteractionSpec::delta(8.0);  // cutoff l < alpha R / 2 = 4
    auto states = find_bound_states(spec, Geometry::modes_circle(1.0, 32), -64.0, -1e-6);
    REQUIRE(states.size() == 4);
    for (const auto& s : states) {
        if (s.mode >= 1) CHECK(s.multiplicity == 2);
        if (s.mode == 0) CHECK(s.multiplicity == 1);
    }
}

TEST_CASE("mode and Nystrom backends find the same circle spectrum", "[bs_solver][cross]") {
    auto spec = InteractionSpec::delta(5.0);
    auto modes = find_bound_states(spec, Geometry::modes_circle(1.0, 32), -36.0, -1e-4);
    auto dense = find_bound_states(spec, Geometry::nystrom(ClosedCurve::make_circle(1.0), 96),
                                   -36.0, -1e-4);
    REQUIRE(modes.size() == dense.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        CHECK(std::abs(modes[i].lambda_star - dense[i].lambda_star) /
                  std::abs(modes[i].lambda_star) <
              1e-6);
        CHECK(modes[i].multiplicity == dense[i].multiplicity);
    }
}

TEST_CASE("bound states match the radial shooting oracle (circle + sphere)", "[bs_solver][oracle]") {
    struct Case {
        int dim;
        double alpha;
    };
    for (auto c : {Case{2, 2.0}, Case{2, 8.0}, Case{3, 8.0}}) {
        auto geom = c.dim == 2 ? Geometry::modes_circle(1.0, 32) : Geometry::modes_sphere(1.0, 32);
        auto states = find_bound_states(InteractionSpec::delta(c.alpha), geom, -81.0, -1e-6);
        REQUIRE(!states.empty());
        for (const auto& s : states) {
            oracle::ShootingProblem p;
            p.dimension = c.dim;
            p.angular = s.mode;
            p.strength = c.alpha;
            double kappa = std::sqrt(-s.lambda_star);
            auto roots = oracle::shoot_bound_state_kappas(p, 0.8 * kappa, 1.25 * kappa, 64, 1e-11);
            REQUIRE(roots.size() == 1);
            double lambda_oracle = -roots[0] * roots[0];
            INFO("dim=" << c.dim << " alpha=" << c.alpha << " mode=" << s.mode);
            CHECK(std::abs(s.lambda_star - lambda_oracle) / std::abs(lambda_oracle) < 1e-6);
            CHECK(s.multiplicity == (c.dim == 2 ? (s.mode == 0 ? 1 : 2) : 2 * s.mode + 1));
        }
    }
}

TEST_CASE("sphere count: sum over modes of (2l+1) indicators", "[bs_solver][oracle]") {
    double alpha = 8.0, eps = 1e-6;
    auto g = Geometry::modes_sphere(1.0, 64);
    auto spec = InteractionSpec::delta(alpha);
    auto bc = count_bound_states(spec, g, eps);
    int expected = 0;
    double kappa = std::sqrt(eps);
    for (int l = 0; l <= 64; ++l)
        if (alpha * mode_weyl_sphere(l, kappa, 1.0).m_tilde > 1.0) expected += 2 * l + 1;
    CHECK(bc.count == expected);
    // cutoff: crossing possible iff alpha R > 2l + 1
    CHECK(bc.mode_cutoff == 3);
    // shooting cross-check: each mode below the cutoff really has a state
    for (int l = 0; l <= bc.mode_cutoff; ++l) {
        oracle::ShootingProblem p;
        p.dimension = 3;
        p.angular = l;
        p.strength = alpha;
        CHECK(oracle::shoot_bound_state_kappas(p, 1e-2, 8.0, 128, 1e-9).size() == 1);
    }
}

TEST_CASE("delta' on the circle: mode 0 always bound, finite count", "[bs_solver][oracle]") {
    for (double beta : {0.3, 1.0}) {
        auto spec = InteractionSpec::delta_prime(beta);
        auto g = Geometry::modes_circle(1.0, 64);
        auto bc = count_bound_states(spec, g);
        CHECK(bc.count >= 1);
        // m_hat_l(0+) = 2R/l: crossings exactly for l < 2R/beta
        int expected_cutoff = static_cast<int>(std::ceil(2.0 / beta) - 1);
        CHECK(bc.mode_cutoff == expected_cutoff);

        auto states = find_bound_states(spec, g, -400.0, -1e-8);
        bool has_mode0 = false;
        int with_mult = 0;
        for (const auto& s : states) {
            has_mode0 |= (s.mode == 0);
            with_mult += s.multiplicity;
            // shooting oracle agreement per state
            oracle::ShootingProblem p;
            p.delta_prime = true;
            p.strength = beta;
            p.angular = s.mode;
            double kappa = std::sqrt(-s.lambda_star);
            auto roots = oracle::shoot_bound_state_kappas(p, 0.8 * kappa, 1.25 * kappa, 64, 1e-11);
            REQUIRE(roots.size() == 1);
            CHECK(std::abs(s.lambda_star + roots[0] * roots[0]) / (roots[0] * roots[0]) < 1e-6);
        }
        CHECK(has_mode0);
        CHECK(with_mult == bc.count);
    }
}

TEST_CASE("count is stable under refinement (l_max and lattice doubling)", "[bs_solver]") {
    auto spec = InteractionSpec::delta_prime(0.3);
    auto c64 = count_bound_states(spec, Geometry::modes_circle(1.0, 64));
    auto c128 = count_bound_states(spec, Geometry::modes_circle(1.0, 128));
    CHECK(c64.count == c128.count);

    BsOptions opt;
    auto s1 = find_bound_states(spec, Geometry::modes_circle(1.0, 64), -400.0, -1e-8, opt);
    opt.lattice_per_decade *= 2;
    auto s2 = find_bound_states(spec, Geometry::modes_circle(1.0, 64), -400.0, -1e-8, opt);
    CHECK(s1.size() == s2.size());

    // Nystrom: count unchanged when N doubles
    auto spec_d = InteractionSpec::delta(5.0);
    auto kite = ClosedCurve::make_kite();
    int c_n = 0, c_2n = 0;
    for (double mu : bs_eigenvalues(-1e-6, spec_d, Geometry::nystrom(kite, 48)))
        if (mu > 1.0) ++c_n;
    for (double mu : bs_eigenvalues(-1e-6, spec_d, Geometry::nystrom(kite, 96)))
        if (mu > 1.0) ++c_2n;
    CHECK(c_n == c_2n);
}

TEST_CASE("sampled (non-constant) alpha works on the Nystrom backend", "[bs_solver]") {
    auto grid_geo = Geometry::nystrom(ClosedCurve::make_circle(1.0), 64);
    Eigen::VectorXd alpha(64);
    for (int j = 0; j < 64; ++j) alpha[j] = 2.0 + std::sin(2.0 * pi * j / 64.0);  // sign-definite
    auto spec = InteractionSpec::delta_sampled(alpha);
    auto mu = bs_eigenvalues(-1.0, spec, grid_geo);
    CHECK(mu.front() > 0.0);
    // sign-changing alpha stays real thanks to the M^{1/2} alpha M^{1/2} symmetrization
    Eigen::VectorXd alpha2(64);
    for (int j = 0; j < 64; ++j) alpha2[j] = std::sin(2.0 * pi * j / 64.0);
    auto mu2 = bs_eigenvalues(-1.0, InteractionSpec::delta_sampled(alpha2), grid_geo);
    CHECK(mu2.front() > 0.0);
    CHECK(mu2.back() < 0.0);
    // sampled strengths are rejected on mode backends
    CHECK_THROWS_AS(bs_eigenvalues(-1.0, spec, Geometry::modes_circle(1.0, 8)), UnsupportedError);
}

TEST_CASE("error contracts", "[bs_solver]") {
    CHECK_THROWS_AS(InteractionSpec::delta_prime(0.0), ConfigError);
    auto spec = InteractionSpec::delta(2.0);
    auto g = Geometry::modes_circle(1.0, 16);
    CHECK_THROWS_AS(find_bound_states(spec, g, -1.0, 0.0), DomainError);   // bracket touches 0
    CHECK_THROWS_AS(find_bound_states(spec, g, -1.0, -2.0), DomainError);  // inverted
    CHECK_THROWS_AS(
        find_bound_states(InteractionSpec::delta_prime(1.0), Geometry::nystrom(ClosedCurve::make_kite(), 32), -4.0, -1e-6),
        UnsupportedError);
}
