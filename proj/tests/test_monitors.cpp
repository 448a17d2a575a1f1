#include "solitonlab/monitors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace solitonlab;
using namespace solitonlab::monitors;

namespace {

const TwoSummandsAnsatz kSp{3, 4, 6.0, 9.6, 0.48, true};
const TwoSummandsAnsatz kCircle{1, 2, 0.0, 10.0, 1.0, true};
const DancerWangAnsatz kDw2{{{2, 2, 1, false}, {2, 2, 1, false}}};

Solution run(const ProblemSpec& spec, double t_max, bool stop_on_exit = true, double rel_tol = 1e-10) {
    SolveOptions o;
    o.integrator.t_max = t_max;
    o.integrator.rel_tol = rel_tol;
    o.integrator.abs_tol = rel_tol * 1e-2;
    o.invariant_event = stop_on_exit;
    return solve_problem(spec, o);
}

std::size_t sample_near(const Solution& sol, double t) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < sol.size(); ++i) {
        if (std::abs(sol.traj.samples[i].t - t) < std::abs(sol.traj.samples[best].t - t)) best = i;
    }
    return best;
}

}  // namespace

TEST_CASE("discriminant and roots") {
    const auto r = two_summands_roots(TwoSummandsAnsatz{1, 2, 0.0, 6.0, 1.0, true});
    CHECK(r.D == doctest::Approx(0.5625).epsilon(1e-15));
    REQUIRE(r.omega1);
    REQUIRE(r.omega2);
    CHECK(*r.omega1 == 0.0);
    CHECK(*r.omega2 == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
    CHECK(r.omega2_check);

    CHECK(*two_summands_roots(kCircle).omega1 == 0.0);
    CHECK_FALSE(two_summands_roots(TwoSummandsAnsatz{3, 4, 6.0, 2.0, 1.0, true}).omega2);
}

TEST_CASE("roots solve the quartic and the discriminant criterion matches the curvature ratio") {
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> d1d(1, 6), d2d(1, 8);
    std::uniform_real_distribution<double> A2d(0.1, 20.0), A3d(0.05, 5.0);
    int with_roots = 0, compared = 0;
    for (int k = 0; k < 1000; ++k) {
        const int d1 = d1d(rng), d2 = d2d(rng);
        const TwoSummandsAnsatz a{d1, d2, double(d1 * (d1 - 1)), A2d(rng), A3d(rng), true};
        const auto r = two_summands_roots(a);
        CHECK(r.omega2.has_value() == (r.D >= 0.0));
        if (r.omega2) {
            ++with_roots;
            CHECK(std::abs(omega_quartic(a, *r.omega1)) <= 1e-10 * a.A2);
            CHECK(std::abs(omega_quartic(a, *r.omega2)) <= 1e-10 * a.A2);
            CHECK(*r.omega1 <= *r.omega2);
        }
        const double mid = a.A2 / (2.0 * a.A3) * d1 / (2.0 * d1 + d2);
        if (std::abs(r.D) <= 1e-12 * mid * mid) continue;
        ++compared;
        CHECK(discriminant_ratio_predicate(a) == (r.D >= 0.0));
    }
    CHECK(with_roots > 100);
    CHECK(compared > 900);
}

TEST_CASE("predicates allowing a vanishing growth constant") {
    const auto p = c0_zero_predicates(kCircle);
    CHECK(p.circle_bundle);
    // A2^2 = 2 d2 (d2 + 2) A3 exactly
    CHECK_FALSE(c0_zero_predicates(TwoSummandsAnsatz{1, 2, 0.0, 4.0, 1.0, true}).circle_bundle);
    CHECK_FALSE(c0_zero_predicates(TwoSummandsAnsatz{1, 2, 0.0, 4.0, 1.0, true}).general);

    std::mt19937 rng(37);
    std::uniform_int_distribution<int> d2d(1, 10);
    std::uniform_real_distribution<double> A2d(0.1, 20.0), A3d(0.05, 5.0);
    for (int k = 0; k < 500; ++k) {
        const TwoSummandsAnsatz a{1, d2d(rng), 0.0, A2d(rng), A3d(rng), true};
        const auto q = c0_zero_predicates(a);
        CHECK(q.general == q.circle_bundle);
    }
}

TEST_CASE("locus membership on manufactured states") {
    const ProblemSpec spec{kDw2, 0.0, -1.0, {1.0, 1.0}};
    SolitonState s;
    s.t = 1.0;
    s.f = {0.5, 1.0, 1.2};
    s.df = {0.7, 0.3, 0.2};
    s.du = 0.0;
    const auto r = locus_membership(s, spec);
    CHECK(r.classifiable);
    CHECK(r.trace_ratio == 1.0);

    s.df = {0.0, 0.0, 0.0};
    CHECK(locus_membership(s, spec).locus == "unclassifiable");
}

TEST_CASE("locus along trajectories") {
    const auto einstein = run(ProblemSpec{kDw2, 0.0, 0.0, {1.0, 1.0}}, 10.0);
    const auto mid = locus_membership(einstein.state(sample_near(einstein, 5.0)), einstein.spec);
    CHECK(mid.locus == "einstein");

    for (double eps : {0.0, 1.0}) {
        const auto sol = run(ProblemSpec{kDw2, eps, -1.0, {1.0, 1.0}}, 10.0, false);
        CHECK(locus_membership(sol.state(sample_near(sol, 1.0)), sol.spec).locus == "strict");
        const auto rep = locus_report(sol);
        CHECK(rep.strict == sol.size());
        CHECK_FALSE(rep.first_strict_exit);
    }
}

TEST_CASE("potential report") {
    const auto sol = run(ProblemSpec{DancerWangAnsatz{{{2, 2, 1, false}}}, 0.0, -1.0, {1.0}}, 100.0);
    const auto rep = potential_report(sol);
    CHECK(rep.applicable);
    CHECK(rep.checked == sol.size());
    CHECK(rep.ok());

    std::vector<SolitonState> states;
    std::vector<double> udd;
    for (std::size_t i = 0; i < sol.size(); ++i) {
        states.push_back(sol.state(i));
        udd.push_back(sol.udd(i));
    }
    const std::size_t k = states.size() / 2;
    states[k].du = 0.25;
    const auto bad = potential_report(states, udd, sol.spec);
    CHECK(bad.du_violations == 1);
    REQUIRE_FALSE(bad.violations.empty());
    CHECK(bad.violations.front().sample == k);
    CHECK(bad.violations.front().quantity == "du");

    const auto trivial = potential_report(run(ProblemSpec{kDw2, 0.0, 0.0, {1.0, 1.0}}, 5.0));
    CHECK(trivial.trivial);
    CHECK_FALSE(trivial.applicable);

    const auto expanding = potential_report(run(ProblemSpec{kDw2, 1.0, -1.0, {1.0, 1.0}}, 20.0, false));
    CHECK(expanding.concavity_required);
    CHECK(expanding.ok());
}

TEST_CASE("asymptotics") {
    const auto steady = asymptote_check(run(ProblemSpec{DancerWangAnsatz{{{2, 2, 1, false}}}, 0.0, -1.0, {1.0}}, 100.0));
    CHECK(steady.reached_t_max);
    CHECK(steady.relative_slope_error <= 0.01);
    CHECK(steady.steady_ok());

    for (const auto& spec : {ProblemSpec{kDw2, 1.0, -1.0, {1.0, 1.0}}, ProblemSpec{kSp, 1.0, -1.0, {1.0}},
                             ProblemSpec{LuPagePopeAnsatz{2, 2, 1, 3}, 1.0, -1.0, {1.0, 1.0}}}) {
        const auto sol = run(spec, 20.0, false);
        const auto rep = asymptote_check(sol);
        CHECK_FALSE(rep.steady);
        CHECK(rep.upper_bound_violations == 0);
        CHECK(rep.lower_bound_checks > 0);
        CHECK(rep.lower_bound_violations == 0);
    }
}

TEST_CASE("conservation along trajectories") {
    for (const auto& spec : {ProblemSpec{kSp, 0.0, -10.0, {1.0}}, ProblemSpec{kDw2, 1.0, -1.0, {1.0, 1.0}},
                             ProblemSpec{LuPagePopeAnsatz{2, 2, 1, 3}, 0.0, 0.0, {1.0, 1.0}}}) {
        const auto rep = conservation_report(run(spec, 20.0, false, 1e-12));
        CHECK(rep.max_residual <= 1e-8 * (1.0 + std::abs(spec.C)));
        CHECK(rep.max_form_disagreement <= 1e-10);
        CHECK(rep.max_identity_mismatch <= 1e-8);
    }
}

TEST_CASE("omega monitor") {
    const auto sol = run(ProblemSpec{kSp, 0.0, -10.0, {1.0}}, 100.0);
    const auto rep = two_summands_omega_monitor(sol);
    const double delta = sol.launch_state.t;
    CHECK(rep.roots_exist);
    CHECK(rep.launch_omega == doctest::Approx(delta).epsilon(1e-3));
    CHECK(rep.launch_omega_dot == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(rep.window_held);
    CHECK(rep.slope_violations == 0);
    CHECK(rep.max_omega_dot <= rep.omega_dot_limit * (1.0 + 1e-6));

    const auto no_roots = two_summands_omega_monitor(run(ProblemSpec{TwoSummandsAnsatz{3, 4, 6.0, 2.0, 1.0, true}, 0.0, 0.0, {1.0}}, 2.0));
    CHECK_FALSE(no_roots.roots_exist);
    CHECK_FALSE(no_roots.window_held);
}

TEST_CASE("Dancer-Wang a priori set") {
    CHECK(dw_c0(DancerWangAnsatz{{{2, 2, 1, false}}}, {3.0}) == 1.0);
    CHECK(dw_c0(kDw2, {1.0, 1.0}) == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-15));
    CHECK(dw_c0(kDw2, {1.0, 4.0}) == doctest::Approx(5.0).epsilon(1e-15));
    const DancerWangAnsatz mixed{{{2, 6, 1, false}, {4, 2, 3, false}}};
    // pairs: sqrt(6/4 * 6/2) = 2.1213 and sqrt(4/2 * 2/6) = 0.8165
    CHECK(dw_c0(mixed, {1.0, 1.0}) == doctest::Approx(1.0 + std::sqrt(4.5)).epsilon(1e-15));
    CHECK(dw_omega_bound(mixed, 1, 2.0) == doctest::Approx(4.0 * 2.0 / (2.0 * 4.0 * 6.0 * 9.0)).epsilon(1e-15));

    const ProblemSpec spec{kDw2, 0.0, -10.0, {1.0, 1.0}};
    const auto at_launch = dw_state(launch(spec), kDw2, dw_c0(kDw2, spec.initial));
    CHECK(at_launch.bound_ok);

    const auto sol = run(spec, 100.0);
    CHECK(sol.traj.termination == ode::Termination::ReachedTMax);
    const auto rep = dw_apriori_monitor(sol, true);
    CHECK(rep.all_ok());
    CHECK(rep.series.size() == sol.size());
    CHECK(rep.qdot_violations == 0);
    CHECK(rep.key_estimate_violations == 0);
    CHECK(rep.kahler_samples == 0);
}

TEST_CASE("Kahler locus drift") {
    const DancerWangAnsatz kahler{{{2, 2, -2, false}}};
    const auto sol = run(ProblemSpec{kahler, 0.0, -1.0, {1.0}}, 100.0, true, 1e-12);
    const auto rep = dw_apriori_monitor(sol);
    CHECK(rep.kahler_samples == sol.size());
    CHECK(rep.max_kahler_residual <= 1e-6);
}

TEST_CASE("LPP window") {
    const LuPagePopeAnsatz a{2, 2, 1, 3};
    CHECK(lpp_omega_bound(a) == doctest::Approx(2.0).epsilon(1e-15));
    const auto sol = run(ProblemSpec{a, 0.0, -1.0, {1.0, 1.0}}, 100.0);
    CHECK(lpp_monitor(sol).violations == 0);
    CHECK(classify_completeness(sol).kind == VerdictKind::NumericallyComplete);
}

TEST_CASE("scalar curvature stays below the summand budget") {
    for (const auto& spec : {ProblemSpec{kSp, 0.0, -10.0, {1.0}}, ProblemSpec{kDw2, 1.0, -1.0, {1.0, 1.0}},
                             ProblemSpec{LuPagePopeAnsatz{2, 2, 1, 3}, 0.0, -1.0, {1.0, 1.0}}}) {
        const auto rep = scalar_curvature_bound(run(spec, 20.0, false));
        CHECK(rep.violations == 0);
    }
}

TEST_CASE("verdicts") {
    const auto complete = classify_completeness(run(ProblemSpec{kSp, 0.0, -10.0, {1.0}}, 100.0));
    CHECK(complete.kind == VerdictKind::NumericallyComplete);
    CHECK(complete.text().find("not a proof") != std::string::npos);

    const auto no_window = classify_completeness(run(ProblemSpec{TwoSummandsAnsatz{3, 4, 6.0, 2.0, 1.0, true}, 0.0, 0.0, {1.0}}, 20.0));
    CHECK(no_window.kind != VerdictKind::NumericallyComplete);

    const auto exits = classify_completeness(run(ProblemSpec{kDw2, 0.0, -1.0, {1.0, 1.0}}, 100.0));
    CHECK(exits.kind == VerdictKind::InvariantSetExit);
    REQUIRE(exits.t_star);
    CHECK(*exits.t_star > 0.0);

    auto forged = run(ProblemSpec{kDw2, 0.0, -10.0, {1.0, 1.0}}, 1.0);
    forged.traj.termination = ode::Termination::Event;
    forged.traj.event_name = kEventMetricDegenerate;
    forged.traj.event_t = 0.75;
    const auto degenerate = classify_completeness(forged);
    CHECK(degenerate.kind == VerdictKind::MetricDegenerate);
    CHECK(*degenerate.t_star == 0.75);

    CHECK(parse_verdict("invariant_set_exit") == VerdictKind::InvariantSetExit);
    CHECK_THROWS(parse_verdict("complete"));
}

TEST_CASE("comparison ODE") {
    CHECK(comparison_ode_closed_form(2.0, 0.0, 0.0, 1.0) == doctest::Approx(-1.523188).epsilon(1e-6));
    CHECK(comparison_ode_closed_form(3.0, 0.0, 0.7, 0.7) == 0.0);
    CHECK_THROWS(comparison_ode_closed_form(2.0, -2.0, 0.0, 1.0));
    CHECK_THROWS(comparison_ode_closed_form(0.0, 0.0, 0.0, 1.0));
    for (double y : {0.0, -0.5, -1.9}) {
        double prev = comparison_ode_closed_form(2.0, y, 0.0, 0.0);
        for (double s = 0.1; s <= 5.0; s += 0.1) {
            const double v = comparison_ode_closed_form(2.0, y, 0.0, s);
            CHECK(v < prev);
            prev = v;
        }
    }
    // the closed form solves y' = -a + y^2/2
    for (double s : {0.3, 1.1, 2.5}) {
        const double h = 1e-5;
        const double y = comparison_ode_closed_form(1.5, -0.4, 0.2, s);
        const double dy = (comparison_ode_closed_form(1.5, -0.4, 0.2, s + h) -
                           comparison_ode_closed_form(1.5, -0.4, 0.2, s - h)) / (2.0 * h);
        CHECK(dy == doctest::Approx(-1.5 + 0.5 * y * y).epsilon(1e-8));
    }
}

TEST_CASE("comparison ODE threshold") {
    for (double c : {0.5, 2.0, 10.0}) {
        for (double s0 : {0.25, 1.0, 3.0}) {
            const double a0 = comparison_ode_threshold(c, s0);
            CHECK(-comparison_ode_closed_form(a0, 0.0, 0.0, s0) == doctest::Approx(c).epsilon(1e-10));
            for (double f : {1.001, 1.5, 4.0, 100.0}) CHECK(-comparison_ode_closed_form(a0 * f, 0.0, 0.0, s0) >= c);
            CHECK(-comparison_ode_closed_form(a0 * 0.999, 0.0, 0.0, s0) < c);
        }
    }
    CHECK_THROWS(comparison_ode_threshold(0.0, 1.0));
}

TEST_CASE("growth probe") {
    const ProblemSpec family{kCircle, 0.0, -1.0, {1.0}};
    GrowthProbeOptions o;
    o.C_min = -1e3;
    o.C_max = -1e-6;
    o.jobs = 4;

    const auto five = growth_probe(family, 5.0, 0.5, o);
    REQUIRE(five.found);
    CHECK(five.monotone);
    CHECK(five.empirical_C0 < 0.0);
    CHECK(std::abs(five.empirical_C0 - five.bracket_other) <= 0.01 * std::abs(five.empirical_C0) + 1e-15);
    CHECK(five.empirical_udd0 == doctest::Approx(five.empirical_C0 / 2.0));
    REQUIRE(five.c_star);
    CHECK(*five.c_star > 0.0);
    for (std::size_t i = 1; i < five.samples.size(); ++i) CHECK(five.samples[i - 1].C <= five.samples[i].C);

    const auto ten = growth_probe(family, 10.0, 0.5, o);
    REQUIRE(ten.found);
    CHECK(std::abs(ten.empirical_C0) >= std::abs(five.empirical_C0));

    const auto tiny = growth_probe(family, 1e-4, 0.5, o);
    REQUIRE(tiny.found);
    CHECK(std::abs(tiny.empirical_C0) <= 1e-2);

    o.C_min = -10.0;
    const auto none = growth_probe(family, 1e3, 0.5, o);
    CHECK_FALSE(none.found);
    CHECK(none.message == "no admissible C in range");

    const auto sp = growth_probe(ProblemSpec{kSp, 0.0, -1.0, {1.0}}, 1.0, 0.5, GrowthProbeOptions{-1e3, -1e-6});
    CHECK(sp.found);
    CHECK_FALSE(sp.c_star);

    CHECK_THROWS(growth_probe(family, -1.0, 0.5, o));
    CHECK_THROWS(growth_probe(family, 1.0, 1e-6, o));
}

TEST_CASE("reports serialize with neutral check labels") {
    const auto sol = run(ProblemSpec{kSp, 0.0, -10.0, {1.0}}, 10.0);
    for (const auto& j : {to_json(potential_report(sol)), to_json(asymptote_check(sol)), to_json(conservation_report(sol)),
                          to_json(locus_report(sol)), to_json(two_summands_omega_monitor(sol)),
                          to_json(classify_completeness(sol))}) {
        CHECK(j.is_object());
    }
    CHECK(to_json(two_summands_roots(kSp)).contains("check"));
}
