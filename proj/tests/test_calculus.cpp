#include <doctest.h>

#include "support/corpus.hpp"

using namespace relsub;

TEST_SUITE("calculus") {
    TEST_CASE("scalar rule on the worked examples") {
        RuleReport id = scalar_rule_check(corpus::cube(), corpus::box01(), 0.5, 1.0, 0.3);
        CHECK(id.conclusion == RuleVerdict::holds);

        // doubling -|x| doubles its limiting set {1} -> {2}
        PiecewiseFunc doubled = scale_func(2.0, corpus::neg_abs());
        CHECK(limiting_relative(doubled, corpus::e2_omega(), 0.0).set == IntervalSet::point(2.0));
        RuleReport r2 = scalar_rule_check(corpus::neg_abs(), corpus::e2_omega(), 0.0, 2.0, 0.0);
        CHECK(r2.conclusion == RuleVerdict::holds);

        RuleReport r3 = scalar_rule_check(corpus::e1_f(), corpus::e1_omega(), 0.0, 3.0, 0.3);
        CHECK(r3.conclusion == RuleVerdict::holds);
        for (const auto& [name, value] : r3.witnesses)
            if (name.rfind("lambda", 0) == 0 || name == "D(lambda f)") CHECK(value == "[0, inf)");

        CHECK_THROWS_AS(scalar_rule_check(corpus::cube(), corpus::box01(), 0.5, -1.0, 0.0),
                        std::invalid_argument);
    }

    TEST_CASE("scalar sandwich and equalities over the corpus") {
        for (const auto& t : corpus::oracle_corpus()) {
            for (double lam : {0.5, 1.0, 2.0, 10.0}) {
                for (double eps : {0.0, 0.1, 1.0}) {
                    RuleReport r = scalar_rule_check(t.f, t.omega, t.xbar, lam, eps);
                    CHECK_MESSAGE(r.conclusion == RuleVerdict::holds, t.name, " lam=", lam,
                                  " eps=", eps);
                }
            }
        }
    }

    TEST_CASE("norm bound reports") {
        RuleReport a = lipschitz_bound_check(corpus::neg_abs(), corpus::e2_omega(), -0.5, 0.0,
                                             0.25);
        CHECK(a.conclusion == RuleVerdict::holds);

        RuleReport b = lipschitz_bound_check(corpus::cube(), corpus::box01(), 0.5, 0.1, 0.25);
        CHECK(b.conclusion == RuleVerdict::holds);

        RuleReport c = lipschitz_bound_check(corpus::zero(), corpus::sym1(), 0.0, 0.0, 0.25);
        CHECK(c.conclusion == RuleVerdict::holds);

        RuleReport d = lipschitz_bound_check(corpus::e1_f(), corpus::e1_omega(), 0.0, 0.0, 0.25);
        CHECK(d.conclusion == RuleVerdict::inconclusive);
    }

    TEST_CASE("inclusion chain reports") {
        CHECK(inclusion_chain_check(corpus::cube(), corpus::box01(), 0.0).conclusion ==
              RuleVerdict::holds);
        RuleReport e2 = inclusion_chain_check(corpus::neg_abs(), corpus::e2_omega(), 0.0);
        CHECK(e2.conclusion == RuleVerdict::holds);
        CHECK(e2.witnesses[0].second == "{}");
        CHECK(e2.witnesses[1].second == "{1}");
        CHECK(e2.witnesses[2].second == "[1, inf)");
        CHECK(inclusion_chain_check(corpus::e1_f(), corpus::e1_omega(), 0.0).conclusion ==
              RuleVerdict::holds);
    }

    TEST_CASE("sum rule on the worked pairs") {
        RuleReport e4 = sum_rule_check(corpus::exp_f1(), corpus::neg_abs(), corpus::e2_omega(),
                                       0.0);
        REQUIRE(e4.conclusion == RuleVerdict::holds);

        RuleReport zero = sum_rule_check(corpus::cube(), corpus::zero(), corpus::box01(), 0.5);
        CHECK(zero.conclusion == RuleVerdict::holds);

        RuleReport mix = sum_rule_check(corpus::cube(), corpus::neg_abs(), corpus::box01(), 0.5);
        CHECK(mix.conclusion == RuleVerdict::holds);
    }

    TEST_CASE("sum rule goes inconclusive when a hypothesis fails") {
        RuleReport bad = sum_rule_check(corpus::recip_f1(), corpus::bad_f2(), corpus::c_half(),
                                        0.0);
        CHECK(bad.conclusion == RuleVerdict::inconclusive);
        bool lsc_failed = false;
        for (const auto& h : bad.hypotheses)
            if (!h.passed && h.name.find("lsc") != std::string::npos) lsc_failed = true;
        CHECK(lsc_failed);
    }

    TEST_CASE("sum rule across hypothesis-satisfying corpus pairs") {
        struct Pair {
            PiecewiseFunc f1, f2;
            ClosedSet omega;
            double xbar;
        };
        std::vector<Pair> pairs;
        pairs.push_back({corpus::exp_f1(), corpus::neg_abs(), corpus::e2_omega(), 0.0});
        pairs.push_back({corpus::recip_f1(), corpus::neg_abs(), corpus::c_half(), 0.0});
        pairs.push_back({corpus::cube(), corpus::neg_abs(), corpus::box01(), 0.5});
        pairs.push_back({corpus::cube(), corpus::zero(), corpus::box01(), 0.0});
        pairs.push_back({corpus::affine2(), corpus::sq(), corpus::sym1(), 0.25});
        pairs.push_back({corpus::abs_f(), corpus::exp_f1(), corpus::sym1(), 0.0});
        pairs.push_back({corpus::neg_abs(), corpus::neg_abs(), corpus::e2_omega(), -0.3});
        int holds = 0;
        for (const auto& p : pairs) {
            RuleReport r = sum_rule_check(p.f1, p.f2, p.omega, p.xbar);
            CHECK(r.conclusion != RuleVerdict::fails);
            if (r.conclusion == RuleVerdict::holds) ++holds;
        }
        CHECK(holds >= 6);
    }

    TEST_CASE("fuzzy sum certificates") {
        // exact additivity at a smooth interior point
        FuzzyCertificate c1 =
            fuzzy_sum_search(corpus::cube(), corpus::zero(), corpus::box01(), 0.5, 0.25, 0.0, 0.1);
        REQUIRE(c1.valid);
        CHECK(c1.gamma_bar <= 1e-9);

        FuzzyCertificate c2 = fuzzy_sum_search(corpus::neg_abs(), corpus::neg_abs(),
                                               corpus::e2_omega(), -0.3, 2.0, 0.0, 0.1);
        REQUIRE(c2.valid);
        CHECK(c2.gamma_bar <= 1e-9);
        CHECK(c2.s1 == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(c2.s2 == doctest::Approx(1.0).epsilon(1e-6));

        // the precondition itself is the test: at 0 the sum's regular set is
        // empty, so 0 is not an eps-subgradient and the search is rejected
        CHECK_THROWS_AS(fuzzy_sum_search(corpus::exp_f1(), corpus::neg_abs(), corpus::e2_omega(),
                                         0.0, 0.0, 0.0, 0.1),
                        std::invalid_argument);
    }

    TEST_CASE("fuzzy residual trend is nonincreasing on smooth pairs") {
        struct Pair {
            PiecewiseFunc f1, f2;
            ClosedSet omega;
            double xbar, xstar;
        };
        std::vector<Pair> pairs;
        pairs.push_back({corpus::cube(), corpus::zero(), corpus::box01(), 0.5, 0.25});
        pairs.push_back({corpus::neg_abs(), corpus::neg_abs(), corpus::e2_omega(), -0.3, 2.0});
        pairs.push_back({corpus::affine2(), corpus::sq(), corpus::sym1(), 0.25, 2.5});
        for (const auto& p : pairs) {
            FuzzyCertificate c =
                fuzzy_sum_search(p.f1, p.f2, p.omega, p.xbar, p.xstar, 0.0, 0.2);
            REQUIRE(c.valid);
            REQUIRE(c.eta_trend.size() == 4);
            for (std::size_t i = 0; i + 1 < c.eta_trend.size(); ++i)
                CHECK(c.eta_trend[i + 1].second <= c.eta_trend[i].second + 1e-6);
        }
    }

    TEST_CASE("certified modulus") {
        ExtReal a = certified_lipschitz_modulus(corpus::cube(), corpus::box01(), 0.5, 2.0);
        REQUIRE(a.is_finite());
        CHECK(a.raw() == doctest::Approx(1.0));
        CHECK(certified_lipschitz_modulus(corpus::e1_f(), corpus::e1_omega(), 0.0, 0.5)
                  .is_pos_inf());
        CHECK(certified_lipschitz_modulus(corpus::pw_jump(), corpus::sym1(), 0.0, 0.5)
                  .is_pos_inf());
    }
}
