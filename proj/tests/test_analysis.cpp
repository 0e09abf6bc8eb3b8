#include <doctest.h>

#include "support/corpus.hpp"

using namespace relsub;

TEST_SUITE("optimality") {
    TEST_CASE("Fermat rule on the worked examples") {
        OptimalityVerdict e1 =
            fermat_check(corpus::e1_f(), corpus::e1_omega(), 0.0, {0.0, 0.1, 1.0});
        CHECK(e1.status == OptimalityStatus::holds);

        OptimalityVerdict e2 =
            fermat_check(corpus::neg_abs(), corpus::e2_omega(), 0.0, {0.0});
        CHECK(e2.status == OptimalityStatus::violated);
        CHECK(e2.non_optimality_certificate);
        CHECK(e2.gap == doctest::Approx(1.0));

        OptimalityVerdict cst = fermat_check(corpus::zero(), corpus::sym1(), 0.3, {0.0, 1.0});
        CHECK(cst.status == OptimalityStatus::holds);
    }

    TEST_CASE("sum optimality on the worked examples") {
        OptimalityVerdict e3 =
            sum_optimality_check(corpus::recip_f1(), corpus::neg_abs(), corpus::c_half(), 0.0);
        CHECK(e3.status == OptimalityStatus::holds);

        OptimalityVerdict e4 =
            sum_optimality_check(corpus::exp_f1(), corpus::neg_abs(), corpus::e2_omega(), 0.0);
        CHECK(e4.status == OptimalityStatus::violated);
        CHECK(e4.non_optimality_certificate);

        OptimalityVerdict bad =
            sum_optimality_check(corpus::recip_f1(), corpus::bad_f2(), corpus::c_half(), 0.0);
        CHECK(bad.status == OptimalityStatus::inconclusive);
        bool cited = false;
        for (const auto& n : bad.notes)
            if (n.find("lsc") != std::string::npos) cited = true;
        CHECK(cited);
    }

    TEST_CASE("local minimizer scan") {
        auto cube_min = local_min_scan(corpus::cube(), corpus::box01(), 512);
        REQUIRE(cube_min.size() == 1);
        CHECK(cube_min[0].x == doctest::Approx(0.0).epsilon(1e-6));

        auto e3_min = local_min_scan(add_funcs(corpus::recip_f1(), corpus::neg_abs()),
                                     corpus::c_half(), 512);
        REQUIRE(!e3_min.empty());
        CHECK(e3_min.back().x == doctest::Approx(0.0).epsilon(1e-6));

        auto na = local_min_scan(corpus::neg_abs(), corpus::sym1(), 512);
        REQUIRE(na.size() == 2);
        CHECK(na.front().x == doctest::Approx(-1.0));
        CHECK(na.back().x == doctest::Approx(1.0));
    }

    TEST_CASE("approximate optimality certificates") {
        for (double eta : {1e-1, 1e-2, 1e-3}) {
            FuzzyCertificate c = approx_optimality_search(corpus::recip_f1(), corpus::neg_abs(),
                                                          corpus::c_half(), 0.0, eta);
            REQUIRE_MESSAGE(c.valid, "eta=", eta);
            CHECK(c.gamma_bar <= 1e-6);
            ExtReal ell = certified_lipschitz_modulus(corpus::recip_f1(), corpus::c_half(), 0.0,
                                                      2.0 * eta);
            CHECK(c.eta1 < 4.0 * eta * (ell.raw() + 1.0));
        }
        FuzzyCertificate c2 =
            approx_optimality_search(corpus::cube(), corpus::zero(), corpus::box01(), 0.0, 1e-2);
        REQUIRE(c2.valid);
        CHECK(std::abs(c2.s1) <= 0.05);

        FuzzyCertificate c3 =
            approx_optimality_search(corpus::zero(), corpus::zero(), corpus::sym1(), 0.0, 1e-2);
        REQUIRE(c3.valid);
        CHECK(c3.gamma_bar == 0.0);

        CHECK_THROWS_AS(approx_optimality_search(corpus::exp_f1(), corpus::neg_abs(),
                                                 corpus::e2_omega(), 0.0, 1e-2),
                        std::domain_error);
    }

    TEST_CASE("Fermat necessity at every scanned minimizer in the corpus") {
        for (const auto& t : corpus::oracle_corpus()) {
            for (const LocalMin& m : local_min_scan(t.f, t.omega, 512)) {
                OptimalityVerdict v = fermat_check(t.f, t.omega, m.x, {0.0, 0.1, 1.0});
                CHECK_MESSAGE(v.status == OptimalityStatus::holds, t.name, " at ", m.x);
            }
        }
    }
}

TEST_SUITE("meanvalue") {
    TEST_CASE("cubic on the unit interval attains the equality case") {
        MeanValueWitness w = mean_value_witness(corpus::cube(), Vec(0.0), Vec(1.0));
        REQUIRE(w.valid);
        CHECK(w.arc_c == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-9));
        CHECK(w.equality_case);
        CHECK(w.pairing == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
        CHECK(w.equality_residual <= 1e-6);
        CHECK(w.ineq_residual >= -1e-9);
        CHECK(w.scaled_residual >= -1e-9);
    }

    TEST_CASE("indicator of the unit interval") {
        MeanValueWitness w = mean_value_witness(corpus::indicator01(), Vec(0.0), Vec(1.0));
        REQUIRE(w.valid);
        CHECK(w.arc_c < 1.0);
        CHECK(w.pairing >= -1e-9);
    }

    TEST_CASE("affine functions give equality at every point") {
        MeanValueWitness w = mean_value_witness(corpus::affine2(), Vec(0.0), Vec(1.0));
        REQUIRE(w.valid);
        CHECK(w.pairing == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(std::abs(w.pairing - w.delta_f) <= 1e-9);
    }

    TEST_CASE("witness exists on every relatively Lipschitz corpus segment") {
        Schedule sch;
        for (const auto& c : corpus::equivalence_corpus()) {
            MeanValueWitness w = mean_value_witness(c.f, Vec(c.a), Vec(c.b));
            REQUIRE_MESSAGE(w.valid, c.name);
            CHECK_MESSAGE(w.ineq_residual >= -1e-6, c.name);
            CHECK_MESSAGE(w.scaled_residual >= -1e-6, c.name);
            if (w.equality_case) CHECK_MESSAGE(w.equality_residual <= 1e-6, c.name);
        }
    }

    TEST_CASE("infinite endpoint values are rejected") {
        CHECK_THROWS_AS(mean_value_witness(corpus::e1_f(), Vec(0.0), Vec(1.0)),
                        std::domain_error);
    }
}

TEST_SUITE("equivalence") {
    TEST_CASE("convexity verdicts") {
        CHECK(convexity_check(corpus::cube(), Vec(0.0), Vec(1.0), 33, 1e-9).is_in());
        Trit t = convexity_check(corpus::neg_sq(), Vec(-1.0), Vec(1.0), 33, 1e-9);
        CHECK(t.is_out());
        CHECK(t.margin >= 0.2);  // midpoint violation is 1 up to banding
        CHECK(convexity_check(corpus::affine2(), Vec(0.0), Vec(1.0), 33, 1e-9).is_in());
    }

    TEST_CASE("monotonicity verdicts") {
        CHECK(monotonicity_check(SubdiffKind::limiting_plain, corpus::cube(), Vec(0.0), Vec(1.0),
                                 33, 1e-9)
                  .is_in());
        CHECK(monotonicity_check(SubdiffKind::limiting_plain, corpus::neg_sq(), Vec(-1.0),
                                 Vec(1.0), 33, 1e-9)
                  .is_out());
        CHECK(monotonicity_check(SubdiffKind::limiting_relative, corpus::zero(), Vec(-1.0),
                                 Vec(1.0), 33, 1e-9)
                  .is_in());
        CHECK(monotonicity_check(SubdiffKind::limiting_relative, corpus::abs_f(), Vec(-1.0),
                                 Vec(1.0), 33, 1e-9)
                  .is_in());
    }

    TEST_CASE("four-way equivalence across the segment corpus") {
        int agreements = 0;
        for (const auto& c : corpus::equivalence_corpus()) {
            RuleReport r = equivalence_report(c.f, Vec(c.a), Vec(c.b));
            REQUIRE_MESSAGE(r.conclusion == RuleVerdict::holds, c.name);
            REQUIRE(r.witnesses.size() >= 4);
            bool verdict = r.witnesses[0].second == "in";
            CHECK_MESSAGE(verdict == c.convex, c.name);
            for (int i = 1; i < 4; ++i) CHECK_MESSAGE((r.witnesses[i].second == "in") == verdict, c.name);
            ++agreements;
        }
        CHECK(agreements >= 12);
    }
}
