#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "relsub/interval_set.hpp"

using namespace relsub;

namespace {

std::uint64_t mix(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double rnd(std::uint64_t& s, double lo, double hi) {
    return lo + (hi - lo) * (mix(s) >> 11) * 0x1.0p-53;
}

Interval random_interval(std::uint64_t& s) {
    double a = rnd(s, -5, 5), b = rnd(s, -5, 5);
    if (a > b) std::swap(a, b);
    switch (mix(s) % 5) {
        case 0: return Interval::point(a);
        case 1: return Interval::ray_ge(a, mix(s) % 2);
        case 2: return Interval::ray_le(b, mix(s) % 2);
        case 3: return Interval::all();
        default:
            if (a == b) return Interval::point(a);
            return Interval::make(ExtReal(a), mix(s) % 2, ExtReal(b), mix(s) % 2);
    }
}

IntervalSet random_set(std::uint64_t& s) {
    std::vector<Interval> parts;
    std::size_t n = mix(s) % 4;
    for (std::size_t i = 0; i < n; ++i) parts.push_back(random_interval(s));
    return IntervalSet::canonicalize(std::move(parts));
}

}  // namespace

TEST_SUITE("extreal") {
    TEST_CASE("sum convention") {
        CHECK(ext_add(ExtReal::pos_inf(), ExtReal::neg_inf()) == ExtReal::pos_inf());
        CHECK(ext_add(ExtReal::neg_inf(), ExtReal::pos_inf()) == ExtReal::pos_inf());
        CHECK(ext_add(ExtReal(0.0), ExtReal(0.0)) == ExtReal(0.0));
        CHECK(ext_add(ExtReal(3.5), ExtReal::neg_inf()) == ExtReal::neg_inf());
        CHECK(ext_sub(ExtReal::pos_inf(), ExtReal::pos_inf()) == ExtReal::pos_inf());
    }

    TEST_CASE("commutative with identity 0 over all sign classes") {
        const ExtReal vals[] = {ExtReal::neg_inf(), ExtReal(-1.5), ExtReal(0.0), ExtReal(2.0),
                                ExtReal::pos_inf()};
        for (ExtReal a : vals)
            for (ExtReal b : vals) {
                CHECK(ext_add(a, b) == ext_add(b, a));
            }
        for (ExtReal a : vals) CHECK(ext_add(a, ExtReal(0.0)) == a);
    }
}

TEST_SUITE("interval_set") {
    TEST_CASE("canonicalize merges touching parts") {
        IntervalSet u = iset_union(IntervalSet(Interval::closed(0, 1)),
                                   IntervalSet(Interval::closed(1, 2)));
        CHECK(u == IntervalSet(Interval::closed(0, 2)));

        CHECK(iset_union(IntervalSet::empty(), IntervalSet(Interval::closed(-1, 0))) ==
              IntervalSet(Interval::closed(-1, 0)));

        IntervalSet halfopen(Interval::make(ExtReal(0.0), true, ExtReal(1.0), false));
        CHECK(iset_union(halfopen, IntervalSet::point(1.0)) == IntervalSet(Interval::closed(0, 1)));
    }

    TEST_CASE("canonicalize keeps genuinely separated parts") {
        IntervalSet a(Interval::make(ExtReal(0.0), true, ExtReal(1.0), false));
        IntervalSet b(Interval::make(ExtReal(1.0), false, ExtReal(2.0), true));
        IntervalSet u = iset_union(a, b);
        CHECK(u.size() == 2);
        CHECK(!u.contains(1.0));
    }

    TEST_CASE("intersection endpoints") {
        CHECK(iset_intersect(IntervalSet(Interval::ray_ge(-1)), IntervalSet(Interval::ray_le(0))) ==
              IntervalSet(Interval::closed(-1, 0)));
        CHECK(iset_intersect(IntervalSet(Interval::ray_ge(1)), IntervalSet(Interval::ray_le(0)))
                  .is_empty());
    }

    TEST_CASE("canonicalization is idempotent on random lists") {
        std::uint64_t s = 7;
        for (int it = 0; it < 200; ++it) {
            IntervalSet a = random_set(s);
            CHECK(IntervalSet::canonicalize(a.parts()) == a);
        }
    }

    TEST_CASE("membership coherence of union and intersection") {
        std::uint64_t s = 11;
        for (int it = 0; it < 200; ++it) {
            IntervalSet a = random_set(s), b = random_set(s);
            IntervalSet u = iset_union(a, b), n = iset_intersect(a, b);
            for (int k = 0; k < 20; ++k) {
                double x = rnd(s, -6, 6);
                CHECK(u.contains(x) == (a.contains(x) || b.contains(x)));
                CHECK(n.contains(x) == (a.contains(x) && b.contains(x)));
            }
            CHECK(iset_intersect(a, a) == a);
        }
    }

    TEST_CASE("complement and difference") {
        std::uint64_t s = 13;
        for (int it = 0; it < 100; ++it) {
            IntervalSet a = random_set(s);
            IntervalSet c = iset_complement(a);
            for (int k = 0; k < 20; ++k) {
                double x = rnd(s, -6, 6);
                CHECK(c.contains(x) == !a.contains(x));
            }
            CHECK(iset_difference(a, a).is_empty());
        }
    }

    TEST_CASE("affine images") {
        CHECK(iset_affine(IntervalSet(Interval::ray_ge(0)), 2.0, 0.0) ==
              IntervalSet(Interval::ray_ge(0)));
        CHECK(iset_affine(IntervalSet(Interval::closed(-1, 0)), -1.0, 0.0) ==
              IntervalSet(Interval::closed(0, 1)));
        CHECK(iset_affine(IntervalSet(Interval::closed(1, 2)), 3.0, 1.0) ==
              IntervalSet(Interval::closed(4, 7)));
        CHECK_THROWS_AS(iset_affine(IntervalSet::all(), 0.0, 1.0), std::invalid_argument);
    }

    TEST_CASE("affine roundtrip") {
        std::uint64_t s = 17;
        for (int it = 0; it < 100; ++it) {
            IntervalSet a = random_set(s);
            for (double lam : {0.5, -2.0, 4.0}) {
                IntervalSet b = iset_affine(iset_affine(a, lam, 0.0), 1.0 / lam, 0.0);
                for (int k = 0; k < 10; ++k) {
                    double x = rnd(s, -6, 6);
                    CHECK(a.contains(x) == b.contains(x));
                }
            }
        }
    }

    TEST_CASE("minkowski sums") {
        CHECK(iset_minkowski_sum(IntervalSet(Interval::closed(0, 1)),
                                 IntervalSet(Interval::closed(2, 3))) ==
              IntervalSet(Interval::closed(2, 4)));
        CHECK(iset_minkowski_sum(IntervalSet(Interval::ray_le(0)), IntervalSet(Interval::ray_ge(1)))
                  == IntervalSet::all());
        CHECK(iset_minkowski_sum(IntervalSet::empty(), IntervalSet::all()).is_empty());
        CHECK(iset_minkowski_sum(IntervalSet::point(-1), IntervalSet::point(1)) ==
              IntervalSet::point(0));
    }

    TEST_CASE("hausdorff clipped") {
        CHECK(iset_hausdorff_clipped(IntervalSet(Interval::closed(0, 1)),
                                     IntervalSet(Interval::closed(0, 1.5)), 10) == doctest::Approx(0.5));
        CHECK(iset_hausdorff_clipped(IntervalSet(Interval::ray_ge(0)),
                                     IntervalSet(Interval::closed(0, 100)), 10) ==
              doctest::Approx(0.0));
        CHECK(iset_hausdorff_clipped(IntervalSet::empty(), IntervalSet::empty(), 10) == 0.0);
        CHECK(iset_hausdorff_clipped(IntervalSet::empty(), IntervalSet::point(0), 10) ==
              std::numeric_limits<double>::infinity());
    }
}

TEST_SUITE("outer_limit") {
    TEST_CASE("convergent singletons hit the limit exactly") {
        std::vector<std::pair<int, IntervalSet>> seq;
        for (int k = 1; k <= 10; ++k) seq.emplace_back(k, IntervalSet::point(1.0 - 1.0 / k));
        OuterLimitResult r = iset_outer_limit(seq);
        REQUIRE(r.converged);
        CHECK(r.set == IntervalSet::point(1.0));
    }

    TEST_CASE("constant sequence of rays") {
        std::vector<std::pair<int, IntervalSet>> seq;
        for (int k = 1; k <= 6; ++k) seq.emplace_back(k, IntervalSet(Interval::ray_ge(0)));
        OuterLimitResult r = iset_outer_limit(seq);
        REQUIRE(r.converged);
        CHECK(r.set == IntervalSet(Interval::ray_ge(0)));
    }

    TEST_CASE("shrinking intervals converge to the exact hull") {
        std::vector<std::pair<int, IntervalSet>> seq;
        for (int k = 1; k <= 12; ++k)
            seq.emplace_back(k, IntervalSet(Interval::closed(-1.0 / k, 1.0 + 1.0 / k)));
        OuterLimitResult r = iset_outer_limit(seq);
        REQUIRE(r.converged);
        CHECK(r.set == IntervalSet(Interval::closed(0.0, 1.0)));
    }

    TEST_CASE("geometric decay converges via extrapolation") {
        std::vector<std::pair<int, IntervalSet>> seq;
        for (int k = 1; k <= 10; ++k) {
            double e = std::pow(0.5, k);
            seq.emplace_back(k, IntervalSet(Interval::closed(2.0 - e, 2.0 + e)));
        }
        OuterLimitResult r = iset_outer_limit(seq);
        REQUIRE(r.converged);
        REQUIRE(r.set.size() == 1);
        CHECK(r.set.parts()[0].lo.raw() == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(r.set.parts()[0].hi.raw() == doctest::Approx(2.0).epsilon(1e-9));
    }

    TEST_CASE("oscillation is reported as inconclusive") {
        std::vector<std::pair<int, IntervalSet>> seq;
        for (int k = 1; k <= 10; ++k)
            seq.emplace_back(k, IntervalSet::point(k % 2 == 0 ? 1.0 : -1.0));
        OuterLimitResult r = iset_outer_limit(seq);
        CHECK(!r.converged);
        CHECK(!r.diagnostic.empty());
    }

    TEST_CASE("strictly increasing indices are required") {
        std::vector<std::pair<int, IntervalSet>> seq{{1, IntervalSet::point(0)},
                                                     {1, IntervalSet::point(0)}};
        CHECK_THROWS_AS(iset_outer_limit(seq), std::invalid_argument);
    }
}
