#include <doctest.h>

#include "support/corpus.hpp"

using namespace relsub;

namespace {

// brute-force nearest distance over a dense sample of the set
double grid_distance(const ClosedSet& s, const Vec& x, double span) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& p : sample_in_ball(s, Vec::zero(s.dim()), span, 81))
        best = std::min(best, norm(p - x));
    return best;
}

}  // namespace

TEST_SUITE("sets") {
    TEST_CASE("contains") {
        CHECK(contains(corpus::iset("[0, inf)"), Vec(0.0), 0.0));
        CHECK(!contains(corpus::iset("[-0.5, 0]"), Vec(0.1), 1e-9));
        ClosedSet seg = ClosedSet::segment(Vec(0, 0), Vec(1, 1));
        CHECK(contains(seg, Vec(0.5, 0.5), 1e-12));
        CHECK(!contains(seg, Vec(0.5, 0.6), 1e-3));
    }

    TEST_CASE("project basics") {
        CHECK(project(corpus::iset("[0, 1]"), Vec(2.0))[0] == 1.0);
        Vec p = project(ClosedSet::box(Vec(0, 0), Vec(1, 1)), Vec(2, -1));
        CHECK(p == Vec(1, 0));
        Vec q = project(ClosedSet::segment(Vec(0, 0), Vec(2, 0)), Vec(1, 5));
        CHECK(q == Vec(1, 0));
        CHECK_THROWS_AS(project(ClosedSet::finite_union({corpus::iset("[0, 1]")}), Vec(0.5)),
                        std::invalid_argument);
    }

    TEST_CASE("polytope projection agrees with a grid oracle") {
        // triangle x >= 0, y >= 0, x + y <= 1
        ClosedSet tri = ClosedSet::polytope(
            {Vec(-1.0, 0.0), Vec(0.0, -1.0), Vec(1.0, 1.0)}, {0.0, 0.0, 1.0});
        std::uint64_t s = 23;
        for (int it = 0; it < 40; ++it) {
            Vec x(corpus::uniform(s, -2, 2), corpus::uniform(s, -2, 2));
            Vec y = project(tri, x);
            CHECK(contains(tri, y, 1e-7));
            CHECK(norm(y - x) <= grid_distance(tri, x, 2.0) + 0.05);
        }
    }

    TEST_CASE("project is idempotent and nonexpansive") {
        std::uint64_t s = 29;
        ClosedSet box = ClosedSet::box(Vec(-1, -1), Vec(1, 2));
        ClosedSet seg = ClosedSet::segment(Vec(0, 0), Vec(1, 3));
        for (const ClosedSet& cs : {box, seg}) {
            for (int it = 0; it < 50; ++it) {
                Vec x(corpus::uniform(s, -4, 4), corpus::uniform(s, -4, 4));
                Vec y(corpus::uniform(s, -4, 4), corpus::uniform(s, -4, 4));
                Vec px = project(cs, x), py = project(cs, y);
                CHECK(norm(project(cs, px) - px) <= 1e-9);
                CHECK(norm(px - py) <= norm(x - y) + 1e-9);
            }
        }
    }

    TEST_CASE("1-D tangent cones") {
        CHECK(tangent_cone(corpus::iset("[0, inf)"), Vec(0.0)).line ==
              IntervalSet(Interval::ray_ge(0)));
        CHECK(tangent_cone(corpus::iset("[-0.5, 0]"), Vec(0.0)).line ==
              IntervalSet(Interval::ray_le(0)));
        CHECK(tangent_cone(corpus::iset("[-0.5, 0]"), Vec(-0.25)).line == IntervalSet::all());
        CHECK(tangent_cone(corpus::iset("{0}"), Vec(0.0)).line == IntervalSet::point(0));
        CHECK_THROWS_AS(tangent_cone(corpus::iset("[0, 1]"), Vec(2.0)), std::domain_error);
    }

    TEST_CASE("union tangent cone uses only members containing the point") {
        ClosedSet u = ClosedSet::finite_union({corpus::iset("[-1, 0]"), corpus::iset("[0, 1]"),
                                               corpus::iset("[5, 6]")});
        ConeRep c = tangent_cone(u, Vec(0.0));
        CHECK(c.line == IntervalSet::all());
        ConeRep c2 = tangent_cone(u, Vec(5.0));
        CHECK(c2.line == IntervalSet(Interval::ray_ge(0)));
    }

    TEST_CASE("cone axioms hold for sampled members") {
        ClosedSet box = ClosedSet::box(Vec(0, 0), Vec(1, 1));
        ConeRep k = tangent_cone(box, Vec(0.0, 0.0));
        CHECK(k.contains(Vec(0.0, 0.0)));
        std::uint64_t s = 31;
        for (int it = 0; it < 50; ++it) {
            Vec v(corpus::uniform(s, 0, 2), corpus::uniform(s, 0, 2));
            REQUIRE(k.contains(v));
            for (double t : {0.0, 0.5, 3.0}) CHECK(k.contains(t * v));
        }
        CHECK(!k.contains(Vec(-0.1, 0.5)));
    }

    TEST_CASE("tangent cone matches the definitional quotient") {
        // sampled v in the cone: dist(x + t v, S)/t -> 0; far-out v stay away
        struct Case {
            ClosedSet s;
            Vec x;
            Vec inside;
            Vec outside;
        };
        std::vector<Case> cases;
        cases.push_back({corpus::iset("[0, inf)"), Vec(0.0), Vec(1.0), Vec(-1.0)});
        cases.push_back({ClosedSet::box(Vec(0, 0), Vec(1, 1)), Vec(0, 0), Vec(0.6, 0.8),
                         Vec(-0.6, 0.8)});
        cases.push_back({ClosedSet::segment(Vec(0, 0), Vec(1, 1)), Vec(0, 0),
                         normalized(Vec(1, 1)), normalized(Vec(1, -1))});
        for (const auto& c : cases) {
            ConeRep k = tangent_cone(c.s, c.x);
            REQUIRE(k.contains(c.inside, 1e-9));
            REQUIRE(!k.contains(c.outside, 0.1));
            double q_in = 0, q_out = std::numeric_limits<double>::infinity();
            for (int j = 1; j <= 20; ++j) {
                double t = std::pow(0.5, j);
                q_in = distance(c.s, c.x + t * c.inside) / t;
                q_out = std::min(q_out, distance(c.s, c.x + t * c.outside) / t);
            }
            CHECK(q_in <= 1e-6);
            CHECK(q_out > 0.05);
        }
    }

    TEST_CASE("eps normal membership") {
        ClosedSet ray = corpus::iset("[0, inf)");
        CHECK(eps_normal_contains(ray, Vec(0.0), Vec(-1.0), 0.0, 1e-9).is_in());
        CHECK(eps_normal_contains(ray, Vec(0.0), Vec(1.0), 0.5, 1e-9).is_out());
        CHECK(eps_normal_contains(ray, Vec(0.0), Vec(0.0), 0.0, 1e-9).is_in());
        ClosedSet box = ClosedSet::box(Vec(0, 0), Vec(1, 1));
        CHECK(eps_normal_contains(box, Vec(0, 0), Vec(0, 0), 0.0, 1e-9).is_in());
        CHECK(eps_normal_contains(box, Vec(0, 0), Vec(-2, -3), 0.0, 1e-9).is_in());
        CHECK(eps_normal_contains(box, Vec(0, 0), Vec(1, -1), 0.5, 1e-9).is_out());
        CHECK_THROWS_AS(eps_normal_contains(box, Vec(0, 0), Vec(1, 0), -1.0, 1e-9),
                        std::invalid_argument);
    }

    TEST_CASE("eps normal monotone in eps") {
        std::uint64_t s = 37;
        ClosedSet box = ClosedSet::box(Vec(0, 0), Vec(1, 1));
        for (int it = 0; it < 60; ++it) {
            Vec xs(corpus::uniform(s, -2, 2), corpus::uniform(s, -2, 2));
            bool prev_in = false;
            for (double eps : {0.0, 0.25, 0.5, 1.0, 2.0}) {
                Trit t = eps_normal_contains(box, Vec(0, 0), xs, eps, 1e-9);
                if (prev_in) CHECK(t.is_in());
                prev_in = t.is_in();
            }
        }
    }

    TEST_CASE("convex eps-normal contains the inflated normal cone") {
        // n in N(x, S), ||b|| <= 1  =>  n + eps b passes at level eps
        std::uint64_t s = 41;
        ClosedSet box = ClosedSet::box(Vec(0, 0), Vec(1, 1));
        Vec corner(0.0, 0.0);
        ConeRep t = tangent_cone(box, corner);
        for (int it = 0; it < 60; ++it) {
            Vec z(corpus::uniform(s, -3, 3), corpus::uniform(s, -3, 3));
            Vec n = z - project_onto_cone(t.cones.front(), z, 2);
            double ang = corpus::uniform(s, 0, 6.283185307179586);
            Vec b(std::cos(ang), std::sin(ang));
            for (double eps : {0.1, 0.5, 1.0}) {
                CHECK(eps_normal_contains(box, corner, n + eps * b, eps, 1e-9).is_in());
            }
        }
    }

    TEST_CASE("duality map is the identity") {
        CHECK(duality_map(Vec(1, 2)) == Vec(1, 2));
        CHECK(duality_map(Vec::zero(2)) == Vec::zero(2));
        CHECK(duality_map(Vec(-3.0)) == Vec(-3.0));
    }

    TEST_CASE("1-D views of other variants") {
        CHECK(ClosedSet::box(Vec(0.0), Vec(1.0)).as_interval_set() ==
              IntervalSet(Interval::closed(0, 1)));
        CHECK(ClosedSet::finite_union({corpus::iset("[0, 1]"), corpus::iset("[2, 3]")})
                  .as_interval_set()
                  .size() == 2);
    }
}
