#include <doctest.h>

#include <cmath>

#include "slq/endpoint.hpp"
#include "slq/errors.hpp"
#include "slq/problem.hpp"

#include "helpers.hpp"

using namespace slq;
using slqtest::kPi;

TEST_SUITE_BEGIN("coeffs");

TEST_CASE("free problem is regular at both endpoints") {
    auto pr = slqtest::free_problem(0.0, kPi);
    CHECK(classify_endpoint(pr, EndpointSide::A).kind == EndpointKind::Regular);
    CHECK(classify_endpoint(pr, EndpointSide::B).kind == EndpointKind::Regular);
}

TEST_CASE("piecewise step coefficient merges breakpoints") {
    auto pr = slqtest::delta_problem();
    const auto bps = pr.breakpoints();
    REQUIRE(bps.size() == 3);
    CHECK(bps[0] == doctest::Approx(0.0));
    CHECK(bps[1] == doctest::Approx(kPi / 2));
    CHECK(bps[2] == doctest::Approx(kPi));
    CHECK(pr.s(kPi / 2 - 1e-9) == 0.0);
    CHECK(pr.s(kPi / 2) == 1.0);  // jump value belongs to the right piece
}

TEST_CASE("r <= 0 violates the hypothesis") {
    CHECK_THROWS_AS(Problem(0.0, 1.0, PiecewiseFn::constant(0, 1, 1.0),
                            PiecewiseFn::constant(0, 1, 0.0), PiecewiseFn::constant(0, 1, -1.0),
                            PiecewiseFn::constant(0, 1, 0.0)),
                    Error);
    try {
        Problem(0.0, 1.0, PiecewiseFn::constant(0, 1, 1.0), PiecewiseFn::constant(0, 1, 0.0),
                PiecewiseFn::constant(0, 1, -1.0), PiecewiseFn::constant(0, 1, 0.0));
    } catch (const Error& e) {
        CHECK(e.code() == "HypothesisViolation");
    }
}

TEST_CASE("p = 0 on a set violates the hypothesis") {
    CHECK_THROWS_AS(Problem(0.0, 1.0, PiecewiseFn::constant(0, 1, 0.0),
                            PiecewiseFn::constant(0, 1, 0.0), PiecewiseFn::constant(0, 1, 1.0),
                            PiecewiseFn::constant(0, 1, 0.0)),
                    Error);
}

TEST_CASE("non-integrable coefficient without singular flag is rejected") {
    // 1/p = 1/x^2 near 0
    auto mk = [](bool singular_a) {
        return Problem(0.0, 1.0, PiecewiseFn::from_expr(0, 1, parse_expr("x^2")),
                       PiecewiseFn::constant(0, 1, 0.0), PiecewiseFn::constant(0, 1, 1.0),
                       PiecewiseFn::constant(0, 1, 0.0), singular_a, false);
    };
    CHECK_THROWS_AS(mk(false), Error);
    CHECK_NOTHROW(mk(true));
}

TEST_CASE("quadrature closed forms") {
    auto pr = slqtest::free_problem(0.0, kPi);
    const double s2 = pr.quad([](double x) { return std::sin(x) * std::sin(x); }, 0.0, kPi);
    CHECK(s2 == doctest::Approx(kPi / 2).epsilon(1e-10));

    auto pr01 = slqtest::free_problem(0.0, 1.0);
    const double e2 = pr01.quad([](double t) { return std::exp(2.0 * t); }, 0.0, 1.0);
    CHECK(e2 == doctest::Approx((std::exp(2.0) - 1.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("quadrature splits at coefficient breakpoints") {
    auto pr = slqtest::delta_problem();  // s jumps at pi/2
    const double v = pr.quad([&](double x) { return pr.s(x); }, 0.0, kPi);
    CHECK(v == doctest::Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("quadrature additivity property") {
    auto pr = slqtest::smooth_problem();
    auto f = [&](double x) { return pr.q(x) * std::exp(x) + pr.s(x); };
    for (int i = 0; i < 10; ++i) {
        const double x0 = slqtest::uniform(0.0, 0.4);
        const double x1 = slqtest::uniform(0.6, 1.0);
        const double xm = slqtest::uniform(x0, x1);
        const double whole = pr.quad(f, x0, x1);
        const double parts = pr.quad(f, x0, xm) + pr.quad(f, xm, x1);
        CHECK(std::abs(whole - parts) <= 1e-10 * (1.0 + std::abs(whole)));
    }
}

TEST_CASE("table pieces interpolate linearly and add breakpoints") {
    Table t;
    t.xs = {0.0, 0.5, 1.0};
    t.ys = {1.0, 2.0, 1.5};
    PiecewiseFn f({Piece{0.0, 1.0, t}});
    CHECK(f(0.25) == doctest::Approx(1.5));
    CHECK(f(0.75) == doctest::Approx(1.75));
    CHECK(f.breakpoints().size() == 3);  // 0, 0.5 (interior sample), 1
}

TEST_CASE("problem JSON round trip") {
    const char* text = R"({
      "interval": [0.0, 3.141592653589793],
      "coefficients": {
        "p": [{"from": 0.0, "to": 3.141592653589793, "expr": "1"}],
        "q": [{"from": 0.0, "to": 1.5707963267948966, "expr": "0"},
               {"from": 1.5707963267948966, "to": 3.141592653589793, "expr": "-1"}],
        "r": [{"from": 0.0, "to": 3.141592653589793, "expr": "1"}],
        "s": [{"from": 0.0, "to": 1.5707963267948966, "expr": "0"},
               {"from": 1.5707963267948966, "to": 3.141592653589793, "expr": "1"}]
      },
      "singular": {"a": false, "b": false}
    })";
    auto pr = problem_from_json(text);
    CHECK(pr.a() == 0.0);
    CHECK(pr.b() == doctest::Approx(kPi));
    CHECK(pr.s(2.0) == 1.0);
    CHECK(pr.q(2.0) == -1.0);
    CHECK(pr.breakpoints().size() == 3);
}

TEST_CASE("bad problem files are precondition errors") {
    CHECK_THROWS_AS(problem_from_json("{"), Error);
    CHECK_THROWS_AS(problem_from_json(R"({"interval":[0,1]})"), Error);
    CHECK_THROWS_AS(problem_from_json(
                        R"({"interval":[0,1],"coefficients":{"p":"1","q":[],"r":[],"s":[]}})"),
                    Error);
}

TEST_CASE("truncated half line, free coefficients: limit point with diverging evidence") {
    // stands for (1, infinity); solutions of tau u = 0 are 1 and x
    auto pr = Problem(1.0, 1000.0, PiecewiseFn::constant(1, 1000, 1.0),
                      PiecewiseFn::constant(1, 1000, 0.0), PiecewiseFn::constant(1, 1000, 1.0),
                      PiecewiseFn::constant(1, 1000, 0.0), false, true);
    auto cls = classify_endpoint(pr, EndpointSide::B);
    CHECK(cls.kind == EndpointKind::LimitPoint);
    bool hr_diverges = false;
    for (const auto& ev : cls.hartman_rellich) hr_diverges = hr_diverges || ev.diverging;
    CHECK(hr_diverges);
    REQUIRE(cls.non_oscillatory.has_value());
    CHECK(*cls.non_oscillatory);
}

TEST_CASE("p = x^4 near truncated infinity: limit point (one non-L2 solution)") {
    // Solutions of -(x^4 u')' = 0 are 1 and x^-3; int^inf 1 dx diverges, so
    // the brute-force tail test must land limit point even though the
    // Hartman-Rellich integral int x^-2 converges.
    auto pr = Problem(1.0, 1000.0, PiecewiseFn::from_expr(1, 1000, parse_expr("x^4")),
                      PiecewiseFn::constant(1, 1000, 0.0), PiecewiseFn::constant(1, 1000, 1.0),
                      PiecewiseFn::constant(1, 1000, 0.0), false, true);
    auto cls = classify_endpoint(pr, EndpointSide::B);
    CHECK(cls.kind == EndpointKind::LimitPoint);
}

TEST_CASE("declared singular but benign tail settles back to regular") {
    auto pr = Problem(0.0, 1.0, PiecewiseFn::constant(0, 1, 1.0),
                      PiecewiseFn::constant(0, 1, 0.0), PiecewiseFn::constant(0, 1, 1.0),
                      PiecewiseFn::constant(0, 1, 0.0), false, true);
    CHECK(classify_endpoint(pr, EndpointSide::B).kind == EndpointKind::Regular);
}

TEST_SUITE_END();
