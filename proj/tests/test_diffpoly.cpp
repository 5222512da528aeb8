#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace structid;

namespace {
Poly v(DiffVar d, int e = 1) { return Poly::variable(d, e); }
}  // namespace

TEST_CASE("worked derivative example") {
    // (2 z1'^2 z3 + 3 z5'')' = 4 z1' z1'' z3 + 2 z1'^2 z3' + 3 z5'''
    DiffVar z1p = state_var(0, 1), z3 = state_var(2, 0), z5 = state_var(4, 0);
    Poly p = Int(2) * v(z1p, 2) * v(z3) + Int(3) * v(z5.shifted(2));
    Poly expect = Int(4) * v(z1p) * v(z1p.shifted(1)) * v(z3) + Int(2) * v(z1p, 2) * v(z3.shifted(1)) +
                  Int(3) * v(z5.shifted(3));
    CHECK(differentiate(p) == expect);
}

TEST_CASE("constants and parameters are annihilated") {
    CHECK(differentiate(Poly::constant(7)).is_zero());
    // (mu1 * x1)' = mu1 * x1'
    Poly p = v(param_var(0)) * v(state_var(0));
    CHECK(differentiate(p) == v(param_var(0)) * v(state_var(0, 1)));
}

TEST_CASE("iterated derivatives match the golden prolongations") {
    DiffVar x = state_var(0, 0), y = output_var(0, 0);
    DiffVar mu1 = param_var(0), mu2 = param_var(1), xstar = param_var(2);
    Poly x1_eq = v(x.shifted(1)) - v(mu2) * v(x) - v(mu1);
    CHECK(iterated_derivative(v(x) - v(xstar), 0) == v(x) - v(xstar));
    // (x' - mu2 x - mu1)' = x'' - mu2 x'
    CHECK(iterated_derivative(x1_eq, 1) == v(x.shifted(2)) - v(mu2) * v(x.shifted(1)));
    // (y - x^2)''' = y''' - 2 x x''' - 6 x' x''
    Poly y_eq = v(y) - v(x, 2);
    Poly expect = v(y.shifted(3)) - Int(2) * v(x) * v(x.shifted(3)) -
                  Int(6) * v(x.shifted(1)) * v(x.shifted(2));
    CHECK(iterated_derivative(y_eq, 3) == expect);
}

TEST_CASE("order_in") {
    DiffVar x = state_var(0, 0), y = output_var(0, 0);
    Poly y3 = v(y.shifted(3)) - Int(2) * v(x) * v(x.shifted(3)) -
              Int(6) * v(x.shifted(1)) * v(x.shifted(2));
    CHECK(order_in(y3, VarKind::State, 0) == 3);
    CHECK(order_in(Poly::variable(param_var(0)), VarKind::State, 0) == -1);
    CHECK(order_in(v(x) * v(x.shifted(4)), VarKind::State, 0) == 4);
}

TEST_CASE("partial derivatives") {
    DiffVar x = state_var(0, 0);
    DiffVar mu1 = param_var(0), mu2 = param_var(1);
    CHECK(partial(v(output_var(0)) - v(x, 2), x) == Int(-2) * v(x));
    CHECK(partial(Poly::constant(5), x).is_zero());
    CHECK(partial(v(x.shifted(1)) - v(mu2) * v(x) - v(mu1), mu2) == -v(x));
}

TEST_CASE("evaluate") {
    DiffVar x = state_var(0, 0), y = output_var(0, 0);
    PointAssignment pt{{x, Rat(453)}};
    CHECK(evaluate(v(x) - Poly::constant(453), pt) == 0);
    pt[y] = Rat(205209);
    CHECK(evaluate(v(y) - v(x, 2), pt) == 0);
    CHECK(evaluate(Poly(), {}) == 0);
    CHECK_THROWS_AS(evaluate(v(x.shifted(1)), pt), MissingAssignment);
}

TEST_CASE("substitute") {
    DiffVar x = state_var(0, 0), y = output_var(0, 0);
    DiffVar u = input_var(0, 0);
    SECTION("single binding") {
        auto [p, scale] = substitute(v(y) - v(x, 2), {{y, Rat(205209)}});
        CHECK(p == Poly::constant(205209) - v(x, 2));
        CHECK(scale == 1);
    }
    SECTION("empty binding is the identity") {
        Poly p = v(x) * v(u) + Poly::constant(3);
        auto [q, scale] = substitute(p, {});
        CHECK(q == p);
        CHECK(scale == 1);
    }
    SECTION("full input binding") {
        Poly p = v(x) * v(u.shifted(1)) + v(u);
        auto [q, scale] = substitute(p, {{u, Rat(3)}, {u.shifted(1), Rat(5)}});
        CHECK(q == Int(5) * v(x) + Poly::constant(3));
        CHECK(scale == 1);
    }
    SECTION("rational bindings are cleared to integers with a tracked scale") {
        Poly p = v(x) * v(u) + Poly::constant(1);
        auto [q, scale] = substitute(p, {{u, Rat(1, 3)}});
        CHECK(scale > 0);
        // q = scale * (x/3 + 1): with scale = 3, q = x + 3
        CHECK(q == v(x) + Poly::constant(3));
        CHECK(scale == 3);
    }
}

TEST_CASE("differential ring laws on random polynomials") {
    testutil::PolyGen gen(99);
    for (int i = 0; i < 500; ++i) {
        Poly p = gen.next(), q = gen.next();
        CHECK(differentiate(p * q) == differentiate(p) * q + p * differentiate(q));
        Int a(gen.small_int(-9, 9)), b(gen.small_int(-9, 9));
        CHECK(differentiate(a * p + b * q) == a * differentiate(p) + b * differentiate(q));
    }
}

TEST_CASE("partial commutes with addition and satisfies the product rule") {
    testutil::PolyGen gen(7);
    DiffVar x = state_var(0, 0);
    for (int i = 0; i < 200; ++i) {
        Poly p = gen.next(), q = gen.next();
        CHECK(partial(p + q, x) == partial(p, x) + partial(q, x));
        CHECK(partial(p * q, x) == partial(p, x) * q + p * partial(q, x));
    }
}

TEST_CASE("substitute commutes with evaluate up to the tracked factor") {
    testutil::PolyGen gen(13);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> val(-6, 6), den(1, 4);
    for (int i = 0; i < 200; ++i) {
        Poly p = gen.next();
        PointAssignment full;
        for (DiffVar v : p.variables()) full[v] = Rat(val(rng), den(rng));
        // split into two disjoint halves
        PointAssignment a, b;
        bool flip = false;
        for (const auto& [var, value] : full) ((flip = !flip) ? a : b)[var] = value;
        auto [q, scale] = substitute(p, b);
        CHECK(evaluate(q, a) == scale * evaluate(p, full));
    }
}
