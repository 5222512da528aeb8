#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace structid;
using testutil::load_model;

TEST_CASE("parse the quadratic readout model") {
    Model m = load_model("quadratic_readout.ode");
    CHECK(m.name == "quadratic_readout");
    CHECK(m.n() == 1);
    CHECK(m.m() == 1);
    CHECK(m.lambda() == 2);
    CHECK(m.theta_count() == 3);
    // x' = mu2*x + mu1
    Poly expect = Poly::variable(param_var(1)) * Poly::variable(state_var(0)) + Poly::variable(param_var(0));
    CHECK(m.states[0].second == RatFunc::from_poly(expect));
    // y = x^2
    CHECK(m.outputs[0].second == RatFunc::from_poly(Poly::variable(state_var(0), 2)));
}

TEST_CASE("minimal model with no params parses") {
    Model m = parse_model("states:\n x1' = x1\noutputs:\n y1 = x1");
    validate_model(m);
    CHECK(m.theta_count() == 1);
    CHECK(m.theta_name(0) == "x1*");
}

TEST_CASE("fractional exponent is rejected with the right kind") {
    try {
        parse_model("states:\n x1' = 0\noutputs:\n y1 = x1^(1/2)\n");
        FAIL("expected NonIntegerExponent");
    } catch (const ParseError& e) {
        CHECK(e.kind() == ParseError::Kind::NonIntegerExponent);
    }
}

TEST_CASE("undeclared symbol reports a span") {
    try {
        parse_model("states:\n x1' = x1\noutputs:\n y1 = zz\n");
        FAIL("expected UndeclaredSymbol");
    } catch (const ParseError& e) {
        CHECK(e.kind() == ParseError::Kind::UndeclaredSymbol);
        CHECK(e.span().line == 4);
        CHECK(e.span().column >= 6);
    }
}

TEST_CASE("division by a zero expression") {
    try {
        parse_model("states:\n x1' = 1/(x1 - x1)\noutputs:\n y1 = x1\n");
        FAIL("expected DivisionByZeroConstant");
    } catch (const ParseError& e) {
        CHECK(e.kind() == ParseError::Kind::DivisionByZeroConstant);
    }
}

TEST_CASE("rational literal survives a round trip") {
    Model m = parse_model("params: a\nstates:\n x1' = 1/3*x1 + a\noutputs:\n y1 = x1\n");
    std::string text = serialize_model(m);
    CHECK(text.find("1/3") != std::string::npos);
    CHECK(parse_model(text) == m);
}

TEST_CASE("round trip on every corpus model") {
    for (const char* name : {"linear_source.ode", "exponential_growth.ode", "scaled_input.ode",
                             "squared_rate.ode", "quadratic_readout.ode", "two_output_offset.ode",
                             "exponential_two_outputs.ode", "predator_prey.ode", "phosphorylation.ode",
                             "cholera_siwr.ode", "pharmacokinetics_twocomp.ode", "nfkb_regulatory.ode"}) {
        Model m = load_model(name);
        std::string once = serialize_model(m);
        Model again = parse_model(once);
        CHECK(again == m);
        CHECK(serialize_model(again) == once);
    }
}

TEST_CASE("parser survives arbitrary byte input") {
    std::mt19937_64 rng(20260809);
    std::uniform_int_distribution<int> len(0, 200);
    std::uniform_int_distribution<int> byte(0, 255);
    int parsed = 0, rejected = 0;
    for (int iter = 0; iter < 500; ++iter) {
        std::string junk;
        int n = len(rng);
        for (int i = 0; i < n; ++i) junk.push_back(static_cast<char>(byte(rng)));
        try {
            parse_model(junk);
            ++parsed;
        } catch (const ParseError&) {
            ++rejected;
        }
        // anything else escaping is a failure by exception propagation
    }
    CHECK(parsed + rejected == 500);
}

TEST_CASE("structured junk near the grammar is also safe") {
    std::mt19937_64 rng(7);
    const std::string alphabet = "xy12up'=+-*/^():,# \nmodelstatesoutputsinputsparams";
    std::uniform_int_distribution<int> len(0, 120);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    for (int iter = 0; iter < 500; ++iter) {
        std::string junk;
        int n = len(rng);
        for (int i = 0; i < n; ++i) junk.push_back(alphabet[pick(rng)]);
        try {
            Model m = parse_model(junk);
            (void)m;
        } catch (const ParseError&) {
        }
    }
    SUCCEED();
}

TEST_CASE("two output lines serialize for the constant-state model") {
    Model m = load_model("two_output_offset.ode");
    std::string text = serialize_model(m);
    CHECK(text.find("y1 = ") != std::string::npos);
    CHECK(text.find("y2 = ") != std::string::npos);
    CHECK(m.m() == 2);
}
