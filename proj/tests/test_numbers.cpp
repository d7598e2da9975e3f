#include "doctest.h"

#include "gps/numbers.hpp"

using namespace gps;

TEST_CASE("rational construction and arithmetic") {
    Value a = Value::rational(Rational(3, 2));
    Value b = Value::integer(2);
    CHECK((a + b).as_rational() == Rational(7, 2));
    CHECK((a * b).as_rational() == Rational(3));
    CHECK((a - b).sign() == -1);
    CHECK(a.to_double() == doctest::Approx(1.5));
}

TEST_CASE("quadratic values are exact") {
    Value r2 = Value::sqrt_rational(Rational(2));
    CHECK(!r2.is_rational());
    CHECK(r2.to_double() == doctest::Approx(1.41421356237309).epsilon(1e-12));

    // sqrt(2)*sqrt(2) = 2 exactly
    Value four = r2 * r2;
    CHECK(four.is_rational());
    CHECK(four.as_rational() == Rational(2));

    // sqrt(8) = 2*sqrt(2)
    Value r8 = Value::sqrt_rational(Rational(8));
    CHECK(r8.identical(r2 + r2));

    // 1 - sqrt(2) < 0, sqrt(2) - 1 > 0: exact signs
    Value one = Value::integer(1);
    CHECK((one - r2).sign() == -1);
    CHECK((r2 - one).sign() == 1);
    // 2 > sqrt(2)
    CHECK(Value::integer(2).compare(r2) == 1);
    // 1 + sqrt(2) to high precision
    CHECK((one + r2).to_double() == doctest::Approx(2.414213562373095).epsilon(1e-14));
}

TEST_CASE("sqrt of rational reduces the radicand") {
    // sqrt(4/9) = 2/3
    Value v = Value::sqrt_rational(Rational(4, 9));
    CHECK(v.is_rational());
    CHECK(v.as_rational() == Rational(2, 3));
    // sqrt(1/2) = (1/2) sqrt(2)
    Value h = Value::sqrt_rational(Rational(1, 2));
    CHECK(h.quad_part() == Rational(1, 2));
    CHECK(h.discriminant() == 2);
}

TEST_CASE("float values use the collision tolerance") {
    Value tiny = Value::approx(BigFloat("1e-40"));
    CHECK(tiny.sign_class() == SignClass::ambiguous);
    CHECK_THROWS_AS(tiny.sign(), AmbiguityError);
    Value big = Value::approx(BigFloat("1e-20"));
    CHECK(big.sign() == 1);
}

TEST_CASE("mixing quadratic fields degrades to float") {
    Value r2 = Value::sqrt_rational(Rational(2));
    Value r3 = Value::sqrt_rational(Rational(3));
    Value s = r2 + r3;
    CHECK(!s.is_exact());
    CHECK(s.to_double() == doctest::Approx(1.4142135623730951 + 1.7320508075688772));
}

TEST_CASE("value expression parsing") {
    CHECK(parse_value("3/2").as_rational() == Rational(3, 2));
    CHECK(parse_value("1.25").as_rational() == Rational(5, 4));
    CHECK(parse_value("1e-3").as_rational() == Rational(1, 1000));
    CHECK(parse_value("2.5e2").as_rational() == Rational(250));
    Value v = parse_value("1/2 + 3*sqrt(2)");
    CHECK(v.rat_part() == Rational(1, 2));
    CHECK(v.quad_part() == Rational(3));
    CHECK(parse_value("sqrt(2)*sqrt(2)").as_rational() == Rational(2));
    CHECK(parse_value("-(1 - 2)").as_rational() == Rational(1));
    CHECK(parse_value("3/4/3").as_rational() == Rational(1, 4));
    CHECK(!parse_value("~2.718281828").is_exact());
    CHECK_THROWS_AS(parse_value("sqrt(2) +"), ParseError);
    CHECK_THROWS_AS(parse_value("1 / sqrt(2)"), ParseError);
}

TEST_CASE("value printing round-trips") {
    for (const char* s : {"3/2", "sqrt(2)", "1/2 + 3*sqrt(2)", "-2", "1 - sqrt(5)"}) {
        Value v = parse_value(s);
        Value w = parse_value(v.to_string());
        CHECK(v.identical(w));
    }
}
