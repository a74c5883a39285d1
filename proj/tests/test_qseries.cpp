#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "thetalift/qseries.hpp"

using namespace thetalift;

TEST_CASE("eisenstein series expansions") {
    QSeries e4 = eisenstein(4, 10);
    CHECK(e4.coeff(0) == 1);
    CHECK(e4.coeff(1) == 240);
    CHECK(e4.coeff(2) == 2160);   // 240 * sigma_3(2)
    CHECK(e4.coeff(3) == 6720);

    QSeries e6 = eisenstein(6, 10);
    CHECK(e6.coeff(1) == -504);
    CHECK(e6.coeff(2) == -16632); // -504 * sigma_5(2)

    QSeries e8 = eisenstein(8, 10);
    CHECK(e8.coeff(1) == 480);
    CHECK(e8.coeff(2) == 61920);  // 480 * sigma_7(2)

    QSeries e2 = eisenstein2(10);
    CHECK(e2.coeff(0) == 1);
    CHECK(e2.coeff(1) == -24);
    CHECK(e2.coeff(2) == -72);

    CHECK_THROWS_AS(eisenstein(10, 5), std::domain_error);
}

TEST_CASE("E4 squared equals E8") {
    // Classical: both sides span the one-dimensional weight 8 level 1 space
    // and share constant term 1.
    QSeries e4 = eisenstein(4, 60);
    QSeries e8 = eisenstein(8, 60);
    QSeries sq = e4 * e4;
    for (long n = 0; n <= 60; ++n) CHECK(sq.coeff(n) == e8.coeff(n));
}

TEST_CASE("eta quotient basics") {
    // eta(z)^24 = q prod (1-q^n)^24 has the tau coefficients.
    QSeries d = eta_quotient({{1, 24}}, 6);
    CHECK(d.coeff(0) == 0);
    CHECK(d.coeff(1) == 1);
    CHECK(d.coeff(2) == -24);
    CHECK(d.coeff(3) == 252);
    CHECK(d.coeff(4) == -1472);

    // eta(2z)^4 eta(4z)^4 = q - 4q^3 - 2q^5 + 24q^7 + ...
    QSeries f = eta_quotient({{2, 4}, {4, 4}}, 8);
    CHECK(f.coeff(1) == 1);
    CHECK(f.coeff(2) == 0);
    CHECK(f.coeff(3) == -4);
    CHECK(f.coeff(4) == 0);
    CHECK(f.coeff(5) == -2);
    CHECK(f.coeff(7) == 24);
}

TEST_CASE("eta quotient rejects a non-integral leading exponent") {
    CHECK_THROWS_AS(eta_quotient({{1, 1}}, 10), NonIntegralLeadingExponent);
    CHECK_THROWS_AS(eta_quotient({{1, -24}}, 10), NonIntegralLeadingExponent);
    CHECK_THROWS_AS(eta_quotient({{3, 7}, {1, 2}}, 10), NonIntegralLeadingExponent);
}

TEST_CASE("eta quotients reproduce the two classical theta identities") {
    // theta(z) = eta(2z)^5 / (eta(z)^2 eta(4z)^2)
    QSeries lhs = eta_quotient({{2, 5}, {1, -2}, {4, -2}}, 100);
    QSeries rhs = theta_series(100);
    for (long n = 0; n <= 100; ++n) CHECK(lhs.coeff(n) == rhs.coeff(n));

    // eta(z)^2 / eta(2z) = 1 + 2 sum (-1)^n q^{n^2}
    QSeries alt = eta_quotient({{1, 2}, {2, -1}}, 100);
    for (long n = 0; n <= 100; ++n) {
        long r = 0;
        for (long k = 1; k * k <= n; ++k)
            if (k * k == n) r = (k % 2 == 0) ? 2 : -2;
        if (n == 0) r = 1;
        CHECK(alt.coeff(n) == r);
    }
}

TEST_CASE("theta series squared counts representations by two squares") {
    QSeries t = theta_series(30);
    QSeries r2 = t * t;
    CHECK(r2.coeff(0) == 1);
    CHECK(r2.coeff(1) == 4);
    CHECK(r2.coeff(2) == 4);
    CHECK(r2.coeff(3) == 0);
    CHECK(r2.coeff(4) == 4);
    CHECK(r2.coeff(5) == 8);
    CHECK(r2.coeff(25) == 12);
}

TEST_CASE("arithmetic truncates to the smaller operand") {
    QSeries a(10), b(5);
    a.coeff_mut(0) = 1;
    b.coeff_mut(0) = 1;
    CHECK((a + b).trunc() == 5);
    CHECK((a * b).trunc() == 5);
    CHECK((a - b).trunc() == 5);
}

TEST_CASE("dilation moves exponents and keeps the truncation order") {
    QSeries a(10);
    a.coeff_mut(0) = 7;
    a.coeff_mut(2) = 3;
    a.coeff_mut(4) = -1;
    QSeries d = a.dilated(3);
    CHECK(d.trunc() == 10);
    CHECK(d.coeff(0) == 7);
    CHECK(d.coeff(6) == 3);
    CHECK(d.coeff(2) == 0);
    // exponent 12 would exceed the truncation order and is dropped
    for (long n = 7; n <= 10; ++n) CHECK(d.coeff(n) == 0);
}

TEST_CASE("derivative operator obeys the Leibniz rule") {
    QSeries a = eisenstein(4, 30);
    QSeries b = eta_quotient({{1, 24}}, 30);
    QSeries lhs = (a * b).derivative_D();
    QSeries rhs = a.derivative_D() * b + a * b.derivative_D();
    for (long n = 0; n <= 30; ++n) CHECK(lhs.coeff(n) == rhs.coeff(n));
}

TEST_CASE("inverse is a two-sided inverse") {
    QSeries a = eisenstein(6, 40);
    QSeries inv = a.inverse();
    QSeries prod = a * inv;
    CHECK(prod.coeff(0) == 1);
    for (long n = 1; n <= 40; ++n) CHECK(prod.coeff(n) == 0);

    QSeries z(5);
    CHECK_THROWS_AS(z.inverse(), std::domain_error);
}

TEST_CASE("pow matches repeated multiplication and handles negatives") {
    QSeries a(12);
    a.coeff_mut(0) = 1;
    a.coeff_mut(1) = 1;
    QSeries cube = a.pow(3);
    CHECK(cube.coeff(0) == 1);
    CHECK(cube.coeff(1) == 3);
    CHECK(cube.coeff(2) == 3);
    CHECK(cube.coeff(3) == 1);
    CHECK(cube.coeff(4) == 0);

    QSeries back = cube.pow(-1) * cube;
    CHECK(back.coeff(0) == 1);
    for (long n = 1; n <= 12; ++n) CHECK(back.coeff(n) == 0);
}

TEST_CASE("series constructors validate their inputs") {
    CHECK_THROWS_AS(QSeries(-1), std::domain_error);
    CHECK_THROWS_AS(QSeries(3, {Rat(1), Rat(2)}), std::domain_error);
    QSeries a(2);
    CHECK_THROWS_AS(a.coeff(3), std::out_of_range);
    CHECK_THROWS_AS(a.coeff(-1), std::out_of_range);
    CHECK_THROWS_AS(a.truncated(5), std::domain_error);
}
