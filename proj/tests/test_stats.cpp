#include <doctest.h>

#include <cmath>
#include <vector>

#include "chemoeda/errors.hpp"
#include "chemoeda/stats.hpp"

using namespace chemo;

TEST_SUITE_BEGIN("stats");

TEST_CASE("summarize textbook cases") {
    std::vector<double> constant{5.0, 5.0, 5.0};
    SummaryStats s = summarize(constant);
    CHECK(s.mean == 5.0);
    CHECK(s.stddev == 0.0);

    std::vector<double> steps{1.0, 2.0, 3.0};
    s = summarize(steps);
    CHECK(s.mean == 2.0);
    CHECK(s.stddev == doctest::Approx(1.0));

    std::vector<double> one{1.0};
    CHECK_THROWS_AS(summarize(one), ConfigError);
}

TEST_CASE("summarize matches an out-of-band recomputation on 30 generated values") {
    // v_i = ((i * 2654435761) mod 2^32) / 2^32 * 100, exact in both languages
    std::vector<double> values;
    for (std::uint64_t i = 0; i < 30; ++i) {
        std::uint64_t h = (i * 2654435761ULL) & 0xffffffffULL;
        values.push_back(static_cast<double>(h) / 4294967296.0 * 100.0);
    }
    CHECK(values[1] == doctest::Approx(61.803398677147925).epsilon(1e-15));
    SummaryStats s = summarize(values);
    CHECK(s.mean == doctest::Approx(49.48261415197825).epsilon(1e-13));
    CHECK(s.stddev == doctest::Approx(30.135349347845775).epsilon(1e-13));
}

TEST_CASE("incomplete beta spot values") {
    CHECK(incomplete_beta(0.5, 0.5, 0.3) == doctest::Approx(0.36901011956554536).epsilon(1e-10));
    CHECK(incomplete_beta(5.0, 2.0, 0.7) == doctest::Approx(0.4201749999999999).epsilon(1e-10));
    CHECK(incomplete_beta(29.0, 0.5, 0.9) == doctest::Approx(0.01383621935954688).epsilon(1e-9));
    CHECK(incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(incomplete_beta(2.0, 3.0, 1.0) == 1.0);
}

TEST_CASE("two-sided t tail probabilities match the reference values") {
    CHECK(student_t_two_sided_p(2.0, 10) == doctest::Approx(0.07338803477074039).epsilon(1e-10));
    CHECK(student_t_two_sided_p(1.0, 5) == doctest::Approx(0.36321746764912255).epsilon(1e-10));
    CHECK(student_t_two_sided_p(0.5, 29) == doctest::Approx(0.6208480841937813).epsilon(1e-10));
    CHECK(student_t_two_sided_p(3.5, 12.7) == doctest::Approx(0.004043839925700645).epsilon(1e-9));
    CHECK(student_t_two_sided_p(0.0, 8) == 1.0);
    CHECK(student_t_two_sided_p(29.329, 57.9) < 1e-30);
}

TEST_CASE("welch test reproduces the published standard errors") {
    SummaryStats umda{30, 2695.5, 490.3};
    SummaryStats hboa{30, 7917.6, 843.0};
    SummaryStats ga{30, 16208.1, 12045.8};
    SummaryStats pbil{30, 5959.5, 522.4};

    TTestResult uh = welch_t_test(umda, hboa);
    CHECK(uh.se == doctest::Approx(178.04897172781799).epsilon(1e-12));
    CHECK(std::abs(uh.se - 178.05) < 0.01);
    CHECK(uh.diff == doctest::Approx(-5222.1));
    CHECK(std::abs(uh.t) == doctest::Approx(29.329571237193).epsilon(1e-10));
    CHECK(uh.df == doctest::Approx(46.60532738694346).epsilon(1e-10));
    CHECK(uh.p < 1e-4);

    TTestResult ug = welch_t_test(umda, ga);
    CHECK(ug.se == doctest::Approx(2201.0731604530247).epsilon(1e-12));
    CHECK(std::abs(ug.se - 2201.07) < 0.01);
    CHECK(std::abs(ug.t) == doctest::Approx(6.139096256672739).epsilon(1e-10));
    CHECK(ug.df == doctest::Approx(29.096090243002838).epsilon(1e-10));
    CHECK(ug.p == doctest::Approx(1.0734095250233534e-06).epsilon(1e-6));

    TTestResult up = welch_t_test(umda, pbil);
    CHECK(up.se == doctest::Approx(130.80466989624898).epsilon(1e-12));
}

TEST_CASE("welch test is symmetric in magnitude") {
    SummaryStats a{12, 10.0, 2.0};
    SummaryStats b{17, 12.5, 3.0};
    TTestResult ab = welch_t_test(a, b);
    TTestResult ba = welch_t_test(b, a);
    CHECK(ab.se == ba.se);
    CHECK(ab.t == -ba.t);
    CHECK(ab.p == ba.p);
    CHECK(ab.df == ba.df);
}

TEST_CASE("scaling both samples leaves t and p unchanged") {
    SummaryStats a{10, 4.0, 1.5};
    SummaryStats b{10, 7.0, 2.5};
    TTestResult base = welch_t_test(a, b);
    SummaryStats a2{10, 40.0, 15.0};
    SummaryStats b2{10, 70.0, 25.0};
    TTestResult scaled = welch_t_test(a2, b2);
    CHECK(scaled.diff == doctest::Approx(10.0 * base.diff));
    CHECK(scaled.se == doctest::Approx(10.0 * base.se));
    CHECK(scaled.t == doctest::Approx(base.t).epsilon(1e-12));
    CHECK(scaled.p == doctest::Approx(base.p).epsilon(1e-12));
}

TEST_CASE("degenerate zero-variance cases") {
    SummaryStats flat_a{5, 3.0, 0.0};
    SummaryStats flat_b{5, 3.0, 0.0};
    TTestResult same = welch_t_test(flat_a, flat_b);
    CHECK(same.t == 0.0);
    CHECK(same.p == 1.0);
    CHECK(same.degenerate);

    SummaryStats flat_c{5, 4.0, 0.0};
    TTestResult differ = welch_t_test(flat_a, flat_c);
    CHECK(differ.p == 0.0);
    CHECK(differ.degenerate);

    SummaryStats tiny{1, 3.0, 0.0};
    CHECK_THROWS_AS(welch_t_test(flat_a, tiny), ConfigError);
}

TEST_CASE("identical summaries compare as equal") {
    SummaryStats s{30, 123.4, 5.6};
    TTestResult r = welch_t_test(s, s);
    CHECK(r.t == 0.0);
    CHECK(r.p == 1.0);
}

TEST_SUITE_END();
