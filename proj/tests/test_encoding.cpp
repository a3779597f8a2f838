#include <doctest.h>

#include "chemoeda/encoding.hpp"
#include "chemoeda/errors.hpp"
#include "chemoeda/rng.hpp"

using namespace chemo;

namespace {

ProblemInstance tiny_instance() {
    // 2 doses, 2 drugs, 2 bits: 8-bit chromosomes, exhaustively checkable
    ProblemInstance inst = ProblemInstance::defaults();
    inst.num_doses = 2;
    inst.num_drugs = 2;
    inst.bits_per_dose = 2;
    inst.efficacy.assign(2, 0.05);
    inst.unit.assign(2, 1.0);
    inst.max_dose.assign(2, 3.0);
    inst.max_cumulative.assign(2, 6.0);
    inst.side_effect_limit.assign(2, 3.0);
    inst.dose_times = {1.0, 2.0};
    inst.toxicity = {{0.5, 0.5}, {0.3, 0.7}};
    inst.validate();
    return inst;
}

}  // namespace

TEST_SUITE_BEGIN("encoding");

TEST_CASE("all-zero chromosome decodes to the zero schedule") {
    ProblemInstance inst = ProblemInstance::defaults();
    Chromosome x(inst.chromosome_length());
    DoseSchedule c = decode(x, inst);
    for (int i = 0; i < c.rows; ++i)
        for (int j = 0; j < c.cols; ++j) CHECK(c.at(i, j) == 0.0);
}

TEST_CASE("leading 1111 gives 15 units of drug 1") {
    ProblemInstance inst = ProblemInstance::defaults();
    Chromosome x(inst.chromosome_length());
    x.bits[0] = x.bits[1] = x.bits[2] = x.bits[3] = 1;
    DoseSchedule c = decode(x, inst);
    CHECK(c.at(0, 0) == 15.0);
    CHECK(c.at(0, 1) == 0.0);
}

TEST_CASE("0101 decodes to 5") {
    ProblemInstance inst = ProblemInstance::defaults();
    Chromosome x(inst.chromosome_length());
    x.bits[1] = 1;
    x.bits[3] = 1;
    CHECK(decode(x, inst).at(0, 0) == 5.0);
}

TEST_CASE("unit scales the level") {
    ProblemInstance inst = ProblemInstance::defaults();
    inst.unit[0] = 0.5;
    Chromosome x(inst.chromosome_length());
    x.bits[0] = x.bits[1] = x.bits[2] = x.bits[3] = 1;
    CHECK(decode(x, inst).at(0, 0) == 7.5);
}

TEST_CASE("length mismatch raises a dimension error") {
    ProblemInstance inst = ProblemInstance::defaults();
    CHECK_THROWS_AS(decode(Chromosome(17), inst), DimensionError);
    CHECK_THROWS_AS(encode(DoseSchedule(3, 3), inst), DimensionError);
}

TEST_CASE("encode of the zero schedule is the zero chromosome") {
    ProblemInstance inst = ProblemInstance::defaults();
    DoseSchedule c(inst.num_doses, inst.num_drugs);
    Chromosome x = encode(c, inst);
    for (auto b : x.bits) CHECK(b == 0);
}

TEST_CASE("a lone maximum dose encodes as 1111 then zeros") {
    ProblemInstance inst = ProblemInstance::defaults();
    DoseSchedule c(inst.num_doses, inst.num_drugs);
    c.at(0, 0) = 15.0 * inst.unit[0];
    Chromosome x = encode(c, inst);
    CHECK(x.bits[0] == 1);
    CHECK(x.bits[1] == 1);
    CHECK(x.bits[2] == 1);
    CHECK(x.bits[3] == 1);
    for (int b = 4; b < x.size(); ++b) CHECK(x.bits[b] == 0);
}

TEST_CASE("encode rejects non-multiples and out-of-range entries") {
    ProblemInstance inst = ProblemInstance::defaults();
    DoseSchedule c(inst.num_doses, inst.num_drugs);
    c.at(2, 3) = 0.4;  // not a multiple of 1
    CHECK_THROWS_AS(encode(c, inst), InvariantError);
    c.at(2, 3) = 16.0;  // above 2^4 - 1
    CHECK_THROWS_AS(encode(c, inst), InvariantError);
    c.at(2, 3) = -1.0;
    CHECK_THROWS_AS(encode(c, inst), InvariantError);
}

TEST_CASE("round trip is the identity, exhaustively at the tiny scale") {
    ProblemInstance inst = tiny_instance();
    const int length = inst.chromosome_length();
    REQUIRE(length == 8);
    for (int v = 0; v < (1 << length); ++v) {
        Chromosome x(length);
        for (int b = 0; b < length; ++b) x.bits[b] = (v >> b) & 1;
        CHECK(encode(decode(x, inst), inst) == x);
    }
}

TEST_CASE("round trip holds on random schedules at full scale") {
    ProblemInstance inst = ProblemInstance::defaults();
    Rng rng(20240117);
    for (int trial = 0; trial < 1000; ++trial) {
        DoseSchedule c(inst.num_doses, inst.num_drugs);
        for (int i = 0; i < c.rows; ++i)
            for (int j = 0; j < c.cols; ++j)
                c.at(i, j) = inst.unit[j] * rng.index(inst.dose_levels());
        CHECK(decode(encode(c, inst), inst) == c);
    }
}

TEST_CASE("random chromosomes round trip at full scale") {
    ProblemInstance inst = ProblemInstance::defaults();
    Rng rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        Chromosome x = Chromosome::random(inst.chromosome_length(), rng);
        CHECK(encode(decode(x, inst), inst) == x);
    }
}

TEST_SUITE_END();
