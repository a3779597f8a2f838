#include <doctest.h>

#include <cmath>

#include "chemoeda/errors.hpp"
#include "chemoeda/model.hpp"
#include "chemoeda/rng.hpp"

using namespace chemo;

namespace {

DoseSchedule random_schedule(const ProblemInstance& inst, Rng& rng) {
    DoseSchedule c(inst.num_doses, inst.num_drugs);
    for (int i = 0; i < c.rows; ++i)
        for (int j = 0; j < c.cols; ++j)
            c.at(i, j) = inst.unit[j] * rng.index(inst.dose_levels());
    return c;
}

double max_relative_gap(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]) / std::abs(b[i]));
    return worst;
}

}  // namespace

TEST_SUITE_BEGIN("dynamics");

TEST_CASE("zero doses from the plateau stay at the plateau") {
    ProblemInstance inst = ProblemInstance::defaults();
    inst.initial_size = inst.plateau;
    // keep n_max > n0 so the instance stays valid
    inst.max_size = 2.0 * inst.plateau;
    DoseSchedule zero(inst.num_doses, inst.num_drugs);
    for (double n : tumour_trajectory(zero, inst)) CHECK(n == doctest::Approx(inst.plateau));
    for (double n : ode_trajectory(zero, inst, 1e-3))
        CHECK(n == doctest::Approx(inst.plateau).epsilon(1e-9));
}

TEST_CASE("zero doses below the plateau grow strictly toward it") {
    ProblemInstance inst = ProblemInstance::defaults();
    DoseSchedule zero(inst.num_doses, inst.num_drugs);
    auto traj = tumour_trajectory(zero, inst);
    double prev = inst.initial_size;
    for (double n : traj) {
        CHECK(n > prev);
        CHECK(n < inst.plateau);
        prev = n;
    }
}

TEST_CASE("closed form matches the integrator on 100 random schedules") {
    ProblemInstance inst = ProblemInstance::defaults();
    Rng rng(424242);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        DoseSchedule c = random_schedule(inst, rng);
        auto analytic = tumour_trajectory(c, inst);
        auto numeric = ode_trajectory(c, inst, 1e-3);
        worst = std::max(worst, max_relative_gap(analytic, numeric));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("integrator converges as the step shrinks") {
    ProblemInstance inst = ProblemInstance::defaults();
    Rng rng(7);
    DoseSchedule c = random_schedule(inst, rng);
    auto reference = tumour_trajectory(c, inst);
    double err_coarse = max_relative_gap(ode_trajectory(c, inst, 2e-2), reference);
    double err_half = max_relative_gap(ode_trajectory(c, inst, 1e-2), reference);
    CHECK(err_half <= 0.5 * err_coarse);  // at least first order; RK4 does far better
    CHECK(err_half < err_coarse);
}

TEST_CASE("adding dose never lets the tumour grow at later sample times") {
    ProblemInstance inst = ProblemInstance::defaults();
    Rng rng(31337);
    for (int trial = 0; trial < 200; ++trial) {
        DoseSchedule c = random_schedule(inst, rng);
        int i = rng.index(inst.num_doses);
        int j = rng.index(inst.num_drugs);
        if (c.at(i, j) >= inst.unit[j] * (inst.dose_levels() - 1)) continue;
        DoseSchedule bumped = c;
        bumped.at(i, j) += inst.unit[j];
        auto base = tumour_trajectory(c, inst);
        auto dosed = tumour_trajectory(bumped, inst);
        for (int p = 0; p < inst.num_doses; ++p) {
            if (p < i)
                CHECK(dosed[p] == base[p]);  // dose i acts after t_i
            else
                CHECK(dosed[p] <= base[p] * (1 + 1e-12));
        }
    }
}

TEST_CASE("trajectory is pure: identical inputs give identical bits") {
    ProblemInstance inst = ProblemInstance::defaults();
    Rng rng(5150);
    DoseSchedule c = random_schedule(inst, rng);
    auto a = tumour_trajectory(c, inst);
    auto b = tumour_trajectory(c, inst);
    CHECK(a == b);
}

TEST_CASE("eradication flag reads the trajectory") {
    std::vector<double> high{1e9, 1e8};
    std::vector<double> low{1e9, 999.0};
    CHECK_FALSE(eradicated(high));
    CHECK(eradicated(low));
}

TEST_CASE("bad steps and shapes are rejected") {
    ProblemInstance inst = ProblemInstance::defaults();
    DoseSchedule zero(inst.num_doses, inst.num_drugs);
    CHECK_THROWS_AS(ode_trajectory(zero, inst, 0.0), ConfigError);
    CHECK_THROWS_AS(tumour_trajectory(DoseSchedule(1, 1), inst), DimensionError);
}

TEST_SUITE_END();
