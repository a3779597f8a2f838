#pragma once

#include <array>
#include <span>
#include <vector>

#include "chemoeda/encoding.hpp"
#include "chemoeda/instance.hpp"

namespace chemo {

struct FitnessReport {
    double efficacy = 0.0;                 // drug benefit term
    std::array<double, 4> distances{};     // violation measure per constraint family
    double penalty = 0.0;                  // weighted sum of distances
    double fitness = 0.0;                  // efficacy - penalty
    bool feasible = false;                 // all four distances exactly zero
};

// Tumour size at each dose time under the given schedule, via the exact
// piecewise solution of the growth law: with u = ln(plateau/N), u satisfies
// u' = -lambda*u + D on each inter-dose interval, D constant. Computed in
// log space; throws NumericError if anything goes non-finite.
std::vector<double> tumour_trajectory(const DoseSchedule& c, const ProblemInstance& inst);

// Fixed-step RK4 integration of the growth law, for cross-checking
// tumour_trajectory. Steps never straddle a dose time. A step of 1e-3 time
// units reproduces the closed form to well under 1e-6 relative error.
std::vector<double> ode_trajectory(const DoseSchedule& c, const ProblemInstance& inst,
                                   double step);

// Diagnostic only: the treatment drove the tumour below ~10^3 cells at some
// dose time. Not part of the fitness.
bool eradicated(std::span<const double> trajectory, double threshold = 1e3);

// Violation measures for the four constraint families: instantaneous dose,
// cumulative dose, tumour size, toxic side effects. Each is a sum of squared
// violations normalized by the corresponding limit; zero iff satisfied.
std::array<double, 4> constraint_distances(const DoseSchedule& c,
                                           std::span<const double> trajectory,
                                           const ProblemInstance& inst);

// Fitness oracle bound to one instance; caches the decay factors so repeated
// evaluation stays cheap. Pure: same chromosome, same report, bit for bit.
class Evaluator {
  public:
    explicit Evaluator(const ProblemInstance& inst);

    FitnessReport report(const Chromosome& x) const;
    FitnessReport report(const DoseSchedule& c) const;
    double value(const Chromosome& x) const { return report(x).fitness; }

    const ProblemInstance& instance() const { return *inst_; }

  private:
    const ProblemInstance* inst_;
    std::vector<double> decay_;  // exp(growth_rate * (t_{i-1} - t_p)), row p, col i
    double efficacy_of(const DoseSchedule& c) const;
};

// One-shot convenience wrapper around Evaluator.
FitnessReport evaluate(const Chromosome& x, const ProblemInstance& inst);

}  // namespace chemo
