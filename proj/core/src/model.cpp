#include "chemoeda/model.hpp"

#include <cmath>

#include "chemoeda/errors.hpp"

namespace chemo {

namespace {

// Kill rate while dose row i is active: sum_j efficacy_j * level_ij.
std::vector<double> kill_rates(const DoseSchedule& c, const ProblemInstance& inst) {
    std::vector<double> rate(c.rows, 0.0);
    for (int i = 0; i < c.rows; ++i) {
        double sum = 0.0;
        for (int j = 0; j < c.cols; ++j) sum += inst.efficacy[j] * c.at(i, j);
        rate[i] = sum;
    }
    return rate;
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw NumericError(std::string("non-finite value in ") + what);
}

}  // namespace

std::vector<double> tumour_trajectory(const DoseSchedule& c, const ProblemInstance& inst) {
    if (c.rows != inst.num_doses || c.cols != inst.num_drugs)
        throw DimensionError("schedule shape does not match instance");
    const double lambda = inst.growth_rate;
    const std::vector<double> rate = kill_rates(c, inst);

    std::vector<double> sizes(inst.num_doses);
    double u = std::log(inst.plateau / inst.initial_size);
    double t = 0.0;
    for (int i = 0; i < inst.num_doses; ++i) {
        // interval [t, t_i) is governed by the previous dose row (none before t_1)
        const double drug = i == 0 ? 0.0 : rate[i - 1];
        const double dt = inst.dose_times[i] - t;
        const double decay = std::exp(-lambda * dt);
        u = u * decay + (drug / lambda) * (1.0 - decay);
        t = inst.dose_times[i];
        double n = inst.plateau * std::exp(-u);
        require_finite(n, "tumour_trajectory");
        sizes[i] = n;
    }
    return sizes;
}

std::vector<double> ode_trajectory(const DoseSchedule& c, const ProblemInstance& inst,
                                   double step) {
    if (step <= 0.0) throw ConfigError("integration step must be positive");
    if (c.rows != inst.num_doses || c.cols != inst.num_drugs)
        throw DimensionError("schedule shape does not match instance");
    const double lambda = inst.growth_rate;
    const std::vector<double> rate = kill_rates(c, inst);

    auto derivative = [&](double n, double drug) {
        return n * (lambda * std::log(inst.plateau / n) - drug);
    };

    std::vector<double> sizes(inst.num_doses);
    double n = inst.initial_size;
    double t = 0.0;
    for (int i = 0; i < inst.num_doses; ++i) {
        // sub-steps never straddle a dose time, so the drug term stays constant
        const double drug = i == 0 ? 0.0 : rate[i - 1];
        const double span = inst.dose_times[i] - t;
        const int substeps = std::max(1, static_cast<int>(std::ceil(span / step)));
        const double h = span / substeps;
        for (int k = 0; k < substeps; ++k) {
            double k1 = derivative(n, drug);
            double k2 = derivative(n + 0.5 * h * k1, drug);
            double k3 = derivative(n + 0.5 * h * k2, drug);
            double k4 = derivative(n + h * k3, drug);
            n += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            require_finite(n, "ode_trajectory");
        }
        t = inst.dose_times[i];
        sizes[i] = n;
    }
    return sizes;
}

bool eradicated(std::span<const double> trajectory, double threshold) {
    for (double n : trajectory)
        if (n < threshold) return true;
    return false;
}

std::array<double, 4> constraint_distances(const DoseSchedule& c,
                                           std::span<const double> trajectory,
                                           const ProblemInstance& inst) {
    std::array<double, 4> d{0.0, 0.0, 0.0, 0.0};
    auto violation = [](double amount, double limit) {
        if (amount <= 0.0) return 0.0;
        double v = amount / limit;
        return v * v;
    };

    // instantaneous dose caps
    for (int i = 0; i < c.rows; ++i)
        for (int j = 0; j < c.cols; ++j)
            d[0] += violation(c.at(i, j) - inst.max_dose[j], inst.max_dose[j]);

    // cumulative dose caps
    for (int j = 0; j < c.cols; ++j) {
        double total = 0.0;
        for (int i = 0; i < c.rows; ++i) total += c.at(i, j);
        d[1] += violation(total - inst.max_cumulative[j], inst.max_cumulative[j]);
    }

    // tumour size cap at every dose time
    for (double n : trajectory) d[2] += violation(n - inst.max_size, inst.max_size);

    // toxic side effects per organ at every dose time
    const int m = inst.organs();
    for (int i = 0; i < c.rows; ++i) {
        for (int k = 0; k < m; ++k) {
            double load = 0.0;
            for (int j = 0; j < c.cols; ++j) load += inst.toxicity[k][j] * c.at(i, j);
            d[3] += violation(load - inst.side_effect_limit[k], inst.side_effect_limit[k]);
        }
    }
    return d;
}

Evaluator::Evaluator(const ProblemInstance& inst) : inst_(&inst) {
    const int s = inst.num_doses;
    decay_.assign(static_cast<size_t>(s) * s, 0.0);
    for (int p = 0; p < s; ++p) {
        for (int i = 0; i <= p; ++i) {
            double t_prev = i == 0 ? 0.0 : inst.dose_times[i - 1];
            decay_[static_cast<size_t>(p) * s + i] =
                std::exp(inst.growth_rate * (t_prev - inst.dose_times[p]));
        }
    }
}

double Evaluator::efficacy_of(const DoseSchedule& c) const {
    const int s = inst_->num_doses;
    // weighted row kills: sum_j efficacy_j * level_ij
    double total = 0.0;
    std::vector<double> row(s, 0.0);
    for (int i = 0; i < s; ++i) {
        double sum = 0.0;
        for (int j = 0; j < c.cols; ++j) sum += inst_->efficacy[j] * c.at(i, j);
        row[i] = sum;
    }
    for (int p = 0; p < s; ++p)
        for (int i = 0; i <= p; ++i) total += row[i] * decay_[static_cast<size_t>(p) * s + i];
    require_finite(total, "efficacy");
    return total;
}

FitnessReport Evaluator::report(const DoseSchedule& c) const {
    FitnessReport r;
    r.efficacy = efficacy_of(c);
    auto traj = tumour_trajectory(c, *inst_);
    r.distances = constraint_distances(c, traj, *inst_);
    r.penalty = 0.0;
    for (int k = 0; k < 4; ++k) r.penalty += inst_->penalty_weights[k] * r.distances[k];
    r.fitness = r.efficacy - r.penalty;
    r.feasible = r.distances[0] == 0.0 && r.distances[1] == 0.0 && r.distances[2] == 0.0 &&
                 r.distances[3] == 0.0;
    require_finite(r.fitness, "fitness");
    return r;
}

FitnessReport Evaluator::report(const Chromosome& x) const {
    return report(decode(x, *inst_));
}

FitnessReport evaluate(const Chromosome& x, const ProblemInstance& inst) {
    return Evaluator(inst).report(x);
}

}  // namespace chemo
