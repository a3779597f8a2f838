#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace chemo {

// All parameters of one treatment-design problem: tumour growth, drug
// efficacies, toxicity risks, dose limits and penalty weights. Immutable
// after validate(); shareable across threads.
struct ProblemInstance {
    int num_doses = 10;      // dose times per treatment
    int num_drugs = 10;      // drugs per dose
    int bits_per_dose = 4;   // bit width of one concentration level

    double growth_rate = 0.1;    // per day
    double plateau = 1e12;       // asymptotic tumour size, cells
    double initial_size = 1e9;   // tumour size at t = 0, cells
    double max_size = 1e10;      // lethal tumour size, cells

    std::vector<double> efficacy;           // kill rate per concentration unit, per drug
    std::vector<std::vector<double>> toxicity;  // organ x drug risk factors
    std::vector<double> unit;               // concentration unit per drug
    std::vector<double> dose_times;         // strictly increasing, first dose after t = 0
    std::vector<double> max_dose;           // instantaneous cap per drug
    std::vector<double> max_cumulative;     // cumulative cap per drug
    std::vector<double> side_effect_limit;  // weighted-dose cap per organ
    std::array<double, 4> penalty_weights{100.0, 100.0, 100.0, 100.0};

    int organs() const { return static_cast<int>(toxicity.size()); }
    int chromosome_length() const { return bits_per_dose * num_doses * num_drugs; }
    int dose_levels() const { return 1 << bits_per_dose; }

    // Collects every invariant violation; throws InvariantError listing all
    // of them, or returns the empty list.
    std::vector<std::string> check() const;
    void validate() const;

    // Built-in parameter set, matching data/default.instance.
    static ProblemInstance defaults();
    // 4 drugs x 4 doses reduction used by small-scale interaction censuses.
    static ProblemInstance reduced4x4();
};

// Flat key = value text format. '#' starts a comment; vectors are comma
// separated; matrices are one row per line following a bare "key =" line.
// Missing keys fall back to the built-in defaults; unknown keys are errors.
// Overrides are (key, value) pairs applied on top of the file's entries
// before materialization; matrix values use ';' between rows.
using InstanceOverrides = std::vector<std::pair<std::string, std::string>>;

ProblemInstance parse_instance(std::istream& in, const std::string& source_name,
                               const InstanceOverrides& overrides = {});
ProblemInstance load_instance(const std::string& path, const InstanceOverrides& overrides = {});
ProblemInstance instance_from_overrides(const InstanceOverrides& overrides);
void save_instance(const ProblemInstance& inst, std::ostream& out);
std::string instance_text(const ProblemInstance& inst);

// FNV-1a over the canonical serialization; stamped into output files so a
// result can be traced back to the exact instance that produced it.
std::uint64_t instance_digest(const ProblemInstance& inst);

}  // namespace chemo
