#include "chemoeda/encoding.hpp"

#include <cmath>
#include <string>

#include "chemoeda/errors.hpp"

namespace chemo {

Chromosome Chromosome::random(int length, Rng& rng) {
    Chromosome x(length);
    for (int i = 0; i < length; ++i) x.bits[i] = static_cast<std::uint8_t>(rng.bit());
    return x;
}

int hamming_distance(const Chromosome& a, const Chromosome& b) {
    int d = 0;
    const int n = a.size();
    for (int i = 0; i < n; ++i) d += a.bits[i] != b.bits[i];
    return d;
}

DoseSchedule decode(const Chromosome& x, const ProblemInstance& inst) {
    if (x.size() != inst.chromosome_length())
        throw DimensionError("chromosome length " + std::to_string(x.size()) +
                             " does not match instance length " +
                             std::to_string(inst.chromosome_length()));
    const int p = inst.bits_per_dose;
    DoseSchedule c(inst.num_doses, inst.num_drugs);
    int bit = 0;
    for (int i = 0; i < inst.num_doses; ++i) {
        for (int j = 0; j < inst.num_drugs; ++j) {
            int level = 0;
            for (int k = 0; k < p; ++k) level = (level << 1) | x.bits[bit++];
            c.at(i, j) = inst.unit[j] * level;
        }
    }
    return c;
}

Chromosome encode(const DoseSchedule& c, const ProblemInstance& inst) {
    if (c.rows != inst.num_doses || c.cols != inst.num_drugs)
        throw DimensionError("schedule is " + std::to_string(c.rows) + "x" +
                             std::to_string(c.cols) + ", instance wants " +
                             std::to_string(inst.num_doses) + "x" +
                             std::to_string(inst.num_drugs));
    const int p = inst.bits_per_dose;
    const int max_level = (1 << p) - 1;
    Chromosome x(inst.chromosome_length());
    int bit = 0;
    for (int i = 0; i < inst.num_doses; ++i) {
        for (int j = 0; j < inst.num_drugs; ++j) {
            double ratio = c.at(i, j) / inst.unit[j];
            double rounded = std::round(ratio);
            if (std::abs(ratio - rounded) > 1e-9)
                throw InvariantError("schedule entry (" + std::to_string(i) + "," +
                                     std::to_string(j) + ") is not a multiple of the unit");
            long long level = static_cast<long long>(rounded);
            if (level < 0 || level > max_level)
                throw InvariantError("schedule entry (" + std::to_string(i) + "," +
                                     std::to_string(j) + ") outside [0, " +
                                     std::to_string(max_level) + "] units");
            for (int k = p - 1; k >= 0; --k)
                x.bits[bit++] = static_cast<std::uint8_t>((level >> k) & 1);
        }
    }
    return x;
}

}  // namespace chemo
