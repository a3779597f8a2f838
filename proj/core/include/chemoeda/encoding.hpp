#pragma once

#include <cstdint>
#include <vector>

#include "chemoeda/instance.hpp"
#include "chemoeda/rng.hpp"

namespace chemo {

// Fixed-length bit string; one treatment schedule in genotype space.
struct Chromosome {
    std::vector<std::uint8_t> bits;  // each 0 or 1

    Chromosome() = default;
    explicit Chromosome(int length) : bits(length, 0) {}

    int size() const { return static_cast<int>(bits.size()); }
    void flip(int i) { bits[i] ^= 1; }

    static Chromosome random(int length, Rng& rng);

    bool operator==(const Chromosome&) const = default;
};

int hamming_distance(const Chromosome& a, const Chromosome& b);

// Dose levels in concentration units, one row per dose time, one column per
// drug. Entries are integer multiples of the drug's unit.
struct DoseSchedule {
    int rows = 0;  // dose times
    int cols = 0;  // drugs
    std::vector<double> level;  // row-major

    DoseSchedule() = default;
    DoseSchedule(int r, int c) : rows(r), cols(c), level(static_cast<size_t>(r) * c, 0.0) {}

    double& at(int i, int j) { return level[static_cast<size_t>(i) * cols + j]; }
    double at(int i, int j) const { return level[static_cast<size_t>(i) * cols + j]; }

    bool operator==(const DoseSchedule&) const = default;
};

// Genotype -> schedule. Each consecutive group of bits_per_dose bits is one
// concentration level, most significant bit first, row-major over
// (dose time, drug). Throws DimensionError on length mismatch.
DoseSchedule decode(const Chromosome& x, const ProblemInstance& inst);

// Schedule -> genotype, exact inverse of decode. Throws DimensionError on a
// shape mismatch and InvariantError when an entry is out of range or not a
// multiple of the drug's unit.
Chromosome encode(const DoseSchedule& c, const ProblemInstance& inst);

}  // namespace chemo
