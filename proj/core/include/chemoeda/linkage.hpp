#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "chemoeda/encoding.hpp"

namespace chemo {

using FitnessFn = std::function<double(const Chromosome&)>;

struct InteractionReport {
    int length = 0;
    int backgrounds = 0;
    double tol = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::pair<int, int>> pairs;  // 0-based, i < j, sorted
    long long oracle_calls = 0;

    long long possible_pairs() const {
        return static_cast<long long>(length) * (length - 1) / 2;
    }
    double density() const;
};

// Second-difference probe at background x: positions i and j interact when
// |f(x) + f(x^ei^ej) - f(x^ei) - f(x^ej)| exceeds tol * max(1, |f(x)|).
// Exactly four oracle calls.
bool probe_pair(const FitnessFn& f, const Chromosome& x, int i, int j, double tol);

// Probes every unordered pair against `backgrounds` shared random background
// chromosomes; a pair is flagged if any probe fires. f(x) and the single-flip
// values are memoized per background, so a census costs about
// backgrounds * (length + C(length,2) + 1) evaluations.
InteractionReport detect_interactions(const FitnessFn& f, int length, int backgrounds,
                                      double tol, std::uint64_t seed);

// Header lines ("# key = value") followed by one "i,j" line per pair.
void write_interaction_report(const InteractionReport& report, std::ostream& out);
InteractionReport read_interaction_report(std::istream& in, const std::string& source_name);

}  // namespace chemo
