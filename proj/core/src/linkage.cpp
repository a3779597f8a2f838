#include "chemoeda/linkage.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "chemoeda/errors.hpp"
#include "chemoeda/rng.hpp"

namespace chemo {

double InteractionReport::density() const {
    long long total = possible_pairs();
    return total == 0 ? 0.0 : static_cast<double>(pairs.size()) / static_cast<double>(total);
}

namespace {

bool second_difference_fires(double f00, double f11, double f10, double f01, double tol) {
    double second_diff = std::abs(f00 + f11 - f10 - f01);
    return second_diff > tol * std::max(1.0, std::abs(f00));
}

}  // namespace

bool probe_pair(const FitnessFn& f, const Chromosome& x, int i, int j, double tol) {
    if (i == j || i < 0 || j < 0 || i >= x.size() || j >= x.size())
        throw ConfigError("probe positions must be distinct and in range");
    Chromosome xi = x, xj = x, xij = x;
    xi.flip(i);
    xj.flip(j);
    xij.flip(i);
    xij.flip(j);
    return second_difference_fires(f(x), f(xij), f(xi), f(xj), tol);
}

InteractionReport detect_interactions(const FitnessFn& f, int length, int backgrounds,
                                      double tol, std::uint64_t seed) {
    if (length < 2) throw ConfigError("need at least two variables");
    if (backgrounds < 1) throw ConfigError("need at least one background point");

    InteractionReport report;
    report.length = length;
    report.backgrounds = backgrounds;
    report.tol = tol;
    report.seed = seed;

    std::vector<std::uint8_t> flagged(static_cast<size_t>(length) * length, 0);
    long long calls = 0;

    for (int b = 0; b < backgrounds; ++b) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
        Chromosome x = Chromosome::random(length, rng);
        double f0 = f(x);
        ++calls;
        // memoized single-flip values shared by every probe at this background
        std::vector<double> flip(length);
        for (int i = 0; i < length; ++i) {
            x.flip(i);
            flip[i] = f(x);
            x.flip(i);
            ++calls;
        }
        for (int i = 0; i < length; ++i) {
            for (int j = i + 1; j < length; ++j) {
                if (flagged[static_cast<size_t>(i) * length + j]) continue;
                x.flip(i);
                x.flip(j);
                double fij = f(x);
                x.flip(i);
                x.flip(j);
                ++calls;
                if (second_difference_fires(f0, fij, flip[i], flip[j], tol))
                    flagged[static_cast<size_t>(i) * length + j] = 1;
            }
        }
    }

    for (int i = 0; i < length; ++i)
        for (int j = i + 1; j < length; ++j)
            if (flagged[static_cast<size_t>(i) * length + j]) report.pairs.emplace_back(i, j);
    report.oracle_calls = calls;
    return report;
}

void write_interaction_report(const InteractionReport& report, std::ostream& out) {
    out << "# L = " << report.length << "\n";
    out << "# backgrounds = " << report.backgrounds << "\n";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", report.tol);
    out << "# tol = " << buf << "\n";
    out << "# seed = " << report.seed << "\n";
    out << "# pairs = " << report.pairs.size() << "\n";
    for (const auto& [i, j] : report.pairs) out << i << "," << j << "\n";
}

InteractionReport read_interaction_report(std::istream& in, const std::string& source_name) {
    InteractionReport report;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string where = source_name + ":" + std::to_string(lineno);
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ss(line.substr(1));
            std::string key, eq, value;
            ss >> key >> eq >> value;
            if (eq != "=") continue;
            if (key == "L") report.length = std::stoi(value);
            else if (key == "backgrounds") report.backgrounds = std::stoi(value);
            else if (key == "tol") report.tol = std::stod(value);
            else if (key == "seed") report.seed = std::stoull(value);
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError(where + ": expected 'i,j'");
        try {
            report.pairs.emplace_back(std::stoi(line.substr(0, comma)),
                                      std::stoi(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ParseError(where + ": bad pair line '" + line + "'");
        }
    }
    return report;
}

}  // namespace chemo
