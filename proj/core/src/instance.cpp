#include "chemoeda/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "chemoeda/errors.hpp"

namespace chemo {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    if (v == std::floor(v) && std::abs(v) <= 1e6) {
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
        return buf;
    }
    // otherwise the shortest decimal that parses back to the same double
    for (int prec = 1; prec < 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_vector(const std::vector<double>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += fmt_double(v[i]);
    }
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& text, const std::string& where) {
    try {
        size_t pos = 0;
        double v = std::stod(text, &pos);
        if (trim(text.substr(pos)) != "") throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ParseError(where + ": not a number: '" + text + "'");
    }
}

std::vector<double> parse_list(const std::string& text, const std::string& where) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(trim(item), where));
    if (out.empty()) throw ParseError(where + ": empty value");
    return out;
}

// Scalar entries broadcast to the full vector length.
std::vector<double> broadcast(std::vector<double> v, size_t n, const std::string& key) {
    if (v.size() == 1 && n > 1) v.assign(n, v[0]);
    if (v.size() != n)
        throw ParseError("key '" + key + "': expected " + std::to_string(n) +
                         " entries, got " + std::to_string(v.size()));
    return v;
}

struct RawEntry {
    int line = 0;
    std::vector<double> values;           // scalar/vector form
    std::vector<std::vector<double>> rows;  // matrix form
    bool is_matrix = false;
};

}  // namespace

namespace {

// High-efficacy drugs get low organ risk and vice versa; risk rows are
// normalized to sum 1 with a per-organ wobble so organs differ.
void fill_toxicity(std::vector<std::vector<double>>& eta, int organs, int drugs,
                   const std::vector<double>& efficacy) {
    double top = *std::max_element(efficacy.begin(), efficacy.end());
    eta.assign(organs, std::vector<double>(drugs, 0.0));
    for (int k = 0; k < organs; ++k) {
        double sum = 0.0;
        for (int j = 0; j < drugs; ++j) {
            double base = efficacy[j] >= 0.5 * top ? 0.55 : 1.45;
            double wobble = 1.0 + 0.25 * (((3 * k + 5 * j) % 7) / 7.0 - 0.45);
            eta[k][j] = base * wobble;
            sum += eta[k][j];
        }
        for (int j = 0; j < drugs; ++j) eta[k][j] /= sum;
    }
}

}  // namespace

ProblemInstance ProblemInstance::defaults() {
    ProblemInstance inst;
    inst.num_doses = 10;
    inst.num_drugs = 10;
    inst.bits_per_dose = 4;
    inst.growth_rate = 0.1;
    inst.plateau = 1e12;
    inst.initial_size = 1e9;
    // exp(-6.05) of the plateau: the untreated tumour crosses this at the
    // second dose time, and a random schedule's kill rate leaves the cap
    // violated in roughly two thirds of cases
    inst.max_size = 2.357862006490233e9;
    inst.efficacy.assign(inst.num_drugs, 0.002);
    inst.efficacy[0] = inst.efficacy[5] = 0.03;
    inst.unit.assign(inst.num_drugs, 1.0);
    inst.max_dose.assign(inst.num_drugs, 13.0);
    inst.max_cumulative.assign(inst.num_drugs, 100.0);
    inst.side_effect_limit.assign(5, 8.0);
    inst.dose_times.resize(inst.num_doses);
    for (int i = 0; i < inst.num_doses; ++i) inst.dose_times[i] = i + 1.0;
    fill_toxicity(inst.toxicity, 5, inst.num_drugs, inst.efficacy);
    inst.penalty_weights = {10000.0, 10000.0, 10000.0, 10000.0};
    return inst;
}

ProblemInstance ProblemInstance::reduced4x4() {
    ProblemInstance inst = defaults();
    inst.num_doses = 4;
    inst.num_drugs = 4;
    inst.efficacy.assign(4, 0.002);
    inst.efficacy[0] = 0.03;
    // exp(-4.65) of the plateau; the untreated tumour still crosses it, and
    // modest dosing restores feasibility. Random schedules sit deep inside
    // the cumulative and side-effect violation regions, which keeps census
    // counts stable from seed to seed.
    inst.max_size = 9.561601930543505e9;
    inst.unit.assign(4, 1.0);
    inst.max_dose.assign(4, 13.0);
    inst.max_cumulative.assign(4, 24.0);
    inst.side_effect_limit.assign(3, 6.0);
    inst.dose_times = {1.0, 2.0, 3.0, 4.0};
    fill_toxicity(inst.toxicity, 3, 4, inst.efficacy);
    return inst;
}

std::vector<std::string> ProblemInstance::check() const {
    std::vector<std::string> bad;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) bad.push_back(what);
    };
    expect(num_doses >= 1, "s >= 1");
    expect(num_drugs >= 1, "d >= 1");
    expect(bits_per_dose >= 1, "bits_per_dose >= 1");
    expect(bits_per_dose <= 20, "bits_per_dose <= 20");
    expect(growth_rate > 0.0, "lambda > 0");
    expect(initial_size > 0.0 && initial_size < plateau, "n0 < theta");
    expect(max_size > initial_size, "n_max > n0");
    expect(organs() >= 1, "m >= 1");

    size_t d = static_cast<size_t>(num_drugs);
    expect(efficacy.size() == d, "kappa has d entries");
    expect(unit.size() == d, "delta_c has d entries");
    expect(max_dose.size() == d, "c_max has d entries");
    expect(max_cumulative.size() == d, "c_cum has d entries");
    expect(dose_times.size() == static_cast<size_t>(num_doses), "dose_times has s entries");
    expect(side_effect_limit.size() == toxicity.size(), "c_seff has one entry per organ");
    for (const auto& row : toxicity)
        expect(row.size() == d, "eta rows have d entries");

    auto all_positive = [](const std::vector<double>& v) {
        for (double x : v)
            if (!(x > 0.0)) return false;
        return true;
    };
    auto all_nonnegative = [](const std::vector<double>& v) {
        for (double x : v)
            if (!(x >= 0.0)) return false;
        return true;
    };
    expect(all_positive(unit), "delta_c > 0");
    expect(all_positive(max_dose), "c_max > 0");
    expect(all_positive(max_cumulative), "c_cum > 0");
    expect(all_positive(side_effect_limit), "c_seff > 0");
    expect(all_nonnegative(efficacy), "kappa >= 0");
    for (const auto& row : toxicity)
        expect(all_nonnegative(row), "eta >= 0");
    for (double p : penalty_weights)
        expect(p >= 0.0, "penalties >= 0");

    bool increasing = !dose_times.empty() && dose_times[0] > 0.0;
    for (size_t i = 0; i + 1 < dose_times.size(); ++i)
        if (!(dose_times[i] < dose_times[i + 1])) increasing = false;
    expect(increasing, "dose_times strictly increasing, all > 0");
    return bad;
}

void ProblemInstance::validate() const {
    auto bad = check();
    if (bad.empty()) return;
    std::string msg = "invalid instance:";
    for (const auto& b : bad) msg += "\n  violated: " + b;
    throw InvariantError(msg);
}

namespace {

const std::map<std::string, int>& known_keys() {
    static const std::map<std::string, int> kKnown = {
        {"s", 0},          {"d", 0},         {"bits_per_dose", 0}, {"lambda", 0},
        {"theta", 0},      {"n0", 0},        {"n_max", 0},         {"kappa", 1},
        {"delta_c", 1},    {"c_max", 1},     {"c_cum", 1},         {"c_seff", 1},
        {"dose_times", 1}, {"penalties", 1}, {"eta", 2},
    };
    return kKnown;
}

// Overrides outrank file entries; matrix rows are ';' separated.
void apply_overrides(std::map<std::string, RawEntry>& entries,
                     const InstanceOverrides& overrides) {
    for (const auto& [key, value] : overrides) {
        auto it = known_keys().find(key);
        if (it == known_keys().end())
            throw ParseError("override: unknown key '" + key + "'");
        RawEntry e;
        if (it->second == 2) {
            e.is_matrix = true;
            std::stringstream ss(value);
            std::string row;
            while (std::getline(ss, row, ';'))
                e.rows.push_back(parse_list(trim(row), "override '" + key + "'"));
            if (e.rows.empty()) throw ParseError("override '" + key + "': empty value");
        } else {
            e.values = parse_list(value, "override '" + key + "'");
        }
        entries[key] = std::move(e);
    }
}

}  // namespace

ProblemInstance parse_instance(std::istream& in, const std::string& source_name,
                               const InstanceOverrides& overrides) {
    const auto& kKnown = known_keys();

    std::map<std::string, RawEntry> entries;
    std::string line;
    int lineno = 0;
    std::string open_matrix;  // key currently collecting rows

    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::string text = trim(line);
        if (text.empty()) continue;
        std::string where = source_name + ":" + std::to_string(lineno);

        auto eq = text.find('=');
        if (eq == std::string::npos) {
            if (open_matrix.empty())
                throw ParseError(where + ": expected 'key = value'");
            entries[open_matrix].rows.push_back(parse_list(text, where));
            continue;
        }

        std::string key = trim(text.substr(0, eq));
        std::string value = trim(text.substr(eq + 1));
        auto it = kKnown.find(key);
        if (it == kKnown.end()) throw ParseError(where + ": unknown key '" + key + "'");
        if (entries.count(key)) throw ParseError(where + ": duplicate key '" + key + "'");

        RawEntry e;
        e.line = lineno;
        if (it->second == 2) {
            // matrix block: rows follow on their own lines
            e.is_matrix = true;
            if (!value.empty()) e.rows.push_back(parse_list(value, where));
            open_matrix = key;
        } else {
            if (value.empty()) throw ParseError(where + ": key '" + key + "' has no value");
            e.values = parse_list(value, where);
            open_matrix.clear();
        }
        entries[key] = std::move(e);
    }

    apply_overrides(entries, overrides);

    ProblemInstance inst = ProblemInstance::defaults();
    auto scalar = [&](const char* key, double& field) {
        auto it = entries.find(key);
        if (it == entries.end()) return false;
        if (it->second.values.size() != 1)
            throw ParseError(source_name + ":" + std::to_string(it->second.line) +
                             ": key '" + std::string(key) + "' takes a single value");
        field = it->second.values[0];
        return true;
    };

    double v = 0;
    if (scalar("s", v)) inst.num_doses = static_cast<int>(v);
    if (scalar("d", v)) inst.num_drugs = static_cast<int>(v);
    if (scalar("bits_per_dose", v)) inst.bits_per_dose = static_cast<int>(v);
    scalar("lambda", inst.growth_rate);
    scalar("theta", inst.plateau);
    scalar("n0", inst.initial_size);
    scalar("n_max", inst.max_size);

    // Organ count comes from eta if present, else from c_seff, else default.
    int organs = inst.organs();
    if (auto it = entries.find("eta"); it != entries.end())
        organs = static_cast<int>(it->second.rows.size());
    else if (auto it2 = entries.find("c_seff"); it2 != entries.end() && it2->second.values.size() > 1)
        organs = static_cast<int>(it2->second.values.size());
    if (organs < 1) throw ParseError(source_name + ": eta needs at least one row");

    size_t d = static_cast<size_t>(inst.num_drugs);
    size_t s = static_cast<size_t>(inst.num_doses);
    // missing keys keep the built-in defaults; a default vector that no
    // longer fits a reshaped instance is refilled from a scalar fallback
    auto vec = [&](const char* key, std::vector<double>& field, size_t n, double fallback) {
        auto it = entries.find(key);
        if (it == entries.end()) {
            if (field.size() != n) field.assign(n, fallback);
            return false;
        }
        field = broadcast(it->second.values, n, key);
        return true;
    };

    vec("kappa", inst.efficacy, d, 0.002);
    vec("delta_c", inst.unit, d, 1.0);
    vec("c_max", inst.max_dose, d, 13.0);
    vec("c_cum", inst.max_cumulative, d, 100.0);
    vec("c_seff", inst.side_effect_limit, static_cast<size_t>(organs), 8.0);
    if (auto it = entries.find("dose_times"); it != entries.end()) {
        inst.dose_times = it->second.values;
        if (inst.dose_times.size() != s)
            throw ParseError("key 'dose_times': expected " + std::to_string(s) + " entries");
    } else if (inst.dose_times.size() != s) {
        inst.dose_times.resize(s);
        for (size_t i = 0; i < s; ++i) inst.dose_times[i] = static_cast<double>(i + 1);
    }

    if (auto it = entries.find("penalties"); it != entries.end()) {
        auto p = broadcast(it->second.values, 4, "penalties");
        for (int i = 0; i < 4; ++i) inst.penalty_weights[i] = p[i];
    }

    if (auto it = entries.find("eta"); it != entries.end()) {
        inst.toxicity.clear();
        for (const auto& row : it->second.rows)
            inst.toxicity.push_back(broadcast(row, d, "eta"));
    } else if (inst.toxicity.size() != static_cast<size_t>(organs) ||
               inst.toxicity[0].size() != d || entries.count("kappa")) {
        // regenerate the default pattern at the requested shape
        fill_toxicity(inst.toxicity, organs, static_cast<int>(d), inst.efficacy);
        inst.side_effect_limit = broadcast(inst.side_effect_limit, organs, "c_seff");
    }

    inst.validate();
    return inst;
}

ProblemInstance load_instance(const std::string& path, const InstanceOverrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file: " + path);
    return parse_instance(in, path, overrides);
}

ProblemInstance instance_from_overrides(const InstanceOverrides& overrides) {
    std::istringstream empty;
    return parse_instance(empty, "<builtin>", overrides);
}

void save_instance(const ProblemInstance& inst, std::ostream& out) {
    out << "s = " << inst.num_doses << "\n";
    out << "d = " << inst.num_drugs << "\n";
    out << "bits_per_dose = " << inst.bits_per_dose << "\n";
    out << "lambda = " << fmt_double(inst.growth_rate) << "\n";
    out << "theta = " << fmt_double(inst.plateau) << "\n";
    out << "n0 = " << fmt_double(inst.initial_size) << "\n";
    out << "n_max = " << fmt_double(inst.max_size) << "\n";
    out << "kappa = " << fmt_vector(inst.efficacy) << "\n";
    out << "delta_c = " << fmt_vector(inst.unit) << "\n";
    out << "dose_times = " << fmt_vector(inst.dose_times) << "\n";
    out << "c_max = " << fmt_vector(inst.max_dose) << "\n";
    out << "c_cum = " << fmt_vector(inst.max_cumulative) << "\n";
    out << "c_seff = " << fmt_vector(inst.side_effect_limit) << "\n";
    out << "penalties = " << fmt_vector({inst.penalty_weights.begin(), inst.penalty_weights.end()}) << "\n";
    out << "eta =\n";
    for (const auto& row : inst.toxicity) out << "  " << fmt_vector(row) << "\n";
}

std::string instance_text(const ProblemInstance& inst) {
    std::ostringstream ss;
    save_instance(inst, ss);
    return ss.str();
}

std::uint64_t instance_digest(const ProblemInstance& inst) {
    std::string text = instance_text(inst);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace chemo
