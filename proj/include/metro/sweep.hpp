#pragma once

#include "metro/common.hpp"
#include "metro/jaynes_cummings.hpp"
#include "metro/oscillator.hpp"
#include "metro/qbounds.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace metro {

// Registered closed-form quantities for the oscillator model. Im vanishes
// here because the energy-measurement sample space carries the counting
// measure; it is registered so that measure-aware scripts can request it
// uniformly.
inline double oscillator_quantity(const oscillator::OscillatorConfig& config,
                                  const std::string& name) {
    if (name == "J") return oscillator::closed_form_qfi(config);
    if (name == "F_H" || name == "F") return oscillator::closed_form_energy_fi(config);
    if (name == "K_X") return oscillator::closed_form_kx(config);
    if (name == "bound13")
        return projective_bound(oscillator::closed_form_qfi(config), oscillator::closed_form_kx(config));
    if (name == "Im") return 0.0;
    if (name == "boundJ+Im") return measure_bound(oscillator::closed_form_qfi(config), 0.0);
    throw UsageError("unknown oscillator quantity: " + name +
                     " (expected J, F_H, K_X, bound13, Im, boundJ+Im)");
}

// Registered quantities for the Jaynes-Cummings model. There is no
// projective tangent term for this non-projective POVM; `bound` applies
// the (sqrt J + sqrt .)^2 form to the POVM term of the FI expansion,
// which for this model carries the whole FI.
inline double jc_quantity(const jaynescummings::JCConfig& config, const std::string& name) {
    if (name == "F") return jaynescummings::closed_form_fi(config);
    if (name == "J") return jaynescummings::closed_form_qfi(config);
    if (name == "bound")
        return projective_bound(jaynescummings::closed_form_qfi(config),
                                jaynescummings::closed_form_fi(config));
    throw UsageError("unknown jc quantity: " + name + " (expected F, J, bound)");
}

struct SweepSpec {
    std::string variable = "t";  // "t" or "g"
    double lo = 0.0;
    double hi = 1.0;
    int steps = 2;  // number of grid points, endpoints included
    oscillator::OscillatorConfig base;
    std::vector<std::string> quantities;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// Evaluates every requested quantity on the sweep grid, rows in grid order.
inline Table sweep(const SweepSpec& spec) {
    if (spec.steps < 2) throw UsageError("sweep needs at least 2 steps");
    if (spec.quantities.empty()) throw UsageError("sweep needs at least one quantity");
    if (spec.variable != "t" && spec.variable != "g")
        throw UsageError("sweep variable must be t or g");

    Table table;
    table.header.push_back(spec.variable);
    for (const auto& q : spec.quantities) table.header.push_back(q);

    const double dx = (spec.hi - spec.lo) / (spec.steps - 1);
    for (int i = 0; i < spec.steps; ++i) {
        const double value = spec.lo + dx * i;
        oscillator::OscillatorConfig config = spec.base;
        if (spec.variable == "t")
            config.time = value;
        else
            config.gravity = value;
        std::vector<double> row{value};
        for (const auto& q : spec.quantities) row.push_back(oscillator_quantity(config, q));
        table.rows.push_back(std::move(row));
    }
    return table;
}

// 17 significant digits: round-trip exact doubles, no quoting needed.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += ',';
        out += table.header[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

inline Table parse_csv(const std::string& text) {
    Table table;
    std::size_t pos = 0;
    bool header = true;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (header) {
            table.header = cells;
            header = false;
        } else {
            std::vector<double> row;
            row.reserve(cells.size());
            for (const auto& c : cells) row.push_back(std::strtod(c.c_str(), nullptr));
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

}  // namespace metro
