#pragma once

// Plain-text configuration files.
//
//   # comment
//   [section]
//   key = value
//
// One key per line; '#' starts a comment anywhere on a line; surrounding
// whitespace is trimmed; keys may repeat (the [plan] section lists one
// `band = lo hi` line per band). Recognized sections for a lattice:
//
//   [lattice]   width, height, boundary (dead | torus)
//   [rule]      rule (B.../S... notation)
//   [plan]      w_self, band (repeatable); synthesized from the rule if absent
//   [volts]     window = v_low v_high, p_low, p_high
//   [dynamics]  preset (circuit | mfc | custom), delay_d, tau, dt,
//               element (latched | transport)

#include <charconv>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ca.hpp"
#include "csv.hpp"
#include "lattice.hpp"
#include "pattern.hpp"
#include "synth.hpp"

namespace mfca {

struct ConfigEntry {
    std::string section;
    std::string key;
    std::string value;
    int line;
};

class KeyValueDocument {
public:
    static KeyValueDocument parse(std::string_view text)
    {
        KeyValueDocument doc;
        std::string section;
        int line_no = 0;
        std::size_t pos = 0;
        while (pos < text.size()) {
            std::size_t eol = text.find('\n', pos);
            if (eol == std::string_view::npos)
                eol = text.size();
            std::string_view line = text.substr(pos, eol - pos);
            pos = eol + 1;
            ++line_no;
            line = trim(line.substr(0, line.find('#')));
            if (line.empty())
                continue;
            if (line.front() == '[') {
                if (line.back() != ']' || line.size() < 3)
                    throw ParseError("malformed section header", line_no, 1);
                section = std::string(trim(line.substr(1, line.size() - 2)));
                continue;
            }
            auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw ParseError("expected 'key = value'", line_no, 1);
            auto key = trim(line.substr(0, eq));
            if (key.empty())
                throw ParseError("empty key", line_no, 1);
            doc.entries_.push_back({section, std::string(key),
                                    std::string(trim(line.substr(eq + 1))), line_no});
        }
        return doc;
    }

    const std::vector<ConfigEntry>& entries() const noexcept { return entries_; }

    bool has_section(std::string_view section) const
    {
        for (const auto& e : entries_)
            if (e.section == section)
                return true;
        return false;
    }

    const ConfigEntry* find(std::string_view section, std::string_view key) const
    {
        const ConfigEntry* found = nullptr;
        for (const auto& e : entries_)
            if (e.section == section && e.key == key)
                found = &e;
        return found;
    }

    std::vector<const ConfigEntry*> find_all(std::string_view section, std::string_view key) const
    {
        std::vector<const ConfigEntry*> out;
        for (const auto& e : entries_)
            if (e.section == section && e.key == key)
                out.push_back(&e);
        return out;
    }

    static std::string_view trim(std::string_view s)
    {
        const auto first = s.find_first_not_of(" \t\r");
        if (first == std::string_view::npos)
            return {};
        const auto last = s.find_last_not_of(" \t\r");
        return s.substr(first, last - first + 1);
    }

private:
    std::vector<ConfigEntry> entries_;
};

namespace detail {

inline std::vector<double> parse_numbers(const ConfigEntry& e, std::size_t expected)
{
    std::vector<double> out;
    std::string_view rest = e.value;
    while (true) {
        rest = KeyValueDocument::trim(rest);
        if (rest.empty())
            break;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
        if (ec != std::errc{})
            throw ParseError("'" + e.key + "' expects numbers, got '" + e.value + "'", e.line, 1);
        out.push_back(v);
        rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
        if (!rest.empty() && rest.front() != ' ' && rest.front() != '\t' && rest.front() != ',')
            throw ParseError("'" + e.key + "' expects numbers, got '" + e.value + "'", e.line, 1);
        if (!rest.empty() && rest.front() == ',')
            rest.remove_prefix(1);
    }
    if (out.size() != expected)
        throw ParseError("'" + e.key + "' expects " + std::to_string(expected) + " value(s)", e.line, 1);
    return out;
}

inline double number_or(const KeyValueDocument& doc, std::string_view section, std::string_view key,
                        double fallback)
{
    const auto* e = doc.find(section, key);
    return e ? parse_numbers(*e, 1).front() : fallback;
}

inline int int_or(const KeyValueDocument& doc, std::string_view section, std::string_view key,
                  int fallback)
{
    const auto* e = doc.find(section, key);
    if (!e)
        return fallback;
    int v = 0;
    auto [ptr, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
    if (ec != std::errc{} || ptr != e->value.data() + e->value.size())
        throw ParseError("'" + e->key + "' expects an integer", e->line, 1);
    return v;
}

} // namespace detail

inline std::string plan_to_config_text(const BandPlan& plan)
{
    std::string out = "[plan]\nw_self = " + format_number(plan.w_self) + "\n";
    for (const auto& b : plan.bands)
        out += "band = " + format_number(b.lo) + " " + format_number(b.hi) + "\n";
    return out;
}

inline BandPlan plan_from_document(const KeyValueDocument& doc)
{
    BandPlan plan;
    plan.w_self = detail::number_or(doc, "plan", "w_self", 0.0);
    for (const auto* e : doc.find_all("plan", "band")) {
        auto v = detail::parse_numbers(*e, 2);
        plan.bands.push_back({v[0], v[1]});
    }
    plan.validate();
    return plan;
}

inline std::optional<CellDynamics> dynamics_preset(std::string_view name)
{
    if (name == "circuit" || name == "circuit_1ms")
        return CellDynamics::circuit_1ms();
    if (name == "mfc" || name == "mfc_4min")
        return CellDynamics::mfc_4min();
    return std::nullopt;
}

/// Reads a lattice description; the first plan band is calibrated onto the
/// [volts] window (default 2 7).
inline LatticeConfig lattice_config_from_text(std::string_view text)
{
    const auto doc = KeyValueDocument::parse(text);
    LatticeConfig cfg;
    cfg.width = detail::int_or(doc, "lattice", "width", 3);
    cfg.height = detail::int_or(doc, "lattice", "height", 3);
    if (const auto* e = doc.find("lattice", "boundary"))
        cfg.boundary = parse_boundary(e->value);
    if (const auto* e = doc.find("rule", "rule"))
        cfg.rule = parse_rule(e->value);

    if (doc.has_section("plan")) {
        cfg.plan = plan_from_document(doc);
    } else {
        auto plan = synthesize(cfg.rule);
        if (!plan)
            throw std::invalid_argument("rule " + to_string(cfg.rule) + " has no band realization");
        cfg.plan = *plan;
    }

    double v_low = 2.0, v_high = 7.0;
    if (const auto* e = doc.find("volts", "window")) {
        auto v = detail::parse_numbers(*e, 2);
        v_low = v[0];
        v_high = v[1];
    }
    cfg.p_low = detail::number_or(doc, "volts", "p_low", 0.0);
    cfg.p_high = detail::number_or(doc, "volts", "p_high", 1.0);
    if (!cfg.plan.bands.empty()) {
        auto volts = plan_to_volts(cfg.plan, v_low, v_high, cfg.p_low, cfg.p_high);
        cfg.calibration = volts.calibration;
        cfg.band_params = std::move(volts.bands);
    }

    cfg.dynamics = CellDynamics::circuit_1ms();
    if (const auto* e = doc.find("dynamics", "preset")) {
        if (auto preset = dynamics_preset(e->value))
            cfg.dynamics = *preset;
        else if (e->value != "custom")
            throw ParseError("unknown dynamics preset '" + e->value + "'", e->line, 1);
    }
    cfg.dynamics.delay_d = detail::number_or(doc, "dynamics", "delay_d", cfg.dynamics.delay_d);
    cfg.dynamics.tau = detail::number_or(doc, "dynamics", "tau", cfg.dynamics.tau);
    cfg.dynamics.dt = detail::number_or(doc, "dynamics", "dt", cfg.dynamics.dt);
    if (const auto* e = doc.find("dynamics", "element")) {
        try {
            cfg.dynamics.element = parse_delay_element(e->value);
        } catch (const std::invalid_argument& ex) {
            throw ParseError(ex.what(), e->line, 1);
        }
    }

    cfg.validate();
    return cfg;
}

inline std::string lattice_config_to_text(const LatticeConfig& cfg)
{
    std::ostringstream os;
    os << "[lattice]\nwidth = " << cfg.width << "\nheight = " << cfg.height
       << "\nboundary = " << to_string(cfg.boundary) << "\n\n[rule]\nrule = " << to_string(cfg.rule)
       << "\n\n"
       << plan_to_config_text(cfg.plan) << "\n[volts]\n";
    if (!cfg.band_params.empty())
        os << "window = " << format_number(cfg.band_params.front().v_thr_low) << " "
           << format_number(cfg.band_params.front().v_thr_high) << "\n";
    os << "p_low = " << format_number(cfg.p_low) << "\np_high = " << format_number(cfg.p_high)
       << "\n\n[dynamics]\npreset = custom\ndelay_d = " << format_number(cfg.dynamics.delay_d)
       << "\ntau = " << format_number(cfg.dynamics.tau) << "\ndt = " << format_number(cfg.dynamics.dt)
       << "\nelement = " << to_string(cfg.dynamics.element) << "\n";
    return os.str();
}

} // namespace mfca
