#include "thermolase/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string_view>

#include "thermolase/error.hpp"

namespace thermolase::config {

namespace pt = boost::property_tree;

namespace {

// Decimal exponent applied to a key's value to obtain SI (mm -> -3, um -> -6).
struct KeySpec {
    std::string_view name;
    int si_exponent = 0;
};

const std::map<std::string_view, std::vector<KeySpec>>& schema() {
    static const std::map<std::string_view, std::vector<KeySpec>> s = {
        {"run", {{"name"}, {"seed"}, {"trial_count"}}},
        {"beam", {{"wavelength_um", -6}, {"waist_mm", -3}, {"fiber_na"}, {"power_w"}}},
        {"tissue",
         {{"preset"}, {"volumetric_heat_capacity_j_m3k"}, {"thermal_conductivity_w_mk"}, {"absorption_coefficient_per_m"}}},
        {"grid", {{"dr_um", -6}, {"dz_um", -6}, {"nr"}, {"nz"}, {"ambient_c"}, {"far_boundary"},
                  {"surface_heat_transfer_w_m2k"}}},
        {"profile", {{"start_c"}, {"target_c"}, {"ramp_rate_k_s"}, {"hold_s"}}},
        {"controller", {{"a_peak"}, {"a_conduction"}, {"a_reference"}, {"gain_peak"}, {"gain_conduction"},
                        {"gain_reference"}, {"coefficient_min"}, {"coefficient_max"}}},
        {"actuator", {{"control_period_s"}, {"rate_limit_mm_s", -3}, {"max_focal_distance_mm", -3}}},
        {"sensor", {{"pixel_pitch_um", -6}, {"noise_sigma_k"}}},
        {"sweep", {{"conditions"}, {"repetitions"}}},
    };
    return s;
}

int exponent_of(std::string_view section, std::string_view key) {
    const auto& keys = schema().at(section.starts_with("condition.") ? std::string_view("tissue") : section);
    for (const KeySpec& k : keys) {
        if (k.name == key) return k.si_exponent;
    }
    return 0;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

// Parses a decimal literal scaled by 10^shift without binary rounding of the
// scale factor: "0.2" with shift -3 is read as the literal 0.2e-3.
std::optional<double> parse_scaled(const std::string& text, int shift) {
    std::string mantissa = text;
    long exponent = 0;
    if (const auto pos = text.find_first_of("eE"); pos != std::string::npos) {
        mantissa = text.substr(0, pos);
        const std::string exp_text = text.substr(pos + 1);
        const char* first = exp_text.data();
        if (!exp_text.empty() && *first == '+') ++first;
        const auto [ptr, ec] = std::from_chars(first, exp_text.data() + exp_text.size(), exponent);
        if (ec != std::errc() || ptr != exp_text.data() + exp_text.size()) return std::nullopt;
    }
    const std::string literal = mantissa + "e" + std::to_string(exponent + shift);
    double value = 0.0;
    const char* first = literal.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, literal.data() + literal.size(), value);
    if (ec != std::errc() || ptr != literal.data() + literal.size() || mantissa.empty()) return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;
    return value;
}

// Shortest round-trip decimal of `value`, with its exponent shifted by `shift`.
std::string format_scaled(double value, int shift) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
    std::string sci(buf, res.ptr);
    const auto epos = sci.find('e');
    std::string mantissa = sci.substr(0, epos);
    const int exponent = std::stoi(sci.substr(epos + 1)) + shift;

    const bool negative = mantissa.front() == '-';
    if (negative) mantissa.erase(0, 1);
    std::string digits;
    for (char c : mantissa) {
        if (c != '.') digits.push_back(c);
    }
    if (digits == "0") return "0";
    std::string out;
    if (exponent < -6 || exponent > 15) {
        out = digits.substr(0, 1);
        if (digits.size() > 1) out += "." + digits.substr(1);
        out += "e" + std::to_string(exponent);
    } else if (exponent < 0) {
        out = "0." + std::string(static_cast<std::size_t>(-exponent - 1), '0') + digits;
    } else {
        const auto int_len = static_cast<std::size_t>(exponent) + 1;
        if (digits.size() <= int_len) {
            out = digits + std::string(int_len - digits.size(), '0');
        } else {
            out = digits.substr(0, int_len) + "." + digits.substr(int_len);
        }
    }
    return negative ? "-" + out : out;
}

class Reader {
public:
    Reader(const pt::ptree& root, std::string origin) : root_(root), origin_(std::move(origin)) {}

    const pt::ptree* section(std::string_view name) const {
        const auto it = root_.find(std::string(name));
        return it == root_.not_found() ? nullptr : &it->second;
    }

    std::optional<std::string> text(std::string_view sec, std::string_view key) const {
        const pt::ptree* s = section(sec);
        if (!s) return std::nullopt;
        const auto it = s->find(std::string(key));
        if (it == s->not_found()) return std::nullopt;
        return trim(it->second.data());
    }

    std::optional<double> number(std::string_view sec, std::string_view key) const {
        const auto t = text(sec, key);
        if (!t) return std::nullopt;
        const auto v = parse_scaled(*t, exponent_of(sec, key));
        if (!v) fail(sec, key, "expects a number, got '" + *t + "'");
        return v;
    }

    double required(std::string_view sec, std::string_view key) const {
        const auto v = number(sec, key);
        if (!v) fail(sec, key, "is required but missing");
        return *v;
    }

    void read(std::string_view sec, std::string_view key, double& target) const {
        if (const auto v = number(sec, key)) target = *v;
    }

    template <class Int>
    void read_count(std::string_view sec, std::string_view key, Int& target, long long min_value) const {
        const auto t = text(sec, key);
        if (!t) return;
        long long v = 0;
        const auto [ptr, ec] = std::from_chars(t->data(), t->data() + t->size(), v);
        if (ec != std::errc() || ptr != t->data() + t->size() || v < min_value) {
            fail(sec, key, "expects an integer >= " + std::to_string(min_value) + ", got '" + *t + "'");
        }
        target = static_cast<Int>(v);
    }

    [[noreturn]] void fail(std::string_view sec, std::string_view key, const std::string& what) const {
        const std::string full = std::string(sec) + "." + std::string(key);
        throw ConfigError(full, origin_ + ": key '" + full + "' " + what);
    }

    const pt::ptree& root() const { return root_; }
    const std::string& origin() const { return origin_; }

private:
    const pt::ptree& root_;
    std::string origin_;
};

void reject_unknown(const Reader& in) {
    for (const auto& [name, body] : in.root()) {
        if (!body.data().empty() && body.empty()) {
            throw ConfigError(name, in.origin() + ": key '" + name + "' must live inside a [section]");
        }
        const bool condition = name.starts_with("condition.");
        const auto it = schema().find(condition ? std::string_view("tissue") : std::string_view(name));
        if (it == schema().end()) throw ConfigError(name, in.origin() + ": unknown section [" + name + "]");
        for (const auto& [key, value] : body) {
            bool known = false;
            for (const KeySpec& k : it->second) known = known || k.name == key;
            if (!known) {
                throw ConfigError(name + "." + key, in.origin() + ": unknown key '" + name + "." + key + "'");
            }
        }
    }
}

thermal::TissueProperties read_tissue(const Reader& in, std::string_view sec, thermal::TissueProperties base) {
    if (const auto name = in.text(sec, "preset")) {
        try {
            base = preset(*name);
        } catch (const ConfigError&) {
            in.fail(sec, "preset", "names an unknown tissue preset '" + *name + "'");
        }
    }
    in.read(sec, "volumetric_heat_capacity_j_m3k", base.volumetric_heat_capacity);
    in.read(sec, "thermal_conductivity_w_mk", base.thermal_conductivity);
    in.read(sec, "absorption_coefficient_per_m", base.absorption_coefficient);
    return base;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

// Runs `check`, reporting a DomainError against the section that supplied the values.
template <class Check>
void validate_section(const std::string& origin, const std::string& section, Check&& check) {
    try {
        check();
    } catch (const DomainError& e) {
        throw ConfigError(section, origin + ": [" + section + "] " + e.what());
    }
}

void validate_all(const harness::ExperimentConfig& c, const std::string& origin, const std::string& tissue_section) {
    validate_section(origin, "beam", [&] { c.beam.validate(); });
    validate_section(origin, tissue_section, [&] { c.tissue.validate(); });
    validate_section(origin, "grid", [&] { c.grid.validate(); });
    validate_section(origin, "profile", [&] { c.profile.validate(); });
    validate_section(origin, "controller", [&] { c.controller.validate(); });
    validate_section(origin, "run", [&] { c.validate(); });
}

}  // namespace

const std::vector<TissuePreset>& tissue_presets() {
    static const std::vector<TissuePreset> presets = {
        {"gelatin", {4.2e6, 0.60, 100.0}},
        {"liver", {3.6e6, 0.52, 75.0}},
        {"bone", {2.4e6, 0.40, 31.25}},
        {"muscle", {3.8e6, 0.50, 87.5}},
    };
    return presets;
}

thermal::TissueProperties preset(const std::string& name) {
    for (const TissuePreset& p : tissue_presets()) {
        if (p.name == name) return p.properties;
    }
    throw ConfigError("tissue.preset", "unknown tissue preset '" + name + "'");
}

harness::ExperimentConfig default_config() {
    harness::ExperimentConfig c;
    c.name = "gelatin";
    c.tissue = preset("gelatin");
    return c;
}

LoadedConfig parse(std::istream& stream, const std::string& origin) {
    pt::ptree root;
    try {
        pt::read_ini(stream, root);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("", origin + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    const Reader in(root, origin);
    reject_unknown(in);

    harness::ExperimentConfig c = default_config();

    if (const auto name = in.text("run", "name")) c.name = *name;
    in.read_count("run", "seed", c.seed, 0);
    in.read_count("run", "trial_count", c.trial_count, 1);

    c.beam.wavelength = in.required("beam", "wavelength_um");
    c.beam.power = in.required("beam", "power_w");
    const auto waist = in.number("beam", "waist_mm");
    const auto na = in.number("beam", "fiber_na");
    if (waist && na) in.fail("beam", "fiber_na", "conflicts with beam.waist_mm; give one of them");
    if (!waist && !na) in.fail("beam", "waist_mm", "is required (or give beam.fiber_na)");
    try {
        c.beam.waist = waist ? *waist : optics::equivalent_waist_from_na(c.beam.wavelength, *na);
    } catch (const DomainError& e) {
        in.fail("beam", "fiber_na", e.what());
    }

    if (!in.section("tissue")) {
        throw ConfigError("tissue", origin + ": section [tissue] is required (preset or explicit properties)");
    }
    c.tissue = read_tissue(in, "tissue", c.tissue);
    if (const auto name = in.text("tissue", "preset"); name && !in.text("run", "name")) c.name = *name;
    if (!in.text("tissue", "preset") && !in.text("run", "name")) c.name = "trial";

    in.read("grid", "dr_um", c.grid.dr);
    in.read("grid", "dz_um", c.grid.dz);
    in.read_count("grid", "nr", c.grid.nr, 8);
    in.read_count("grid", "nz", c.grid.nz, 8);
    in.read("grid", "ambient_c", c.grid.ambient);
    in.read("grid", "surface_heat_transfer_w_m2k", c.boundary.surface_heat_transfer);
    if (const auto far = in.text("grid", "far_boundary")) {
        if (*far == "ambient") {
            c.boundary.far = thermal::FarBoundary::ambient;
        } else if (*far == "insulated") {
            c.boundary.far = thermal::FarBoundary::insulated;
        } else {
            in.fail("grid", "far_boundary", "must be 'ambient' or 'insulated'");
        }
    }
    c.profile.start = c.grid.ambient;
    in.read("profile", "start_c", c.profile.start);
    in.read("profile", "target_c", c.profile.target);
    in.read("profile", "ramp_rate_k_s", c.profile.ramp_rate);
    in.read("profile", "hold_s", c.profile.hold_duration);

    auto& ctl = c.controller;
    in.read("controller", "a_peak", ctl.coefficients[control::kPeak]);
    in.read("controller", "a_conduction", ctl.coefficients[control::kConduction]);
    in.read("controller", "a_reference", ctl.coefficients[control::kReference]);
    in.read("controller", "gain_peak", ctl.gains[control::kPeak]);
    in.read("controller", "gain_conduction", ctl.gains[control::kConduction]);
    in.read("controller", "gain_reference", ctl.gains[control::kReference]);
    if (const auto lo = in.number("controller", "coefficient_min")) ctl.lower = {*lo, *lo, *lo};
    if (const auto hi = in.number("controller", "coefficient_max")) ctl.upper = {*hi, *hi, *hi};

    in.read("actuator", "control_period_s", c.control_period);
    in.read("actuator", "rate_limit_mm_s", c.actuator_rate_limit);
    in.read("actuator", "max_focal_distance_mm", c.max_focal_distance);
    in.read("sensor", "pixel_pitch_um", c.sensor.pixel_pitch);
    in.read("sensor", "noise_sigma_k", c.sensor.noise_sigma);

    validate_all(c, origin, "tissue");

    LoadedConfig out;
    out.base = c;
    if (in.section("sweep")) {
        const auto list = in.text("sweep", "conditions");
        if (!list || split_list(*list).empty()) in.fail("sweep", "conditions", "must list at least one condition");
        std::size_t repetitions = c.trial_count;
        in.read_count("sweep", "repetitions", repetitions, 1);
        for (const std::string& name : split_list(*list)) {
            harness::ExperimentConfig cond = c;
            cond.name = name;
            cond.trial_count = repetitions;
            const std::string sec = "condition." + name;
            if (in.section(sec)) {
                cond.tissue = read_tissue(in, sec, c.tissue);
            } else {
                try {
                    cond.tissue = preset(name);
                } catch (const ConfigError&) {
                    in.fail("sweep", "conditions",
                            "names '" + name + "', which is neither a preset nor a [" + sec + "] section");
                }
            }
            validate_all(cond, origin, sec);
            out.conditions.push_back(std::move(cond));
        }
    }
    return out;
}

LoadedConfig load(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("", "cannot open config file '" + path + "'");
    return parse(file, path);
}

std::string write_ini(const harness::ExperimentConfig& c) {
    std::ostringstream out;
    auto put = [&](std::string_view sec, std::string_view key, double v) {
        out << key << " = " << format_scaled(v, -exponent_of(sec, key)) << '\n';
    };
    out << "[run]\nname = " << c.name << "\nseed = " << c.seed << "\ntrial_count = " << c.trial_count << "\n\n";
    out << "[beam]\n";
    put("beam", "wavelength_um", c.beam.wavelength);
    put("beam", "waist_mm", c.beam.waist);
    put("beam", "power_w", c.beam.power);
    out << "\n[tissue]\n";
    put("tissue", "volumetric_heat_capacity_j_m3k", c.tissue.volumetric_heat_capacity);
    put("tissue", "thermal_conductivity_w_mk", c.tissue.thermal_conductivity);
    put("tissue", "absorption_coefficient_per_m", c.tissue.absorption_coefficient);
    out << "\n[grid]\n";
    put("grid", "dr_um", c.grid.dr);
    put("grid", "dz_um", c.grid.dz);
    out << "nr = " << c.grid.nr << "\nnz = " << c.grid.nz << '\n';
    put("grid", "ambient_c", c.grid.ambient);
    out << "far_boundary = " << (c.boundary.far == thermal::FarBoundary::ambient ? "ambient" : "insulated") << '\n';
    put("grid", "surface_heat_transfer_w_m2k", c.boundary.surface_heat_transfer);
    out << "\n[profile]\n";
    put("profile", "start_c", c.profile.start);
    put("profile", "target_c", c.profile.target);
    put("profile", "ramp_rate_k_s", c.profile.ramp_rate);
    put("profile", "hold_s", c.profile.hold_duration);
    out << "\n[controller]\n";
    put("controller", "a_peak", c.controller.coefficients[control::kPeak]);
    put("controller", "a_conduction", c.controller.coefficients[control::kConduction]);
    put("controller", "a_reference", c.controller.coefficients[control::kReference]);
    put("controller", "gain_peak", c.controller.gains[control::kPeak]);
    put("controller", "gain_conduction", c.controller.gains[control::kConduction]);
    put("controller", "gain_reference", c.controller.gains[control::kReference]);
    // The file format carries one shared bound pair.
    put("controller", "coefficient_min", c.controller.lower[0]);
    put("controller", "coefficient_max", c.controller.upper[0]);
    out << "\n[actuator]\n";
    put("actuator", "control_period_s", c.control_period);
    put("actuator", "rate_limit_mm_s", c.actuator_rate_limit);
    put("actuator", "max_focal_distance_mm", c.max_focal_distance);
    out << "\n[sensor]\n";
    put("sensor", "pixel_pitch_um", c.sensor.pixel_pitch);
    put("sensor", "noise_sigma_k", c.sensor.noise_sigma);
    return out.str();
}

}  // namespace thermolase::config
