#include "whichpath/cli/config.h"

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "whichpath/cli/output.h"
#include "whichpath/numeric.h"

namespace whichpath::cli {

namespace {

std::string_view trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    size_t start = 0;
    while (true) {
        size_t pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

double parse_plain(std::string_view text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    return v;
}

// Value of a product factor: a plain number, "pi", or a number glued to pi ("2pi").
double parse_factor(std::string_view f) {
    if (f.empty()) {
        throw std::invalid_argument("empty numeric factor");
    }
    if (f == "pi") {
        return kPi;
    }
    if (f.size() > 2 && f.substr(f.size() - 2) == "pi") {
        return parse_plain(f.substr(0, f.size() - 2)) * kPi;
    }
    return parse_plain(f);
}

struct Entry {
    std::string value;
    size_t line;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>> &schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"scenario", {"kind", "mode", "seed"}},
        {"geometry", {"d", "profile", "width", "lambda_db"}},
        {"grid", {"p_max", "n_points"}},
        {"heisenberg",
         {"k_gamma", "k_gamma_d", "gamma_over_c", "dipole", "dipole_direction", "n_theta", "n_phi", "n_omega",
          "omega_window"}},
        {"micromaser", {"L", "k_max", "n_k"}},
        {"custom", {"channel"}},
        {"sweep", {"parameter", "from", "to", "count"}},
        {"decompose", {"basis", "bins"}},
        {"eraser", {"n_chi", "chi"}},
    };
    return s;
}

class Reader {
   public:
    Reader(const Section &section, std::string name) : section_(section), name_(std::move(name)) {
    }

    bool has(const std::string &key) const {
        return section_.count(key) > 0;
    }

    size_t line(const std::string &key) const {
        auto it = section_.find(key);
        return it == section_.end() ? 0 : it->second.line;
    }

    std::string field(const std::string &key) const {
        return name_ + "." + key;
    }

    [[noreturn]] void fail(const std::string &key, const std::string &message) const {
        throw ConfigError(line(key), field(key), message);
    }

    std::string text(const std::string &key) const {
        return section_.at(key).value;
    }

    double number(const std::string &key) const {
        try {
            double v = parse_number(text(key));
            if (!std::isfinite(v)) {
                fail(key, "value must be finite");
            }
            return v;
        } catch (const std::invalid_argument &e) {
            fail(key, e.what());
        }
    }

    double number_or(const std::string &key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }

    uint64_t integer(const std::string &key) const {
        std::string t = text(key);
        uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size()) {
            fail(key, "expected a nonnegative integer, got '" + t + "'");
        }
        return v;
    }

    size_t count_or(const std::string &key, size_t fallback) const {
        return has(key) ? static_cast<size_t>(integer(key)) : fallback;
    }

    std::vector<double> numbers(const std::string &key) const {
        std::vector<double> out;
        std::string t = text(key);
        for (auto part : split(t, ',')) {
            try {
                out.push_back(parse_number(part));
            } catch (const std::invalid_argument &e) {
                fail(key, e.what());
            }
        }
        return out;
    }

   private:
    const Section &section_;
    std::string name_;
};

template <typename Enum, size_t N>
Enum parse_enum(const Reader &r, const std::string &key, const std::array<Enum, N> &options) {
    std::string t = r.text(key);
    std::string allowed;
    for (auto o : options) {
        if (t == name_of(o)) {
            return o;
        }
        allowed += (allowed.empty() ? "" : "|") + std::string(name_of(o));
    }
    r.fail(key, "expected one of " + allowed + ", got '" + t + "'");
}

void require(bool ok, const Reader &r, const std::string &key, const std::string &message) {
    if (!ok) {
        r.fail(key, message);
    }
}

}  // namespace

ConfigError::ConfigError(size_t line, std::string field, const std::string &message)
    : Error((line ? "line " + std::to_string(line) + ": " : std::string()) + field + ": " + message),
      line(line),
      field(std::move(field)) {
}

std::string_view name_of(ScenarioKind v) {
    switch (v) {
        case ScenarioKind::heisenberg:
            return "heisenberg";
        case ScenarioKind::micromaser:
            return "micromaser";
        case ScenarioKind::custom:
            return "custom";
        case ScenarioKind::eraser:
            return "eraser";
    }
    return "?";
}

std::string_view name_of(RunMode v) {
    switch (v) {
        case RunMode::simulate:
            return "simulate";
        case RunMode::sweep:
            return "sweep";
        case RunMode::decompose:
            return "decompose";
        case RunMode::erase:
            return "erase";
    }
    return "?";
}

std::string_view name_of(SweepParameter v) {
    switch (v) {
        case SweepParameter::k_gamma_d:
            return "k_gamma_d";
        case SweepParameter::shift_over_L:
            return "shift_over_L";
    }
    return "?";
}

std::string_view name_of(DecomposeBasis v) {
    switch (v) {
        case DecomposeBasis::native:
            return "native";
        case DecomposeBasis::plus_minus:
            return "plus_minus";
        case DecomposeBasis::random:
            return "random";
    }
    return "?";
}

std::optional<RunMode> parse_run_mode(std::string_view text) {
    for (auto m : {RunMode::simulate, RunMode::sweep, RunMode::decompose, RunMode::erase}) {
        if (text == name_of(m)) {
            return m;
        }
    }
    return std::nullopt;
}

double parse_number(std::string_view text) {
    text = trim(text);
    if (text.empty()) {
        throw std::invalid_argument("empty numeric value");
    }
    double sign = 1.0;
    if (text.front() == '-' && text.find_first_of("*/") != std::string_view::npos) {
        sign = -1.0;
        text.remove_prefix(1);
    }
    // Left-to-right product/quotient of factors.
    double value = 1.0;
    char op = '*';
    size_t start = 0;
    for (size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '*' || text[i] == '/') {
            double f = parse_factor(trim(text.substr(start, i - start)));
            value = op == '*' ? value * f : value / f;
            if (i < text.size()) {
                op = text[i];
            }
            start = i + 1;
        }
    }
    return sign * value;
}

ScenarioConfig parse_config(std::string_view text) {
    std::map<std::string, Section> sections;
    std::map<std::string, size_t> section_lines;
    std::vector<std::pair<std::string, size_t>> channel_lines;
    std::string current;

    size_t line_no = 0;
    for (auto raw : split(text, '\n')) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(line_no, std::string(line), "malformed section header");
            }
            current = std::string(trim(line.substr(1, line.size() - 2)));
            if (!schema().count(current)) {
                throw ConfigError(line_no, current, "unknown section");
            }
            if (section_lines.count(current)) {
                throw ConfigError(line_no, current, "section appears twice");
            }
            section_lines[current] = line_no;
            sections[current];
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(line_no, std::string(line), "expected 'key = value'");
        }
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (current.empty()) {
            throw ConfigError(line_no, key, "key outside of any section");
        }
        if (!schema().at(current).count(key)) {
            throw ConfigError(line_no, current + "." + key, "unknown key");
        }
        if (current == "custom" && key == "channel") {
            channel_lines.emplace_back(value, line_no);
            continue;
        }
        if (sections[current].count(key)) {
            throw ConfigError(line_no, current + "." + key, "key given twice");
        }
        sections[current][key] = {value, line_no};
    }

    static const Section empty;
    auto section = [&](const std::string &name) {
        auto it = sections.find(name);
        return Reader(it == sections.end() ? empty : it->second, name);
    };

    ScenarioConfig cfg;

    auto sc = section("scenario");
    if (!sc.has("kind")) {
        throw ConfigError(section_lines.count("scenario") ? section_lines["scenario"] : 0, "scenario.kind", "missing");
    }
    cfg.kind = parse_enum(sc, "kind",
                          std::array{ScenarioKind::heisenberg, ScenarioKind::micromaser, ScenarioKind::custom,
                                     ScenarioKind::eraser});
    if (sc.has("mode")) {
        cfg.mode = parse_enum(sc, "mode", std::array{RunMode::simulate, RunMode::sweep, RunMode::decompose, RunMode::erase});
    }
    if (sc.has("seed")) {
        cfg.seed = sc.integer("seed");
    }

    auto geo = section("geometry");
    cfg.geometry.d = geo.number_or("d", 1.0);
    require(cfg.geometry.d > 0.0, geo, "d", "separation must be positive");
    cfg.geometry.lambda_db = geo.number_or("lambda_db", 1.0);
    require(cfg.geometry.lambda_db > 0.0, geo, "lambda_db", "de Broglie wavelength must be positive");
    if (geo.has("profile")) {
        std::string p = geo.text("profile");
        if (p == "point") {
            cfg.geometry.profile.kind = ApertureProfile::Kind::point;
        } else if (p == "rectangular") {
            cfg.geometry.profile.kind = ApertureProfile::Kind::rectangular;
        } else if (p == "gaussian") {
            cfg.geometry.profile.kind = ApertureProfile::Kind::gaussian;
        } else {
            geo.fail("profile", "expected point|rectangular|gaussian, got '" + p + "'");
        }
    }
    if (cfg.geometry.profile.kind == ApertureProfile::Kind::point) {
        require(!geo.has("width"), geo, "width", "point apertures take no width");
    } else {
        require(geo.has("width"), geo, "profile", "this profile needs a width");
        cfg.geometry.profile.width = geo.number("width");
        require(cfg.geometry.profile.width > 0.0, geo, "width", "width must be positive");
        if (cfg.geometry.profile.kind == ApertureProfile::Kind::rectangular) {
            require(cfg.geometry.profile.width < cfg.geometry.d, geo, "width", "rectangular width must be below d");
        }
    }

    auto grid = section("grid");
    if (grid.has("p_max")) {
        cfg.grid.p_max = grid.number("p_max");
        require(*cfg.grid.p_max > 0.0, grid, "p_max", "must be positive");
    }
    cfg.grid.n_points = grid.count_or("n_points", cfg.grid.n_points);
    require(cfg.grid.n_points >= 2, grid, "n_points", "need at least 2 points");

    auto allow_only = [&](const std::string &name, bool allowed) {
        if (!allowed && section_lines.count(name)) {
            throw ConfigError(section_lines[name], name,
                              "section not valid for scenario kind " + std::string(name_of(cfg.kind)));
        }
    };
    allow_only("heisenberg", cfg.kind == ScenarioKind::heisenberg);
    allow_only("micromaser", cfg.kind == ScenarioKind::micromaser);
    allow_only("custom", cfg.kind == ScenarioKind::custom);

    if (cfg.kind == ScenarioKind::heisenberg) {
        auto h = section("heisenberg");
        HeisenbergConfig hc;
        require(!(h.has("k_gamma") && h.has("k_gamma_d")), h, "k_gamma_d", "give k_gamma or k_gamma_d, not both");
        if (h.has("k_gamma")) {
            hc.k_gamma = h.number("k_gamma");
            require(*hc.k_gamma > 0.0, h, "k_gamma", "must be positive");
        } else if (h.has("k_gamma_d")) {
            double x = h.number("k_gamma_d");
            require(x > 0.0, h, "k_gamma_d", "must be positive");
            hc.k_gamma = x / cfg.geometry.d;
        }
        hc.gamma_over_c = h.number_or("gamma_over_c", 0.0);
        require(hc.gamma_over_c >= 0.0, h, "gamma_over_c", "must be nonnegative");
        if (h.has("dipole")) {
            std::string dk = h.text("dipole");
            if (dk == "isotropic") {
                hc.dipole.kind = DipoleSpec::Kind::isotropic;
            } else if (dk == "fixed") {
                hc.dipole.kind = DipoleSpec::Kind::fixed;
            } else {
                h.fail("dipole", "expected isotropic|fixed, got '" + dk + "'");
            }
        }
        if (h.has("dipole_direction")) {
            require(hc.dipole.kind == DipoleSpec::Kind::fixed, h, "dipole_direction", "only valid with dipole = fixed");
            auto v = h.numbers("dipole_direction");
            require(v.size() == 3, h, "dipole_direction", "expected three components");
            require(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] > 0.0, h, "dipole_direction", "must be nonzero");
            hc.dipole.direction = {v[0], v[1], v[2]};
        }
        hc.quadrature.n_theta = h.count_or("n_theta", hc.quadrature.n_theta);
        require(hc.quadrature.n_theta >= 4, h, "n_theta", "need at least 4 nodes");
        hc.quadrature.n_phi = h.count_or("n_phi", hc.quadrature.n_phi);
        require(hc.quadrature.n_phi >= 4, h, "n_phi", "need at least 4 nodes");
        hc.quadrature.n_omega = h.count_or("n_omega", hc.quadrature.n_omega);
        require(hc.quadrature.n_omega >= 1, h, "n_omega", "need at least 1 node");
        hc.quadrature.omega_window = h.number_or("omega_window", hc.quadrature.omega_window);
        require(hc.quadrature.omega_window > 0.0, h, "omega_window", "must be positive");
        cfg.heisenberg = hc;
    }

    if (cfg.kind == ScenarioKind::micromaser) {
        auto m = section("micromaser");
        MicromaserConfig mc;
        require(m.has("L"), m, "L", "missing cavity length");
        mc.L = m.number("L");
        require(mc.L > cfg.geometry.d, m, "L", "cavities overlap: need L > d");
        if (m.has("k_max")) {
            mc.k_max = m.number("k_max");
            require(*mc.k_max * mc.L >= 40.0 * kPi * (1.0 - 1e-12), m, "k_max", "need k_max * L >= 40 pi");
        }
        mc.n_k = m.count_or("n_k", mc.n_k);
        require(mc.n_k >= 2, m, "n_k", "need at least 2 nodes");
        cfg.micromaser = mc;
    }

    if (cfg.kind == ScenarioKind::custom) {
        if (channel_lines.empty()) {
            throw ConfigError(section_lines.count("custom") ? section_lines["custom"] : 0, "custom.channel",
                              "custom scenario needs at least one channel");
        }
        for (const auto &[value, line] : channel_lines) {
            std::vector<double> v;
            try {
                for (auto part : split(value, ',')) {
                    v.push_back(parse_number(part));
                }
            } catch (const std::invalid_argument &e) {
                throw ConfigError(line, "custom.channel", e.what());
            }
            if (v.size() != 5) {
                throw ConfigError(line, "custom.channel", "expected 'weight, re_a, im_a, re_b, im_b'");
            }
            if (!(v[0] >= 0.0)) {
                throw ConfigError(line, "custom.channel", "weight must be nonnegative");
            }
            cfg.channels.push_back({v[0], {v[1], v[2]}, {v[3], v[4]}});
        }
    }

    if (section_lines.count("sweep")) {
        auto s = section("sweep");
        SweepConfig sw;
        require(s.has("parameter"), s, "parameter", "missing");
        sw.parameter = parse_enum(s, "parameter", std::array{SweepParameter::k_gamma_d, SweepParameter::shift_over_L});
        if (sw.parameter == SweepParameter::k_gamma_d) {
            require(cfg.kind == ScenarioKind::heisenberg, s, "parameter", "k_gamma_d sweeps need kind = heisenberg");
        } else {
            require(cfg.kind == ScenarioKind::micromaser, s, "parameter", "shift_over_L sweeps need kind = micromaser");
        }
        require(s.has("from") && s.has("to") && s.has("count"), s, "count", "sweep needs from, to and count");
        sw.from = s.number("from");
        sw.to = s.number("to");
        sw.count = static_cast<size_t>(s.integer("count"));
        require(sw.count >= 2, s, "count", "need at least 2 sweep points");
        require(sw.to > sw.from, s, "to", "need to > from");
        require(sw.from >= 0.0, s, "from", "must be nonnegative");
        cfg.sweep = sw;
    }

    auto dec = section("decompose");
    if (dec.has("basis")) {
        cfg.decompose.basis =
            parse_enum(dec, "basis", std::array{DecomposeBasis::native, DecomposeBasis::plus_minus, DecomposeBasis::random});
    }
    cfg.decompose.bins = dec.count_or("bins", cfg.decompose.bins);
    require(cfg.decompose.bins >= 1, dec, "bins", "need at least one bin");

    auto er = section("eraser");
    cfg.eraser.n_chi = er.count_or("n_chi", cfg.eraser.n_chi);
    if (er.has("chi")) {
        cfg.eraser.chi = er.numbers("chi");
    } else {
        require(cfg.eraser.n_chi >= 2, er, "n_chi", "need at least 2 phase values");
    }
    return cfg;
}

std::string to_text(const ScenarioConfig &c) {
    std::ostringstream out;
    auto num = [](double v) {
        return format_number(v);
    };
    out << "[scenario]\n";
    out << "kind = " << name_of(c.kind) << "\n";
    if (c.mode) {
        out << "mode = " << name_of(*c.mode) << "\n";
    }
    out << "seed = " << c.seed << "\n";

    out << "\n[geometry]\n";
    out << "d = " << num(c.geometry.d) << "\n";
    out << "profile = " << kind_name(c.geometry.profile.kind) << "\n";
    if (c.geometry.profile.kind != ApertureProfile::Kind::point) {
        out << "width = " << num(c.geometry.profile.width) << "\n";
    }
    out << "lambda_db = " << num(c.geometry.lambda_db) << "\n";

    out << "\n[grid]\n";
    if (c.grid.p_max) {
        out << "p_max = " << num(*c.grid.p_max) << "\n";
    }
    out << "n_points = " << c.grid.n_points << "\n";

    if (c.heisenberg) {
        const auto &h = *c.heisenberg;
        out << "\n[heisenberg]\n";
        if (h.k_gamma) {
            out << "k_gamma = " << num(*h.k_gamma) << "\n";
        }
        out << "gamma_over_c = " << num(h.gamma_over_c) << "\n";
        if (h.dipole.kind == DipoleSpec::Kind::fixed) {
            const auto &v = h.dipole.direction;
            out << "dipole = fixed\n";
            out << "dipole_direction = " << num(v[0]) << ", " << num(v[1]) << ", " << num(v[2]) << "\n";
        } else {
            out << "dipole = isotropic\n";
        }
        out << "n_theta = " << h.quadrature.n_theta << "\n";
        out << "n_phi = " << h.quadrature.n_phi << "\n";
        out << "n_omega = " << h.quadrature.n_omega << "\n";
        out << "omega_window = " << num(h.quadrature.omega_window) << "\n";
    }
    if (c.micromaser) {
        const auto &m = *c.micromaser;
        out << "\n[micromaser]\n";
        out << "L = " << num(m.L) << "\n";
        if (m.k_max) {
            out << "k_max = " << num(*m.k_max) << "\n";
        }
        out << "n_k = " << m.n_k << "\n";
    }
    if (!c.channels.empty()) {
        out << "\n[custom]\n";
        for (const auto &ch : c.channels) {
            out << "channel = " << num(ch.weight) << ", " << num(ch.amp_a.real()) << ", " << num(ch.amp_a.imag()) << ", "
                << num(ch.amp_b.real()) << ", " << num(ch.amp_b.imag()) << "\n";
        }
    }
    if (c.sweep) {
        out << "\n[sweep]\n";
        out << "parameter = " << name_of(c.sweep->parameter) << "\n";
        out << "from = " << num(c.sweep->from) << "\n";
        out << "to = " << num(c.sweep->to) << "\n";
        out << "count = " << c.sweep->count << "\n";
    }
    out << "\n[decompose]\n";
    out << "basis = " << name_of(c.decompose.basis) << "\n";
    out << "bins = " << c.decompose.bins << "\n";

    out << "\n[eraser]\n";
    out << "n_chi = " << c.eraser.n_chi << "\n";
    if (!c.eraser.chi.empty()) {
        out << "chi = ";
        for (size_t i = 0; i < c.eraser.chi.size(); ++i) {
            out << (i ? ", " : "") << num(c.eraser.chi[i]);
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace whichpath::cli
