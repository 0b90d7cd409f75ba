// config.hpp — flat scenario files: '#' comments, [section] headers, key = value
// entries.  Strict by design: unknown sections and keys are hard errors carrying
// line numbers, so a typo can never silently fall back to a default.

#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qhsb/operators.hpp"
#include "qhsb/parameters.hpp"

namespace qhsb {

struct ConfigError : std::runtime_error {
    int line; // 0 when the error is file-level rather than tied to a line
    ConfigError(const std::string& what, int ln)
        : std::runtime_error(what + " (line " + std::to_string(ln) + ")"), line(ln) {}
    explicit ConfigError(const std::string& what) : std::runtime_error(what), line(0) {}
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

// Raw parsed file: ordered sections of ordered entries.
struct ConfigFile {
    struct Entry {
        std::string key, value;
        int line;
    };
    struct Section {
        std::string name;
        int line;
        std::vector<Entry> entries;
    };
    std::vector<Section> sections;

    const Section* find(const std::string& name) const {
        for (const auto& s : sections)
            if (s.name == name) return &s;
        return nullptr;
    }

    static ConfigFile parse_text(const std::string& text) {
        ConfigFile f;
        std::istringstream in(text);
        std::string raw;
        int ln = 0;
        while (std::getline(in, raw)) {
            ++ln;
            if (!raw.empty() && raw.back() == '\r') raw.pop_back();
            const std::string line = detail::trim(raw);
            if (line.empty() || line[0] == '#') continue;
            if (line[0] == '[') {
                if (line.back() != ']')
                    throw ConfigError("section header missing ']'", ln);
                const std::string name = detail::trim(line.substr(1, line.size() - 2));
                if (name.empty()) throw ConfigError("empty section name", ln);
                if (f.find(name)) throw ConfigError("duplicate section [" + name + "]", ln);
                f.sections.push_back({name, ln, {}});
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("expected 'key = value' or '[section]'", ln);
            if (f.sections.empty())
                throw ConfigError("entry before any [section] header", ln);
            const std::string key = detail::trim(line.substr(0, eq));
            const std::string value = detail::trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError("empty key", ln);
            for (const auto& e : f.sections.back().entries)
                if (e.key == key)
                    throw ConfigError("duplicate key '" + key + "' in [" +
                                          f.sections.back().name + "]",
                                      ln);
            f.sections.back().entries.push_back({key, value, ln});
        }
        return f;
    }

    static ConfigFile load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("cannot open config file '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_text(buf.str());
    }
};

namespace detail {

inline int to_int(const ConfigFile::Entry& e) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(e.value, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + e.key + "' needs an integer, got '" + e.value + "'", e.line);
    }
    if (used != e.value.size())
        throw ConfigError("key '" + e.key + "' needs an integer, got '" + e.value + "'", e.line);
    return v;
}

inline double to_double(const ConfigFile::Entry& e) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(e.value, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + e.key + "' needs a number, got '" + e.value + "'", e.line);
    }
    if (used != e.value.size())
        throw ConfigError("key '" + e.key + "' needs a number, got '" + e.value + "'", e.line);
    return v;
}

inline bool to_bool(const ConfigFile::Entry& e) {
    if (e.value == "1" || e.value == "true" || e.value == "yes") return true;
    if (e.value == "0" || e.value == "false" || e.value == "no") return false;
    throw ConfigError("key '" + e.key + "' needs a boolean (0/1/true/false), got '" + e.value +
                          "'",
                      e.line);
}

} // namespace detail

// Fully-resolved scenario.  Field defaults are the figure-of-record settings, so
// an empty [hilbert]-only file and the built-in preset describe the same run.
struct ScenarioConfig {
    // [hilbert]
    int cutoff{64};
    int guard_band{16};
    // [parameters] — expressions over the config grammar; beta empty = tied by closure
    std::string alpha{"sin(2*t)"};
    std::string delta{"0.2 + 0.1*cos(4*t)"};
    std::string kappa{"0.3*sin(0.4*t)"};
    std::string gamma{"0"};
    double omega_b{1.0};
    std::string beta{};
    // [grid]
    double t_start{0.0}, t_end{10.0};
    int samples{201};
    // [sectors]
    int n_max{8};
    // [protocol] — static background + switching times for pulse/periodic/evolve
    double kappa0{0.05};
    double delta_a{0.1}, delta_b{0.3};
    double t1{3.0}, t2{7.0};
    double protocol_t_end{10.0};
    double tau{0.05};
    double alpha0{0.5};
    double omega{0.0}, nu{0.0}, eps{0.0}, delta0{0.2};
    int cycles{8};
    // [output]
    bool svg{false};

    HilbertSpec spec() const {
        HilbertSpec s{cutoff, guard_band};
        return s;
    }

    ModelParameters model() const {
        auto expr = [](const char* key, const std::string& text) {
            try {
                return TimeFunction::parse(text);
            } catch (const ParseError& e) {
                throw ConfigError(std::string("in parameter '") + key + "': " + e.what());
            }
        };
        TimeFunction a = expr("alpha", alpha);
        TimeFunction d = expr("delta", delta);
        TimeFunction k = expr("kappa", kappa);
        TimeFunction gm = expr("gamma", gamma);
        ModelParameters p = ModelParameters::tied_boundary(a, d, d.derived(), omega_b, k);
        p.gamma = gm;
        if (!beta.empty()) p.set_beta(ComplexFunction::real(expr("beta", beta)));
        return p;
    }

    void validate() const {
        try {
            spec().check();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("[hilbert]: ") + e.what());
        }
        if (n_max < 0 || n_max >= cutoff - guard_band - 4)
            throw ConfigError("n_max = " + std::to_string(n_max) +
                              " outside the validated window: sectors must satisfy "
                              "n_max < cutoff - guard_band - 4");
        if (!(t_end > t_start)) throw ConfigError("[grid]: t_end must exceed t_start");
        if (samples < 2) throw ConfigError("[grid]: samples must be at least 2");
        if (!(tau > 0.0)) throw ConfigError("[protocol]: tau must be positive");
        if (cycles < 1) throw ConfigError("[protocol]: cycles must be at least 1");
        (void)model(); // surfaces expression errors at load time
    }

    std::vector<std::string> resolved_lines() const {
        using detail::num17;
        std::vector<std::string> out;
        out.push_back("[hilbert]");
        out.push_back("cutoff = " + std::to_string(cutoff));
        out.push_back("guard_band = " + std::to_string(guard_band));
        out.push_back("[parameters]");
        out.push_back("alpha = " + alpha);
        out.push_back("delta = " + delta);
        out.push_back("kappa = " + kappa);
        out.push_back("gamma = " + gamma);
        out.push_back("omega_b = " + num17(omega_b));
        if (!beta.empty()) out.push_back("beta = " + beta);
        out.push_back("[grid]");
        out.push_back("t_start = " + num17(t_start));
        out.push_back("t_end = " + num17(t_end));
        out.push_back("samples = " + std::to_string(samples));
        out.push_back("[sectors]");
        out.push_back("n_max = " + std::to_string(n_max));
        out.push_back("[protocol]");
        out.push_back("kappa0 = " + num17(kappa0));
        out.push_back("delta_a = " + num17(delta_a));
        out.push_back("delta_b = " + num17(delta_b));
        out.push_back("t1 = " + num17(t1));
        out.push_back("t2 = " + num17(t2));
        out.push_back("t_end = " + num17(protocol_t_end));
        out.push_back("tau = " + num17(tau));
        out.push_back("alpha0 = " + num17(alpha0));
        out.push_back("omega = " + num17(omega));
        out.push_back("nu = " + num17(nu));
        out.push_back("eps = " + num17(eps));
        out.push_back("delta0 = " + num17(delta0));
        out.push_back("cycles = " + std::to_string(cycles));
        out.push_back("[output]");
        out.push_back(std::string("svg = ") + (svg ? "1" : "0"));
        return out;
    }

    static ScenarioConfig from_config(const ConfigFile& f) {
        ScenarioConfig c;
        if (!f.find("hilbert"))
            throw ConfigError("missing [hilbert] section: every scenario must declare its "
                              "truncation (cutoff, guard_band)");
        for (const auto& sec : f.sections) {
            auto unknown = [&](const ConfigFile::Entry& e) {
                throw ConfigError("unknown key '" + e.key + "' in [" + sec.name + "]", e.line);
            };
            if (sec.name == "hilbert") {
                for (const auto& e : sec.entries) {
                    if (e.key == "cutoff") c.cutoff = detail::to_int(e);
                    else if (e.key == "guard_band") c.guard_band = detail::to_int(e);
                    else unknown(e);
                }
            } else if (sec.name == "parameters") {
                for (const auto& e : sec.entries) {
                    if (e.key == "alpha") c.alpha = e.value;
                    else if (e.key == "delta") c.delta = e.value;
                    else if (e.key == "kappa") c.kappa = e.value;
                    else if (e.key == "gamma") c.gamma = e.value;
                    else if (e.key == "omega_b") c.omega_b = detail::to_double(e);
                    else if (e.key == "beta") c.beta = e.value;
                    else unknown(e);
                }
            } else if (sec.name == "grid") {
                for (const auto& e : sec.entries) {
                    if (e.key == "t_start") c.t_start = detail::to_double(e);
                    else if (e.key == "t_end") c.t_end = detail::to_double(e);
                    else if (e.key == "samples") c.samples = detail::to_int(e);
                    else unknown(e);
                }
            } else if (sec.name == "sectors") {
                for (const auto& e : sec.entries) {
                    if (e.key == "n_max") c.n_max = detail::to_int(e);
                    else unknown(e);
                }
            } else if (sec.name == "protocol") {
                for (const auto& e : sec.entries) {
                    if (e.key == "kappa0") c.kappa0 = detail::to_double(e);
                    else if (e.key == "delta_a") c.delta_a = detail::to_double(e);
                    else if (e.key == "delta_b") c.delta_b = detail::to_double(e);
                    else if (e.key == "t1") c.t1 = detail::to_double(e);
                    else if (e.key == "t2") c.t2 = detail::to_double(e);
                    else if (e.key == "t_end") c.protocol_t_end = detail::to_double(e);
                    else if (e.key == "tau") c.tau = detail::to_double(e);
                    else if (e.key == "alpha0") c.alpha0 = detail::to_double(e);
                    else if (e.key == "omega") c.omega = detail::to_double(e);
                    else if (e.key == "nu") c.nu = detail::to_double(e);
                    else if (e.key == "eps") c.eps = detail::to_double(e);
                    else if (e.key == "delta0") c.delta0 = detail::to_double(e);
                    else if (e.key == "cycles") c.cycles = detail::to_int(e);
                    else unknown(e);
                }
            } else if (sec.name == "output") {
                for (const auto& e : sec.entries) {
                    if (e.key == "svg") c.svg = detail::to_bool(e);
                    else unknown(e);
                }
            } else {
                throw ConfigError("unknown section [" + sec.name + "]", sec.line);
            }
        }
        c.validate();
        return c;
    }

    static ScenarioConfig from_text(const std::string& text) {
        return from_config(ConfigFile::parse_text(text));
    }
    static ScenarioConfig from_file(const std::string& path) {
        return from_config(ConfigFile::load(path));
    }

    // Built-in figure-of-record scenario: the field defaults with plots enabled.
    static ScenarioConfig fig1() {
        ScenarioConfig c;
        c.svg = true;
        return c;
    }
};

} // namespace qhsb
