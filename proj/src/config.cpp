#include "dke/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace dke {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

struct Section {
    int line = 0;
    std::map<std::string, Entry> entries;
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Reads the keys of one section, recording every problem in `issues`.
class SectionReader {
public:
    SectionReader(const std::string& name, Section* section, std::vector<ConfigIssue>& issues)
        : name_(name), section_(section), issues_(issues) {}

    bool present() const { return section_ != nullptr; }
    int line() const { return section_ ? section_->line : 0; }

    bool has(const std::string& key) const { return section_ && section_->entries.count(key) != 0; }

    template <class T, class Check>
    std::optional<T> get(const std::string& key, bool required, Check&& check, const char* constraint) {
        auto raw = take(key, required);
        if (!raw) return std::nullopt;
        T value{};
        if (!parse(raw->value, value)) {
            error(raw->line, key, "cannot parse '" + raw->value + "' as " + type_name<T>());
            return std::nullopt;
        }
        if (!check(value)) {
            error(raw->line, key, "'" + raw->value + "' violates " + constraint);
            return std::nullopt;
        }
        return value;
    }

    template <class T>
    std::optional<T> get(const std::string& key, bool required) {
        return get<T>(key, required, [](const T&) { return true; }, "");
    }

    // Flags keys that were present but never read.
    void reject_unused(const std::string& context) {
        if (!section_) return;
        for (auto& [key, entry] : section_->entries) {
            if (entry.used) continue;
            error(entry.line, key, "key is not valid in [" + name_ + "]" + context);
        }
    }

    void error(int line, const std::string& key, std::string message) {
        issues_.push_back({line, name_ + "." + key, std::move(message)});
    }

    int line_of(const std::string& key) const {
        return has(key) ? section_->entries.at(key).line : line();
    }

private:
    std::optional<Entry> take(const std::string& key, bool required) {
        if (!section_ || section_->entries.count(key) == 0) {
            if (required) error(line(), key, "missing required key");
            return std::nullopt;
        }
        auto& e = section_->entries.at(key);
        e.used = true;
        return e;
    }

    static bool parse(const std::string& s, double& out) {
        const auto* end = s.data() + s.size();
        auto [ptr, ec] = std::from_chars(s.data(), end, out);
        return ec == std::errc{} && ptr == end && std::isfinite(out);
    }
    static bool parse(const std::string& s, int& out) {
        const auto* end = s.data() + s.size();
        auto [ptr, ec] = std::from_chars(s.data(), end, out);
        return ec == std::errc{} && ptr == end;
    }
    static bool parse(const std::string& s, bool& out) {
        if (s == "true") return out = true, true;
        if (s == "false") return out = false, true;
        return false;
    }
    static bool parse(const std::string& s, std::string& out) {
        out = s;
        return !s.empty();
    }

    template <class T>
    static std::string type_name() {
        if constexpr (std::is_same_v<T, double>) return "a number";
        else if constexpr (std::is_same_v<T, int>) return "an integer";
        else if constexpr (std::is_same_v<T, bool>) return "true/false";
        else return "text";
    }

    std::string name_;
    Section* section_;
    std::vector<ConfigIssue>& issues_;
};

const auto positive = [](double v) { return v > 0.0; };
const auto nonnegative_int = [](int v) { return v >= 0; };
const auto unit_interval = [](double v) { return v >= 0.0 && v <= 1.0; };

template <class Kind>
std::optional<Kind> read_kind(SectionReader& reader, const std::map<std::string, Kind>& kinds, bool required,
                              Kind fallback) {
    if (!reader.present() && !required) return fallback;
    if (!reader.has("kind") && !required) return fallback;
    const auto name = reader.get<std::string>("kind", true);
    if (!name) return std::nullopt;
    const auto it = kinds.find(*name);
    if (it == kinds.end()) {
        std::string allowed;
        for (const auto& [k, v] : kinds) allowed += (allowed.empty() ? "" : ", ") + k;
        reader.error(reader.line_of("kind"), "kind", "unknown kind '" + *name + "' (expected one of " + allowed + ")");
        return std::nullopt;
    }
    return it->second;
}

}  // namespace

std::string ConfigIssue::to_string() const {
    std::string out = line > 0 ? "line " + std::to_string(line) + ": " : "";
    return out + key + ": " + message;
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error([&] {
          std::string text = std::to_string(issues.size()) + " config error(s)";
          for (const auto& i : issues) text += "\n  " + i.to_string();
          return text;
      }()),
      issues_(std::move(issues)) {}

std::string_view to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::zero: return "zero";
        case PotentialKind::uniform_field: return "uniform_field";
        case PotentialKind::harmonic: return "harmonic";
        case PotentialKind::custom_table: return "custom_table";
    }
    return "?";
}

std::string_view to_string(InitialKind kind) {
    switch (kind) {
        case InitialKind::uniform: return "uniform";
        case InitialKind::gaussian_rk: return "gaussian_rk";
        case InitialKind::fermi_dirac: return "fermi_dirac";
    }
    return "?";
}

std::string_view to_string(CollisionKind kind) {
    switch (kind) {
        case CollisionKind::none: return "none";
        case CollisionKind::user_table: return "user_table";
        case CollisionKind::static_screened_coulomb: return "static_screened_coulomb";
    }
    return "?";
}

std::string_view to_string(Scheme scheme) { return scheme == Scheme::rk4 ? "rk4" : "euler"; }

std::string_view to_string(PositivityPolicy policy) {
    return policy == PositivityPolicy::abort ? "abort" : "record";
}

ScenarioConfig parse_config(std::string_view text) {
    static const std::vector<std::string> known = {"grid", "potential", "initial", "collision", "integrator", "output"};
    std::vector<ConfigIssue> issues;
    std::map<std::string, Section> sections;
    Section* current = nullptr;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                issues.push_back({line_no, "", "malformed section header '" + std::string(line) + "'"});
                current = nullptr;
                continue;
            }
            const std::string name(trim(line.substr(1, line.size() - 2)));
            if (std::find(known.begin(), known.end(), name) == known.end()) {
                issues.push_back({line_no, name, "unknown section [" + name + "]"});
                current = nullptr;
            } else if (sections.count(name)) {
                issues.push_back({line_no, name, "section [" + name + "] appears twice"});
                current = nullptr;
            } else {
                current = &sections[name];
                current->line = line_no;
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            issues.push_back({line_no, "", "expected 'key = value', got '" + std::string(line) + "'"});
            continue;
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) {
            issues.push_back({line_no, "", "empty key"});
            continue;
        }
        if (!current) {
            issues.push_back({line_no, key, "key outside a known section"});
            continue;
        }
        if (current->entries.count(key)) {
            issues.push_back({line_no, key, "duplicate key (first on line " +
                                                std::to_string(current->entries.at(key).line) + ")"});
            continue;
        }
        current->entries[key] = {value, line_no, false};
    }

    auto section = [&](const std::string& name) { return sections.count(name) ? &sections.at(name) : nullptr; };
    ScenarioConfig config;

    // [grid]
    SectionReader grid(std::string("grid"), section("grid"), issues);
    if (!grid.present()) issues.push_back({0, "grid", "missing required section [grid]"});
    bool grid_ok = false;
    if (grid.present()) {
        const auto d = grid.get<double>("d", true, positive, "d > 0");
        const auto M = grid.get<int>("num_cells", true, [](int v) { return v >= 2 && v % 2 == 0; },
                                     "num_cells even and >= 2");
        const auto nmax = grid.get<int>("n_max", true, [](int v) { return v >= 1; }, "n_max >= 1");
        grid.reject_unused("");
        if (d && M && nmax) {
            config.grid = {*d, *M, *nmax};
            grid_ok = true;
        }
    }

    // [potential]
    SectionReader potential("potential", section("potential"), issues);
    static const std::map<std::string, PotentialKind> potential_kinds = {
        {"zero", PotentialKind::zero},
        {"uniform_field", PotentialKind::uniform_field},
        {"harmonic", PotentialKind::harmonic},
        {"custom_table", PotentialKind::custom_table}};
    if (auto kind = read_kind(potential, potential_kinds, false, PotentialKind::zero)) {
        config.potential.kind = *kind;
        switch (*kind) {
            case PotentialKind::zero: break;
            case PotentialKind::uniform_field:
                if (auto v = potential.get<double>("E0", true)) config.potential.E0 = *v;
                break;
            case PotentialKind::harmonic:
                if (auto v = potential.get<double>("k_spring", true, positive, "k_spring > 0")) {
                    config.potential.k_spring = *v;
                }
                break;
            case PotentialKind::custom_table:
                if (auto v = potential.get<std::string>("file", true)) config.potential.file = *v;
                break;
        }
        potential.reject_unused(" for kind = " + std::string(to_string(*kind)));
    }

    // [initial]
    SectionReader initial("initial", section("initial"), issues);
    if (!initial.present()) issues.push_back({0, "initial", "missing required section [initial]"});
    static const std::map<std::string, InitialKind> initial_kinds = {{"uniform", InitialKind::uniform},
                                                                     {"gaussian_rk", InitialKind::gaussian_rk},
                                                                     {"fermi_dirac", InitialKind::fermi_dirac}};
    if (initial.present()) {
        if (auto kind = read_kind(initial, initial_kinds, true, InitialKind::uniform)) {
            auto& c = config.initial;
            c.kind = *kind;
            switch (*kind) {
                case InitialKind::uniform:
                    if (auto v = initial.get<double>("n0", true, unit_interval, "0 <= n0 <= 1")) c.n0 = *v;
                    break;
                case InitialKind::gaussian_rk: {
                    const auto cm = initial.get<double>("center_m", true);
                    const auto cn = initial.get<double>("center_n", true);
                    const auto sr = initial.get<double>("sigma_r", true, positive, "sigma_r > 0");
                    const auto sk = initial.get<double>("sigma_k", true, [](double v) { return v >= 0.0; },
                                                        "sigma_k >= 0");
                    const auto amp = initial.get<double>("amplitude", false,
                                                         [](double v) { return v > 0.0 && v <= 1.0; },
                                                         "0 < amplitude <= 1");
                    if (cm) c.center_m = *cm;
                    if (cn) c.center_n = *cn;
                    if (sr) c.sigma_r = *sr;
                    if (sk) c.sigma_k = *sk;
                    if (amp) c.amplitude = *amp;
                    if (grid_ok && cm && (*cm < 0.0 || *cm > config.grid.num_cells - 1)) {
                        initial.error(initial.line_of("center_m"), "center_m", "must lie in [0, num_cells - 1]");
                    }
                    if (grid_ok && cn && std::abs(*cn) > config.grid.n_max) {
                        initial.error(initial.line_of("center_n"), "center_n", "must lie in [-n_max, n_max]");
                    }
                    if (sk && cn && *sk == 0.0 && *cn != std::round(*cn)) {
                        initial.error(initial.line_of("center_n"), "center_n",
                                      "must be an integer when sigma_k = 0 (single momentum column)");
                    }
                    break;
                }
                case InitialKind::fermi_dirac:
                    if (auto v = initial.get<double>("mu", true)) c.mu = *v;
                    if (auto v = initial.get<double>("T", true, positive, "T > 0")) c.T = *v;
                    break;
            }
            initial.reject_unused(" for kind = " + std::string(to_string(*kind)));
        }
    }

    // [collision]
    SectionReader collision("collision", section("collision"), issues);
    static const std::map<std::string, CollisionKind> collision_kinds = {
        {"none", CollisionKind::none},
        {"user_table", CollisionKind::user_table},
        {"static_screened_coulomb", CollisionKind::static_screened_coulomb}};
    if (auto kind = read_kind(collision, collision_kinds, false, CollisionKind::none)) {
        auto& c = config.collision;
        c.kind = *kind;
        switch (*kind) {
            case CollisionKind::none: break;
            case CollisionKind::user_table: {
                if (auto v = collision.get<std::string>("file", true)) c.file = *v;
                if (auto v = collision.get<double>("T", false, positive, "T > 0")) c.T = *v;
                if (auto v = collision.get<bool>("check_detailed_balance", false)) c.check_detailed_balance = *v;
                if (c.check_detailed_balance && !collision.has("T")) {
                    collision.error(collision.line_of("check_detailed_balance"), "T",
                                    "required when check_detailed_balance = true");
                }
                break;
            }
            case CollisionKind::static_screened_coulomb:
                if (auto v = collision.get<double>("eps", true, positive, "eps > 0")) c.eps = *v;
                if (auto v = collision.get<double>("T", true, positive, "T > 0")) c.T = *v;
                if (auto v = collision.get<double>("eta", false, positive, "eta > 0")) c.eta = *v;
                if (auto v = collision.get<int>("q_max", false, nonnegative_int, "q_max >= 0 (0 selects 4 n_max)")) {
                    c.q_max = *v;
                }
                break;
        }
        collision.reject_unused(" for kind = " + std::string(to_string(*kind)));
    }

    // [integrator]
    SectionReader integrator("integrator", section("integrator"), issues);
    if (integrator.present()) {
        auto& c = config.integrator;
        if (auto v = integrator.get<double>("dt", false, positive, "dt > 0")) c.dt = *v;
        if (auto v = integrator.get<double>("t_end", false, positive, "t_end > 0")) c.t_end = *v;
        if (auto v = integrator.get<std::string>("scheme", false)) {
            if (*v == "rk4") c.scheme = Scheme::rk4;
            else if (*v == "euler") c.scheme = Scheme::euler;
            else integrator.error(integrator.line_of("scheme"), "scheme", "expected rk4 or euler, got '" + *v + "'");
        }
        if (auto v = integrator.get<int>("snapshot_every", false, [](int s) { return s >= 1; }, "snapshot_every >= 1")) {
            c.snapshot_every = *v;
        }
        if (auto v = integrator.get<std::string>("positivity", false)) {
            if (*v == "abort") c.positivity = PositivityPolicy::abort;
            else if (*v == "record") c.positivity = PositivityPolicy::record;
            else integrator.error(integrator.line_of("positivity"), "positivity", "expected abort or record, got '" + *v + "'");
        }
        if (c.positivity == PositivityPolicy::record && config.collision.kind != CollisionKind::none) {
            integrator.error(integrator.line_of("positivity"), "positivity",
                             "record is only allowed with [collision] kind = none");
        }
        integrator.reject_unused("");
    }

    // [output]
    SectionReader output("output", section("output"), issues);
    if (auto v = output.get<std::string>("dir", false)) config.output_dir = *v;
    output.reject_unused("");

    if (!issues.empty()) {
        std::stable_sort(issues.begin(), issues.end(),
                         [](const ConfigIssue& a, const ConfigIssue& b) { return a.line < b.line; });
        throw ConfigError(std::move(issues));
    }
    return config;
}

std::string serialize_config(const ScenarioConfig& config) {
    std::ostringstream os;
    auto num = [&](const char* key, double v) { os << key << " = " << format_double(v) << '\n'; };
    auto integer = [&](const char* key, int v) { os << key << " = " << v << '\n'; };
    auto kind = [&](std::string_view v) { os << "kind = " << v << '\n'; };

    os << "[grid]\n";
    num("d", config.grid.d);
    integer("num_cells", config.grid.num_cells);
    integer("n_max", config.grid.n_max);

    const auto& p = config.potential;
    os << "\n[potential]\n";
    kind(to_string(p.kind));
    if (p.kind == PotentialKind::uniform_field) num("E0", p.E0);
    if (p.kind == PotentialKind::harmonic) num("k_spring", p.k_spring);
    if (p.kind == PotentialKind::custom_table) os << "file = " << p.file << '\n';

    const auto& i = config.initial;
    os << "\n[initial]\n";
    kind(to_string(i.kind));
    switch (i.kind) {
        case InitialKind::uniform: num("n0", i.n0); break;
        case InitialKind::gaussian_rk:
            num("center_m", i.center_m);
            num("center_n", i.center_n);
            num("sigma_r", i.sigma_r);
            num("sigma_k", i.sigma_k);
            num("amplitude", i.amplitude);
            break;
        case InitialKind::fermi_dirac:
            num("mu", i.mu);
            num("T", i.T);
            break;
    }

    const auto& c = config.collision;
    os << "\n[collision]\n";
    kind(to_string(c.kind));
    if (c.kind == CollisionKind::user_table) {
        os << "file = " << c.file << '\n';
        if (c.T) num("T", *c.T);
        os << "check_detailed_balance = " << (c.check_detailed_balance ? "true" : "false") << '\n';
    }
    if (c.kind == CollisionKind::static_screened_coulomb) {
        num("eps", c.eps);
        num("T", c.T.value_or(0.0));
        num("eta", c.eta);
        integer("q_max", c.q_max);
    }

    const auto& g = config.integrator;
    os << "\n[integrator]\n";
    num("dt", g.dt);
    num("t_end", g.t_end);
    os << "scheme = " << to_string(g.scheme) << '\n';
    integer("snapshot_every", g.snapshot_every);
    os << "positivity = " << to_string(g.positivity) << '\n';

    os << "\n[output]\ndir = " << config.output_dir << '\n';
    return os.str();
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    ScenarioConfig config = parse_config(buffer.str());
    const auto base = path.parent_path();
    auto resolve = [&](std::string& file) {
        if (!file.empty() && std::filesystem::path(file).is_relative()) file = (base / file).lexically_normal().string();
    };
    resolve(config.potential.file);
    resolve(config.collision.file);
    return config;
}

}  // namespace dke
