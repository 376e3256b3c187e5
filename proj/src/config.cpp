#include "rcr/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "rcr/io.hpp"

namespace rcr {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& raw) {
    const std::string text = trim(raw);
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
        throw ConfigError("config: '" + key + "' expects a number, got '" + raw + "'");
    return value;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& raw) {
    std::vector<T> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(key, item));
    if (out.empty()) throw ConfigError("config: '" + key + "' expects a non-empty list");
    return out;
}

std::string format(double v) { return io::format_number(v); }
std::string format(std::int64_t v) { return std::to_string(v); }
std::string format(int v) { return std::to_string(v); }
std::string format(std::uint64_t v) { return std::to_string(v); }

template <class T>
std::string format_list(const std::vector<T>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format(v[i]);
    return s;
}

struct Binding {
    std::function<void(const std::string&)> set;
    std::function<std::string()> get;
};

template <class T>
Binding number(const std::string& key, T& field) {
    return {[&field, key](const std::string& raw) { field = parse_number<T>(key, raw); },
            [&field] { return format(field); }};
}

template <class T>
Binding list(const std::string& key, std::vector<T>& field) {
    return {[&field, key](const std::string& raw) { field = parse_list<T>(key, raw); },
            [&field] { return format_list(field); }};
}

Binding text(std::string& field) {
    return {[&field](const std::string& raw) { field = trim(raw); }, [&field] { return field; }};
}

using Registry = std::map<std::string, Binding>;

Registry registry(ExperimentConfig& c) {
    Registry r;
    r["seed"] = number("seed", c.seed);
    r["output_dir"] = text(c.output_dir);

    r["grid.k_min"] = number("grid.k_min", c.grid.k_min);
    r["grid.k_max"] = number("grid.k_max", c.grid.k_max);
    r["grid.radial"] = number("grid.radial", c.grid.radial);
    r["grid.polar"] = number("grid.polar", c.grid.polar);
    r["grid.azimuthal"] = number("grid.azimuthal", c.grid.azimuthal);
    r["grid.azimuth_offset"] = number("grid.azimuth_offset", c.grid.azimuth_offset);

    r["profile.template"] = text(c.profile.name);
    r["profile.epsilon"] = number("profile.epsilon", c.profile.epsilon);
    r["profile.sigma"] = number("profile.sigma", c.profile.sigma);


    auto& t = c.theorem1;
    r["theorem1.m"] = number("theorem1.m", t.m);
    r["theorem1.m_prime"] = number("theorem1.m_prime", t.m_prime);
    r["theorem1.limit_N"] = list("theorem1.limit_N", t.limit_N);
    r["theorem1.bruteforce_m"] = list("theorem1.bruteforce_m", t.bruteforce_m);
    r["theorem1.bruteforce_N"] = list("theorem1.bruteforce_N", t.bruteforce_N);
    r["theorem1.bruteforce_points"] = number("theorem1.bruteforce_points", t.bruteforce_points);
    r["truncation.n_max"] = {
        [&c](const std::string& raw) {
            const std::string v = trim(raw);
            if (v == "auto")
                c.n_max.reset();
            else
                c.n_max = parse_number<int>("truncation.n_max", v);
        },
        [&c] { return c.n_max ? format(*c.n_max) : std::string("auto"); }};

    auto& rad = c.radiation;
    r["radiation.shells"] = number("radiation.shells", rad.shells);
    r["radiation.k_min"] = number("radiation.k_min", rad.k_min);
    r["radiation.halvings"] = number("radiation.halvings", rad.halvings);
    r["radiation.k_mins"] = {
        [&rad](const std::string& raw) {
            if (trim(raw).empty()) throw ConfigError("config: 'radiation.k_mins' is empty");
            rad.k_mins = parse_list<double>("radiation.k_mins", raw);
        },
        [&rad] { return rad.k_mins ? format_list(*rad.k_mins) : std::string("derived"); }};
    r["radiation.current"] = text(rad.current.name);
    r["radiation.strength"] = number("radiation.strength", rad.current.strength);
    r["radiation.k_uv"] = number("radiation.k_uv", rad.current.k_uv);
    r["radiation.anisotropy"] = number("radiation.anisotropy", rad.current.anisotropy);
    r["radiation.conjugation_n_max"] = number("radiation.conjugation_n_max", rad.conjugation_n_max);
    r["radiation.conjugation_amplitude"] =
        number("radiation.conjugation_amplitude", rad.conjugation_amplitude);

    auto& p = c.poisson;
    r["poisson.lambda"] = number("poisson.lambda", p.lambda);
    r["poisson.N"] = list("poisson.N", p.N);
    r["poisson.n_max"] = number("poisson.n_max", p.n_max);

    auto& cov = c.covariance;
    r["covariance.k_min"] = number("covariance.k_min", cov.grid.k_min);
    r["covariance.k_max"] = number("covariance.k_max", cov.grid.k_max);
    r["covariance.radial"] = number("covariance.radial", cov.grid.radial);
    r["covariance.polar"] = number("covariance.polar", cov.grid.polar);
    r["covariance.azimuthal"] = number("covariance.azimuthal", cov.grid.azimuthal);
    r["covariance.n_max"] = number("covariance.n_max", cov.n_max);
    r["covariance.translations"] = number("covariance.translations", cov.translations);
    r["covariance.cocycle_pairs"] = number("covariance.cocycle_pairs", cov.cocycle_pairs);

    auto& f = c.fields;
    r["fields.profiles"] = number("fields.profiles", f.profiles);
    r["fields.dense_n_max"] = number("fields.dense_n_max", f.dense_n_max);
    r["fields.scan_points"] = number("fields.scan_points", f.scan_points);
    r["fields.scan_t_max"] = number("fields.scan_t_max", f.scan_t_max);

    auto& s = c.suite;
    r["suite.ccr_trials"] = number("suite.ccr_trials", s.ccr_trials);
    r["suite.displacement_n_max"] = number("suite.displacement_n_max", s.displacement_n_max);
    r["suite.tolerance"] = {
        [&s](const std::string& raw) {
            const std::string v = trim(raw);
            if (v.empty())
                s.tolerance.reset();
            else
                s.tolerance = parse_number<double>("suite.tolerance", v);
        },
        [&s] { return s.tolerance ? format(*s.tolerance) : std::string("default"); }};
    return r;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError("config: " + what);
}

void validate(const ExperimentConfig& c) {
    require(c.grid.k_min > 0 && c.grid.k_max > c.grid.k_min, "grid range must satisfy 0 < k_min < k_max");
    require(c.grid.radial >= 1 && c.grid.polar >= 1 && c.grid.azimuthal >= 1, "grid counts must be >= 1");
    require(c.profile.name == "power_gauss" || c.profile.name == "constant",
            "unknown profile template '" + c.profile.name + "'");
    require(c.profile.sigma > 0, "profile.sigma must be positive");
    require(!c.n_max || *c.n_max >= 1, "truncation.n_max must be >= 1");
    const auto& t = c.theorem1;
    require(t.m >= 0 && t.m_prime >= 0 && t.m <= 12 && t.m_prime <= 12, "theorem1.m, m_prime must lie in [0, 12]");
    for (auto N : t.limit_N) require(N >= 1, "theorem1.limit_N entries must be >= 1");
    for (auto m : t.bruteforce_m) require(m >= 0 && m <= 6, "theorem1.bruteforce_m entries must lie in [0, 6]");
    for (auto N : t.bruteforce_N) require(N >= 1 && N <= 6, "theorem1.bruteforce_N entries must lie in [1, 6]");
    require(t.bruteforce_points >= 1, "theorem1.bruteforce_points must be >= 1");
    const auto& r = c.radiation;
    require(r.shells >= 1, "radiation.shells must be >= 1");
    require(r.k_min > 0 && r.k_min < c.grid.k_max, "radiation.k_min must lie in (0, grid.k_max)");
    require(r.halvings >= 0, "radiation.halvings must be >= 0");
    if (r.k_mins)
        for (double k : *r.k_mins) require(k > 0 && k < c.grid.k_max, "radiation.k_mins entries must lie in (0, grid.k_max)");
    require(r.current.name == "soft", "unknown current template '" + r.current.name + "'");
    require(r.current.k_uv > 0, "radiation.k_uv must be positive");
    require(r.current.anisotropy >= 0 && r.current.anisotropy <= 1, "radiation.anisotropy must lie in [0, 1]");
    require(r.conjugation_n_max >= 2, "radiation.conjugation_n_max must be >= 2");
    require(c.poisson.lambda >= 0, "poisson.lambda must be >= 0");
    for (auto N : c.poisson.N) require(N >= 1, "poisson.N entries must be >= 1");
    require(c.poisson.n_max >= 1, "poisson.n_max must be >= 1");
    const auto& cov = c.covariance;
    require(cov.grid.k_min > 0 && cov.grid.k_max > cov.grid.k_min, "covariance grid range invalid");
    require(cov.grid.radial >= 1 && cov.grid.polar >= 1 && cov.grid.azimuthal >= 1, "covariance grid counts must be >= 1");
    require(cov.n_max >= 2, "covariance.n_max must be >= 2");
    require(cov.translations >= 0 && cov.cocycle_pairs >= 0, "covariance counts must be >= 0");
    require(c.fields.profiles >= 1 && c.fields.dense_n_max >= 1 && c.fields.scan_points >= 1,
            "fields counts must be >= 1");
    require(c.suite.ccr_trials >= 1, "suite.ccr_trials must be >= 1");
    require(c.suite.displacement_n_max >= 2, "suite.displacement_n_max must be >= 2");
    require(!c.suite.tolerance || *c.suite.tolerance > 0, "suite.tolerance must be positive");
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    ExperimentConfig c;
    Registry reg = registry(c);
    for (const auto& [name, node] : tree) {
        if (node.empty()) {
            // A section header without keys parses as an empty leaf.
            const bool bare_section = node.data().empty() && reg.lower_bound(name + ".") != reg.end() &&
                                      reg.lower_bound(name + ".")->first.rfind(name + ".", 0) == 0;
            if (bare_section) continue;
            auto it = reg.find(name);
            if (it == reg.end()) throw ConfigError("config: unknown key '" + name + "'");
            it->second.set(node.data());
            continue;
        }
        for (const auto& [key, leaf] : node) {
            const std::string full = name + "." + key;
            auto it = reg.find(full);
            if (it == reg.end()) throw ConfigError("config: unknown key '" + full + "'");
            it->second.set(leaf.data());
        }
    }
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
    return parse_config(in);
}

std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& config) {
    ExperimentConfig copy = config;
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [key, binding] : registry(copy)) out.emplace_back(key, binding.get());
    return out;
}

}  // namespace rcr
