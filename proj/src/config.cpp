#include "rosenblatt/config.hpp"

#include "rosenblatt/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace rosen {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size() || v.empty()) throw DomainError("config: '" + key + "' is not a number: " + v);
    return d;
}

}  // namespace

double RunConfig::get(const std::string& key, double fallback) const {
    auto it = options.find(key);
    return it == options.end() ? fallback : to_double(key, it->second);
}

int RunConfig::get_int(const std::string& key, int fallback) const {
    auto it = options.find(key);
    if (it == options.end()) return fallback;
    double d = to_double(key, it->second);
    if (d != static_cast<int>(d)) throw DomainError("config: '" + key + "' must be an integer");
    return static_cast<int>(d);
}

std::string RunConfig::get_str(const std::string& key, const std::string& fallback) const {
    auto it = options.find(key);
    return it == options.end() ? fallback : it->second;
}

std::string RunConfig::to_json() const {
    nlohmann::json j = {{"command", command}, {"hurst", hurst},   {"grid", grid_n},
                        {"samples", samples}, {"seed", seed},     {"output", output},
                        {"format", format == OutputFormat::csv ? "csv" : "json"},
                        {"options", options}};
    return j.dump();
}

std::map<std::string, std::string> parse_flat_config(std::istream& in) {
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw DomainError("config: line " + std::to_string(lineno) + " is not 'key = value'");
        }
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty()) throw DomainError("config: empty key on line " + std::to_string(lineno));
        out[key] = value;
    }
    return out;
}

std::map<std::string, std::string> load_flat_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("config: cannot open " + path);
    return parse_flat_config(in);
}

void apply_config(RunConfig& c, const std::map<std::string, std::string>& values) {
    for (const auto& [k, v] : values) {
        if (k == "hurst") c.hurst = to_double(k, v);
        else if (k == "grid") c.grid_n = static_cast<int>(to_double(k, v));
        else if (k == "samples") c.samples = static_cast<int>(to_double(k, v));
        else if (k == "seed") c.seed = std::stoull(v);
        else if (k == "threads") c.threads = static_cast<unsigned>(to_double(k, v));
        else if (k == "output") c.output = v;
        else if (k == "format") {
            if (v == "csv") c.format = OutputFormat::csv;
            else if (v == "json") c.format = OutputFormat::json;
            else throw DomainError("config: format must be csv or json");
        } else c.options[k] = v;
    }
}

}  // namespace rosen
