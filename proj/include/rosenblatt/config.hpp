#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>

namespace rosen {

enum class OutputFormat { csv, json };

// Everything a CLI run depends on. Command-specific settings live in
// `options` under dotted keys (ou.lambda, quadrature.rel_tol, ...).
struct RunConfig {
    std::string command;
    double hurst = 0.7;
    int grid_n = 256;
    int samples = 100;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string output;  // empty: standard output
    OutputFormat format = OutputFormat::json;
    std::map<std::string, std::string> options;

    double get(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::string get_str(const std::string& key, const std::string& fallback) const;

    // JSON text of the whole configuration, keys sorted.
    std::string to_json() const;
};

// Flat "key = value" lines; '#' starts a comment, blank lines are skipped.
std::map<std::string, std::string> parse_flat_config(std::istream& in);
std::map<std::string, std::string> load_flat_config(const std::string& path);

// Applies recognized top-level keys (hurst, grid, samples, seed, threads,
// output, format) to the config and stores every key in `options`.
void apply_config(RunConfig& config, const std::map<std::string, std::string>& values);

}  // namespace rosen
