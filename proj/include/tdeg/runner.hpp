#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tdeg/common.hpp"

namespace tdeg {

inline constexpr const char* artifact_version = "0.1.0";

// Invalid configuration; the message starts with the offending field path.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { json, csv };

// Flat key = value text. '#' starts a comment, blank lines are skipped.
class ExperimentConfig {
public:
    std::string subcommand;
    std::map<std::string, std::string> values;

    static ExperimentConfig parse(const std::string& text, const std::string& origin = "config");
    static ExperimentConfig load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const { return values.count(key) != 0; }

    // Rejects unknown keys and keys that the subcommand does not read.
    void validate() const;

    long get_int(const std::string& key, long fallback, long lo, long hi) const;
    double get_double(const std::string& key, double fallback, double lo, double hi) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_choice(const std::string& key, const std::string& fallback,
                           const std::vector<std::string>& choices) const;
    std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback, double lo,
                                    double hi) const;
    std::vector<int> get_ints(const std::string& key, const std::vector<int>& fallback, int lo, int hi) const;
    std::uint64_t seed() const;
};

const std::vector<std::string>& subcommands();
// Keys read by a subcommand, with a one-line description each.
std::vector<std::pair<std::string, std::string>> config_schema(const std::string& subcommand);

struct ResultRecord {
    nlohmann::ordered_json json;
    int exit_code = 0;
};

ResultRecord run(const ExperimentConfig& cfg);

std::string format_record(const ResultRecord& rec, OutputFormat fmt, bool header);
// Writes to path (appending) or to `fallback` when path is empty.
void emit_record(const ResultRecord& rec, OutputFormat fmt, const std::string& path, std::ostream& fallback);

// Same record with wall-clock fields removed, for reproducibility checks.
nlohmann::ordered_json numeric_fields(const nlohmann::ordered_json& record);

}  // namespace tdeg
