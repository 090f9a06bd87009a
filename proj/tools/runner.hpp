#pragma once

// Config-driven experiment runner behind the `bphi` command line tool.

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bphi/core.hpp"

namespace bphi::cli {

/// Invalid configuration; `key_path()` names the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string key_path, const std::string& message)
        : Error(key_path + ": " + message), key_path_(std::move(key_path))
    {
    }
    const std::string& key_path() const { return key_path_; }

private:
    std::string key_path_;
};

class IoError : public Error {
public:
    using Error::Error;
};

using Field = std::variant<double, std::int64_t, std::string, bool>;

/// One output row; column order is the insertion order.
struct Record {
    std::vector<std::pair<std::string, Field>> fields;

    Record& add(std::string key, Field value)
    {
        fields.emplace_back(std::move(key), std::move(value));
        return *this;
    }
    friend bool operator==(const Record&, const Record&) = default;
};

enum class Format { csv, json };

struct RunResult {
    std::vector<Record> records;
    bool violation = false;
    Format format = Format::csv;
};

inline constexpr const char* kSchema = "bphi-results/1";

/// Runs one experiment. `config` holds the merged file and flag settings.
RunResult run(const std::string& experiment, const nlohmann::ordered_json& config);

/// CSV whose header is the union of the records' keys in first-seen order
/// (missing cells empty); doubles with 17 significant digits.
std::string emit_csv(const std::vector<Record>& records);
/// {"schema": ..., "records": [...]}.
std::string emit_json(const std::vector<Record>& records);
/// Inverse of emit_json.
std::vector<Record> parse_json(const std::string& text);

/// Full command line entry point; returns the process exit status:
/// 0 all verdicts pass, 1 a bound violation, 2 configuration or io error,
/// 3 internal error.
int main_entry(int argc, char** argv);

}  // namespace bphi::cli
