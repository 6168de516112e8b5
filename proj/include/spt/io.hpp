#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace spt {

using Record = nlohmann::ordered_json;

// Rows share a fixed column order; a missing field is written as empty.
struct Table {
    std::vector<std::string> columns;
    std::vector<Record> rows;
};

// Shortest decimal that round-trips; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double v);
// Non-finite doubles become strings so JSON output stays valid.
Record number(double v);

std::string to_csv(const Table& t);
std::string to_jsonl(const Table& t);
std::vector<nlohmann::json> parse_jsonl(const std::string& text);
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Writes to a temporary sibling, then renames over the target.
void atomic_write(const std::filesystem::path& path, const std::string& content);

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ConfigEntry {
    std::vector<std::string> values;  // one element for scalars
    bool is_list = false;
    int line = 0;
};

struct ConfigSection {
    int line = 0;
    std::map<std::string, ConfigEntry> entries;
};

// YAML file of flat sections:
//   order-param:
//     d: [4, 6, 8]
//     beta: 1.5
class Config {
public:
    static Config load(const std::filesystem::path& path);
    static Config parse(const std::string& text, const std::string& origin);

    const std::string& origin() const { return origin_; }
    const ConfigSection* section(const std::string& name) const;
    // Throws on sections or keys outside the allowed sets, anchored at their line.
    void check_sections(const std::set<std::string>& allowed) const;
    void check_keys(const std::string& section, const std::set<std::string>& allowed) const;
    std::string where(int line) const { return origin_ + ":" + std::to_string(line); }

private:
    std::string origin_;
    std::map<std::string, ConfigSection> sections_;
};

// Typed conversions; `where` prefixes error messages.
double parse_double(const std::string& s, const std::string& where, const std::string& key);
long long parse_int(const std::string& s, const std::string& where, const std::string& key);
bool parse_bool(const std::string& s, const std::string& where, const std::string& key);
std::vector<std::string> split_list(const std::string& s);

std::string utc_timestamp();

}  // namespace spt
