#include "spt/io.hpp"

#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include <unistd.h>
#include <yaml-cpp/yaml.h>

namespace spt {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

Record number(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

namespace {

std::string csv_cell(const Record& v) {
    std::string s;
    if (v.is_null()) return s;
    if (v.is_string()) s = v.get<std::string>();
    else if (v.is_number_float()) s = format_number(v.get<double>());
    else s = v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

}  // namespace

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            if (i) out += ',';
            auto it = row.find(t.columns[i]);
            if (it != row.end()) out += csv_cell(*it);
        }
        out += '\n';
    }
    return out;
}

std::string to_jsonl(const Table& t) {
    std::string out;
    for (const auto& row : t.rows) {
        Record ordered = Record::object();
        for (const auto& c : t.columns) {
            auto it = row.find(c);
            ordered[c] = it != row.end() ? *it : Record();
        }
        out += ordered.dump() + '\n';
    }
    return out;
}

std::vector<nlohmann::json> parse_jsonl(const std::string& text) {
    std::vector<nlohmann::json> out;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::parse_error& e) {
            throw IoError("line " + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string() + ": cannot open for reading");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_jsonl(ss.str());
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError(path.parent_path().string() + ": " + ec.message());
    }
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError(path.string() + ": cannot open for writing");
        out.write(content.data(), std::streamsize(content.size()));
        out.flush();
        if (!out) {
            fs::remove(tmp, ec);
            throw IoError(path.string() + ": write failed");
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignore;
        fs::remove(tmp, ignore);
        throw IoError(path.string() + ": " + ec.message());
    }
}

// ---- config ----

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

Config Config::parse(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    if (root.IsNull()) return cfg;
    if (!root.IsMap()) throw ConfigError(origin + ":" + std::to_string(root.Mark().line + 1) + ": top level must be a mapping of sections");
    for (auto it = root.begin(); it != root.end(); ++it) {
        const std::string name = it->first.as<std::string>();
        const int sline = it->first.Mark().line + 1;
        ConfigSection sec;
        sec.line = sline;
        const YAML::Node& body = it->second;
        if (body.IsNull()) {
            cfg.sections_[name] = sec;
            continue;
        }
        if (!body.IsMap()) throw ConfigError(origin + ":" + std::to_string(sline) + ": section '" + name + "' must be a mapping");
        for (auto kv = body.begin(); kv != body.end(); ++kv) {
            ConfigEntry e;
            const std::string key = kv->first.as<std::string>();
            e.line = kv->first.Mark().line + 1;
            const YAML::Node& v = kv->second;
            if (v.IsScalar()) {
                e.values.push_back(v.as<std::string>());
            } else if (v.IsSequence()) {
                e.is_list = true;
                for (const auto& item : v) {
                    if (!item.IsScalar())
                        throw ConfigError(origin + ":" + std::to_string(item.Mark().line + 1) + ": key '" + key + "' must be a flat list");
                    e.values.push_back(item.as<std::string>());
                }
            } else if (v.IsNull()) {
                throw ConfigError(origin + ":" + std::to_string(e.line) + ": key '" + key + "' has no value");
            } else {
                throw ConfigError(origin + ":" + std::to_string(e.line) + ": key '" + key + "' must be a scalar or list");
            }
            sec.entries[key] = std::move(e);
        }
        cfg.sections_[name] = std::move(sec);
    }
    return cfg;
}

const ConfigSection* Config::section(const std::string& name) const {
    auto it = sections_.find(name);
    return it == sections_.end() ? nullptr : &it->second;
}

void Config::check_sections(const std::set<std::string>& allowed) const {
    for (const auto& [name, sec] : sections_)
        if (!allowed.count(name)) throw ConfigError(where(sec.line) + ": unknown section '" + name + "'");
}

void Config::check_keys(const std::string& section, const std::set<std::string>& allowed) const {
    const ConfigSection* sec = this->section(section);
    if (!sec) return;
    for (const auto& [key, e] : sec->entries)
        if (!allowed.count(key)) throw ConfigError(where(e.line) + ": unknown key '" + key + "' in section [" + section + "]");
}

double parse_double(const std::string& s, const std::string& where, const std::string& key) {
    if (s == "inf" || s == "+inf" || s == ".inf") return INFINITY;
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw ConfigError(where + ": key '" + key + "': expected a number, got '" + s + "'");
    return v;
}

long long parse_int(const std::string& s, const std::string& where, const std::string& key) {
    long long v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        // Accept integral floats such as 1e5.
        double d = 0;
        try {
            d = parse_double(s, where, key);
        } catch (const ConfigError&) {
            throw ConfigError(where + ": key '" + key + "': expected an integer, got '" + s + "'");
        }
        if (!std::isfinite(d) || d != std::floor(d) || std::fabs(d) > 9e15)
            throw ConfigError(where + ": key '" + key + "': expected an integer, got '" + s + "'");
        v = (long long)d;
    }
    return v;
}

bool parse_bool(const std::string& s, const std::string& where, const std::string& key) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError(where + ": key '" + key + "': expected true or false, got '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string utc_timestamp() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace spt
