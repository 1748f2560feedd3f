// Result records and writers. CSV carries unit-annotated headers and
// leading '#' metadata lines; JSON mirrors the records exactly. Numeric
// formatting is fixed at 17 significant digits so identical configs give
// byte-identical bodies.
#pragma once

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "etrap/config.hpp"
#include "etrap/version.hpp"

namespace etrap {

struct ResultTable {
    std::vector<std::string> columns;  // header cells, units included, e.g. "magnitude (quanta/s)"
    std::vector<std::vector<std::string>> rows;
};

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

struct RunMetadata {
    std::string command;
    std::uint64_t config_hash = 0;
    std::string run_id;       // stable for identical configs
    std::string generated_at; // the only field excluded from determinism
    bool diagnostics_ok = true;
};

inline RunMetadata make_metadata(const RunConfig& cfg) {
    RunMetadata m;
    m.command = to_string(cfg.command);
    m.config_hash = config_hash(cfg);
    char id[32];
    std::snprintf(id, sizeof(id), "%016llx", static_cast<unsigned long long>(m.config_hash));
    m.run_id = std::string(m.command) + "-" + id;
    std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    m.generated_at = stamp;
    return m;
}

inline std::string render_csv(const RunMetadata& meta, const ResultTable& table) {
    std::ostringstream out;
    out << "# etrap " << kVersion << " command=" << meta.command << " run_id=" << meta.run_id;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(meta.config_hash));
    out << " config_hash=" << hash << "\n";
    out << "# generated_at=" << meta.generated_at << "\n";
    for (size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << csv_quote(table.columns[i]);
    out << "\n";
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_quote(row[i]);
        out << "\n";
    }
    return out.str();
}

inline std::string render_json(const RunMetadata& meta, const ResultTable& table) {
    nlohmann::ordered_json doc;
    doc["tool"] = "etrap";
    doc["version"] = kVersion;
    doc["command"] = meta.command;
    doc["run_id"] = meta.run_id;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(meta.config_hash));
    doc["config_hash"] = hash;
    doc["generated_at"] = meta.generated_at;
    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json rec;
        for (size_t i = 0; i < table.columns.size() && i < row.size(); ++i)
            rec[table.columns[i]] = row[i];
        records.push_back(rec);
    }
    doc["records"] = records;
    return doc.dump(2) + "\n";
}

// Write via temp file + rename in the target directory.
inline void write_atomically(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        out << content;
        if (!out) throw std::runtime_error("write to '" + tmp + "' failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename to '" + path + "' failed");
}

}  // namespace etrap
