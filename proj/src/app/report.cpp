#include "report.hpp"

#include <charconv>
#include <chrono>
#include <ctime>

namespace fdstab::app {

std::string format_double(double v) {
    if (v == 0.0) {
        v = 0.0;  // no "-0"
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char c : s) {
        q += c;
        if (c == '"') {
            q += '"';
        }
    }
    return q + "\"";
}

} // namespace

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_csv(std::ostream& os, const Outcome& o, const std::string& timestamp) {
    os << "# generated " << timestamp << "\n";
    os << "# command " << to_string(o.command) << "\n";
    for (const auto& f : o.failures) {
        os << "# " << describe(f) << "\n";
    }
    if (!o.table_header.empty()) {
        for (std::size_t k = 0; k < o.table_header.size(); ++k) {
            os << (k ? "," : "") << csv_field(o.table_header[k]);
        }
        os << "\n";
        for (const auto& row : o.table) {
            for (std::size_t k = 0; k < row.size(); ++k) {
                os << (k ? "," : "") << csv_field(row[k]);
            }
            os << "\n";
        }
        return;
    }
    os << "z,quantity,value\n";
    for (const auto& r : o.rows) {
        os << format_double(r.z) << "," << csv_field(r.quantity) << "," << format_double(r.value) << "\n";
    }
}

void write_json(std::ostream& os, const Outcome& o, const std::string& timestamp) {
    nlohmann::json doc = o.document;
    doc["generated"] = timestamp;
    os << doc.dump(2) << "\n";
}

} // namespace fdstab::app
