#include "zeno/output.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

namespace zeno {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_table_csv(std::ostream& os, const Table& table) {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) os << ',';
        os << table.header[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << row[i];
        }
        os << '\n';
    }
}

void write_json(std::ostream& os, const nlohmann::json& j) {
    os << j.dump(2) << '\n';
}

}  // namespace zeno
