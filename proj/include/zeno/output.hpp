// output.hpp — deterministic CSV and JSON emission.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace zeno {

// Up to 17 significant digits, '.' decimal separator; round-trips exactly.
std::string format_g17(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Header row always present; '\n' line endings.
void write_table_csv(std::ostream& os, const Table& table);

void write_json(std::ostream& os, const nlohmann::json& j);

}  // namespace zeno
