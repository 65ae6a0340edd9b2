#pragma once

#include <filesystem>
#include <string_view>

namespace fluor {

/// Directory holding the bundled CMF and illuminant tables: $FLUOR_DATA_DIR if
/// set, else the source tree's data/ if present, else the installed copy.
std::filesystem::path data_dir();

std::filesystem::path cmf_table_path();
std::filesystem::path illuminant_table_path(std::string_view name);

}  // namespace fluor
