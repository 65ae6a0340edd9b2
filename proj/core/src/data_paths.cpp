#include "fluor/data_paths.hpp"

#include <cstdlib>
#include <string>

#ifndef FLUOR_DEFAULT_DATA_DIR
#define FLUOR_DEFAULT_DATA_DIR "data"
#endif
#ifndef FLUOR_INSTALL_DATA_DIR
#define FLUOR_INSTALL_DATA_DIR FLUOR_DEFAULT_DATA_DIR
#endif

namespace fluor {

std::filesystem::path data_dir() {
    if (const char* env = std::getenv("FLUOR_DATA_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    // Build tree first, then the installed copy.
    const std::filesystem::path build_tree = FLUOR_DEFAULT_DATA_DIR;
    std::error_code ec;
    if (std::filesystem::is_directory(build_tree, ec)) {
        return build_tree;
    }
    return FLUOR_INSTALL_DATA_DIR;
}

std::filesystem::path cmf_table_path() { return data_dir() / "ciexyz06_2deg.csv"; }

std::filesystem::path illuminant_table_path(std::string_view name) {
    return data_dir() / "illuminants" / (std::string(name) + ".csv");
}

}  // namespace fluor
