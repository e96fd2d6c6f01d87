#include "adlift/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "adlift/errors.hpp"

namespace adlift {
namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty())
            items.push_back(item);
    }
    return items;
}

long parse_int(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (value.empty() || end == nullptr || *end != '\0' || errno != 0)
        throw ConfigError("config key '" + key + "': invalid integer '" + value + "'");
    return v;
}

double parse_double(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end == nullptr || *end != '\0' || errno != 0)
        throw ConfigError("config key '" + key + "': invalid number '" + value + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "on" || value == "1")
        return true;
    if (value == "false" || value == "off" || value == "0")
        return false;
    throw ConfigError("config key '" + key + "': expected a boolean, got '" + value + "'");
}

} // namespace

std::vector<ForestSetting> RunConfig::forest_grid() const {
    std::vector<ForestSetting> grid;
    for (int mtry : forest_mtry)
        for (int min_node : forest_min_node)
            for (double frac : forest_sample_frac)
                grid.push_back(ForestSetting{mtry, min_node, frac, forest_trees});
    return grid;
}

RunConfig run_config_from_text(const std::string& text) {
    RunConfig cfg;
    std::stringstream stream(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "visits") {
            cfg.visits_path = value;
        } else if (key == "ads") {
            cfg.ads_path = value;
        } else if (key == "out_dir") {
            cfg.out_dir = value;
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
        } else if (key == "stage.smooth") {
            cfg.stage_smooth = parse_bool(key, value);
        } else if (key == "stage.decompose") {
            cfg.stage_decompose = parse_bool(key, value);
        } else if (key == "stage.forest") {
            cfg.stage_forest = parse_bool(key, value);
        } else if (key == "smoother.kernels") {
            cfg.kernels.clear();
            for (const std::string& name : split_list(value))
                cfg.kernels.push_back(kernel_from_name(name));
            if (cfg.kernels.empty())
                throw ConfigError("smoother.kernels: empty list");
        } else if (key == "smoother.h_min") {
            cfg.h_min = static_cast<int>(parse_int(key, value));
        } else if (key == "smoother.h_max") {
            cfg.h_max = static_cast<int>(parse_int(key, value));
        } else if (key == "smoother.repeats") {
            cfg.cv_repeats = static_cast<int>(parse_int(key, value));
        } else if (key == "smoother.exclusion_window") {
            cfg.exclusion_window = static_cast<int>(parse_int(key, value));
        } else if (key == "smoother.default_kernel") {
            cfg.default_smoother.kernel = kernel_from_name(value);
        } else if (key == "smoother.default_h") {
            cfg.default_smoother.bandwidth = static_cast<int>(parse_int(key, value));
        } else if (key == "families") {
            cfg.families.clear();
            for (const std::string& name : split_list(value))
                cfg.families.push_back(family_from_name(name));
            if (cfg.families.empty())
                throw ConfigError("families: empty list");
        } else if (key == "cutoff") {
            cfg.cutoff = static_cast<int>(parse_int(key, value));
        } else if (key == "max_outer_iterations") {
            cfg.max_outer_iterations = static_cast<int>(parse_int(key, value));
        } else if (key == "forest.mtry") {
            cfg.forest_mtry.clear();
            for (const std::string& item : split_list(value))
                cfg.forest_mtry.push_back(static_cast<int>(parse_int(key, item)));
        } else if (key == "forest.min_node") {
            cfg.forest_min_node.clear();
            for (const std::string& item : split_list(value))
                cfg.forest_min_node.push_back(static_cast<int>(parse_int(key, item)));
        } else if (key == "forest.sample_frac") {
            cfg.forest_sample_frac.clear();
            for (const std::string& item : split_list(value))
                cfg.forest_sample_frac.push_back(parse_double(key, item));
        } else if (key == "forest.trees") {
            cfg.forest_trees = static_cast<int>(parse_int(key, value));
        } else if (key == "forest.tuning_repeats") {
            cfg.forest_tuning_repeats = static_cast<int>(parse_int(key, value));
        } else if (key == "forest.final_repeats") {
            cfg.forest_final_repeats = static_cast<int>(parse_int(key, value));
        } else if (key == "forest.include_zero") {
            cfg.forest_include_zero = parse_bool(key, value);
        } else if (key == "quantiles.before") {
            cfg.quantile_before = static_cast<int>(parse_int(key, value));
        } else if (key == "quantiles.after") {
            cfg.quantile_after = static_cast<int>(parse_int(key, value));
        } else if (key == "theta_density.bandwidth") {
            cfg.theta_density_bandwidth = parse_double(key, value);
        } else if (key == "theta_density.bin_width") {
            cfg.theta_density_bin_width = parse_double(key, value);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }

    if (cfg.visits_path.empty())
        throw ConfigError("config: 'visits' is required");
    if (cfg.ads_path.empty())
        throw ConfigError("config: 'ads' is required");
    if (cfg.h_min < 1 || cfg.h_max < cfg.h_min)
        throw ConfigError("config: invalid bandwidth range");
    if (cfg.cv_repeats < 1 || cfg.cutoff < 1)
        throw ConfigError("config: repeats and cutoff must be >= 1");
    return cfg;
}

RunConfig parse_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return run_config_from_text(text);
}

} // namespace adlift
