#pragma once

#include <span>
#include <string_view>

namespace lvct {

struct Dataset {
    std::string_view name;
    std::string_view description;
    std::string_view contents;  // byte-exact copy of data/<name>.csv
};

/// Datasets compiled into the library, in listing order.
std::span<const Dataset> bundled_datasets();

const Dataset* find_dataset(std::string_view name);

}  // namespace lvct
