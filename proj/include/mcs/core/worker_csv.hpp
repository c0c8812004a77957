#pragma once

#include <filesystem>
#include <istream>
#include <vector>

#include "mcs/core/types.hpp"

namespace mcs {

// Header: id,lon,lat,speed,e_c,e_D,e_t,e_m,f
std::vector<WorkerSpec> load_worker_csv(const std::filesystem::path& path);
std::vector<WorkerSpec> parse_worker_csv(std::istream& in);

}  // namespace mcs
