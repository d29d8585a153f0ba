#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kgre/common.hpp"

namespace kgre {

// Written next to every CLI output. Wall-clock timing is reported on stderr
// instead of being stored here, so manifests stay byte-reproducible.
struct RunManifest {
    std::string tool_version;
    std::string command_line;
    std::string config_snapshot;  // effective flag values, key=value lines
    uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> input_hashes;   // path, hex
    std::vector<std::pair<std::string, std::string>> output_hashes;  // path, hex
};

std::string serialize_manifest(const RunManifest& m);
void write_manifest(const RunManifest& m, const std::string& path);

// re-hash every referenced file and compare
bool verify_manifest(const std::string& path);

}  // namespace kgre
