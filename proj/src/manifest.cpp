#include "kgre/manifest.hpp"

#include <json.hpp>

namespace kgre {

using nlohmann::json;

std::string serialize_manifest(const RunManifest& m) {
    json j;
    j["tool_version"] = m.tool_version;
    j["command_line"] = m.command_line;
    j["config"] = m.config_snapshot;
    j["seed"] = m.seed;
    json inputs = json::object();
    for (const auto& [path, hash] : m.input_hashes) inputs[path] = hash;
    json outputs = json::object();
    for (const auto& [path, hash] : m.output_hashes) outputs[path] = hash;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& m, const std::string& path) {
    write_file(path, serialize_manifest(m));
}

bool verify_manifest(const std::string& path) {
    json j = json::parse(read_file(path));
    for (const char* section : {"inputs", "outputs"}) {
        for (const auto& [file, hash] : j[section].items()) {
            if (hex64(hash_file(file)) != hash.get<std::string>()) return false;
        }
    }
    return true;
}

}  // namespace kgre
