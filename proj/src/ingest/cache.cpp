#include "litkg/ingest/cache.hpp"

#include <system_error>

#include "litkg/util.hpp"

namespace litkg::ingest {

DiskCache::DiskCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::string DiskCache::key_for(std::string_view request) { return sha256_hex(request); }

std::filesystem::path DiskCache::path_for(std::string_view key) const {
    return dir_ / (std::string(key) + ".json");
}

std::optional<std::string> DiskCache::get(std::string_view key) const {
    const auto path = path_for(key);
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) return std::nullopt;
    return read_text_file(path);
}

void DiskCache::put(std::string_view key, std::string_view body) const {
    write_text_file(path_for(key), body);
}

} // namespace litkg::ingest
