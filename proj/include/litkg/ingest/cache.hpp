#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace litkg::ingest {

/// One file per request hash holding the raw service response. Writes go
/// through create-then-rename, so concurrent writers never expose partial files.
class DiskCache {
public:
    explicit DiskCache(std::filesystem::path dir);

    static std::string key_for(std::string_view request);

    std::optional<std::string> get(std::string_view key) const;
    void put(std::string_view key, std::string_view body) const;

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path path_for(std::string_view key) const;

    std::filesystem::path dir_;
};

} // namespace litkg::ingest
