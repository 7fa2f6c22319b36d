#pragma once

#include <json.hpp>

#include <string>
#include <string_view>

namespace amc
{
    auto sha256_hex(std::string_view data) -> std::string;

    /// Digest of the canonical dump (sorted keys, no whitespace).
    auto json_digest(const nlohmann::json & j) -> std::string;

    /// Writes a gzip-compressed file in one go.
    auto write_gz(const std::string & path, std::string_view data) -> void;
    auto read_gz(const std::string & path) -> std::string;
}
