#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace numeral {

inline constexpr std::string_view kToolVersion = "0.1.0";

std::string sha1_hex(std::string_view data);

/// Content hash in git blob form: sha1("blob <len>\0<content>").
std::string git_blob_sha1(std::string_view content);

/// git blob hash of a file's contents.
std::string file_content_hash(const std::filesystem::path& path);

/// Everything needed to replay a run: the command, its configuration, the
/// seed, and content hashes of every input file.
struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config; // flag -> value
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> input_hashes; // path -> blob hash
    std::string timestamp; // ISO 8601 UTC, filled by write() when empty

    std::string to_json() const;
    /// Writes `<output>.manifest.json` next to an output file.
    void write_next_to(const std::filesystem::path& output) const;
};

} // namespace numeral
