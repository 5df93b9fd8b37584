#pragma once

// Deterministic text output: round-trip double formatting, atomic
// write-then-rename file emission, FNV-1a content hashing, and the JSON run
// manifest (config echo + seed + input hash) written next to every CSV.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace switchcast {

// %.17g: enough digits to round-trip any double, locale-independent.
std::string fmt_double(double v);

// Writes to `<path>.tmp` then renames over `path`, so a crash never leaves a
// truncated file where a previous good one was.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64(const std::string& s);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

struct CsvWriter {
    std::string buffer;

    void header(const std::vector<std::string>& cols);
    void field(const std::string& v);
    void field(std::uint64_t v);
    void field(int v);
    void field(double v);
    void end_row();

  private:
    bool row_open_ = false;
};

// Manifest: the resolved run configuration, the seed, and a content hash of
// any input corpus, so a run can be reproduced from its outputs alone.
void write_manifest(const std::filesystem::path& path, const nlohmann::json& config_echo,
                    std::uint64_t seed, const std::vector<std::string>& outputs,
                    const std::string& input_hash_hex);

std::string hash_hex(std::uint64_t h);

} // namespace switchcast
