#include "switchcast/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace switchcast {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return content;
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
    return fnv1a64(read_file(path));
}

void CsvWriter::header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) buffer += ',';
        buffer += cols[i];
    }
    buffer += '\n';
}

void CsvWriter::field(const std::string& v) {
    if (row_open_) buffer += ',';
    buffer += v;
    row_open_ = true;
}

void CsvWriter::field(std::uint64_t v) { field(std::to_string(v)); }
void CsvWriter::field(int v) { field(std::to_string(v)); }
void CsvWriter::field(double v) { field(fmt_double(v)); }

void CsvWriter::end_row() {
    buffer += '\n';
    row_open_ = false;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_manifest(const std::filesystem::path& path, const nlohmann::json& config_echo,
                    std::uint64_t seed, const std::vector<std::string>& outputs,
                    const std::string& input_hash_hex) {
    nlohmann::json m;
    m["config"] = config_echo;
    m["seed"] = seed;
    m["outputs"] = outputs;
    if (!input_hash_hex.empty()) m["input_fnv1a64"] = input_hash_hex;
    write_file_atomic(path, m.dump(2) + "\n");
}

} // namespace switchcast
