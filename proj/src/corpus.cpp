#include "switchcast/corpus.hpp"

#include <algorithm>
#include <fstream>

#include "switchcast/csvio.hpp"

namespace switchcast {

std::vector<std::uint8_t> read_corpus_bytes(const std::filesystem::path& path) {
    std::string s = read_file(path);
    return {s.begin(), s.end()};
}

namespace {

// Body of a METADATA file: everything after the first blank line (the
// email-style header block carries no prose).
std::string metadata_body(const std::string& content) {
    std::size_t pos = content.find("\n\n");
    if (pos == std::string::npos) return {};
    return content.substr(pos + 2);
}

} // namespace

std::size_t assemble_local_corpus(const std::filesystem::path& out,
                                  const LocalCorpusOptions& options) {
    std::vector<std::filesystem::path> metadata_files;
    for (const auto& root : options.metadata_roots) {
        std::error_code ec;
        if (!std::filesystem::is_directory(root, ec)) continue;
        for (std::filesystem::recursive_directory_iterator
                 it(root, std::filesystem::directory_options::skip_permission_denied, ec),
             end;
             it != end; it.increment(ec)) {
            if (ec) break;
            if (!it->is_regular_file(ec)) continue;
            const std::filesystem::path& p = it->path();
            if (p.filename() == "METADATA" &&
                p.parent_path().string().ends_with(".dist-info"))
                metadata_files.push_back(p);
        }
    }
    std::sort(metadata_files.begin(), metadata_files.end());

    std::string corpus;
    corpus.reserve(options.max_total_bytes);
    auto append = [&](const std::string& text) {
        if (corpus.size() >= options.max_total_bytes) return;
        std::size_t room = options.max_total_bytes - corpus.size();
        corpus.append(text, 0, std::min(room, text.size()));
        corpus += '\n';
    };

    for (const auto& p : metadata_files) {
        if (corpus.size() >= options.max_total_bytes) break;
        std::string body;
        try {
            body = metadata_body(read_file(p));
        } catch (const std::exception&) {
            continue;
        }
        if (body.size() > options.min_body_bytes) append(body);
    }

    std::vector<std::filesystem::path> license_files;
    std::error_code ec;
    if (std::filesystem::is_directory(options.license_dir, ec))
        for (const auto& entry : std::filesystem::directory_iterator(options.license_dir, ec))
            if (entry.is_regular_file(ec)) license_files.push_back(entry.path());
    std::sort(license_files.begin(), license_files.end());
    for (const auto& p : license_files) {
        if (corpus.size() >= options.max_total_bytes) break;
        try {
            append(read_file(p));
        } catch (const std::exception&) {
        }
    }

    write_file_atomic(out, corpus);
    return corpus.size();
}

} // namespace switchcast
