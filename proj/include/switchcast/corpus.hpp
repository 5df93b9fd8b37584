#pragma once

// Corpus helpers for the text experiment: raw byte ingestion and a
// deterministic fallback corpus assembled from documentation already present
// on the machine (package long-descriptions and license texts), for running
// the text experiment offline when no book is at hand. The assembled corpus
// is plain English prose with some markup, which is all the experiment
// needs; fetching a real public-domain novel is scripted separately and the
// text is never bundled.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace switchcast {

std::vector<std::uint8_t> read_corpus_bytes(const std::filesystem::path& path);

struct LocalCorpusOptions {
    // Directories scanned recursively for *.dist-info/METADATA files whose
    // long-description body (everything after the first blank line) exceeds
    // min_body_bytes.
    std::vector<std::filesystem::path> metadata_roots = {
        "/usr/local/lib/python3.10/dist-packages",
        "/usr/lib/python3/dist-packages",
    };
    std::size_t min_body_bytes = 2000;
    // Directory of license texts appended after the metadata bodies.
    std::filesystem::path license_dir = "/usr/share/common-licenses";
    std::size_t max_total_bytes = 4u << 20;
};

// Deterministic: sources are visited in sorted path order, so the same
// machine state always yields byte-identical output. Returns the number of
// bytes written to `out`.
std::size_t assemble_local_corpus(const std::filesystem::path& out,
                                  const LocalCorpusOptions& options = {});

} // namespace switchcast
