// Assembles a deterministic English-text corpus from documentation already
// installed on this machine, as an offline stand-in for a downloaded book.

#include <cstdio>
#include <exception>

#include "switchcast/corpus.hpp"

int main(int argc, char** argv) {
    const char* out = argc > 1 ? argv[1] : "local_corpus.txt";
    try {
        std::size_t bytes = switchcast::assemble_local_corpus(out);
        std::printf("%s: %zu bytes\n", out, bytes);
        if (bytes < 500000) {
            std::fprintf(stderr,
                         "warning: corpus below 500 KB; point the text experiment at a real "
                         "book instead (see scripts/fetch_corpus.sh)\n");
            return 1;
        }
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "make_local_corpus: %s\n", e.what());
        return 1;
    }
}
