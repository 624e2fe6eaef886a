#include "swimfollow/checksum.hpp"

#include <cstdio>
#include <vector>

#include "swimfollow/errors.hpp"

namespace swimfollow {

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
    std::FILE* f = std::fopen(path.string().c_str(), "rb");
    if (!f) throw IoError("cannot open for hashing: " + path.string());
    std::uint64_t h = 1469598103934665603ull;
    std::vector<unsigned char> buf(1 << 16);
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), f)) > 0) h = fnv1a64(buf.data(), n, h);
    std::fclose(f);
    return h;
}

} // namespace swimfollow
