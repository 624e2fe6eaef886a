#include "swimfollow/checkpoint.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "swimfollow/checksum.hpp"
#include "swimfollow/errors.hpp"

namespace swimfollow {

namespace {

constexpr char kMagic[4] = {'S', 'W', 'F', 'L'};

void put_bytes(std::vector<std::uint8_t>& buf, const void* src, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(src);
    buf.insert(buf.end(), b, b + n);
}

template <typename T>
void put(std::vector<std::uint8_t>& buf, T value) {
    put_bytes(buf, &value, sizeof(T));
}

class Reader {
public:
    Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

    void take(void* dst, std::size_t n) {
        if (at_ + n > size_) throw IoError("checkpoint file is truncated");
        std::memcpy(dst, data_ + at_, n);
        at_ += n;
    }

    template <typename T>
    T get() {
        T value;
        take(&value, sizeof(T));
        return value;
    }

    std::size_t offset() const { return at_; }

private:
    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t at_ = 0;
};

} // namespace

void save_checkpoint(const std::string& path, const PolicyCheckpoint& ckpt) {
    if (ckpt.params.size() != ckpt.config.param_count()) {
        throw ConfigError("checkpoint parameter count does not match the net config");
    }
    if (ckpt.norm.mean.size() != ckpt.config.input_dim ||
        ckpt.norm.stddev.size() != ckpt.config.input_dim ||
        ckpt.norm.degenerate.size() != ckpt.config.input_dim) {
        throw ConfigError("checkpoint normalization size does not match the input dim");
    }
    std::vector<std::uint8_t> buf;
    put_bytes(buf, kMagic, 4);
    put<std::uint32_t>(buf, kCheckpointVersion);
    put<std::uint64_t>(buf, ckpt.config.input_dim);
    put<std::uint64_t>(buf, ckpt.config.hidden);
    put<std::uint64_t>(buf, ckpt.config.fc);
    put<double>(buf, ckpt.config.dropout);
    put<double>(buf, ckpt.config.output_scale);
    put<std::uint64_t>(buf, ckpt.params.size());
    put_bytes(buf, ckpt.params.data(), ckpt.params.size() * sizeof(double));
    put<std::uint64_t>(buf, ckpt.norm.mean.size());
    put_bytes(buf, ckpt.norm.mean.data(), ckpt.norm.mean.size() * sizeof(double));
    put_bytes(buf, ckpt.norm.stddev.data(), ckpt.norm.stddev.size() * sizeof(double));
    put_bytes(buf, ckpt.norm.degenerate.data(), ckpt.norm.degenerate.size());
    put<double>(buf, ckpt.norm.label_std);
    const std::uint64_t sum = fnv1a64(buf.data(), buf.size());
    put<std::uint64_t>(buf, sum);

    const std::filesystem::path fspath(path);
    if (fspath.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(fspath.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open checkpoint for writing: " + path);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("failed writing checkpoint: " + path);
}

PolicyCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint: " + path);
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
    if (buf.size() < 8) throw IoError("checkpoint file is truncated");

    const std::size_t body = buf.size() - sizeof(std::uint64_t);
    std::uint64_t stored = 0;
    std::memcpy(&stored, buf.data() + body, sizeof(stored));
    if (fnv1a64(buf.data(), body) != stored) {
        throw IoError("checkpoint checksum mismatch: " + path);
    }

    Reader r(buf.data(), body);
    char magic[4];
    r.take(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) {
        throw ConfigError("not a checkpoint file: " + path);
    }
    const auto version = r.get<std::uint32_t>();
    if (version != kCheckpointVersion) {
        throw ConfigError("unsupported checkpoint version " + std::to_string(version));
    }

    PolicyCheckpoint ckpt;
    ckpt.config.input_dim = r.get<std::uint64_t>();
    ckpt.config.hidden = r.get<std::uint64_t>();
    ckpt.config.fc = r.get<std::uint64_t>();
    ckpt.config.dropout = r.get<double>();
    ckpt.config.output_scale = r.get<double>();
    const auto n_params = r.get<std::uint64_t>();
    if (n_params != ckpt.config.param_count()) {
        throw IoError("checkpoint parameter count is inconsistent");
    }
    ckpt.params.resize(n_params);
    r.take(ckpt.params.data(), n_params * sizeof(double));
    const auto dim = r.get<std::uint64_t>();
    if (dim != ckpt.config.input_dim) {
        throw IoError("checkpoint normalization size is inconsistent");
    }
    ckpt.norm.mean.resize(dim);
    r.take(ckpt.norm.mean.data(), dim * sizeof(double));
    ckpt.norm.stddev.resize(dim);
    r.take(ckpt.norm.stddev.data(), dim * sizeof(double));
    ckpt.norm.degenerate.resize(dim);
    r.take(ckpt.norm.degenerate.data(), dim);
    ckpt.norm.label_std = r.get<double>();
    if (r.offset() != body) throw IoError("checkpoint has trailing bytes");
    return ckpt;
}

} // namespace swimfollow
