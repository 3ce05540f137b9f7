#include <unistd.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "xxz/io.hpp"

namespace xxz {

namespace {

constexpr char kMagic[8] = {'L', 'D', 'R', 'E', 'N', 'T', '0', '1'};
constexpr std::uint8_t kVersion = 1;

// Serialization is raw little-endian doubles/integers; the toolkit targets
// little-endian hosts and the cache is a local artifact, not an exchange
// format.
void put_u32(std::string& out, std::uint32_t v) { out.append(reinterpret_cast<const char*>(&v), 4); }
void put_u64(std::string& out, std::uint64_t v) { out.append(reinterpret_cast<const char*>(&v), 8); }
void put_f64(std::string& out, double v) { out.append(reinterpret_cast<const char*>(&v), 8); }

}  // namespace

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string CacheKey::canonical() const {
    char buf[200];
    std::snprintf(buf, sizeof(buf), "n=%d;mode=%s;alpha=%.17g;delta=%.17g;conv=%s;tol=%.17g;seed=%llu",
                  n_sites, mode.c_str(), alpha, delta, convention.c_str(), tol,
                  static_cast<unsigned long long>(seed));
    return buf;
}

StateCache::StateCache(std::string dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::string StateCache::path_for(const CacheKey& key) const {
    const std::string k = key.canonical();
    char name[32];
    std::snprintf(name, sizeof(name), "%016llx.ldc",
                  static_cast<unsigned long long>(fnv1a64(k.data(), k.size())));
    return (std::filesystem::path(dir_) / name).string();
}

void StateCache::store(const CacheKey& key, const CachePayload& payload) const {
    const std::string k = key.canonical();

    std::string body;
    body.reserve(8 + payload.psi0.size() * 8 + 32);
    put_f64(body, payload.e0);
    put_f64(body, payload.e1);
    put_u64(body, payload.psi0.size());
    for (double v : payload.psi0) put_f64(body, v);

    std::string file;
    file.reserve(body.size() + k.size() + 32);
    file.append(kMagic, sizeof(kMagic));
    file.push_back(static_cast<char>(kVersion));
    put_u64(file, fnv1a64(body.data(), body.size()));
    put_u32(file, static_cast<std::uint32_t>(k.size()));
    file += k;
    file += body;

    const std::string final_path = path_for(key);
    const std::size_t tid = std::hash<std::thread::id>{}(std::this_thread::get_id());
    const std::string tmp_path =
        final_path + ".tmp" + std::to_string(::getpid()) + "_" + std::to_string(tid);
    {
        std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cache: cannot open '" + tmp_path + "'");
        out.write(file.data(), static_cast<std::streamsize>(file.size()));
        if (!out) throw std::runtime_error("cache: write failed for '" + tmp_path + "'");
    }
    std::filesystem::rename(tmp_path, final_path);  // atomic; last writer wins
}

std::optional<CachePayload> StateCache::lookup(const CacheKey& key) const {
    const std::string path = path_for(key);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;

    std::string file((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto miss = [&](const char* why) -> std::optional<CachePayload> {
        std::fprintf(stderr, "warning: cache entry '%s' ignored (%s)\n", path.c_str(), why);
        return std::nullopt;
    };

    std::size_t off = 0;
    if (file.size() < sizeof(kMagic) + 1 + 8 + 4) return miss("truncated");
    if (std::memcmp(file.data(), kMagic, sizeof(kMagic)) != 0) return miss("bad magic");
    off += sizeof(kMagic);
    if (static_cast<std::uint8_t>(file[off]) != kVersion) return std::nullopt;  // silent miss
    off += 1;
    std::uint64_t checksum = 0;
    std::memcpy(&checksum, file.data() + off, 8);
    off += 8;
    std::uint32_t key_len = 0;
    std::memcpy(&key_len, file.data() + off, 4);
    off += 4;
    if (file.size() < off + key_len) return miss("truncated key");
    const std::string stored_key = file.substr(off, key_len);
    off += key_len;
    if (stored_key != key.canonical()) return std::nullopt;  // hash collision: plain miss

    const char* body = file.data() + off;
    const std::size_t body_size = file.size() - off;
    if (fnv1a64(body, body_size) != checksum) return miss("checksum mismatch");
    if (body_size < 24) return miss("truncated payload");

    CachePayload payload;
    std::memcpy(&payload.e0, body, 8);
    std::memcpy(&payload.e1, body + 8, 8);
    std::uint64_t dim = 0;
    std::memcpy(&dim, body + 16, 8);
    if (body_size != 24 + dim * 8) return miss("payload size mismatch");
    payload.psi0.resize(dim);
    std::memcpy(payload.psi0.data(), body + 24, dim * 8);
    return payload;
}

}  // namespace xxz
