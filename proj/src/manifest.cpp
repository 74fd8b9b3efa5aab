#include "numeral/manifest.hpp"

#include <array>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace numeral {

namespace {

class Sha1 {
public:
    void update(std::string_view data) {
        for (unsigned char c : data) {
            buffer_[buffer_len_++] = c;
            ++total_bytes_;
            if (buffer_len_ == 64) {
                process_block();
                buffer_len_ = 0;
            }
        }
    }

    std::string hex_digest() {
        const std::uint64_t bit_length = total_bytes_ * 8;
        unsigned char pad = 0x80;
        update(std::string_view(reinterpret_cast<const char*>(&pad), 1));
        const char zero = 0;
        while (buffer_len_ != 56) {
            update(std::string_view(&zero, 1));
        }
        for (int shift = 56; shift >= 0; shift -= 8) {
            char byte = static_cast<char>((bit_length >> shift) & 0xff);
            update(std::string_view(&byte, 1));
        }
        std::ostringstream os;
        os << std::hex;
        for (std::uint32_t word : h_) {
            for (int shift = 28; shift >= 0; shift -= 4) {
                os << ((word >> shift) & 0xf);
            }
        }
        return os.str();
    }

private:
    static std::uint32_t rol(std::uint32_t value, int bits) {
        return (value << bits) | (value >> (32 - bits));
    }

    void process_block() {
        std::array<std::uint32_t, 80> w{};
        for (int i = 0; i < 16; ++i) {
            w[static_cast<std::size_t>(i)] =
                (static_cast<std::uint32_t>(buffer_[i * 4]) << 24) |
                (static_cast<std::uint32_t>(buffer_[i * 4 + 1]) << 16) |
                (static_cast<std::uint32_t>(buffer_[i * 4 + 2]) << 8) |
                static_cast<std::uint32_t>(buffer_[i * 4 + 3]);
        }
        for (int i = 16; i < 80; ++i) {
            auto t = static_cast<std::size_t>(i);
            w[t] = rol(w[t - 3] ^ w[t - 8] ^ w[t - 14] ^ w[t - 16], 1);
        }
        std::uint32_t a = h_[0], b = h_[1], c = h_[2], d = h_[3], e = h_[4];
        for (int i = 0; i < 80; ++i) {
            std::uint32_t f, k;
            if (i < 20) {
                f = (b & c) | (~b & d);
                k = 0x5A827999;
            } else if (i < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1;
            } else if (i < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDC;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6;
            }
            std::uint32_t temp = rol(a, 5) + f + e + k + w[static_cast<std::size_t>(i)];
            e = d;
            d = c;
            c = rol(b, 30);
            b = a;
            a = temp;
        }
        h_[0] += a;
        h_[1] += b;
        h_[2] += c;
        h_[3] += d;
        h_[4] += e;
    }

    std::array<std::uint32_t, 5> h_ = {0x67452301, 0xEFCDAB89, 0x98BADCFE, 0x10325476, 0xC3D2E1F0};
    std::array<unsigned char, 64> buffer_{};
    std::size_t buffer_len_ = 0;
    std::uint64_t total_bytes_ = 0;
};

std::string iso8601_utc_now() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

std::string sha1_hex(std::string_view data) {
    Sha1 hasher;
    hasher.update(data);
    return hasher.hex_digest();
}

std::string git_blob_sha1(std::string_view content) {
    Sha1 hasher;
    std::string header = "blob " + std::to_string(content.size());
    header.push_back('\0');
    hasher.update(header);
    hasher.update(content);
    return hasher.hex_digest();
}

std::string file_content_hash(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path.string() + "' for hashing");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return git_blob_sha1(os.str());
}

std::string RunManifest::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [key, value] : config) {
        cfg[key] = value;
    }
    j["config"] = cfg;
    j["seed"] = seed;
    nlohmann::json hashes = nlohmann::json::object();
    for (const auto& [path, hash] : input_hashes) {
        hashes[path] = hash;
    }
    j["input_hashes"] = hashes;
    j["timestamp"] = timestamp.empty() ? iso8601_utc_now() : timestamp;
    j["tool_version"] = std::string(kToolVersion);
    return j.dump(2) + "\n";
}

void RunManifest::write_next_to(const std::filesystem::path& output) const {
    std::filesystem::path path = output;
    path += ".manifest.json";
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write '" + tmp.string() + "'");
        }
        out << to_json();
    }
    std::filesystem::rename(tmp, path);
}

} // namespace numeral
