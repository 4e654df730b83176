#include "mfh/iq.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mfh::io {

namespace {

void put_le32(std::vector<char>& out, float value) {
    const auto bits = std::bit_cast<std::uint32_t>(value);
    for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<char>((bits >> shift) & 0xFF));
}

float get_le32(const unsigned char* in) {
    const std::uint32_t bits = std::uint32_t{in[0]} | (std::uint32_t{in[1]} << 8) |
                               (std::uint32_t{in[2]} << 16) | (std::uint32_t{in[3]} << 24);
    return std::bit_cast<float>(bits);
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& data_path) {
    auto path = data_path;
    path += ".json";
    return path;
}

void write_iq(const std::filesystem::path& path, const ComplexVec& samples, IqMetadata metadata) {
    metadata.sample_count = samples.size();
    std::vector<char> bytes;
    bytes.reserve(samples.size() * 8);
    for (const auto v : samples) {
        put_le32(bytes, static_cast<float>(v.real()));
        put_le32(bytes, static_cast<float>(v.imag()));
    }
    std::ofstream data(path, std::ios::binary | std::ios::trunc);
    if (!data) throw Error(Errc::MalformedFile, "cannot open " + path.string() + " for writing");
    data.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));

    const nlohmann::json sidecar = {{"format", "cf32le"},         {"sample_count", metadata.sample_count},
                                    {"sf", metadata.sf},          {"p", metadata.p},
                                    {"p1", metadata.p1},          {"root", metadata.root},
                                    {"seed", metadata.seed}};
    std::ofstream meta(sidecar_path(path), std::ios::trunc);
    if (!meta) throw Error(Errc::MalformedFile, "cannot write sidecar for " + path.string());
    meta << sidecar.dump(2) << '\n';
}

IqFile read_iq(const std::filesystem::path& path) {
    const auto meta_path = sidecar_path(path);
    std::ifstream meta(meta_path);
    if (!meta) throw Error(Errc::MalformedFile, "missing sidecar " + meta_path.string());
    nlohmann::json sidecar;
    try {
        meta >> sidecar;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::MalformedFile, meta_path.string() + ": " + e.what());
    }

    IqFile file;
    try {
        if (sidecar.at("format").get<std::string>() != "cf32le") {
            throw Error(Errc::MalformedFile, "unsupported format " + sidecar.at("format").dump());
        }
        file.metadata.sample_count = sidecar.at("sample_count").get<std::uint64_t>();
        file.metadata.sf = sidecar.at("sf").get<int>();
        file.metadata.p = sidecar.at("p").get<std::int64_t>();
        file.metadata.p1 = sidecar.at("p1").get<std::int64_t>();
        file.metadata.root = sidecar.at("root").get<std::int64_t>();
        file.metadata.seed = sidecar.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::MalformedFile, meta_path.string() + ": " + e.what());
    }

    std::ifstream data(path, std::ios::binary);
    if (!data) throw Error(Errc::MalformedFile, "missing data file " + path.string());
    const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(data)),
                                           std::istreambuf_iterator<char>());
    if (bytes.size() % 8 != 0) {
        throw Error(Errc::MalformedFile, path.string() + " size " + std::to_string(bytes.size()) +
                                             " is not a whole number of cf32 samples");
    }
    if (bytes.size() / 8 != file.metadata.sample_count) {
        throw Error(Errc::MetadataMismatch, "sidecar sample_count " +
                                                std::to_string(file.metadata.sample_count) +
                                                " but file holds " + std::to_string(bytes.size() / 8));
    }
    file.samples.resize(bytes.size() / 8);
    for (std::size_t n = 0; n < file.samples.size(); ++n) {
        file.samples[n] = {get_le32(&bytes[8 * n]), get_le32(&bytes[8 * n + 4])};
    }
    return file;
}

}  // namespace mfh::io
