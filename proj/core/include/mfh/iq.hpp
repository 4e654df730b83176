#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "mfh/types.hpp"

// Raw baseband files: little-endian interleaved float32 I/Q ("cf32le") with a
// JSON sidecar at "<path>.json".
namespace mfh::io {

struct IqMetadata {
    std::uint64_t sample_count = 0;
    int sf = 0;
    std::int64_t p = 0;
    std::int64_t p1 = 0;
    std::int64_t root = 0;
    std::uint64_t seed = 0;
};

struct IqFile {
    ComplexVec samples;
    IqMetadata metadata;
};

std::filesystem::path sidecar_path(const std::filesystem::path& data_path);

/// Writes samples (rounded to float32) and the sidecar; sample_count is taken
/// from `samples`.
void write_iq(const std::filesystem::path& path, const ComplexVec& samples, IqMetadata metadata);

/// Throws MalformedFile (missing/short/unparsable files, wrong format tag) or
/// MetadataMismatch (sample_count disagrees with the data size).
IqFile read_iq(const std::filesystem::path& path);

}  // namespace mfh::io
