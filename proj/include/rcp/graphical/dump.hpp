#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcp/graphical/sample.hpp"

namespace rcp {

inline constexpr char kDumpMagic[4] = {'R', 'C', 'P', 'G'};
inline constexpr std::uint16_t kDumpVersion = 1;

// Binary layout: magic, u16 version, u32 header length, JSON header (box, lambda,
// lambda_ref, law, seed), then per site the start and cure marks, then per edge slot
// the transmission marks; each list is a u64 count followed by raw doubles.
std::vector<std::uint8_t> serialize_sample(const GraphicalSample& sample);
// Throws FormatError on bad magic, version mismatch, truncation or inconsistent sizes.
GraphicalSample deserialize_sample(const std::vector<std::uint8_t>& bytes);

void write_sample_dump(const GraphicalSample& sample, const std::string& path);
GraphicalSample read_sample_dump(const std::string& path);

// Human-readable form with the same content as the binary dump.
nlohmann::json sample_to_json(const GraphicalSample& sample);

// FNV-1a over the binary serialization.
std::uint64_t sample_digest(const GraphicalSample& sample);
std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t h = 0xcbf29ce484222325ULL);

}  // namespace rcp
