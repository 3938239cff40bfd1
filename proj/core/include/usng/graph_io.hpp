#pragma once

#include <filesystem>
#include <iosfwd>

#include "usng/graph.hpp"

namespace usng {

// Binary edge list layout (all integers little-endian):
//   "USNG" | version:u8 | N:u64 | edge_count:u64 | (u:u64, v:u64) * edge_count
// Vertex ids are 1-based. Edges are written in CompactGraph::edges() order.
inline constexpr std::uint8_t kBinaryFormatVersion = 1;

void write_binary(std::ostream& out, const CompactGraph& g);
CompactGraph read_binary(std::istream& in);

// Plain text: one "u v" pair per line. The vertex count is the largest id seen
// unless a "# n N" header line is present (written by write_text).
void write_text(std::ostream& out, const CompactGraph& g);
CompactGraph read_text(std::istream& in);

void save_graph(const std::filesystem::path& path, const CompactGraph& g);
/// Detects the format from the magic bytes. Throws IoError on a missing or
/// malformed file.
CompactGraph load_graph(const std::filesystem::path& path);

}  // namespace usng
