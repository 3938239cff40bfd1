#include "usng/graph_io.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "usng/errors.hpp"

namespace usng {
namespace {

constexpr std::array<char, 4> kMagic = {'U', 'S', 'N', 'G'};

void put_u64(std::ostream& out, std::uint64_t x) {
  std::array<char, 8> buf;
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((x >> (8 * i)) & 0xff);
  out.write(buf.data(), buf.size());
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> buf;
  if (!in.read(reinterpret_cast<char*>(buf.data()), buf.size())) {
    throw IoError("truncated binary graph file");
  }
  std::uint64_t x = 0;
  for (int i = 7; i >= 0; --i) x = (x << 8) | buf[i];
  return x;
}

}  // namespace

void write_binary(std::ostream& out, const CompactGraph& g) {
  out.write(kMagic.data(), kMagic.size());
  out.put(static_cast<char>(kBinaryFormatVersion));
  const std::vector<Edge> edges = g.edges();
  put_u64(out, g.num_vertices());
  put_u64(out, edges.size());
  for (const Edge& e : edges) {
    put_u64(out, e.u);
    put_u64(out, e.v);
  }
  if (!out) throw IoError("failed writing binary graph");
}

CompactGraph read_binary(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw IoError("not a USNG binary graph (bad magic)");
  }
  const int version = in.get();
  if (version != kBinaryFormatVersion) {
    throw IoError("unsupported USNG format version " + std::to_string(version));
  }
  const std::uint64_t n = get_u64(in);
  const std::uint64_t m = get_u64(in);
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    const std::uint64_t u = get_u64(in);
    const std::uint64_t v = get_u64(in);
    if (u < 1 || u > n || v < 1 || v > n) throw IoError("edge endpoint out of range in graph file");
    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v)});
  }
  return CompactGraph::build(n, edges);
}

void write_text(std::ostream& out, const CompactGraph& g) {
  out << "# n " << g.num_vertices() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
  if (!out) throw IoError("failed writing text graph");
}

CompactGraph read_text(std::istream& in) {
  std::vector<Edge> edges;
  std::uint64_t n = 0;
  std::uint64_t max_id = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      std::uint64_t value = 0;
      if (ls >> hash >> key >> value && key == "n") n = value;
      continue;
    }
    std::int64_t u = 0, v = 0;
    if (!(ls >> u >> v) || u < 1 || v < 1) {
      throw IoError("malformed edge on line " + std::to_string(line_no));
    }
    max_id = std::max<std::uint64_t>(max_id, std::max(u, v));
    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v)});
  }
  if (n == 0) n = max_id;
  if (max_id > n) throw IoError("edge endpoint exceeds declared vertex count");
  return CompactGraph::build(n, edges);
}

void save_graph(const std::filesystem::path& path, const CompactGraph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  if (path.extension() == ".txt" || path.extension() == ".edges") {
    write_text(out, g);
  } else {
    write_binary(out, g);
  }
}

CompactGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open graph file: " + path.string());
  std::array<char, 4> head{};
  in.read(head.data(), head.size());
  const bool binary = in.gcount() == 4 && head == kMagic;
  in.clear();
  in.seekg(0);
  return binary ? read_binary(in) : read_text(in);
}

}  // namespace usng
