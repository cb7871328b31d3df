#include "lgf/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>

#include "lgf/errors.hpp"

namespace lgf {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put(std::string& out, std::size_t offset, T value) {
  auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  std::memcpy(out.data() + offset, bits.data(), sizeof(T));
}

template <class T>
T get(const std::string& in, std::size_t offset) {
  std::array<unsigned char, sizeof(T)> bits;
  std::memcpy(bits.data(), in.data() + offset, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  return std::bit_cast<T>(bits);
}

}  // namespace

std::string encode_snapshot(const FlowState& s) {
  check_same_grid(s);
  const Grid& g = s.m.grid();
  const std::size_t pts = g.points();
  const auto fields = static_cast<std::uint32_t>(2 + g.dim());
  std::string out(kSnapshotHeaderBytes + fields * pts * 8, '\0');
  std::memcpy(out.data(), "TPFS", 4);
  put<std::uint32_t>(out, 4, kSnapshotVersion);
  put<std::uint32_t>(out, 8, static_cast<std::uint32_t>(g.dim()));
  put<std::uint32_t>(out, 12, static_cast<std::uint32_t>(g.n()));
  put<double>(out, 16, g.length());
  put<double>(out, 24, s.t);
  put<std::uint32_t>(out, 32, fields);
  std::size_t off = kSnapshotHeaderBytes;
  auto emit = [&](std::span<const double> v) {
    for (double x : v) {
      put<double>(out, off, x);
      off += 8;
    }
  };
  emit(s.m.values());
  emit(s.n.values());
  emit(s.u.data());
  return out;
}

FlowState decode_snapshot(const std::string& bytes) {
  if (bytes.size() < kSnapshotHeaderBytes) {
    throw FormatError("snapshot: truncated header (" + std::to_string(bytes.size()) + " bytes)");
  }
  if (std::memcmp(bytes.data(), "TPFS", 4) != 0) throw FormatError("snapshot: bad magic");
  const auto version = get<std::uint32_t>(bytes, 4);
  if (version != kSnapshotVersion) {
    throw FormatError("snapshot: unsupported version " + std::to_string(version));
  }
  const auto dim = get<std::uint32_t>(bytes, 8);
  const auto n = get<std::uint32_t>(bytes, 12);
  const auto length = get<double>(bytes, 16);
  const auto t = get<double>(bytes, 24);
  const auto fields = get<std::uint32_t>(bytes, 32);
  if (fields != 2 + dim) throw FormatError("snapshot: field count does not match dim");
  if (!std::isfinite(t)) throw FormatError("snapshot: non-finite time");
  std::optional<Grid> grid;
  try {
    grid.emplace(static_cast<int>(dim), static_cast<int>(n), length);
  } catch (const ParameterError& e) {
    throw FormatError(std::string("snapshot: bad grid header: ") + e.what());
  }
  const std::size_t pts = grid->points();
  const std::size_t expected = kSnapshotHeaderBytes + fields * pts * 8;
  if (bytes.size() != expected) {
    throw FormatError("snapshot: payload size " + std::to_string(bytes.size()) + " bytes, expected " +
                      std::to_string(expected));
  }
  std::size_t off = kSnapshotHeaderBytes;
  auto take = [&](std::span<double> v) {
    for (double& x : v) {
      x = get<double>(bytes, off);
      if (!std::isfinite(x)) {
        throw FormatError("snapshot: non-finite value at byte offset " + std::to_string(off));
      }
      off += 8;
    }
  };
  FlowState s{ScalarField(*grid), ScalarField(*grid), VectorField(*grid), t};
  take(s.m.values());
  take(s.n.values());
  take(s.u.data());
  return s;
}

void write_snapshot(const FlowState& state, const std::filesystem::path& path) {
  const std::string bytes = encode_snapshot(state);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("snapshot: cannot open '" + tmp.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("snapshot: write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

FlowState read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("snapshot: cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return decode_snapshot(ss.str());
  } catch (Error& e) {
    e.append_context(path.string());
    throw;
  }
}

}  // namespace lgf
