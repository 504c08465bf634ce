#include "vortgrad/snapshot.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "vortgrad/error.hpp"

namespace vortgrad {

namespace {

constexpr std::array<char, 4> kMagic{'V', 'C', 'R', 'S'};
constexpr std::uint32_t kVersion = 1;

template <class U>
void put_le(std::ostream& os, U value) {
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t i = 0; i < sizeof(U); ++i)
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFFu);
  os.write(bytes.data(), bytes.size());
}

template <class U>
U get_le(std::istream& is, const std::string& path) {
  std::array<unsigned char, sizeof(U)> bytes{};
  if (!is.read(reinterpret_cast<char*>(bytes.data()), bytes.size()))
    throw IoError(path, "truncated snapshot");
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

void put_f64(std::ostream& os, double v) { put_le(os, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& is, const std::string& path) {
  return std::bit_cast<double>(get_le<std::uint64_t>(is, path));
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const SimState& state) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path.string(), "cannot open for writing");
  const Grid& g = state.theta.grid();
  os.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(os, kVersion);
  put_le<std::uint64_t>(os, g.n());
  put_le<std::uint64_t>(os, g.n());
  put_f64(os, state.time);
  put_f64(os, state.alpha_exponent);
  for (double v : state.theta.values()) put_f64(os, v);
  if (!os) throw IoError(path.string(), "write failed");
}

SimState read_snapshot(const std::filesystem::path& path) {
  const std::string p = path.string();
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(p, "cannot open for reading");
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic)
    throw IoError(p, "not a VCRS snapshot");
  const auto version = get_le<std::uint32_t>(is, p);
  if (version != kVersion) throw IoError(p, "unsupported snapshot version " + std::to_string(version));
  const auto nx = get_le<std::uint64_t>(is, p);
  const auto ny = get_le<std::uint64_t>(is, p);
  if (nx != ny) throw IoError(p, "non-square snapshot grids are not supported");
  const double time = get_f64(is, p);
  const double alpha = get_f64(is, p);
  const Grid grid(nx);
  std::vector<double> values(grid.size());
  for (double& v : values) v = get_f64(is, p);
  return {ScalarField(grid, std::move(values)), time, alpha};
}

}  // namespace vortgrad
