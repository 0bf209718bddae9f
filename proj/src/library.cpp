#include "sparsedyn/library.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <set>
#include <string>

#include "sparsedyn/errors.hpp"

namespace sparsedyn {

namespace {

constexpr char kMagic[4] = {'P', 'O', 'D', 'L'};
constexpr std::uint16_t kVersion = 1;
constexpr std::uint32_t kMaxBlocks = 1u << 20;

void put_bytes(std::string& out, std::uint64_t v, int nbytes) {
  for (int i = 0; i < nbytes; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
  put_bytes(out, std::bit_cast<std::uint64_t>(v), 8);
}

class Reader {
 public:
  Reader(const char* data, std::size_t size) : data_(data), size_(size) {}

  std::uint64_t take(int nbytes) {
    if (pos_ + nbytes > size_)
      throw FormatError("library file truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < nbytes; ++i)
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(data_[pos_ + i]))
           << (8 * i);
    pos_ += nbytes;
    return v;
  }

  double take_f64() { return std::bit_cast<double>(take(8)); }

  std::size_t remaining() const { return size_ - pos_; }
  bool exhausted() const { return pos_ == size_; }

 private:
  const char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

}  // namespace

ModalLibrary::ModalLibrary(std::vector<PodBasis> blocks)
    : blocks_(std::move(blocks)) {
  if (blocks_.empty())
    throw std::invalid_argument("ModalLibrary: at least one basis required");

  n_ = blocks_.front().n();
  std::set<int> regimes;
  for (const auto& b : blocks_) {
    if (b.n() != n_)
      throw DimensionMismatch("ModalLibrary: state dimensions differ");
    if (b.rank() < 1)
      throw std::invalid_argument("ModalLibrary: empty basis block");
    if (!regimes.insert(b.regime_id).second)
      throw DuplicateRegime("ModalLibrary: regime id " +
                            std::to_string(b.regime_id) + " appears twice");
  }

  offsets_.reserve(blocks_.size());
  p_ = 0;
  for (const auto& b : blocks_) {
    offsets_.push_back(p_);
    p_ += b.rank();
  }

  matrix_.resize(n_, p_);
  for (std::size_t j = 0; j < blocks_.size(); ++j)
    matrix_.middleCols(offsets_[j], blocks_[j].rank()) = blocks_[j].modes;
}

const PodBasis& ModalLibrary::block_for_regime(int regime_id) const {
  return blocks_[block_index_for_regime(regime_id)];
}

int ModalLibrary::block_index_for_regime(int regime_id) const {
  for (std::size_t j = 0; j < blocks_.size(); ++j)
    if (blocks_[j].regime_id == regime_id) return static_cast<int>(j);
  throw OutOfRange("ModalLibrary: no block for regime " +
                   std::to_string(regime_id));
}

int ModalLibrary::block_of_column(int col) const {
  if (col < 0 || col >= p_)
    throw OutOfRange("ModalLibrary: column " + std::to_string(col) +
                     " outside [0, " + std::to_string(p_) + ")");
  int j = 0;
  while (j + 1 < static_cast<int>(offsets_.size()) && col >= offsets_[j + 1])
    ++j;
  return blocks_[j].regime_id;
}

bool ModalLibrary::operator==(const ModalLibrary& other) const {
  if (blocks_.size() != other.blocks_.size() || n_ != other.n_ ||
      p_ != other.p_)
    return false;
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    const auto& a = blocks_[j];
    const auto& b = other.blocks_[j];
    if (a.regime_id != b.regime_id || a.rank() != b.rank()) return false;
    if ((a.singular_values.array() != b.singular_values.array()).any())
      return false;
    if ((a.energy_fractions.array() != b.energy_fractions.array()).any())
      return false;
    if ((a.modes.array() != b.modes.array()).any()) return false;
  }
  return true;
}

ModalLibrary build_library(std::vector<PodBasis> bases) {
  return ModalLibrary(std::move(bases));
}

void save_library(const ModalLibrary& lib, const std::filesystem::path& path) {
  std::string payload;
  payload.append(kMagic, 4);
  put_bytes(payload, kVersion, 2);
  put_bytes(payload, static_cast<std::uint32_t>(lib.block_count()), 4);
  put_bytes(payload, static_cast<std::uint64_t>(lib.n()), 8);

  for (const auto& block : lib.blocks()) {
    put_bytes(payload, static_cast<std::uint32_t>(block.regime_id), 4);
    put_bytes(payload, static_cast<std::uint32_t>(block.rank()), 4);
    for (int i = 0; i < block.rank(); ++i)
      put_f64(payload, block.singular_values[i]);
    for (int i = 0; i < block.rank(); ++i)
      put_f64(payload, block.energy_fractions[i]);
    for (int c = 0; c < block.rank(); ++c) {
      for (Eigen::Index r = 0; r < block.n(); ++r) {
        put_f64(payload, block.modes(r, c).real());
        put_f64(payload, block.modes(r, c).imag());
      }
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

ModalLibrary load_library(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::string payload((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading " + path.string());

  Reader reader(payload.data(), payload.size());
  char magic[4];
  for (auto& ch : magic) ch = static_cast<char>(reader.take(1));
  if (std::string_view(magic, 4) != std::string_view(kMagic, 4))
    throw FormatError("not a modal library file (bad magic)");
  const auto version = reader.take(2);
  if (version != kVersion)
    throw FormatError("unsupported library version " + std::to_string(version));

  const auto block_count = reader.take(4);
  const auto n = static_cast<Eigen::Index>(reader.take(8));
  if (block_count == 0 || block_count > kMaxBlocks || n <= 0)
    throw FormatError("implausible library dimensions");

  std::vector<PodBasis> blocks;
  blocks.reserve(block_count);
  for (std::uint64_t b = 0; b < block_count; ++b) {
    PodBasis block;
    block.regime_id = static_cast<int>(reader.take(4));
    const auto rank = reader.take(4);
    if (rank == 0 || static_cast<Eigen::Index>(rank) > n)
      throw FormatError("block rank inconsistent with state dimension");
    // Declared block payload must fit the actual bytes before any
    // allocation happens.
    const std::uint64_t needed =
        rank * 16 + static_cast<std::uint64_t>(n) * rank * 16;
    if (reader.remaining() < needed)
      throw FormatError("declared payload exceeds file size");
    block.singular_values.resize(rank);
    block.energy_fractions.resize(rank);
    block.modes.resize(n, rank);
    for (std::uint64_t i = 0; i < rank; ++i)
      block.singular_values[i] = reader.take_f64();
    for (std::uint64_t i = 0; i < rank; ++i)
      block.energy_fractions[i] = reader.take_f64();
    for (std::uint64_t c = 0; c < rank; ++c) {
      for (Eigen::Index r = 0; r < n; ++r) {
        const double re = reader.take_f64();
        const double im = reader.take_f64();
        block.modes(r, c) = {re, im};
      }
    }
    blocks.push_back(std::move(block));
  }
  if (!reader.exhausted())
    throw FormatError("trailing bytes after declared payload");

  return ModalLibrary(std::move(blocks));
}

}  // namespace sparsedyn
