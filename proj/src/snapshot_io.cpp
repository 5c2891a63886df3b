#include "swrom/snapshot_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <stdexcept>
#include <utility>

static_assert(std::endian::native == std::endian::little,
              "matrix files are little-endian; this build targets a little-endian host");
static_assert(sizeof(double) == 8, "payload format requires 8-byte doubles");

namespace swrom {

namespace {

constexpr char kMagic[4] = {'S', 'W', 'R', 'M'};
constexpr std::uint32_t kVersion = 1;

void write_header(std::ostream& out, std::uint64_t rows, std::uint64_t cols) {
  out.write(kMagic, 4);
  const std::uint32_t version = kVersion;
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
  out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
}

void atomic_replace(const std::string& tmp_path, const std::string& path) {
  std::error_code ec;
  std::filesystem::rename(tmp_path, path, ec);
  if (ec)
    throw std::runtime_error("cannot move " + tmp_path + " to " + path + ": " + ec.message());
}

}  // namespace

void write_matrix(const std::string& path, const Eigen::MatrixXd& m) {
  const std::string tmp_path = path + ".tmp";
  {
    std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp_path + " for writing");
    write_header(out, static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols()));
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(m.size())));
    if (!out) throw std::runtime_error("write failed for " + tmp_path);
  }
  atomic_replace(tmp_path, path);
}

Eigen::MatrixXd read_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);

  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error(path + ": not a matrix snapshot file");

  std::uint32_t version = 0;
  std::uint64_t rows = 0, cols = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
  if (!in) throw std::runtime_error(path + ": truncated header");
  if (version != kVersion)
    throw std::runtime_error(path + ": unsupported format version " + std::to_string(version));
  if (rows > (1ull << 32) || cols > (1ull << 32))
    throw std::runtime_error(path + ": implausible matrix shape");

  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const std::streamsize bytes =
      static_cast<std::streamsize>(sizeof(double) * rows * cols);
  in.read(reinterpret_cast<char*>(m.data()), bytes);
  if (!in || in.gcount() != bytes) throw std::runtime_error(path + ": truncated payload");
  in.peek();
  if (!in.eof()) throw std::runtime_error(path + ": trailing data after payload");
  return m;
}

void write_vector(const std::string& path, const Vec& v) {
  write_matrix(path, Eigen::MatrixXd(v));
}

Vec read_vector(const std::string& path) {
  const Eigen::MatrixXd m = read_matrix(path);
  if (m.cols() != 1) throw std::runtime_error(path + ": expected a single-column file");
  return Vec(m.col(0));
}

MatrixStreamWriter::MatrixStreamWriter(std::string path, Eigen::Index rows, Eigen::Index cols)
    : path_(std::move(path)), tmp_path_(path_ + ".tmp"), rows_(rows), cols_(cols) {
  if (rows_ < 1 || cols_ < 0)
    throw std::invalid_argument("MatrixStreamWriter: invalid shape");
  out_.open(tmp_path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw std::runtime_error("cannot open " + tmp_path_ + " for writing");
  write_header(out_, static_cast<std::uint64_t>(rows_), static_cast<std::uint64_t>(cols_));
  if (!out_) throw std::runtime_error("write failed for " + tmp_path_);
}

MatrixStreamWriter::~MatrixStreamWriter() {
  if (!finished_) {
    out_.close();
    std::remove(tmp_path_.c_str());
  }
}

void MatrixStreamWriter::append_column(const Eigen::Ref<const Vec>& column) {
  if (finished_) throw std::logic_error("MatrixStreamWriter: append after finish");
  if (column.size() != rows_)
    throw std::invalid_argument("MatrixStreamWriter: column length " +
                                std::to_string(column.size()) + " does not match " +
                                std::to_string(rows_) + " rows");
  if (written_ == cols_)
    throw std::logic_error("MatrixStreamWriter: all columns already written");
  // Ref may carry an inner stride; copy to contiguous storage before writing.
  const Vec contiguous = column;
  out_.write(reinterpret_cast<const char*>(contiguous.data()),
             static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(rows_)));
  if (!out_) throw std::runtime_error("write failed for " + tmp_path_);
  ++written_;
}

void MatrixStreamWriter::finish() {
  if (finished_) throw std::logic_error("MatrixStreamWriter: finish called twice");
  if (written_ != cols_)
    throw std::logic_error("MatrixStreamWriter: wrote " + std::to_string(written_) + " of " +
                           std::to_string(cols_) + " columns");
  out_.flush();
  if (!out_) throw std::runtime_error("write failed for " + tmp_path_);
  out_.close();
  atomic_replace(tmp_path_, path_);
  finished_ = true;
}

}  // namespace swrom
