#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <string>

#include "swrom/model.hpp"

namespace swrom {

// Binary matrix container: magic "SWRM", u32 version (currently 1), u64 row
// and column counts, then the payload as little-endian float64 in
// column-major order. Writes go through a temporary file that is renamed
// into place, so readers never observe a half-written file and reruns
// produce bit-identical bytes.
void write_matrix(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix(const std::string& path);

void write_vector(const std::string& path, const Vec& v);
Vec read_vector(const std::string& path);

// Column-at-a-time writer for matrices too large to hold next to the rest of
// the working set. The header is written up front with the final shape;
// finish() checks the column count and renames the temporary into place.
class MatrixStreamWriter {
 public:
  MatrixStreamWriter(std::string path, Eigen::Index rows, Eigen::Index cols);
  ~MatrixStreamWriter();

  MatrixStreamWriter(const MatrixStreamWriter&) = delete;
  MatrixStreamWriter& operator=(const MatrixStreamWriter&) = delete;

  void append_column(const Eigen::Ref<const Vec>& column);
  void finish();
  Eigen::Index columns_written() const { return written_; }

 private:
  std::string path_;
  std::string tmp_path_;
  std::ofstream out_;
  Eigen::Index rows_;
  Eigen::Index cols_;
  Eigen::Index written_ = 0;
  bool finished_ = false;
};

}  // namespace swrom
