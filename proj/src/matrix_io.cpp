#include "qsim/matrix_io.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace qsim {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("matrix_io: cannot open " + path + " for writing");
  out << std::setprecision(17);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("matrix_io: cannot open " + path);
  return in;
}

}  // namespace

void save_matrix_dense(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out = open_out(path);
  out << m.rows() << " " << m.cols() << "\n";
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) out << m(r, c) << (c + 1 == m.cols() ? '\n' : ' ');
  }
}

Eigen::MatrixXd load_matrix_dense(const std::string& path) {
  std::ifstream in = open_in(path);
  long rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0)
    throw std::runtime_error("matrix_io: bad header in " + path);
  Eigen::MatrixXd m(rows, cols);
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c)
      if (!(in >> m(r, c)))
        throw std::runtime_error("matrix_io: truncated matrix in " + path);
  return m;
}

void save_matrix_triplets(const std::string& path, const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("matrix_io: triplet format requires a square matrix");
  long nnz = 0;
  for (int l = 0; l < m.rows(); ++l)
    for (int k = l + 1; k < m.cols(); ++k)
      if (m(l, k) != 0.0) ++nnz;
  std::ofstream out = open_out(path);
  out << m.rows() << " " << nnz << "\n";
  for (int l = 0; l < m.rows(); ++l)
    for (int k = l + 1; k < m.cols(); ++k)
      if (m(l, k) != 0.0) out << l << " " << k << " " << m(l, k) << "\n";
}

Eigen::MatrixXd load_matrix_triplets(const std::string& path) {
  std::ifstream in = open_in(path);
  long n = 0, nnz = 0;
  if (!(in >> n >> nnz) || n < 0 || nnz < 0)
    throw std::runtime_error("matrix_io: bad header in " + path);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (long t = 0; t < nnz; ++t) {
    long l = 0, k = 0;
    double v = 0.0;
    if (!(in >> l >> k >> v)) throw std::runtime_error("matrix_io: truncated triplets in " + path);
    if (l < 0 || k < 0 || l >= n || k >= n || l == k)
      throw std::runtime_error("matrix_io: bad triplet index in " + path);
    m(l, k) = v;
    m(k, l) = v;
  }
  return m;
}

void save_vector(const std::string& path, const Eigen::VectorXd& v) {
  std::ofstream out = open_out(path);
  out << v.size() << "\n";
  for (int i = 0; i < v.size(); ++i) out << v[i] << "\n";
}

Eigen::VectorXd load_vector(const std::string& path) {
  std::ifstream in = open_in(path);
  long n = 0;
  if (!(in >> n) || n < 0) throw std::runtime_error("matrix_io: bad header in " + path);
  Eigen::VectorXd v(n);
  for (long i = 0; i < n; ++i)
    if (!(in >> v[i])) throw std::runtime_error("matrix_io: truncated vector in " + path);
  return v;
}

}  // namespace qsim
