#pragma once

#include <string>

#include <Eigen/Dense>

namespace qsim {

/// Dense text format: "rows cols" header line, then one whitespace separated
/// row per line, printed with 17 significant digits so doubles round trip.
void save_matrix_dense(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd load_matrix_dense(const std::string& path);

/// Sparse symmetric format: "n nnz" header, then "l k value" per line for
/// the strict upper triangle, 0-indexed. Loading mirrors into both halves.
void save_matrix_triplets(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd load_matrix_triplets(const std::string& path);

void save_vector(const std::string& path, const Eigen::VectorXd& v);
Eigen::VectorXd load_vector(const std::string& path);

}  // namespace qsim
