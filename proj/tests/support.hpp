#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "netda/data.hpp"

namespace testutil {

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = normal(rng);
  return M;
}

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, Eigen::Index n)
{
  const Eigen::MatrixXd R = random_matrix(rng, n, n);
  return 0.5 * (R + R.transpose());
}

inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, Eigen::Index n)
{
  const Eigen::MatrixXd R = random_matrix(rng, n, n);
  return R * R.transpose() + static_cast<double>(n) * Eigen::MatrixXd::Identity(n, n);
}

inline netda::Labels random_labels(std::mt19937_64& rng, std::size_t n, int classes)
{
  std::uniform_int_distribution<int> pick(1, classes);
  netda::Labels out(n);
  for (auto& l : out) l = pick(rng);
  return out;
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi)
{
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Scratch directory removed on destruction.
class TempDir
{
public:
  TempDir()
  {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("netda_test_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
  std::filesystem::path path_;
};

} // namespace testutil
