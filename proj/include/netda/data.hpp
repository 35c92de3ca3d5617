#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace netda {

using Labels = std::vector<int>;

/// A sample matrix (rows are samples, columns features) with optional
/// class labels in {1..C}. Used for both the source and the target domain.
struct LabeledDomain
{
  Eigen::MatrixXd features;
  std::optional<Labels> labels;
  std::string name;

  Eigen::Index size() const { return features.rows(); }
  Eigen::Index dim() const { return features.cols(); }
  bool has_labels() const { return labels.has_value(); }

  /// Largest label value (the class count C). Zero when unlabeled.
  int num_classes() const;

  /// Throws DataError when shape or label invariants are violated.
  void validate() const;
};

LabeledDomain make_domain(Eigen::MatrixXd features, std::optional<Labels> labels, std::string name = {});

/// Rows `indices` of `domain`, labels carried along.
LabeledDomain subset(const LabeledDomain& domain, const std::vector<Eigen::Index>& indices);

/// Same features with labels dropped.
LabeledDomain strip_labels(const LabeledDomain& domain);

/// Stack rows of `top` over rows of `bottom`. Labels survive only if both have them.
LabeledDomain stack(const LabeledDomain& top, const LabeledDomain& bottom, std::string name = {});

Eigen::MatrixXd stack_rows(const Eigen::MatrixXd& top, const Eigen::MatrixXd& bottom);

/// Fraction of positions where `predicted` equals `truth`.
double accuracy(const Labels& predicted, const Labels& truth);

// ---------------------------------------------------------------------------
// Delimited text IO

/// Reads a delimited table with one header row. The delimiter (comma or tab)
/// is detected from the header line. `label_column` selects the label column
/// by header name or by zero-based index; when absent the domain is unlabeled.
LabeledDomain load_dataset(const std::string& path, const std::optional<std::string>& label_column);

/// Header names of a delimited file, in column order.
std::vector<std::string> read_header(const std::string& path);

/// Writes `f1..fd[,label]` with a header row, comma delimited, full precision.
void write_dataset(const std::string& path, const LabeledDomain& domain, bool include_labels = true);

// ---------------------------------------------------------------------------
// Preprocessing

struct StandardizeStats
{
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev; // population stddev; zero marks a constant feature
};

StandardizeStats fit_standardize(const Eigen::MatrixXd& features);

/// Per-feature z-score. With `stats` absent they are fit on `domain` itself.
/// Constant features map to 0.
std::pair<LabeledDomain, StandardizeStats> standardize(const LabeledDomain& domain,
                                                       const std::optional<StandardizeStats>& stats = std::nullopt);

/// Projects both domains onto the top `dims` principal directions of the
/// pooled source and target samples (centered on the pooled mean).
std::pair<LabeledDomain, LabeledDomain> pca_reduce(const LabeledDomain& source, const LabeledDomain& target, int dims);

enum class StandardizeMode { none, source, pooled };

struct PreprocessSpec
{
  StandardizeMode standardize = StandardizeMode::none;
  std::optional<int> pca_dims;
};

std::pair<LabeledDomain, LabeledDomain> preprocess(const LabeledDomain& source, const LabeledDomain& target,
                                                   const PreprocessSpec& spec);

// ---------------------------------------------------------------------------
// Synthetic domain shift

struct ShiftedGaussianSpec
{
  std::uint64_t seed = 0;
  int n_source = 300;
  int n_target = 300;
  int classes = 2;
  int dim = 2;
  double shift = 1.5;    // translation length, in units of the class stddev
  double rotation = 0.0; // radians, in the plane of the first two features
  double radius = 2.0;   // distance of each class mean from the origin
};

/// Source classes are unit-variance Gaussians with means spread on a circle
/// of `radius` in the first two features. The target draws from the same
/// classes after rotating by `rotation` and translating by `shift` along the
/// first feature. Target labels are kept for scoring only.
std::pair<LabeledDomain, LabeledDomain> make_shifted_gaussians(const ShiftedGaussianSpec& spec);

} // namespace netda
