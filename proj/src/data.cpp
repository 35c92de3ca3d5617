#include "netda/data.hpp"
#include "netda/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

namespace netda {

int LabeledDomain::num_classes() const
{
  if (!labels || labels->empty()) return 0;
  return *std::max_element(labels->begin(), labels->end());
}

void LabeledDomain::validate() const
{
  if (features.rows() < 1 || features.cols() < 1)
    throw DataError("domain '" + name + "' must have at least one sample and one feature");
  if (!features.allFinite()) throw DataError("domain '" + name + "' contains non-finite feature values");
  if (labels) {
    if (static_cast<Eigen::Index>(labels->size()) != features.rows())
      throw DataError("domain '" + name + "': label count " + std::to_string(labels->size()) +
                      " does not match sample count " + std::to_string(features.rows()));
    for (std::size_t i = 0; i < labels->size(); ++i)
      if ((*labels)[i] < 1)
        throw DataError("domain '" + name + "': label at row " + std::to_string(i + 1) + " is outside {1..C}");
  }
}

LabeledDomain make_domain(Eigen::MatrixXd features, std::optional<Labels> labels, std::string name)
{
  LabeledDomain d{std::move(features), std::move(labels), std::move(name)};
  d.validate();
  return d;
}

LabeledDomain subset(const LabeledDomain& domain, const std::vector<Eigen::Index>& indices)
{
  LabeledDomain out;
  out.name = domain.name;
  out.features.resize(static_cast<Eigen::Index>(indices.size()), domain.dim());
  if (domain.labels) out.labels.emplace(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const auto i = indices[r];
    if (i < 0 || i >= domain.size()) throw DataError("subset index out of range");
    out.features.row(static_cast<Eigen::Index>(r)) = domain.features.row(i);
    if (domain.labels) (*out.labels)[r] = (*domain.labels)[static_cast<std::size_t>(i)];
  }
  return out;
}

LabeledDomain strip_labels(const LabeledDomain& domain)
{
  return LabeledDomain{domain.features, std::nullopt, domain.name};
}

Eigen::MatrixXd stack_rows(const Eigen::MatrixXd& top, const Eigen::MatrixXd& bottom)
{
  if (top.cols() != bottom.cols())
    throw DataError("cannot stack domains with " + std::to_string(top.cols()) + " and " +
                    std::to_string(bottom.cols()) + " features");
  Eigen::MatrixXd out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

LabeledDomain stack(const LabeledDomain& top, const LabeledDomain& bottom, std::string name)
{
  LabeledDomain out;
  out.name = std::move(name);
  out.features = stack_rows(top.features, bottom.features);
  if (top.labels && bottom.labels) {
    Labels all = *top.labels;
    all.insert(all.end(), bottom.labels->begin(), bottom.labels->end());
    out.labels = std::move(all);
  }
  return out;
}

double accuracy(const Labels& predicted, const Labels& truth)
{
  if (predicted.size() != truth.size()) throw DataError("accuracy: prediction and truth lengths differ");
  if (truth.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string_view s)
{
  const auto* ws = " \t\r\n\"";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line, char delim)
{
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    cells.push_back(trim(std::string_view(line).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return cells;
}

char detect_delimiter(const std::string& header)
{
  return header.find('\t') != std::string::npos ? '\t' : ',';
}

bool parse_double(const std::string& cell, double& out)
{
  if (cell.empty()) return false;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::ifstream open_or_throw(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file '" + path + "'");
  return in;
}

std::optional<std::size_t> resolve_label_column(const std::vector<std::string>& header, const std::string& column)
{
  if (auto it = std::find(header.begin(), header.end(), column); it != header.end())
    return static_cast<std::size_t>(it - header.begin());
  std::size_t index = 0;
  auto [ptr, ec] = std::from_chars(column.data(), column.data() + column.size(), index);
  if (ec == std::errc() && ptr == column.data() + column.size() && index < header.size()) return index;
  return std::nullopt;
}

} // namespace

std::vector<std::string> read_header(const std::string& path)
{
  auto in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("data file '" + path + "' is empty");
  return split(line, detect_delimiter(line));
}

LabeledDomain load_dataset(const std::string& path, const std::optional<std::string>& label_column)
{
  auto in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("data file '" + path + "' is empty");
  const char delim = detect_delimiter(line);
  const auto header = split(line, delim);

  std::optional<std::size_t> label_idx;
  if (label_column) {
    label_idx = resolve_label_column(header, *label_column);
    if (!label_idx) throw DataError("label column '" + *label_column + "' not found in '" + path + "'");
  }

  const std::size_t ncols = header.size();
  const std::size_t nfeat = ncols - (label_idx ? 1 : 0);
  if (nfeat == 0) throw DataError("data file '" + path + "' has no feature columns");

  std::vector<double> values;
  Labels labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split(line, delim);
    if (cells.size() != ncols)
      throw DataError("row " + std::to_string(row) + " of '" + path + "' has " + std::to_string(cells.size()) +
                      " cells, expected " + std::to_string(ncols));
    for (std::size_t c = 0; c < ncols; ++c) {
      double v = 0.0;
      if (!parse_double(cells[c], v))
        throw DataError("non-numeric value '" + cells[c] + "' at row " + std::to_string(row) + ", column " +
                        std::to_string(c) + " of '" + path + "'");
      if (label_idx && c == *label_idx) {
        if (v != std::floor(v) || v < 1.0 || v > 1e9)
          throw DataError("label '" + cells[c] + "' at row " + std::to_string(row) + " is outside {1..C}");
        labels.push_back(static_cast<int>(v));
      } else {
        values.push_back(v);
      }
    }
  }
  if (row == 0) throw DataError("data file '" + path + "' has no data rows");

  LabeledDomain d;
  d.name = path;
  d.features = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(nfeat));
  if (label_idx) d.labels = std::move(labels);
  d.validate();
  return d;
}

void write_dataset(const std::string& path, const LabeledDomain& domain, bool include_labels)
{
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  const bool labels = include_labels && domain.labels;
  for (Eigen::Index j = 0; j < domain.dim(); ++j) out << (j ? "," : "") << 'f' << (j + 1);
  if (labels) out << ",label";
  out << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < domain.size(); ++i) {
    for (Eigen::Index j = 0; j < domain.dim(); ++j) out << (j ? "," : "") << domain.features(i, j);
    if (labels) out << ',' << (*domain.labels)[static_cast<std::size_t>(i)];
    out << '\n';
  }
  if (!out) throw DataError("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------

StandardizeStats fit_standardize(const Eigen::MatrixXd& features)
{
  StandardizeStats stats;
  const double n = static_cast<double>(features.rows());
  stats.mean = features.colwise().mean().transpose();
  stats.stddev = ((features.rowwise() - stats.mean.transpose()).array().square().colwise().sum() / n).sqrt().transpose();
  return stats;
}

std::pair<LabeledDomain, StandardizeStats> standardize(const LabeledDomain& domain,
                                                       const std::optional<StandardizeStats>& stats)
{
  StandardizeStats s = stats ? *stats : fit_standardize(domain.features);
  if (s.mean.size() != domain.dim() || s.stddev.size() != domain.dim())
    throw DataError("standardize: stats dimension " + std::to_string(s.mean.size()) + " does not match " +
                    std::to_string(domain.dim()) + " features");

  LabeledDomain out = domain;
  for (Eigen::Index j = 0; j < domain.dim(); ++j) {
    // Relative threshold so float noise in a constant column does not blow up.
    const double scale = std::max(1.0, std::abs(s.mean(j)));
    if (s.stddev(j) <= 1e-12 * scale)
      out.features.col(j).setZero();
    else
      out.features.col(j) = (domain.features.col(j).array() - s.mean(j)) / s.stddev(j);
  }
  return {std::move(out), std::move(s)};
}

std::pair<LabeledDomain, LabeledDomain> pca_reduce(const LabeledDomain& source, const LabeledDomain& target, int dims)
{
  const Eigen::MatrixXd pooled = stack_rows(source.features, target.features);
  const Eigen::Index n = pooled.rows();
  const Eigen::Index d = pooled.cols();
  if (dims < 1 || dims > d || dims > n - 1)
    throw ConfigError("pca dims " + std::to_string(dims) + " must be in [1, min(d=" + std::to_string(d) +
                      ", n-1=" + std::to_string(n - 1) + ")]");

  const Eigen::RowVectorXd mean = pooled.colwise().mean();
  const Eigen::MatrixXd centered = pooled.rowwise() - mean;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  Eigen::MatrixXd basis = svd.matrixV().leftCols(dims);
  for (Eigen::Index c = 0; c < dims; ++c) {
    Eigen::Index imax = 0;
    basis.col(c).cwiseAbs().maxCoeff(&imax);
    if (basis(imax, c) < 0) basis.col(c) *= -1.0;
  }

  LabeledDomain s = source, t = target;
  s.features = (source.features.rowwise() - mean) * basis;
  t.features = (target.features.rowwise() - mean) * basis;
  return {std::move(s), std::move(t)};
}

std::pair<LabeledDomain, LabeledDomain> preprocess(const LabeledDomain& source, const LabeledDomain& target,
                                                   const PreprocessSpec& spec)
{
  LabeledDomain s = source, t = target;
  if (spec.standardize != StandardizeMode::none) {
    const auto stats = spec.standardize == StandardizeMode::source
                           ? fit_standardize(source.features)
                           : fit_standardize(stack_rows(source.features, target.features));
    s = standardize(source, stats).first;
    t = standardize(target, stats).first;
  }
  if (spec.pca_dims) std::tie(s, t) = pca_reduce(s, t, *spec.pca_dims);
  return {std::move(s), std::move(t)};
}

// ---------------------------------------------------------------------------

std::pair<LabeledDomain, LabeledDomain> make_shifted_gaussians(const ShiftedGaussianSpec& spec)
{
  if (spec.classes < 2) throw ConfigError("synthetic data needs at least 2 classes");
  if (spec.dim < 1) throw ConfigError("synthetic data needs dim >= 1");
  if (spec.n_source < spec.classes || spec.n_target < spec.classes)
    throw ConfigError("synthetic sample counts must be at least the class count");

  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(spec.classes, spec.dim);
  for (int c = 0; c < spec.classes; ++c) {
    const double angle = 2.0 * std::numbers::pi * c / spec.classes;
    means(c, 0) = spec.radius * std::cos(angle);
    if (spec.dim > 1) means(c, 1) = spec.radius * std::sin(angle);
  }

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&](int n, const char* name) {
    LabeledDomain d;
    d.name = name;
    d.features.resize(n, spec.dim);
    d.labels.emplace(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const int c = i % spec.classes;
      (*d.labels)[static_cast<std::size_t>(i)] = c + 1;
      for (int j = 0; j < spec.dim; ++j) d.features(i, j) = means(c, j) + normal(rng);
    }
    return d;
  };

  LabeledDomain source = draw(spec.n_source, "source");
  LabeledDomain target = draw(spec.n_target, "target");

  if (spec.dim > 1 && spec.rotation != 0.0) {
    const double cs = std::cos(spec.rotation), sn = std::sin(spec.rotation);
    for (Eigen::Index i = 0; i < target.size(); ++i) {
      const double x = target.features(i, 0), y = target.features(i, 1);
      target.features(i, 0) = cs * x - sn * y;
      target.features(i, 1) = sn * x + cs * y;
    }
  }
  target.features.col(0).array() += spec.shift;
  return {std::move(source), std::move(target)};
}

} // namespace netda
