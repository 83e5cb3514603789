#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "iretr/problem.hpp"

namespace iretr {

class Sampler;

/// Compressed sparse rows; feature indices are zero-based.
struct SparseRows {
  std::vector<Index> row_ptr{0};
  std::vector<Index> cols;
  std::vector<double> vals;

  Index rows() const { return static_cast<Index>(row_ptr.size()) - 1; }

  double dot(Index row, const Vector& x) const {
    double s = 0.0;
    for (Index k = row_ptr[row]; k < row_ptr[row + 1]; ++k) s += vals[k] * x[cols[k]];
    return s;
  }

  /// y += alpha * a_row
  void axpy(Index row, double alpha, Vector& y) const {
    for (Index k = row_ptr[row]; k < row_ptr[row + 1]; ++k) y[cols[k]] += alpha * vals[k];
  }

  void push_row(const std::vector<std::pair<Index, double>>& entries);

  Vector dense_row(Index row, Index n) const;
};

struct Dataset {
  std::string name;
  Index n = 0;
  SparseRows rows;
  std::vector<double> labels;

  Index size() const { return static_cast<Index>(labels.size()); }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class LossFamily { logistic_l2, sigmoid_ls };

LossFamily parse_loss_family(const std::string& name);
std::string to_string(LossFamily family);

// LIBSVM text: "label idx:val idx:val ..." with ascending 1-based indices.
// n is the largest index seen unless `n_override` is given.
Dataset load_libsvm(const std::filesystem::path& path, std::optional<Index> n_override = {});
Dataset parse_libsvm(std::istream& in, std::string name = {},
                     std::optional<Index> n_override = {});
void write_libsvm(std::ostream& out, const Dataset& data);

// Dense CSV with a header row "label,f1,...,fn".
Dataset load_csv(const std::filesystem::path& path);
Dataset parse_csv(std::istream& in, std::string name = {});

/// Loads by extension: .csv as dense CSV, anything else as LIBSVM.
Dataset load_dataset(const std::filesystem::path& path);

/// Maps labels onto the family's admissible set ({-1,+1} or {0,1}).
Dataset map_labels(Dataset data, LossFamily family);

Dataset select_rows(const Dataset& data, std::span<const Index> rows);

/// Disjoint uniform split with ceil(f N) training rows.
std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, Sampler& sampler);

// Synthetic generators.

/// Labels are +/-1 with equal probability; features are N(label * separation * u, I)
/// for a random unit vector u.
Dataset synth_logistic(Index N, Index n, double separation, Sampler& sampler);

class QuadraticSumProblem;
/// Components 0.5 (x - x*)^T A_i (x - x*) with spectra of A_i in [lambda_min, lambda_max].
std::shared_ptr<const QuadraticSumProblem> synth_quadratic(Index N, Index n, double lambda_min,
                                                           double lambda_max, Sampler& sampler,
                                                           double solution_scale = 1.0);

}  // namespace iretr
