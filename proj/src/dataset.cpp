#include "iretr/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "iretr/sampling.hpp"

namespace iretr {

void SparseRows::push_row(const std::vector<std::pair<Index, double>>& entries) {
  for (const auto& [col, val] : entries) {
    cols.push_back(col);
    vals.push_back(val);
  }
  row_ptr.push_back(static_cast<Index>(cols.size()));
}

Vector SparseRows::dense_row(Index row, Index n) const {
  Vector out = Vector::Zero(n);
  axpy(row, 1.0, out);
  return out;
}

LossFamily parse_loss_family(const std::string& name) {
  if (name == "logistic_l2" || name == "logistic") return LossFamily::logistic_l2;
  if (name == "sigmoid_ls" || name == "sigmoid") return LossFamily::sigmoid_ls;
  throw std::invalid_argument("unknown loss family '" + name + "'");
}

std::string to_string(LossFamily family) {
  return family == LossFamily::logistic_l2 ? "logistic_l2" : "sigmoid_ls";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view tok, std::size_t line) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("invalid number '" + std::string(tok) + "'", line);
  return v;
}

Index parse_index(std::string_view tok, std::size_t line) {
  Index v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("invalid feature index '" + std::string(tok) + "'", line);
  return v;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, std::string name, std::optional<Index> n_override) {
  Dataset data;
  data.name = std::move(name);
  Index max_index = 0;
  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::pair<Index, double>> entries;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    entries.clear();
    std::size_t pos = 0;
    auto next_token = [&]() -> std::string_view {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      const std::size_t start = pos;
      while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      return line.substr(start, pos - start);
    };

    const double label = parse_double(next_token(), line_no);
    Index last = 0;
    for (std::string_view tok = next_token(); !tok.empty(); tok = next_token()) {
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos)
        throw ParseError("expected idx:val, got '" + std::string(tok) + "'", line_no);
      const Index idx = parse_index(tok.substr(0, colon), line_no);
      const double val = parse_double(tok.substr(colon + 1), line_no);
      if (idx < 1) throw ParseError("feature indices are 1-based", line_no);
      if (idx <= last) throw ParseError("feature indices must be ascending", line_no);
      last = idx;
      if (val != 0.0) entries.emplace_back(idx - 1, val);
    }
    max_index = std::max(max_index, last);
    data.rows.push_row(entries);
    data.labels.push_back(label);
  }
  data.n = max_index;
  if (n_override) {
    if (*n_override < max_index)
      throw std::invalid_argument("load_libsvm: feature index exceeds the given dimension");
    data.n = *n_override;
  }
  return data;
}

Dataset load_libsvm(const std::filesystem::path& path, std::optional<Index> n_override) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_libsvm(in, path.stem().string(), n_override);
}

void write_libsvm(std::ostream& out, const Dataset& data) {
  for (Index i = 0; i < data.size(); ++i) {
    out << format_double(data.labels[i]);
    for (Index k = data.rows.row_ptr[i]; k < data.rows.row_ptr[i + 1]; ++k)
      out << ' ' << data.rows.cols[k] + 1 << ':' << format_double(data.rows.vals[k]);
    out << '\n';
  }
}

Dataset parse_csv(std::istream& in, std::string name) {
  Dataset data;
  data.name = std::move(name);
  std::string raw;
  std::size_t line_no = 0;
  if (!std::getline(in, raw)) return data;
  ++line_no;
  {
    std::string_view header = trim(raw);
    const Index fields = static_cast<Index>(std::count(header.begin(), header.end(), ',')) + 1;
    if (header.substr(0, header.find(',')) != "label")
      throw ParseError("CSV header must start with 'label'", line_no);
    data.n = fields - 1;
  }
  std::vector<std::pair<Index, double>> entries;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    entries.clear();
    Index field = 0;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      const std::string_view tok =
          trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
      const double v = parse_double(tok, line_no);
      if (field == 0)
        data.labels.push_back(v);
      else if (v != 0.0)
        entries.emplace_back(field - 1, v);
      ++field;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (field != data.n + 1)
      throw ParseError("expected " + std::to_string(data.n + 1) + " fields, got " +
                           std::to_string(field),
                       line_no);
    data.rows.push_row(entries);
  }
  return data;
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_csv(in, path.stem().string());
}

Dataset load_dataset(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? load_csv(path) : load_libsvm(path);
}

Dataset map_labels(Dataset data, LossFamily family) {
  for (double& b : data.labels) {
    if (b != -1.0 && b != 0.0 && b != 1.0)
      throw std::invalid_argument("map_labels: label " + format_double(b) +
                                  " is neither 0, -1 nor +1");
    if (family == LossFamily::logistic_l2 && b == 0.0) b = -1.0;
    if (family == LossFamily::sigmoid_ls && b == -1.0) b = 0.0;
  }
  return data;
}

Dataset select_rows(const Dataset& data, std::span<const Index> rows) {
  Dataset out;
  out.name = data.name;
  out.n = data.n;
  std::vector<std::pair<Index, double>> entries;
  for (Index i : rows) {
    entries.clear();
    for (Index k = data.rows.row_ptr[i]; k < data.rows.row_ptr[i + 1]; ++k)
      entries.emplace_back(data.rows.cols[k], data.rows.vals[k]);
    out.rows.push_row(entries);
    out.labels.push_back(data.labels[i]);
  }
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, Sampler& sampler) {
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0))
    throw std::invalid_argument("split: train_fraction must lie in [0, 1]");
  const Index N = data.size();
  const Index n_train = std::min(N, ceil_count(train_fraction * static_cast<double>(N)));
  std::vector<Index> train, test;
  if (n_train > 0) {
    const SampleSet chosen = draw_sample(n_train, N, sampler);
    train.assign(chosen.indices().begin(), chosen.indices().end());
  }
  for (Index i = 0, t = 0; i < N; ++i) {
    if (t < n_train && train[static_cast<std::size_t>(t)] == i)
      ++t;
    else
      test.push_back(i);
  }
  Dataset a = select_rows(data, train);
  Dataset b = select_rows(data, test);
  a.name = data.name + "_train";
  b.name = data.name + "_test";
  return {std::move(a), std::move(b)};
}

}  // namespace iretr
