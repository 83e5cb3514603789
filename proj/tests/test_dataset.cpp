#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "iretr/dataset.hpp"
#include "iretr/losses.hpp"
#include "iretr/sampling.hpp"
#include "iretr/solver.hpp"

using namespace iretr;

namespace {

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_libsvm(in, "t");
}

int error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return static_cast<int>(e.line());
  }
  return -1;
}

bool same(const Dataset& a, const Dataset& b) {
  return a.n == b.n && a.labels == b.labels && a.rows.row_ptr == b.rows.row_ptr &&
         a.rows.cols == b.rows.cols && a.rows.vals == b.rows.vals;
}

}  // namespace

TEST_CASE("libsvm rows") {
  const Dataset d = parse("+1 1:0.5 3:2\n");
  REQUIRE(d.size() == 1);
  CHECK(d.n == 3);
  CHECK(d.labels[0] == 1.0);
  const Vector row = d.rows.dense_row(0, 3);
  CHECK(row[0] == 0.5);
  CHECK(row[1] == 0.0);
  CHECK(row[2] == 2.0);
}

TEST_CASE("libsvm comments, blank lines, empty rows and dimension override") {
  const Dataset d = parse("# header\n\n-1 2:1.5   # trailing\n0\n1 4:-2e-3\n");
  CHECK(d.size() == 3);
  CHECK(d.n == 4);
  CHECK(d.labels == std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(d.rows.row_ptr[2] - d.rows.row_ptr[1] == 0);
  std::istringstream in("1 2:1\n");
  CHECK(parse_libsvm(in, "t", Index{10}).n == 10);
  std::istringstream in2("1 12:1\n");
  CHECK_THROWS_AS(parse_libsvm(in2, "t", Index{10}), std::invalid_argument);
}

TEST_CASE("empty libsvm input gives an empty dataset that make_loss rejects") {
  const Dataset d = parse("");
  CHECK(d.size() == 0);
  CHECK_THROWS_AS(make_loss({LossFamily::logistic_l2, std::make_shared<const Dataset>(d)}),
                  std::invalid_argument);
}

TEST_CASE("libsvm errors carry the line number") {
  CHECK(error_line("1 2:abc") == 1);
  CHECK(error_line("1 1:1\n1 3:1 2:1\n") == 2);
  CHECK(error_line("1 1:1\n\n1 0:1\n") == 3);
  CHECK(error_line("x 1:1\n") == 1);
  CHECK(error_line("1 1-1\n") == 1);
  CHECK(error_line("1 1:1 1:2\n") == 1);
}

TEST_CASE("libsvm round trip") {
  Sampler s(3);
  const Dataset d = synth_logistic(50, 7, 1.0, s);
  std::ostringstream out;
  write_libsvm(out, d);
  std::istringstream in(out.str());
  const Dataset back = parse_libsvm(in, d.name, d.n);
  CHECK(same(d, back));
}

TEST_CASE("csv datasets") {
  std::istringstream in("label,f1,f2,f3\n1,0.5,0,2\n0, 1, 2, 3\n");
  const Dataset d = parse_csv(in, "c");
  CHECK(d.n == 3);
  CHECK(d.size() == 2);
  CHECK(d.rows.dense_row(0, 3)[2] == 2.0);
  CHECK(d.rows.row_ptr[1] == 2);
  std::istringstream bad("label,a\n1,2,3\n");
  CHECK_THROWS_AS(parse_csv(bad, "c"), ParseError);
  std::istringstream noheader("y,a\n1,2\n");
  CHECK_THROWS_AS(parse_csv(noheader, "c"), ParseError);
}

TEST_CASE("file loading picks the format from the extension") {
  const auto dir = std::filesystem::temp_directory_path() / "iretr_dataset_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "a.libsvm") << "1 1:2\n-1 2:3\n";
    std::ofstream(dir / "b.csv") << "label,x,y\n1,2,0\n-1,0,3\n";
  }
  const Dataset a = load_dataset(dir / "a.libsvm");
  const Dataset b = load_dataset(dir / "b.csv");
  CHECK(a.name == "a");
  CHECK(same(a, b));
  CHECK_THROWS(load_dataset(dir / "missing.libsvm"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("label mapping") {
  Dataset d;
  d.n = 1;
  for (double b : {0.0, 1.0, 1.0}) {
    d.rows.push_row({{0, 1.0}});
    d.labels.push_back(b);
  }
  CHECK(map_labels(d, LossFamily::logistic_l2).labels == std::vector<double>{-1, 1, 1});
  d.labels = {-1, 1, -1};
  CHECK(map_labels(d, LossFamily::sigmoid_ls).labels == std::vector<double>{0, 1, 0});
  CHECK(map_labels(d, LossFamily::logistic_l2).labels == d.labels);
  d.labels[1] = 2.0;
  CHECK_THROWS_AS(map_labels(d, LossFamily::logistic_l2), std::invalid_argument);
}

TEST_CASE("train/test split") {
  Sampler g(1);
  const Dataset d = synth_logistic(10, 2, 1.0, g);
  Sampler a(5), b(5);
  const auto [tr, te] = split(d, 0.6, a);
  const auto [tr2, te2] = split(d, 0.6, b);
  CHECK(tr.size() == 6);
  CHECK(te.size() == 4);
  CHECK(same(tr, tr2));
  CHECK(same(te, te2));
  // Disjoint and exhaustive: every original row lands on exactly one side.
  std::multiset<double> all, parts;
  for (Index i = 0; i < d.size(); ++i) all.insert(d.rows.vals[static_cast<std::size_t>(d.rows.row_ptr[i])]);
  for (const Dataset* p : {&tr, &te})
    for (Index i = 0; i < p->size(); ++i)
      parts.insert(p->rows.vals[static_cast<std::size_t>(p->rows.row_ptr[i])]);
  CHECK(all == parts);
  Sampler c(2);
  CHECK(split(d, 1.0, c).first.size() == 10);
  CHECK(split(d, 1.0, c).second.size() == 0);
  CHECK(split(d, 0.0, c).first.size() == 0);
  CHECK(split(d, 0.0, c).second.size() == 10);
  CHECK_THROWS_AS(split(d, 1.5, c), std::invalid_argument);
}

TEST_CASE("synthetic logistic data") {
  Sampler a(8), b(8);
  CHECK(same(synth_logistic(100, 5, 2.0, a), synth_logistic(100, 5, 2.0, b)));
  Sampler s(12);
  auto d = std::make_shared<const Dataset>(synth_logistic(1000, 10, 5.0, s));
  auto p = make_loss({LossFamily::logistic_l2, d});
  Sampler run(1);
  const RunResult r = statr_run(*p, SolverConfig{}, HessianMode::full, run);
  CHECK(r.ok());
  CHECK(p->accuracy(r.x) >= 0.95);
  // Without separation the labels carry no signal.
  Sampler z(13);
  auto d0 = std::make_shared<const Dataset>(synth_logistic(4000, 10, 0.0, z));
  auto p0 = make_loss({LossFamily::logistic_l2, d0});
  Sampler run0(1);
  const RunResult r0 = statr_run(*p0, SolverConfig{}, HessianMode::full, run0);
  CHECK(p0->accuracy(r0.x) <= 0.56);
}
