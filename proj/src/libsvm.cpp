#include "psn/libsvm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace psn {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw DomainError("libsvm line " + std::to_string(line) + ": " + what);
}

double parse_double(std::string_view text, std::size_t line) {
  // strtod accepts what std::from_chars does and also a leading '+'.
  const std::string buf(text);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size() || !std::isfinite(v)) {
    fail(line, "bad number '" + buf + "'");
  }
  return v;
}

struct Entry {
  std::size_t row;
  double value;
};

}  // namespace

LibsvmData read_libsvm(std::istream& in, std::size_t min_features) {
  std::vector<double> labels;
  std::vector<std::vector<Entry>> columns;
  std::size_t d = min_features;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string tok;
    if (!(tokens >> tok)) continue;
    labels.push_back(parse_double(tok, lineno));
    std::vector<Entry> col;
    std::size_t previous = 0;
    while (tokens >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) fail(lineno, "expected index:value, got '" + tok + "'");
      std::size_t index = 0;
      const char* first = tok.data();
      const char* last = tok.data() + colon;
      const auto [ptr, ec] = std::from_chars(first, last, index);
      if (ec != std::errc() || ptr != last) fail(lineno, "bad feature index '" + tok.substr(0, colon) + "'");
      if (index == 0) fail(lineno, "feature indices are 1-based");
      if (index <= previous) fail(lineno, "feature indices must increase");
      previous = index;
      col.push_back({index - 1, parse_double(std::string_view(tok).substr(colon + 1), lineno)});
      d = std::max(d, index);
    }
    columns.push_back(std::move(col));
  }
  if (in.bad()) throw DomainError("libsvm: read error");
  if (labels.empty()) throw DomainError("libsvm: empty dataset");

  LibsvmData out;
  out.features = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(labels.size()));
  out.labels = Eigen::Map<const Vector>(labels.data(), static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < columns.size(); ++i) {
    for (const Entry& e : columns[i]) {
      out.features(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(i)) = e.value;
    }
  }
  return out;
}

LibsvmData read_libsvm(const std::filesystem::path& path, std::size_t min_features) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path.string());
  return read_libsvm(in, min_features);
}

Vector binary_labels(const Vector& raw) {
  const std::set<double> distinct(raw.data(), raw.data() + raw.size());
  if (distinct.size() > 2) throw DomainError("logistic loss needs at most two distinct labels");
  if (std::all_of(distinct.begin(), distinct.end(), [](double v) { return v == 1.0 || v == -1.0; })) return raw;
  const double positive = *distinct.rbegin();
  return raw.unaryExpr([positive](double v) { return v == positive ? 1.0 : -1.0; });
}

ErmProblem make_erm_problem(LibsvmData data, LossKind loss, double lambda, double smoothing) {
  Vector labels = loss == LossKind::logistic ? binary_labels(data.labels) : std::move(data.labels);
  return ErmProblem(std::move(data.features), std::move(labels), loss, lambda, smoothing);
}

}  // namespace psn
