#include "frfx/ucr.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "frfx/util.hpp"

namespace frfx {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  const char sep = line.find(',') != std::string::npos ? ',' : ' ';
  std::string field;
  for (char c : line) {
    const bool is_sep = sep == ',' ? c == ',' : (c == ' ' || c == '\t');
    if (is_sep) {
      if (sep == ',' || !field.empty()) fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (sep == ',' || !field.empty()) fields.push_back(std::move(field));
  return fields;
}

double parse_field(const std::string& field, int row, int col) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw UnparseableField("cannot parse field at row " + std::to_string(row) +
                           ", column " + std::to_string(col) + ": '" + field +
                           "'");
  }
  return value;
}

}  // namespace

FunctionalDataset load_ucr(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());

  std::vector<double> raw_labels;
  std::vector<std::vector<double>> rows;
  std::string line;
  int row_number = 0;
  Eigen::Index n_values = -1;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ++row_number;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() < 2) {
      throw UnparseableField("row " + std::to_string(row_number) +
                             " has no series values");
    }
    raw_labels.push_back(parse_field(fields[0], row_number, 1));
    std::vector<double> values;
    values.reserve(fields.size() - 1);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      values.push_back(parse_field(fields[c], row_number, static_cast<int>(c) + 1));
    }
    if (n_values < 0) {
      n_values = static_cast<Eigen::Index>(values.size());
    } else if (static_cast<Eigen::Index>(values.size()) != n_values) {
      throw RaggedRows("row " + std::to_string(row_number) + " has " +
                       std::to_string(values.size()) + " values, expected " +
                       std::to_string(n_values));
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw IoError("no data rows in " + path.string());

  std::set<double> distinct(raw_labels.begin(), raw_labels.end());
  if (distinct.size() > 2) {
    throw UnknownLabelArity("found " + std::to_string(distinct.size()) +
                            " distinct labels, expected at most 2");
  }
  const double low = *distinct.begin();

  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), n_values);
  std::vector<int> labels(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    labels[i] = raw_labels[i] == low ? 0 : 1;
    for (Eigen::Index j = 0; j < n_values; ++j) {
      values(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    }
  }
  return FunctionalDataset::make(
      TimeGrid::uniform(0.0, 1.0, static_cast<int>(n_values)),
      std::move(values), std::move(labels));
}

void save_ucr(const FunctionalDataset& dataset,
              const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (int i = 0; i < dataset.n_curves(); ++i) {
    out << (dataset.has_labels() ? dataset.labels[static_cast<std::size_t>(i)] : 0);
    for (int j = 0; j < dataset.n_points(); ++j) {
      out << ',' << format_full(dataset.values(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write to " + path.string() + " failed");
}

}  // namespace frfx
