#include "aebt/csv.hpp"

#include <charconv>
#include <fstream>
#include <string>
#include <vector>

#include "aebt/errors.hpp"

namespace aebt {

namespace {

std::string trimmed(const std::string& s) {
  const auto from = s.find_first_not_of(" \t\r");
  if (from == std::string::npos) return "";
  const auto to = s.find_last_not_of(" \t\r");
  return s.substr(from, to - from + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trimmed(line.substr(start)));
      break;
    }
    fields.push_back(trimmed(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

bool parse_double(const std::string& field, double& out) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && !field.empty();
}

}  // namespace

CompositionalDataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path.string() + "'");

  std::vector<std::vector<double>> rows;
  std::vector<std::string> names;
  std::string line;
  std::size_t line_no = 0;
  bool saw_first_content_line = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (trimmed(line).empty()) continue;
    const std::vector<std::string> fields = split_fields(line);

    if (!saw_first_content_line) {
      saw_first_content_line = true;
      // A first line with any non-numeric field is the (single) header.
      bool all_numeric = true;
      for (const auto& f : fields) {
        double ignored;
        if (!parse_double(f, ignored)) {
          all_numeric = false;
          break;
        }
      }
      if (!all_numeric) {
        names = fields;
        continue;
      }
    }

    std::vector<double> row(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (!parse_double(fields[c], row[c]))
        throw input_error(path.string() + ": row " + std::to_string(line_no) + ", column " +
                          std::to_string(c + 1) + ": not a number: '" + fields[c] + "'");
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw input_error(path.string() + ": row " + std::to_string(line_no) + ": expected " +
                        std::to_string(rows.front().size()) + " columns, found " +
                        std::to_string(row.size()));
    rows.push_back(std::move(row));
  }

  if (rows.empty()) throw input_error(path.string() + ": no data rows");
  if (!names.empty() && names.size() != rows.front().size())
    throw input_error(path.string() + ": header has " + std::to_string(names.size()) +
                      " fields but rows have " + std::to_string(rows.front().size()));
  if (rows.front().size() < 2)
    throw input_error(path.string() + ": need at least two components per row");

  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];

  try {
    return CompositionalDataset::close_rows(m, std::move(names));
  } catch (const input_error& e) {
    throw input_error(path.string() + ": " + e.what());
  }
}

}  // namespace aebt
