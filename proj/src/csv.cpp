#include "qds/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qds::csv {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

static std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

void write_table(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "# " << table.name << " v" << table.version;
  for (const auto& [k, v] : table.meta) out << ' ' << k << '=' << v;
  out << '\n';
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out << ',';
    out << table.header[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Table read_table(const std::filesystem::path& path, std::string_view expect_name) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing file: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.size() < 2 || line[0] != '#')
    throw std::runtime_error("missing schema line in " + path.string());

  Table table;
  std::istringstream head(line.substr(1));
  std::string token;
  head >> table.name;
  std::string version_token;
  head >> version_token;
  if (version_token.size() < 2 || version_token[0] != 'v')
    throw std::runtime_error("malformed schema line in " + path.string());
  table.version = std::atoi(version_token.c_str() + 1);
  while (head >> token) {
    const auto eq = token.find('=');
    if (eq != std::string::npos)
      table.meta[token.substr(0, eq)] = token.substr(eq + 1);
  }

  if (!expect_name.empty() && table.name != expect_name)
    throw std::runtime_error("schema name mismatch in " + path.string() +
                             ": expected " + std::string(expect_name) + ", got " +
                             table.name);
  if (table.version > kSchemaMajor)
    throw std::runtime_error("unsupported schema version v" +
                             std::to_string(table.version) + " in " + path.string());

  if (!std::getline(in, line))
    throw std::runtime_error("missing header row in " + path.string());
  table.header = split(line, ',');

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    table.rows.push_back(split(line, ','));
  }
  return table;
}

Eigen::MatrixXd table_to_matrix(const Table& table) {
  const auto rows = static_cast<Eigen::Index>(table.rows.size());
  const auto cols = static_cast<Eigen::Index>(table.header.size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != cols)
      throw std::runtime_error("ragged row " + std::to_string(i) + " in table " +
                               table.name);
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = std::strtod(row[static_cast<std::size_t>(j)].c_str(), nullptr);
  }
  return m;
}

void write_matrix(const std::filesystem::path& path, const std::string& name,
                  const std::string& column_prefix, const Eigen::MatrixXd& m,
                  const std::map<std::string, std::string>& meta) {
  Table table;
  table.name = name;
  table.meta = meta;
  table.header.reserve(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    table.header.push_back(column_prefix + std::to_string(j));
  table.rows.reserve(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<std::string> row;
    row.reserve(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(format_double(m(i, j)));
    table.rows.push_back(std::move(row));
  }
  write_table(path, table);
}

}  // namespace qds::csv
