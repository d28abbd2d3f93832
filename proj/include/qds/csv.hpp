#pragma once
// Versioned CSV tables. Every file starts with a comment line of the form
//   # <name> v<major>[ key=value ...]
// followed by a column header row. Readers reject unknown names and major
// versions so stale files fail loudly instead of being misread.

#include <Eigen/Core>

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qds::csv {

inline constexpr int kSchemaMajor = 1;

// Shortest round-trip-safe text for a double.
std::string format_double(double v);

struct Table {
  std::string name;
  int version = kSchemaMajor;
  std::map<std::string, std::string> meta;  // key=value tokens on the # line
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_table(const std::filesystem::path& path, const Table& table);

// Throws std::runtime_error on a missing file, a name mismatch, or an
// unsupported major version; the message names the offending file.
Table read_table(const std::filesystem::path& path, std::string_view expect_name);

Eigen::MatrixXd table_to_matrix(const Table& table);

// Convenience writer for a numeric matrix with generated column names
// (prefix0, prefix1, ...).
void write_matrix(const std::filesystem::path& path, const std::string& name,
                  const std::string& column_prefix, const Eigen::MatrixXd& m,
                  const std::map<std::string, std::string>& meta = {});

}  // namespace qds::csv
