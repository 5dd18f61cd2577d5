#pragma once

#include <string>
#include <vector>

namespace dbench::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
};

Table read_file(const std::string& path);
Table parse(const std::string& text);
void write_file(const std::string& path, const Table& t);

}  // namespace dbench::csv
