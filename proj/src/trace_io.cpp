#include "oipg/trace_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace oipg {

TraceTable make_trace_table(const RunTrace& trace, const TrackingSeries& tracking,
                            const std::vector<double>& regret,
                            const std::vector<const BoundCheck*>& bound_columns) {
  const size_t steps = trace.records.size();
  if (tracking.error.size() != steps || regret.size() != steps) {
    throw std::invalid_argument("make_trace_table: series lengths disagree");
  }
  const int n = steps == 0 ? 0 : static_cast<int>(trace.records.front().x.size());

  TraceTable table;
  table.columns.push_back("k");
  for (int i = 0; i < n; ++i) table.columns.push_back("x" + std::to_string(i));
  table.columns.insert(table.columns.end(),
                       {"err_norm_e", "eps_k", "eps_gap_k", "f_xk", "track_err",
                        "run_avg", "regret"});
  for (const BoundCheck* check : bound_columns) {
    table.columns.push_back("rhs_" + check->name);
    if (check->rhs.size() != steps) {
      throw std::invalid_argument("make_trace_table: bound column length mismatch");
    }
  }

  table.rows.reserve(steps);
  for (size_t i = 0; i < steps; ++i) {
    const auto& rec = trace.records[i];
    std::vector<double> row;
    row.reserve(table.columns.size());
    row.push_back(static_cast<double>(rec.k));
    for (int j = 0; j < n; ++j) row.push_back(rec.x[j]);
    row.push_back(rec.grad_error_norm);
    row.push_back(rec.eps);
    row.push_back(rec.eps_gap);
    row.push_back(rec.objective);
    row.push_back(tracking.error[i]);
    row.push_back(tracking.running_avg[i]);
    row.push_back(regret[i]);
    for (const BoundCheck* check : bound_columns) row.push_back(check->rhs[i]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string write_csv(const TraceTable& table) {
  std::ostringstream out;
  for (size_t i = 0; i < table.columns.size(); ++i) {
    if (i > 0) out << ',';
    out << table.columns[i];
  }
  out << '\n';
  char buffer[40];
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::invalid_argument("write_csv: ragged row");
    }
    for (size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      std::snprintf(buffer, sizeof(buffer), "%.17g", row[i]);
      out << buffer;
    }
    out << '\n';
  }
  return out.str();
}

void write_csv_file(const TraceTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  out << write_csv(table);
}

TraceTable parse_csv(const std::string& text) {
  TraceTable table;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trace csv: empty input");
  {
    std::istringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) table.columns.push_back(cell);
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    row.reserve(table.columns.size());
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw ConfigError("trace csv line " + std::to_string(lineno) +
                          ": bad number '" + cell + "'");
      }
      row.push_back(v);
    }
    if (row.size() != table.columns.size()) {
      throw ConfigError("trace csv line " + std::to_string(lineno) + ": expected " +
                        std::to_string(table.columns.size()) + " cells");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

TraceTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open trace file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

bool has_column(const TraceTable& table, const std::string& name) {
  for (const auto& c : table.columns) {
    if (c == name) return true;
  }
  return false;
}

std::vector<double> column(const TraceTable& table, const std::string& name) {
  for (size_t i = 0; i < table.columns.size(); ++i) {
    if (table.columns[i] != name) continue;
    std::vector<double> values;
    values.reserve(table.rows.size());
    for (const auto& row : table.rows) values.push_back(row[i]);
    return values;
  }
  throw ConfigError("trace csv: missing column '" + name + "'");
}

}  // namespace oipg
