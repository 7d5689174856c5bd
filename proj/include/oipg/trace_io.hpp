#pragma once

#include "oipg/analysis.hpp"

namespace oipg {

/// Tabular view of one run ready for CSV output: the per-step record columns
/// followed by the derived series and one column per evaluated bound RHS.
/// Values print with 17 significant digits, so parse(write(t)) round-trips
/// bit for bit. Wall-clock data never enters the table.
struct TraceTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Schema: k, x0..x{n-1}, err_norm_e, eps_k, eps_gap_k, f_xk, track_err,
/// run_avg, regret, then rhs_<bound-name> for each evaluated bound.
TraceTable make_trace_table(const RunTrace& trace, const TrackingSeries& tracking,
                            const std::vector<double>& regret,
                            const std::vector<const BoundCheck*>& bound_columns = {});

std::string write_csv(const TraceTable& table);
void write_csv_file(const TraceTable& table, const std::string& path);

TraceTable parse_csv(const std::string& text);
TraceTable read_csv_file(const std::string& path);

/// Column accessor; throws ConfigError when absent.
std::vector<double> column(const TraceTable& table, const std::string& name);
bool has_column(const TraceTable& table, const std::string& name);

}  // namespace oipg
