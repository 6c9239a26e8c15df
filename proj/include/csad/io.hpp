#pragma once

// CSV and JSON serialization for matrices, datasets, sweep records, residual
// traces and monitor reports.
//
// Matrix and dataset CSVs are dense, headerless, comma separated, one row per
// line. Doubles are written with 17 significant digits so they read back
// bit-exactly.

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "csad/dataset.hpp"
#include "csad/edges.hpp"
#include "csad/errors.hpp"
#include "csad/estimator.hpp"
#include "csad/evaluation.hpp"
#include "csad/monitor.hpp"
#include "csad/numerics.hpp"

namespace csad {

/// File could not be read, written or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

inline void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

inline double parse_double(std::string_view field, const std::filesystem::path& path,
                           std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": bad number '" +
                  std::string(field) + "'");
  }
  return v;
}

}  // namespace detail

inline void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::ofstream out = detail::open_for_write(path);
  std::string line;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    line.clear();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) line += ',';
      line += format_double(m(i, j));
    }
    line += '\n';
    out << line;
  }
  detail::finish_write(out, path);
}

inline void write_matrix_csv(const std::filesystem::path& path, const SymMatrix& m) {
  write_matrix_csv(path, m.matrix());
}

inline void write_dataset_csv(const std::filesystem::path& path, const Dataset& d) {
  write_matrix_csv(path, d.matrix());
}

/// Reads a rectangular numeric CSV. Blank lines are ignored.
inline Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::size_t count = 0;
    std::string_view rest(line);
    for (;;) {
      const std::size_t comma = rest.find(',');
      values.push_back(detail::parse_double(rest.substr(0, comma), path, lineno));
      ++count;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                    std::to_string(cols) + " fields, found " + std::to_string(count));
    }
    ++rows;
  }
  if (rows == 0) throw IoError(path.string() + ": no data");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * cols + j];
    }
  }
  return m;
}

inline SymMatrix read_sym_matrix_csv(const std::filesystem::path& path) {
  try {
    return SymMatrix(read_matrix_csv(path));
  } catch (const InvalidArgument& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

inline Dataset read_dataset_csv(const std::filesystem::path& path) {
  return Dataset(read_matrix_csv(path));
}

inline nlohmann::json edges_to_json(const EdgeSet& edges) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Edge& e : edges) arr.push_back({e.first, e.second});
  return arr;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out = detail::open_for_write(path);
  out << j.dump(2) << '\n';
  detail::finish_write(out, path);
}

inline nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

inline nlohmann::json to_json(const AdmmConfig& c) {
  return {{"lambda", c.lambda},     {"rho", c.rho},
          {"eps_abs", c.eps_abs},   {"eps_rel", c.eps_rel},
          {"max_iterations", c.max_iterations}};
}

inline void write_trace_csv(const std::filesystem::path& path,
                            const std::vector<ResidualRecord>& trace) {
  std::ofstream out = detail::open_for_write(path);
  out << "iteration,primal,eps_primal,dual,eps_dual\n";
  for (const ResidualRecord& r : trace) {
    out << r.iteration << ',' << format_double(r.primal) << ',' << format_double(r.eps_primal)
        << ',' << format_double(r.dual) << ',' << format_double(r.eps_dual) << '\n';
  }
  detail::finish_write(out, path);
}

inline constexpr std::string_view kSweepHeader =
    "lambda,method,tp,fp,fn,precision,recall,iterations,converged";

inline void write_sweep_csv(const std::filesystem::path& path,
                            const std::vector<SweepRecord>& records) {
  std::ofstream out = detail::open_for_write(path);
  out << kSweepHeader << '\n';
  for (const SweepRecord& r : records) {
    out << format_double(r.lambda) << ',' << to_string(r.method) << ',' << r.tp << ',' << r.fp
        << ',' << r.fn << ',' << format_double(r.precision) << ',' << format_double(r.recall)
        << ',' << r.iterations << ',' << (r.converged ? "true" : "false") << '\n';
  }
  detail::finish_write(out, path);
}

inline nlohmann::json to_json(const WindowReport& w) {
  return {{"window_index", w.window_index},
          {"start_row", w.start_row},
          {"end_row", w.end_row},
          {"n_edges", w.detected_edges.size()},
          {"detected_edges", edges_to_json(w.detected_edges)},
          {"flagged", w.flagged},
          {"converged", w.converged},
          {"iterations", w.iterations}};
}

/// One compact JSON object per line.
inline void write_windows_jsonl(const std::filesystem::path& path,
                                const std::vector<WindowReport>& windows) {
  std::ofstream out = detail::open_for_write(path);
  for (const WindowReport& w : windows) out << to_json(w).dump() << '\n';
  detail::finish_write(out, path);
}

inline void write_windows_summary_csv(const std::filesystem::path& path,
                                      const std::vector<WindowReport>& windows) {
  std::ofstream out = detail::open_for_write(path);
  out << "window_index,start,end,n_edges,flagged,converged,iterations\n";
  for (const WindowReport& w : windows) {
    out << w.window_index << ',' << w.start_row << ',' << w.end_row << ','
        << w.detected_edges.size() << ',' << (w.flagged ? "true" : "false") << ','
        << (w.converged ? "true" : "false") << ',' << w.iterations << '\n';
  }
  detail::finish_write(out, path);
}

}  // namespace csad
