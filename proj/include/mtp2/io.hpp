#pragma once

#include <Eigen/Core>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtp2/synthetic.hpp"

namespace mtp2 {

/// Cells of an RFC-4180 style CSV ('.' decimal separator, double quotes for
/// quoted fields). CRLF and LF both accepted.
inline std::vector<std::vector<std::string>> read_csv_cells(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false, any = false;
  char ch;
  auto end_cell = [&]() {
    row.push_back(cell);
    cell.clear();
  };
  auto end_row = [&]() {
    end_cell();
    rows.push_back(row);
    row.clear();
    any = false;
  };
  while (in.get(ch)) {
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          cell.push_back('"');
          in.get(ch);
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"': quoted = true; any = true; break;
      case ',': end_cell(); any = true; break;
      case '\r': break;
      case '\n':
        if (any || !cell.empty() || !row.empty()) end_row();
        break;
      default: cell.push_back(ch); any = true;
    }
  }
  if (any || !cell.empty() || !row.empty()) end_row();
  return rows;
}

namespace detail {

inline bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return errno == 0 && end == s.c_str() + s.size();
}

}  // namespace detail

/// Numeric matrix from CSV. A leading non-numeric row is treated as a
/// header; a leading non-numeric column (dates) is dropped when
/// allow_label_column is set.
inline Eigen::MatrixXd read_matrix_csv(const std::string& path,
                                       bool allow_label_column = false) {
  auto cells = read_csv_cells(path);
  if (cells.empty()) throw std::runtime_error(path + ": empty file");

  std::size_t first_row = 0, first_col = 0;
  double probe;
  if (allow_label_column && cells[0].size() > 1 &&
      !detail::parse_double(cells.back()[0], probe))
    first_col = 1;
  {
    const auto& head = cells[0];
    bool numeric = true;
    for (std::size_t j = first_col; j < head.size(); ++j)
      if (!detail::parse_double(head[j], probe)) numeric = false;
    if (!numeric) first_row = 1;
  }
  if (first_row >= cells.size())
    throw std::runtime_error(path + ": no data rows");

  const std::size_t ncol = cells[first_row].size() - first_col;
  Eigen::MatrixXd m(cells.size() - first_row, ncol);
  for (std::size_t i = first_row; i < cells.size(); ++i) {
    if (cells[i].size() - first_col != ncol)
      throw std::runtime_error(path + ": ragged row " + std::to_string(i + 1));
    for (std::size_t j = 0; j < ncol; ++j) {
      double v;
      if (!detail::parse_double(cells[i][j + first_col], v))
        throw std::runtime_error(path + ": non-numeric cell at row " +
                                 std::to_string(i + 1) + ", column " +
                                 std::to_string(j + first_col + 1));
      m(Eigen::Index(i - first_row), Eigen::Index(j)) = v;
    }
  }
  return m;
}

/// 17 significant digits: doubles survive the round trip bit-exactly.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_matrix_csv(const std::string& path,
                             const Eigen::MatrixXd& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

/// "i,j,weight" rows over the predicted support, 1-based indices.
inline void write_edge_list(const std::string& path,
                            const Eigen::MatrixXd& theta, double tau_edge) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "i,j,weight\n";
  for (Eigen::Index i = 0; i < theta.rows(); ++i)
    for (Eigen::Index j = i + 1; j < theta.cols(); ++j)
      if (std::abs(theta(i, j)) > tau_edge)
        out << (i + 1) << ',' << (j + 1) << ','
            << format_double(theta(i, j)) << '\n';
}

/// Community labels: one per row, or the second column of a two-column CSV.
inline std::vector<std::string> read_labels(const std::string& path) {
  auto cells = read_csv_cells(path);
  std::vector<std::string> labels;
  labels.reserve(cells.size());
  for (const auto& row : cells) {
    if (row.empty()) continue;
    labels.push_back(row.size() >= 2 ? row[1] : row[0]);
  }
  if (!labels.empty() && labels.front() == "label")
    labels.erase(labels.begin());
  return labels;
}

}  // namespace mtp2
