#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bergman {

//! Comma-separated table; lines starting with '#' are skipped, the first other line is the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  //! Index of a header column; throws InvalidArgument if absent.
  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::size_t col) const;
};

CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(std::string_view text);

// Plots are pure functions of the CSV tables the runner writes.

//! Zeros (sample_index,re,im,multiplicity) over a heatmap of log10 curvature density (re,im,density on a square grid).
std::string zero_scatter_svg(const CsvTable& curvature, const CsvTable& zeros);

//! log min_kernel against log p with its least-squares line; report rows are (series,p,value).
std::string kernel_fit_svg(const CsvTable& report);

//! One decay curve per series whose name starts with "l1_log_kernel", log-scaled value against p.
std::string l1_decay_svg(const CsvTable& report);

}  // namespace bergman
