#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hagedorn/grid.hpp"
#include "hagedorn/propagation.hpp"

namespace hagedorn {

/// 17 significant digits, '.' decimal separator.
std::string format_double(double v);

/// Writes rows with '\n' line endings. Throws ConfigError if the file
/// cannot be opened.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  CsvWriter& cell(double v);
  CsvWriter& cell(const std::string& s);
  CsvWriter& empty();
  void end_row();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// t, beta, norm_predicted, re_action, im_action, p, q (p1..pn, q1..qn when
/// n > 1), det_defect_symplectic, min_eig_positivity.
void write_trajectory_csv(const std::filesystem::path& path, const std::vector<PropagatedState>& states);

/// t, k, re_a, im_a for each time and each coefficient.
void write_coefficients_csv(const std::filesystem::path& path, const std::vector<PropagatedState>& states,
                            const std::vector<HagedornExpansion>& expansions);

struct NormCurveRow {
  double t;
  int k;
  double closed_form;
  double general_pipeline;
  std::optional<double> grid_oracle;
};

void write_norm_curves_csv(const std::filesystem::path& path, const std::vector<NormCurveRow>& rows,
                           bool with_grid_column);

/// x (or x1, x2), re, im.
void write_snapshot_csv(const std::filesystem::path& path, const Grid& grid, const CVector& field);

}  // namespace hagedorn
