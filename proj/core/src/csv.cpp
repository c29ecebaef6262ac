#include "hagedorn/csv.hpp"

#include <cstdio>
#include <fstream>

#include "hagedorn/error.hpp"

namespace hagedorn {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CsvWriter::Impl {
  std::ofstream out;
  bool first = true;
};

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : impl_(std::make_unique<Impl>()) {
  std::error_code ec;  // a failure surfaces when opening the file
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  impl_->out.open(path, std::ios::binary | std::ios::trunc);
  if (!impl_->out) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
  for (const std::string& h : header) cell(h);
  end_row();
}

CsvWriter::~CsvWriter() = default;

CsvWriter& CsvWriter::cell(const std::string& s) {
  if (!impl_->first) impl_->out << ',';
  impl_->out << s;
  impl_->first = false;
  return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_double(v)); }

CsvWriter& CsvWriter::empty() { return cell(std::string()); }

void CsvWriter::end_row() {
  impl_->out << '\n';
  impl_->first = true;
}

void write_trajectory_csv(const std::filesystem::path& path, const std::vector<PropagatedState>& states) {
  const int n = states.empty() ? 1 : states.front().n();
  std::vector<std::string> header{"t", "beta", "norm_predicted", "re_action", "im_action"};
  if (n == 1) {
    header.insert(header.end(), {"p", "q"});
  } else {
    for (int j = 1; j <= n; ++j) header.push_back("p" + std::to_string(j));
    for (int j = 1; j <= n; ++j) header.push_back("q" + std::to_string(j));
  }
  header.insert(header.end(), {"det_defect_symplectic", "min_eig_positivity"});
  CsvWriter csv(path, header);
  for (const PropagatedState& s : states) {
    csv.cell(s.t).cell(s.beta).cell(std::exp(s.log_prefactor().real()));
    csv.cell(s.action.real()).cell(s.action.imag());
    for (Eigen::Index j = 0; j < s.z.size(); ++j) csv.cell(s.z(j));
    csv.cell(s.symplectic_defect).cell(s.min_eig_positivity);
    csv.end_row();
  }
}

void write_coefficients_csv(const std::filesystem::path& path, const std::vector<PropagatedState>& states,
                            const std::vector<HagedornExpansion>& expansions) {
  if (states.size() != expansions.size()) {
    throw Error(ErrorCode::DimensionMismatch, "one expansion per state expected");
  }
  CsvWriter csv(path, {"t", "k", "re_a", "im_a"});
  for (size_t i = 0; i < states.size(); ++i) {
    for (const auto& [k, a] : expansions[i].coefficients) {
      csv.cell(states[i].t).cell(to_string(k)).cell(a.real()).cell(a.imag());
      csv.end_row();
    }
  }
}

void write_norm_curves_csv(const std::filesystem::path& path, const std::vector<NormCurveRow>& rows,
                           bool with_grid_column) {
  std::vector<std::string> header{"t", "k", "norm_closed_form", "norm_general_pipeline"};
  if (with_grid_column) header.push_back("norm_grid_oracle");
  CsvWriter csv(path, header);
  for (const NormCurveRow& r : rows) {
    csv.cell(r.t).cell(std::to_string(r.k)).cell(r.closed_form).cell(r.general_pipeline);
    if (with_grid_column) {
      if (r.grid_oracle) {
        csv.cell(*r.grid_oracle);
      } else {
        csv.empty();
      }
    }
    csv.end_row();
  }
}

void write_snapshot_csv(const std::filesystem::path& path, const Grid& grid, const CVector& field) {
  if (field.size() != grid.size()) throw Error(ErrorCode::GridMismatch, "field size does not match the grid");
  std::vector<std::string> header;
  if (grid.dim() == 1) {
    header.push_back("x");
  } else {
    for (int j = 1; j <= grid.dim(); ++j) header.push_back("x" + std::to_string(j));
  }
  header.insert(header.end(), {"re", "im"});
  CsvWriter csv(path, header);
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    for (int j = 0; j < grid.dim(); ++j) csv.cell(grid.points()(j, i));
    csv.cell(field(i).real()).cell(field(i).imag());
    csv.end_row();
  }
}

}  // namespace hagedorn
