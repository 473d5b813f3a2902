#include "mis/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mis {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

MisGeometry::MisGeometry(int rows_ms1, int cols_ms1, int rows_ms2, int cols_ms2,
                         double element_spacing, double wavelength)
    : rows_ms1_(rows_ms1),
      cols_ms1_(cols_ms1),
      rows_ms2_(rows_ms2),
      cols_ms2_(cols_ms2),
      element_spacing_(element_spacing),
      wavelength_(wavelength) {
  require(rows_ms2 >= 1 && cols_ms2 >= 1, "MisGeometry: MS2 must be non-empty");
  require(rows_ms1 >= rows_ms2 && cols_ms1 >= cols_ms2,
          "MisGeometry: MS2 cannot exceed MS1 in either dimension");
  require(std::isfinite(element_spacing) && element_spacing > 0.0,
          "MisGeometry: element spacing must be positive");
  require(std::isfinite(wavelength) && wavelength > 0.0,
          "MisGeometry: wavelength must be positive");
}

double MisGeometry::wavenumber() const {
  return 2.0 * std::numbers::pi / wavelength_;
}

CVec upa_response(int rows, int cols, double element_spacing, double wavelength,
                  const Direction& dir) {
  require(rows >= 1 && cols >= 1, "upa_response: empty array");
  require(std::isfinite(element_spacing) && element_spacing > 0.0,
          "upa_response: element spacing must be positive");
  require(std::isfinite(wavelength) && wavelength > 0.0,
          "upa_response: wavelength must be positive");
  require(std::isfinite(dir.azimuth) && std::isfinite(dir.elevation),
          "upa_response: direction angles must be finite");

  const double k = 2.0 * std::numbers::pi / wavelength;
  const double along_rows = k * element_spacing * std::cos(dir.azimuth) *
                            std::sin(dir.elevation);
  const double along_cols = k * element_spacing * std::sin(dir.azimuth) *
                            std::sin(dir.elevation);

  CVec a(static_cast<Eigen::Index>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double phase = along_rows * r + along_cols * c;
      a[static_cast<Eigen::Index>(r) * cols + c] =
          Complex(std::cos(phase), std::sin(phase));
    }
  }
  return a;
}

int pattern_index(int row_offset, int col_offset, const MisGeometry& geom) {
  require(row_offset >= 1 && row_offset <= geom.shift_rows(),
          "pattern_index: row offset out of range");
  require(col_offset >= 1 && col_offset <= geom.shift_cols(),
          "pattern_index: column offset out of range");
  return (row_offset - 1) * geom.shift_cols() + col_offset;
}

std::pair<int, int> pattern_offsets(int index, const MisGeometry& geom) {
  require(index >= 1 && index <= geom.pattern_count(),
          "pattern_offsets: pattern label out of range");
  const int row_offset = (index - 1) / geom.shift_cols() + 1;
  const int col_offset = (index - 1) % geom.shift_cols() + 1;
  return {row_offset, col_offset};
}

OverlapPattern overlap_pattern(const MisGeometry& geom, int index) {
  const auto [row_offset, col_offset] = pattern_offsets(index, geom);

  OverlapPattern p;
  p.index = index;
  p.row_offset = row_offset;
  p.col_offset = col_offset;
  p.ms1_index.resize(geom.ms2_size());
  p.padded.assign(geom.ms1_size(), 1);

  for (int nr = 0; nr < geom.rows_ms2(); ++nr) {
    for (int nc = 0; nc < geom.cols_ms2(); ++nc) {
      const int mr = nr + row_offset - 1;
      const int mc = nc + col_offset - 1;
      const int m = mr * geom.cols_ms1() + mc;
      p.ms1_index[nr * geom.cols_ms2() + nc] = m;
      p.padded[m] = 0;
    }
  }
  return p;
}

std::vector<OverlapPattern> all_patterns(const MisGeometry& geom) {
  std::vector<OverlapPattern> patterns;
  patterns.reserve(geom.pattern_count());
  for (int u = 1; u <= geom.pattern_count(); ++u) {
    patterns.push_back(overlap_pattern(geom, u));
  }
  return patterns;
}

CVec equivalent_theta(const OverlapPattern& pattern, const CVec& theta) {
  require(theta.size() == static_cast<Eigen::Index>(pattern.ms1_index.size()),
          "equivalent_theta: theta size does not match the pattern");
  CVec lifted = CVec::Ones(static_cast<Eigen::Index>(pattern.padded.size()));
  for (size_t n = 0; n < pattern.ms1_index.size(); ++n) {
    lifted[pattern.ms1_index[n]] = theta[static_cast<Eigen::Index>(n)];
  }
  return lifted;
}

CVec effective_v(const CVec& phi, const CVec& theta,
                 const OverlapPattern& pattern) {
  require(phi.size() == static_cast<Eigen::Index>(pattern.padded.size()),
          "effective_v: phi size does not match the pattern");
  return equivalent_theta(pattern, theta).cwiseProduct(phi);
}

CVec coupling_vector(const MisGeometry& geom, const Direction& incident,
                     const Direction& target) {
  const CVec towards_source = upa_response(geom.rows_ms1(), geom.cols_ms1(),
                                           geom.element_spacing(),
                                           geom.wavelength(), incident);
  const CVec towards_target = upa_response(geom.rows_ms1(), geom.cols_ms1(),
                                           geom.element_spacing(),
                                           geom.wavelength(), target);
  return towards_source.cwiseProduct(towards_target);
}

}  // namespace mis
