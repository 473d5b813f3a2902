#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace mis {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

/// Propagation direction relative to the array: azimuth in [-pi, pi], elevation
/// measured from the surface normal in [0, pi/2] (0 = boresight). Radians.
struct Direction {
  double azimuth = 0.0;
  double elevation = 0.0;
};

/// Two stacked reflecting panels: a fixed outer panel (MS1, rows_ms1 x cols_ms1
/// elements) and a movable inner panel (MS2, rows_ms2 x cols_ms2) that slides
/// across it on the element lattice. Every admissible placement of MS2 is a
/// "pattern"; there are shift_rows() * shift_cols() of them.
class MisGeometry {
 public:
  MisGeometry(int rows_ms1, int cols_ms1, int rows_ms2, int cols_ms2,
              double element_spacing, double wavelength);

  int rows_ms1() const { return rows_ms1_; }
  int cols_ms1() const { return cols_ms1_; }
  int rows_ms2() const { return rows_ms2_; }
  int cols_ms2() const { return cols_ms2_; }

  /// Total element counts M and N of the two panels.
  int ms1_size() const { return rows_ms1_ * cols_ms1_; }
  int ms2_size() const { return rows_ms2_ * cols_ms2_; }

  /// Number of admissible MS2 placements along rows / columns, and in total.
  int shift_rows() const { return rows_ms1_ - rows_ms2_ + 1; }
  int shift_cols() const { return cols_ms1_ - cols_ms2_ + 1; }
  int pattern_count() const { return shift_rows() * shift_cols(); }

  double element_spacing() const { return element_spacing_; }
  double wavelength() const { return wavelength_; }
  double wavenumber() const;  // 2*pi / wavelength

 private:
  int rows_ms1_, cols_ms1_, rows_ms2_, cols_ms2_;
  double element_spacing_, wavelength_;
};

/// One placement of MS2 on the MS1 lattice. Element indices are row-major and
/// zero-based; the pattern label `index` and the offsets are one-based.
struct OverlapPattern {
  int index = 0;       // pattern label u in 1..U
  int row_offset = 0;  // u_r in 1..shift_rows()
  int col_offset = 0;  // u_c in 1..shift_cols()

  /// For each MS2 element n (row-major), the MS1 element it covers.
  std::vector<int> ms1_index;
  /// Per MS1 element: 1 if it is left uncovered under this placement.
  std::vector<std::uint8_t> padded;
};

/// Response of a uniform planar array towards `dir`. Element (r, c), r and c
/// counted from zero, contributes exp(j * k * spacing * (r*cos(az) + c*sin(az))
/// * sin(el)); the corner element is the phase reference (value 1).
CVec upa_response(int rows, int cols, double element_spacing, double wavelength,
                  const Direction& dir);

/// Row-major pattern label for offsets (u_r, u_c): u = (u_r - 1)*U_c + u_c.
int pattern_index(int row_offset, int col_offset, const MisGeometry& geom);

/// Inverse of pattern_index: label u -> (u_r, u_c).
std::pair<int, int> pattern_offsets(int index, const MisGeometry& geom);

/// Build the element correspondence for pattern `index`. MS2 element (n_r, n_c)
/// covers MS1 element (n_r + u_r - 1, n_c + u_c - 1).
OverlapPattern overlap_pattern(const MisGeometry& geom, int index);

/// All patterns in label order (1..U).
std::vector<OverlapPattern> all_patterns(const MisGeometry& geom);

/// Lift the MS2 phase vector onto the MS1 grid: covered elements take the MS2
/// phase, uncovered (padded) elements pass through with unit coefficient.
CVec equivalent_theta(const OverlapPattern& pattern, const CVec& theta);

/// Combined per-element coefficient of the stack: (lifted theta) .* phi.
CVec effective_v(const CVec& phi, const CVec& theta,
                 const OverlapPattern& pattern);

/// Two-hop coupling vector of a scatterer seen through the surface: the
/// element-wise product of the response towards the illuminating source and
/// the response towards the scatterer. Unit-modulus entries.
CVec coupling_vector(const MisGeometry& geom, const Direction& incident,
                     const Direction& target);

}  // namespace mis
