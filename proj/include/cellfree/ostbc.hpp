#pragma once

#include <complex>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cellfree/random.hpp"

namespace cellfree {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Symbols carried by one code block and their common energy E[|s|^2].
struct SymbolBlock {
  CVector symbols;
  double energy = 1.0;
};

/// Linear space-time block code given by its dispersion matrices: the
/// block_len x n_groups code matrix is X = sum_n A_n Re(s_n) + i B_n Im(s_n).
/// Rows are channel uses, columns are AP groups.
class OstbcCode {
 public:
  OstbcCode(std::string name, std::vector<CMatrix> a, std::vector<CMatrix> b);

  /// All APs send the same symbol (N_g = N_s = block_len = 1).
  static OstbcCode single();
  /// [[s1, s2], [-s2*, s1*]].
  static OstbcCode alamouti();
  /// Rate-3/4 code for four groups:
  /// [[s1, s2, s3, 0], [-s2*, s1*, 0, s3], [-s3*, 0, s1*, -s2], [0, -s3*, s2*, s1]].
  static OstbcCode rate_three_quarter();
  /// "single", "alamouti" or "rate34".
  static OstbcCode from_name(std::string_view name);

  const std::string& name() const noexcept { return name_; }
  int n_groups() const noexcept { return n_groups_; }
  int n_symbols() const noexcept { return static_cast<int>(a_.size()); }
  int block_len() const noexcept { return block_len_; }
  /// Symbols per channel use, N_s / block_len.
  double rate() const noexcept { return static_cast<double>(n_symbols()) / block_len_; }

  const CMatrix& a(int n) const { return a_.at(static_cast<std::size_t>(n)); }
  const CMatrix& b(int n) const { return b_.at(static_cast<std::size_t>(n)); }
  const std::vector<CMatrix>& a_matrices() const noexcept { return a_; }
  const std::vector<CMatrix>& b_matrices() const noexcept { return b_; }

  CMatrix build(const CVector& symbols) const;

 private:
  std::string name_;
  std::vector<CMatrix> a_;
  std::vector<CMatrix> b_;
  int n_groups_ = 0;
  int block_len_ = 0;
};

CMatrix build_code(const OstbcCode& code, const SymbolBlock& block);

/// Largest entry of |X^H X - (sum |s_n|^2) I|.
double orthogonality_defect(const OstbcCode& code, const CVector& symbols);

/// Maps a symbol vector to a code matrix.
using CodeGenerator = std::function<CMatrix(const CVector&)>;

struct DispersionMatrices {
  std::vector<CMatrix> a;
  std::vector<CMatrix> b;
};

/// Extracts {A_n, B_n} by probing the generator with unit real and imaginary
/// parts, then checks superposition on a few fixed pseudo-random inputs and
/// throws NotLinear if it fails.
DispersionMatrices dispersion_matrices(const CodeGenerator& generator, int n_symbols);

/// n circularly-symmetric Gaussian symbols with E[|s|^2] = energy.
CVector draw_symbols(int n, double energy, RandomStream& rng);

struct ProjectionCheck {
  bool passed = false;
  /// Largest |estimate - target| / standard error over all entries.
  double max_z = 0.0;
  std::size_t n_draws = 0;
};

/// Monte-Carlo check of E[X Re(s_n)] = (E_s/2) A_n and
/// E[X Im(s_n)] = i (E_s/2) B_n for independent circular symbols. Passes when
/// every entry lies within z_limit standard errors.
ProjectionCheck expected_projection_identity_check(const OstbcCode& code, RandomStream& rng,
                                                   std::size_t n_draws = 100000, double energy = 1.0,
                                                   double z_limit = 5.0);

}  // namespace cellfree
