#include "cellfree/ostbc.hpp"

#include <cmath>

#include "cellfree/error.hpp"
#include "cellfree/stats.hpp"

namespace cellfree {

namespace {

constexpr Complex kI{0.0, 1.0};

CMatrix alamouti_matrix(const CVector& s) {
  CMatrix x(2, 2);
  x << s(0), s(1), -std::conj(s(1)), std::conj(s(0));
  return x;
}

CMatrix rate34_matrix(const CVector& s) {
  const Complex z{0.0, 0.0};
  CMatrix x(4, 4);
  x << s(0), s(1), s(2), z,
      -std::conj(s(1)), std::conj(s(0)), z, s(2),
      -std::conj(s(2)), z, std::conj(s(0)), -s(1),
      z, -std::conj(s(2)), std::conj(s(1)), s(0);
  return x;
}

}  // namespace

OstbcCode::OstbcCode(std::string name, std::vector<CMatrix> a, std::vector<CMatrix> b)
    : name_(std::move(name)), a_(std::move(a)), b_(std::move(b)) {
  if (a_.empty() || a_.size() != b_.size())
    throw Error(ErrorCode::Dimension, "code needs matching, non-empty A and B lists");
  block_len_ = static_cast<int>(a_.front().rows());
  n_groups_ = static_cast<int>(a_.front().cols());
  for (std::size_t n = 0; n < a_.size(); ++n) {
    if (a_[n].rows() != block_len_ || a_[n].cols() != n_groups_ || b_[n].rows() != block_len_ ||
        b_[n].cols() != n_groups_)
      throw Error(ErrorCode::Dimension, "dispersion matrices must share one shape");
  }
}

OstbcCode OstbcCode::single() {
  const auto d = dispersion_matrices([](const CVector& s) { return CMatrix::Constant(1, 1, s(0)); }, 1);
  return OstbcCode("single", d.a, d.b);
}

OstbcCode OstbcCode::alamouti() {
  const auto d = dispersion_matrices(alamouti_matrix, 2);
  return OstbcCode("alamouti", d.a, d.b);
}

OstbcCode OstbcCode::rate_three_quarter() {
  const auto d = dispersion_matrices(rate34_matrix, 3);
  return OstbcCode("rate34", d.a, d.b);
}

OstbcCode OstbcCode::from_name(std::string_view name) {
  if (name == "single") return single();
  if (name == "alamouti") return alamouti();
  if (name == "rate34") return rate_three_quarter();
  throw Error(ErrorCode::InvalidParameter, "unknown code '" + std::string(name) + "'");
}

CMatrix OstbcCode::build(const CVector& symbols) const {
  if (symbols.size() != n_symbols())
    throw Error(ErrorCode::Dimension, "code expects " + std::to_string(n_symbols()) + " symbols");
  CMatrix x = CMatrix::Zero(block_len_, n_groups_);
  for (int n = 0; n < n_symbols(); ++n) {
    const auto idx = static_cast<std::size_t>(n);
    x += a_[idx] * symbols(n).real() + kI * b_[idx] * symbols(n).imag();
  }
  return x;
}

CMatrix build_code(const OstbcCode& code, const SymbolBlock& block) { return code.build(block.symbols); }

double orthogonality_defect(const OstbcCode& code, const CVector& symbols) {
  const CMatrix x = code.build(symbols);
  const CMatrix gram = x.adjoint() * x;
  const double energy = symbols.squaredNorm();
  const CMatrix target = energy * CMatrix::Identity(code.n_groups(), code.n_groups());
  return (gram - target).cwiseAbs().maxCoeff();
}

DispersionMatrices dispersion_matrices(const CodeGenerator& generator, int n_symbols) {
  if (n_symbols < 1) throw Error(ErrorCode::InvalidParameter, "a code carries at least one symbol");
  DispersionMatrices out;
  const CVector zero = CVector::Zero(n_symbols);
  const CMatrix at_zero = generator(zero);
  if (at_zero.cwiseAbs().maxCoeff() > 1e-12) throw Error(ErrorCode::NotLinear, "generator maps zero to non-zero");

  for (int n = 0; n < n_symbols; ++n) {
    CVector e = zero;
    e(n) = 1.0;
    out.a.push_back(generator(e));
    e(n) = kI;
    out.b.push_back(-kI * generator(e));
  }

  // Superposition check on fixed probes; also catches generators whose
  // output depends on symbols beyond the probed basis (e.g. |s|^2 terms).
  RandomStream rng(0x6c696e6561ULL);
  for (int trial = 0; trial < 8; ++trial) {
    const CVector s = draw_symbols(n_symbols, 1.0, rng);
    const CVector t = draw_symbols(n_symbols, 1.0, rng);
    const double alpha = rng.uniform(-2.0, 2.0);
    const CMatrix gs = generator(s);
    const CMatrix gt = generator(t);
    const CMatrix gsum = generator(s + alpha * t);
    const double scale = 1.0 + gs.cwiseAbs().maxCoeff() + gt.cwiseAbs().maxCoeff();
    if ((gsum - gs - alpha * gt).cwiseAbs().maxCoeff() > 1e-10 * scale)
      throw Error(ErrorCode::NotLinear, "generator fails the superposition check");
    CMatrix rebuilt = CMatrix::Zero(gs.rows(), gs.cols());
    for (int n = 0; n < n_symbols; ++n) {
      const auto idx = static_cast<std::size_t>(n);
      rebuilt += out.a[idx] * s(n).real() + kI * out.b[idx] * s(n).imag();
    }
    if ((rebuilt - gs).cwiseAbs().maxCoeff() > 1e-10 * scale)
      throw Error(ErrorCode::NotLinear, "generator is not real-linear in the symbol parts");
  }
  return out;
}

CVector draw_symbols(int n, double energy, RandomStream& rng) {
  CVector s(n);
  for (int i = 0; i < n; ++i) s(i) = rng.complex_normal(energy);
  return s;
}

ProjectionCheck expected_projection_identity_check(const OstbcCode& code, RandomStream& rng, std::size_t n_draws,
                                                   double energy, double z_limit) {
  const int ns = code.n_symbols();
  const int rows = code.block_len();
  const int cols = code.n_groups();
  const std::size_t entries = static_cast<std::size_t>(rows * cols);
  // For every symbol n: real/imag parts of each entry of X Re(s_n) and X Im(s_n).
  std::vector<stats::Accumulator> acc(static_cast<std::size_t>(ns) * entries * 4);
  for (std::size_t draw = 0; draw < n_draws; ++draw) {
    const CVector s = draw_symbols(ns, energy, rng);
    const CMatrix x = code.build(s);
    for (int n = 0; n < ns; ++n) {
      const double re = s(n).real();
      const double im = s(n).imag();
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          const std::size_t base = ((static_cast<std::size_t>(n) * entries) + static_cast<std::size_t>(r * cols + c)) * 4;
          acc[base + 0].add((x(r, c) * re).real());
          acc[base + 1].add((x(r, c) * re).imag());
          acc[base + 2].add((x(r, c) * im).real());
          acc[base + 3].add((x(r, c) * im).imag());
        }
      }
    }
  }

  ProjectionCheck out;
  out.n_draws = n_draws;
  out.passed = true;
  for (int n = 0; n < ns; ++n) {
    const CMatrix target_re = 0.5 * energy * code.a(n);
    const CMatrix target_im = kI * 0.5 * energy * code.b(n);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const std::size_t base = ((static_cast<std::size_t>(n) * entries) + static_cast<std::size_t>(r * cols + c)) * 4;
        const double targets[4] = {target_re(r, c).real(), target_re(r, c).imag(), target_im(r, c).real(),
                                   target_im(r, c).imag()};
        for (int k = 0; k < 4; ++k) {
          const auto& a = acc[base + static_cast<std::size_t>(k)];
          const double diff = std::abs(a.mean() - targets[k]);
          const double se = a.std_error();
          if (se == 0.0) {
            if (diff > 1e-12) out.passed = false;
            continue;
          }
          out.max_z = std::max(out.max_z, diff / se);
        }
      }
    }
  }
  if (out.max_z > z_limit) out.passed = false;
  return out;
}

}  // namespace cellfree
