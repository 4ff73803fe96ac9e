#include <doctest.h>

#include "cellfree/error.hpp"
#include "cellfree/ostbc.hpp"

using namespace cellfree;

namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("code dimensions and rates") {
  const auto s = OstbcCode::single();
  const auto a = OstbcCode::alamouti();
  const auto r = OstbcCode::rate_three_quarter();
  CHECK(s.n_groups() == 1);
  CHECK(s.rate() == 1.0);
  CHECK(a.n_groups() == 2);
  CHECK(a.n_symbols() == 2);
  CHECK(a.block_len() == 2);
  CHECK(a.rate() == 1.0);
  CHECK(r.n_groups() == 4);
  CHECK(r.n_symbols() == 3);
  CHECK(r.block_len() == 4);
  CHECK(r.rate() == 0.75);
  CHECK(OstbcCode::from_name("rate34").n_groups() == 4);
  CHECK_THROWS_AS(OstbcCode::from_name("golden"), Error);
}

TEST_CASE("single code dispersion matrices are [1]") {
  const auto s = OstbcCode::single();
  CHECK(s.a(0).size() == 1);
  CHECK(s.a(0)(0, 0) == Complex(1, 0));
  CHECK(s.b(0)(0, 0) == Complex(1, 0));
}

TEST_CASE("Alamouti dispersion matrices") {
  const auto a = OstbcCode::alamouti();
  CHECK(max_abs(a.a(0) - mat2(1, 0, 0, 1)) == 0.0);
  CHECK(max_abs(a.a(1) - mat2(0, 1, -1, 0)) == 0.0);
  CHECK(max_abs(a.b(0) - mat2(1, 0, 0, -1)) == 0.0);
  CHECK(max_abs(a.b(1) - mat2(0, 1, 1, 0)) == 0.0);
}

TEST_CASE("Alamouti with s = (1, i)") {
  CVector s(2);
  s << Complex(1, 0), Complex(0, 1);
  const CMatrix x = build_code(OstbcCode::alamouti(), SymbolBlock{s, 1.0});
  CHECK(max_abs(x - mat2(1, Complex(0, 1), Complex(0, 1), 1)) < 1e-15);
  CHECK(max_abs(x.adjoint() * x - 2.0 * CMatrix::Identity(2, 2)) < 1e-15);
}

TEST_CASE("orthogonality over random symbol draws") {
  RandomStream rng(17);
  for (const auto& code : {OstbcCode::alamouti(), OstbcCode::rate_three_quarter(), OstbcCode::single()}) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) worst = std::max(worst, orthogonality_defect(code, draw_symbols(code.n_symbols(), 1.0, rng)));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("symbol count mismatch is a dimension error") {
  CHECK_THROWS_AS(OstbcCode::alamouti().build(CVector::Zero(3)), Error);
}

TEST_CASE("dispersion extraction round-trips the generator") {
  const CodeGenerator rate34 = [](const CVector& s) {
    CMatrix x = CMatrix::Zero(4, 4);
    const Complex s1 = s(0), s2 = s(1), s3 = s(2);
    x << s1, s2, s3, 0.0, -std::conj(s2), std::conj(s1), 0.0, s3, -std::conj(s3), 0.0, std::conj(s1), -s2, 0.0,
        -std::conj(s3), std::conj(s2), s1;
    return x;
  };
  const auto d = dispersion_matrices(rate34, 3);
  const OstbcCode code("probe", d.a, d.b);
  RandomStream rng(2);
  for (int i = 0; i < 100; ++i) {
    const CVector s = draw_symbols(3, 1.0, rng);
    CHECK(max_abs(code.build(s) - rate34(s)) < 1e-12);
  }
}

TEST_CASE("nonlinear generator is rejected") {
  const CodeGenerator squared = [](const CVector& s) {
    CMatrix x(1, 1);
    x(0, 0) = s(0) * s(0);
    return x;
  };
  CHECK_THROWS_AS(dispersion_matrices(squared, 1), Error);
  const CodeGenerator offset = [](const CVector& s) {
    CMatrix x(1, 1);
    x(0, 0) = s(0) + 1.0;
    return x;
  };
  CHECK_THROWS_AS(dispersion_matrices(offset, 1), Error);
}

TEST_CASE("build is linear") {
  RandomStream rng(8);
  const auto code = OstbcCode::rate_three_quarter();
  for (int i = 0; i < 100; ++i) {
    const CVector s = draw_symbols(3, 1.0, rng);
    const CVector t = draw_symbols(3, 1.0, rng);
    CHECK(max_abs(code.build(s + t) - code.build(s) - code.build(t)) < 1e-12);
  }
}

TEST_CASE("expected projection identity") {
  RandomStream rng(21);
  const auto a = expected_projection_identity_check(OstbcCode::alamouti(), rng);
  CHECK(a.passed);
  CHECK(a.n_draws == 100000);
  const auto r = expected_projection_identity_check(OstbcCode::rate_three_quarter(), rng);
  CHECK(r.passed);
}
