#include "sgwalk/green.hpp"

#include <doctest.h>

#include <Eigen/Dense>

using namespace sg;

namespace {

// Dense oracle: G = (I - P)^-1 from the assembled transition matrix.
Eigen::MatrixXd dense_green(const TruncatedKernel& k) {
  const Eigen::MatrixXd p = Eigen::MatrixXd(k.transition());
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(p.rows(), p.cols());
  return (id - p).partialPivLu().inverse();
}

}  // namespace

TEST_CASE("transition rows lose mass exactly at the truncation level") {
  const TruncatedKernel k(ConductanceParams{}, 5);
  const Eigen::VectorXd rows = k.transition() * Eigen::VectorXd::Ones(k.pi().size());
  for (NodeId u = 0; u < k.graph().node_count(); ++u) {
    if (k.graph().level(u) < 5) {
      CHECK(rows[u] == doctest::Approx(1.0).epsilon(1e-14));
    } else {
      CHECK(rows[u] < 1.0);
      CHECK(1.0 - rows[u] == doctest::Approx(k.exit_conductance() / k.pi()[u]));
    }
  }
}

TEST_CASE("conjugate gradients agree with a dense solve") {
  ConductanceParams p;
  p.c1 = 1.3;
  p.c2 = 0.6;
  const TruncatedKernel k(p, 4);
  const Eigen::MatrixXd dense = dense_green(k);
  for (const char* text : {"", "0", "12", "2101"}) {
    const Word y = Word::parse(text);
    const Eigen::VectorXd col = k.green_column(y);
    CHECK((col - dense.col(k.graph().id(y))).lpNorm<Eigen::Infinity>() < 1e-10);
    const Eigen::VectorXd row = k.green_row(y);
    CHECK((row - dense.row(k.graph().id(y)).transpose()).lpNorm<Eigen::Infinity>() < 1e-10);
  }
}

TEST_CASE("G_N(o,o) and F_N match the killed level chain") {
  for (double lambda : {0.22, 0.25, 0.3}) {
    for (double c2 : {1.0, 3.0}) {
      ConductanceParams p;
      p.lambda = lambda;
      p.gamma = lambda / 2;
      p.c2 = c2;
      double previous = 0.0;
      for (int n = 3; n <= 7; ++n) {
        const TruncatedKernel k(p, n);
        const double g = k.green(Word{}, Word{});
        CHECK(g == doctest::Approx(green_root_exact(lambda, n)).epsilon(1e-10));
        CHECK(g > previous);
        CHECK(g < 1.0 / (1.0 - lambda));
        previous = g;
        for (const char* text : {"1", "20", "012"})
          CHECK(first_passage(k, Word::parse(text)) ==
                doctest::Approx(first_passage_exact(lambda, static_cast<int>(std::strlen(text)), n)).epsilon(1e-9));
      }
    }
  }
  const TruncatedKernel k(ConductanceParams{}, 4);
  CHECK(first_passage(k, Word{}) == doctest::Approx(1.0));
}

TEST_CASE("reversibility and row/column agreement") {
  ConductanceParams p;
  p.c2 = 2.0;
  const TruncatedKernel k(p, 6);
  const Word x = Word::parse("0121"), y = Word::parse("210");
  const double gxy = k.green(x, y);
  const double gyx = k.green(y, x);
  const double pix = k.pi()[k.graph().id(x)];
  const double piy = k.pi()[k.graph().id(y)];
  CHECK(pix * gxy == doctest::Approx(piy * gyx).epsilon(1e-10));
  CHECK(k.green_row(x)[k.graph().id(y)] == doctest::Approx(gxy).epsilon(1e-10));
}

TEST_CASE("green estimate reports deeper solves and a limit") {
  const GreenEstimate e = green(ConductanceParams{}, 5, Word{}, Word{});
  CHECK(e.at_depth < e.at_depth_1);
  CHECK(e.at_depth_1 < e.at_depth_2);
  CHECK(std::abs(e.extrapolated - 4.0 / 3.0) < std::abs(e.at_depth_2 - 4.0 / 3.0));
  CHECK(aitken_limit(1.0, 1.5, 1.75) == doctest::Approx(2.0));
  CHECK_THROWS_AS(green(ConductanceParams{}, 3, Word::parse("0000"), Word{}), std::invalid_argument);
}

TEST_CASE("harmonic measure") {
  const TruncatedKernel k(ConductanceParams{}, 6);
  const auto root = harmonic_measure(k, Word{}, 1);
  for (double m : root) CHECK(m == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  const auto off = harmonic_measure(k, Word::parse("0"), 1);
  CHECK(off[0] > 1.0 / 3.0);
  CHECK(off[0] + off[1] + off[2] == doctest::Approx(1.0).epsilon(1e-10));
  // The discrete density K(x,w) = 3^L mass(w) integrates to one against 3^-L.
  const auto level3 = harmonic_measure(k, Word::parse("12"), 3);
  double integral = 0.0;
  for (double m : level3) {
    const double density = 27.0 * m;
    CHECK(density > 0.0);
    integral += density / 27.0;
  }
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(harmonic_measure(k, Word{}, 4), std::invalid_argument);
}

TEST_CASE("martin kernel") {
  const TruncatedKernel k(ConductanceParams{}, 8);
  const Word xi = Word::parse("0120120");
  CHECK(martin_kernel(k, Word{}, xi) == doctest::Approx(1.0));
  // Along the geodesic the prediction is 3^|x|.
  std::vector<double> ratios;
  for (int n = 0; n <= 4; ++n) ratios.push_back(martin_kernel(k, xi.prefix(n), xi) / std::pow(3.0, n));
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  CHECK(*hi / *lo < 10.0);
  CHECK_THROWS_AS(martin_kernel(k, Word{}, Word::parse("012")), std::invalid_argument);
  CHECK_THROWS_AS(martin_kernel(k, Word::parse("01201"), xi), std::invalid_argument);

  const std::vector<Word> xs = {Word{}, Word::parse("0"), Word::parse("1"), Word::parse("22"), Word::parse("01")};
  const auto xis = sample_boundary_proxies(8, 6, 3);
  const MartinBand band = martin_band(k, xs, xis, 2);
  CHECK(band.samples.size() == 30);
  CHECK(band.min_ratio > 0.0);
  CHECK(band.band() < 100.0);
  for (const auto& s : band.samples)
    if (s.x.is_root()) CHECK(s.measured == doctest::Approx(1.0));
}
