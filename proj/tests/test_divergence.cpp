#include <cmath>

#include <doctest.h>

#include "support.hpp"
#include "sympdiv/divergence.hpp"
#include "sympdiv/errors.hpp"

using namespace sympdiv;
using testing::for_all;
using testing::Gen;

namespace {

const Potential kHalf1 = half_squared_norm(1);
const Potential kHalf2 = half_squared_norm(2);
const Potential kXlogx = separable_potential({ScalarGenerator::xlogx()});
const SymplecticForm kOmega0 = SymplecticForm::canonical(1);

PhasePoint pt(double x, double y) { return PhasePoint(Vector{x, y}); }

}  // namespace

TEST_CASE("bregman") {
  CHECK(bregman(kHalf1, Vector{3}, Vector{1}).value == 2.0);
  CHECK(bregman(kHalf1, Vector{3}, Vector{3}).value == 0.0);
  CHECK(bregman(kXlogx, Vector{std::exp(1.0)}, Vector{1}).value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(bregman(kXlogx, Vector{-1}, Vector{1}), DomainError);
}

TEST_CASE("bregman with an inner product is independent of it") {
  for_all(50, 31, [](Gen& g) {
    const Potential f = quadratic_potential(g.spd(3), g.vec(3, -1, 1));
    const Vector a = g.vec(3, -2, 2), b = g.vec(3, -2, 2);
    CHECK(std::abs(bregman(f, a, b, g.spd(3)).value - bregman(f, a, b).value) <= 1e-10);
  });
}

TEST_CASE("dual bregman") {
  CHECK(dual_bregman(kHalf1, Vector{3}, Vector{1}).value == doctest::Approx(2.0));
  CHECK(dual_bregman(kHalf1, Vector{1}, Vector{1}).value == 0.0);
  CHECK(dual_bregman(kXlogx, Vector{1}, Vector{2}).value == doctest::Approx(1.0).epsilon(1e-12));
  // B_F(x1:x2) = B_F*(∇F(x2):∇F(x1)).
  for_all(50, 32, [](Gen& g) {
    const Potential f = entropy_potential(2);
    const Vector a = g.vec(2, 0.1, 3), b = g.vec(2, 0.1, 3);
    CHECK(std::abs(bregman(f, a, b).value - dual_bregman(f, f.gradient(b), f.gradient(a)).value) <= 1e-10);
  });
}

TEST_CASE("symplectic fenchel-young") {
  CHECK(symplectic_fenchel_young(kHalf2, kOmega0, pt(1, 0), pt(0, -1)).value == doctest::Approx(0.0));
  CHECK(symplectic_fenchel_young(kHalf2, kOmega0, pt(1, 0), pt(0, 0)).value == 0.5);
  for_all(100, 33, [](Gen& g) {
    const Potential f = quadratic_potential(g.spd(2), g.vec(2, -1, 1));
    const PhasePoint z = g.point(1, -2, 2);
    CHECK(symplectic_fenchel_young(f, kOmega0, z, symplectic_gradient(f, kOmega0, z)).value <= 1e-7);
  });
  const Potential p = perspective_potential(ScalarGenerator::square(2.0));
  CHECK_THROWS_AS(symplectic_fenchel_young(p, kOmega0, pt(1, 0), pt(5, 0)), DivergenceError);
}

TEST_CASE("symplectic bregman") {
  CHECK(symplectic_bregman(kHalf2, kOmega0, pt(1, 0), pt(0, 0)).value == 0.5);
  CHECK(symplectic_bregman(kHalf2, kOmega0, pt(1, 2), pt(1, 2)).value == 0.0);
  const DivergenceReport sep = symplectic_bregman(kHalf2, kOmega0, pt(2, 1), pt(1, 1));
  CHECK(sep.value == doctest::Approx(bregman(kHalf1, Vector{2}, Vector{1}).value + bregman(kHalf1, Vector{1}, Vector{1}).value));
  CHECK(sep.value == doctest::Approx(0.5));
}

TEST_CASE("the two sign arrangements agree and match Fenchel-Young at the gradient") {
  for_all(200, 34, [](Gen& g) {
    const std::size_t n = 1 + g.index(3);
    const SymplecticForm form = form_from_pairing(DualSystem(g.invertible(n)));
    const Potential f = entropy_potential(2 * n);
    const PhasePoint z1 = g.point(n, 0.1, 3), z2 = g.point(n, 0.1, 3);
    const DivergenceReport b = symplectic_bregman(f, form, z1, z2);
    CHECK(b.residual <= 1e-12);
    const DivergenceReport y = symplectic_fenchel_young(f, form, z1, symplectic_gradient(f, form, z2));
    CHECK(std::abs(b.value - y.value) <= 1e-7);
    CHECK(b.value >= -1e-8);
  });
}

TEST_CASE("report parts reconstruct the value") {
  const DivergenceReport r = symplectic_bregman(entropy_potential(2), kOmega0, pt(0.5, 2), pt(1, 1));
  CHECK(std::abs(r.parts.first + r.parts.second - r.parts.coupling - r.raw) <= 1e-10);
  CHECK(r.value == r.raw);
  CHECK_FALSE(r.clamped);
}

TEST_CASE("small negative values clamp, large ones raise") {
  // A concave generator makes the Bregman divergence negative.
  const Potential concave(PotentialDefinition{
      "concave", 1, [](std::span<const double> z) { return -z[0] * z[0]; }, {},
      [](std::span<const double> z) { return Vector{-2 * z[0]}; }, {}, {}});
  CHECK_THROWS_AS(bregman(concave, Vector{1}, Vector{0}), ConvexityViolation);
  const DivergenceReport tiny = bregman(concave, Vector{1e-5}, Vector{0});
  CHECK(tiny.clamped);
  CHECK(tiny.value == 0.0);
  CHECK(tiny.raw < 0.0);
}

TEST_CASE("composite bregman") {
  const DivergenceReport c = bregman_composite(kHalf2, pt(1, 0), pt(0, 0));
  CHECK(c.value == 0.5);
  CHECK(c.value == symplectic_bregman(kHalf2, kOmega0, pt(1, 0), pt(0, 0)).value);
  CHECK(bregman_composite(kHalf2, pt(1, 3), pt(1, 3)).value == 0.0);
  for_all(100, 35, [](Gen& g) {
    const std::size_t n = std::vector<std::size_t>{1, 2, 5}[g.index(3)];
    const Matrix q = g.spd(n);
    const Potential f = quadratic_potential(g.spd(2 * n), g.vec(2 * n, -1, 1));
    const PhasePoint z1 = g.point(n, -2, 2), z2 = g.point(n, -2, 2);
    CHECK(std::abs(bregman_composite(f, z1, z2, q).value -
                   symplectic_bregman(f, form_from_inner_product(q), z1, z2).value) <= 1e-8);
  });
}

TEST_CASE("separable generators split") {
  for_all(200, 36, [](Gen& g) {
    const std::size_t n = 1 + g.index(3);
    const Potential f1 = entropy_potential(n), f2 = log_sum_exp_potential(n);
    const Potential f = direct_sum(f1, f2);
    const PhasePoint z1(g.vec(n, 0.1, 2), g.vec(n, -2, 2)), z2(g.vec(n, 0.1, 2), g.vec(n, -2, 2));
    const double split = bregman(f1, z1.x(), z2.x()).value + bregman(f2, z1.y(), z2.y()).value;
    CHECK(std::abs(symplectic_bregman(f, SymplecticForm::canonical(n), z1, z2).value - split) <= 1e-8);
  });
}

TEST_CASE("rewritten canonical inequality F(x,y) + F*(-y', x') >= <x',y> - <x,y'>") {
  for_all(300, 37, [](Gen& g) {
    const Potential f = quadratic_potential(g.spd(2), g.vec(2, -1, 1), g.real(-1, 1));
    const double x = g.real(-2, 2), y = g.real(-2, 2), xp = g.real(-2, 2), yp = g.real(-2, 2);
    const double lhs = f.eval_finite(Vector{x, y}) + f.closed_conjugate()->value(Vector{-yp, xp}).value();
    CHECK(lhs >= xp * y - x * yp - 1e-8);
  });
}

TEST_CASE("asymmetry witness for the entropy generator") {
  const Potential f = entropy_potential(1);
  const double forward = bregman(f, Vector{1}, Vector{2}).value;
  const double backward = bregman(f, Vector{2}, Vector{1}).value;
  // 1 log(1/2) − 1 + 2 versus 2 log 2 − 2 + 1.
  CHECK(forward == doctest::Approx(1.0 - std::log(2.0)));
  CHECK(backward == doctest::Approx(2.0 * std::log(2.0) - 1.0));
  CHECK(std::abs(forward - backward) > 0.05);
}

TEST_CASE("flat fenchel-young") {
  CHECK(fenchel_young_flat(kHalf1, Vector{1}, Vector{1}).value == 0.0);
  CHECK(fenchel_young_flat(kHalf1, Vector{1}, Vector{0}).value == 0.5);
  for_all(50, 38, [](Gen& g) {
    const Potential f = entropy_potential(2);
    const Vector theta = g.vec(2, 0.1, 3);
    CHECK(fenchel_young_flat(f, theta, f.gradient(theta)).value <= 1e-12);
    // Y_F(θ:η') = B_F(θ : ∇F*(η')).
    const Vector eta = g.vec(2, -1, 1);
    const Vector back = f.closed_conjugate()->argmax(eta);
    CHECK(std::abs(fenchel_young_flat(f, theta, eta).value - bregman(f, theta, back).value) <= 1e-10);
  });
}

TEST_CASE("reparameterization") {
  const Potential fbar = reparameterize_generator(kHalf1, Matrix::from_rows({{2}}), {0}, {0}, 0);
  CHECK(bregman(kHalf1, Vector{2}, Vector{4}).value == 2.0);
  CHECK(bregman(fbar, Vector{1}, Vector{2}).value == 2.0);
  const Potential shifted = reparameterize_generator(kHalf2, Matrix::identity(2), {0, 0}, {0, 0}, 5);
  CHECK(bregman(shifted, Vector{1, 2}, Vector{0, 1}).value == bregman(kHalf2, Vector{1, 2}, Vector{0, 1}).value);
  CHECK_THROWS_AS(reparameterize_generator(kHalf2, Matrix(2, 2), {0, 0}, {0, 0}, 0), DegeneracyError);

  for_all(100, 39, [](Gen& g) {
    const Potential f = quadratic_potential(g.spd(2), g.vec(2, -1, 1));
    const Matrix a = g.invertible(2);
    const Vector b = g.vec(2, -1, 1);
    const Potential fb = reparameterize_generator(f, a, b, g.vec(2, -1, 1), g.real(-3, 3));
    const Vector t1 = g.vec(2, -2, 2), t2 = g.vec(2, -2, 2);
    CHECK(std::abs(bregman(f, t1, t2).value -
                   bregman(fb, reparameterized_point(a, b, t1), reparameterized_point(a, b, t2)).value) <= 1e-8);
  });
}

TEST_CASE("identity and non-negativity across built-ins") {
  const std::vector<Potential> potentials{half_squared_norm(2), entropy_potential(2), log_sum_exp_potential(2),
                                          perspective_potential(ScalarGenerator::square(2.0)),
                                          separable_potential({ScalarGenerator::exp(), ScalarGenerator::xlogx()})};
  const std::vector<SymplecticForm> forms{kOmega0, form_from_pairing(DualSystem(Matrix::from_rows({{-1.5}})))};
  for (const Potential& f : potentials) {
    CAPTURE(f.name());
    for (const SymplecticForm& form : forms) {
      for_all(200, 40, [&](Gen& g) {
        const PhasePoint z1 = g.point(1, 0.1, 3), z2 = g.point(1, 0.1, 3);
        CHECK(symplectic_bregman(f, form, z1, z2).raw >= -1e-8);
        CHECK(bregman(f, z1.coords(), z2.coords()).raw >= -1e-8);
        CHECK(symplectic_bregman(f, form, z1, z1).value <= 1e-9);
      });
    }
  }
}
