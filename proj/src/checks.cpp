#include "sympdiv/checks.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "sympdiv/conjugate.hpp"
#include "sympdiv/divergence.hpp"
#include "sympdiv/errors.hpp"
#include "sympdiv/sben.hpp"
#include "sympdiv/space.hpp"

namespace sympdiv {

namespace {

// Worst observed error against a tolerance.
struct Tally {
  double tol;
  double worst = 0.0;
  std::size_t samples = 0;
  std::size_t failures = 0;

  void add(double err) {
    ++samples;
    if (!(err <= tol)) ++failures;
    if (!(err <= worst)) worst = err;
  }
  void fail() {
    ++samples;
    ++failures;
  }
  bool ok() const { return failures == 0 && samples > 0; }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string describe(const char* label, const Tally& t) {
  return std::string(label) + ": worst " + sci(t.worst) + " (tol " + sci(t.tol) + ", " +
         std::to_string(t.samples) + " samples, " + std::to_string(t.failures) + " failures)";
}

CheckResult result(int id, const char* name, std::initializer_list<std::pair<const char*, const Tally*>> tallies) {
  CheckResult r;
  r.id = id;
  r.name = name;
  r.passed = true;
  std::string detail;
  for (const auto& [label, t] : tallies) {
    r.passed = r.passed && t->ok();
    if (!detail.empty()) detail += "; ";
    detail += describe(label, *t);
  }
  r.detail = detail;
  return r;
}

CounterRng stream(std::uint64_t seed, int id) {
  return CounterRng(seed * 0x100000001B3ULL + static_cast<std::uint64_t>(id) * 0x9E3779B97F4A7C15ULL);
}

PhasePoint random_point(CounterRng& rng, std::size_t n, double lo, double hi) {
  return PhasePoint(rng.uniform_vector(2 * n, lo, hi));
}

Matrix random_invertible(CounterRng& rng, std::size_t n) {
  while (true) {
    Matrix p = rng.uniform_matrix(n, -1.0, 1.0);
    if (!LuDecomposition(p).singular(1e-6)) return p;
  }
}

}  // namespace

// 1. Skew-symmetry, alternating property and bilinearity of every form kind.
CheckResult check_form_axioms(std::uint64_t seed) {
  CounterRng rng = stream(seed, 1);
  Tally skew{1e-9}, alt{1e-9}, bilin{1e-9};
  for (std::size_t n : {1u, 2u, 5u}) {
    const std::vector<SymplecticForm> forms{SymplecticForm::canonical(n),
                                            form_from_pairing(DualSystem(random_invertible(rng, n))),
                                            form_from_inner_product(rng.spd_matrix(n))};
    for (const SymplecticForm& form : forms) {
      for (int i = 0; i < 1000; ++i) {
        const PhasePoint z1 = random_point(rng, n, -1, 1), z1p = random_point(rng, n, -1, 1);
        const PhasePoint z2 = random_point(rng, n, -1, 1), z2p = random_point(rng, n, -1, 1);
        const double a = rng.uniform(-2, 2), ap = rng.uniform(-2, 2);
        const double w12 = form.evaluate(z1, z2);
        skew.add(std::abs(w12 + form.evaluate(z2, z1)));
        alt.add(std::abs(form.evaluate(z1, z1)));
        const PhasePoint comb = a * z1 + ap * z1p;
        bilin.add(std::abs(form.evaluate(comb, z2) - a * w12 - ap * form.evaluate(z1p, z2)));
        const PhasePoint comb2 = a * z2 + ap * z2p;
        bilin.add(std::abs(form.evaluate(z1, comb2) - a * w12 - ap * form.evaluate(z1, z2p)));
      }
    }
  }
  return result(1, "symplectic form axioms", {{"skew", &skew}, {"alternating", &alt}, {"bilinear", &bilin}});
}

// 2. Sp(2n): closure, transpose, closed-form inverse, unit determinant.
CheckResult check_symplectic_group(std::uint64_t seed) {
  Tally closure{1e-8}, transpose{1e-8}, inv_member{1e-8}, inv{1e-8}, det{1e-6};
  std::uint64_t s = seed * 1000003ULL;
  for (std::size_t n : {1u, 2u, 5u}) {
    const Matrix w = omega0(n);
    auto membership = [&w](const Matrix& t) { return max_abs_diff(t.transpose() * w * t, w); };
    for (int i = 0; i < 200; ++i) {
      const SymplecticMatrix t1 = random_symplectic(n, ++s);
      const SymplecticMatrix t2 = random_symplectic(n, ++s);
      closure.add(membership(t1.matrix() * t2.matrix()));
      transpose.add(membership(t1.matrix().transpose()));
      const SymplecticMatrix ti = symplectic_inverse(t1);
      inv_member.add(membership(ti.matrix()));
      inv.add(max_abs_diff(ti.matrix(), inverse(t1.matrix())));
      det.add(std::abs(determinant(t1.matrix()) - 1.0));
    }
  }
  return result(2, "Sp(2n) group suite", {{"closure", &closure},
                                          {"transpose", &transpose},
                                          {"inverse membership", &inv_member},
                                          {"inverse vs LU", &inv},
                                          {"det", &det}});
}

// 3. F(z) + F^{*ω}(z') >= ω(z', z), with equality at z' = ∇^ωF(z).
CheckResult check_fenchel_young_inequality(std::uint64_t seed) {
  CounterRng rng = stream(seed, 3);
  Tally violation{1e-8}, equality{1e-7};
  const std::vector<SymplecticForm> forms{
      SymplecticForm::canonical(1), form_from_pairing(DualSystem(Matrix::from_rows({{1.7}}))),
      form_from_inner_product(Matrix::from_rows({{0.6}}))};
  const Potential quad = quadratic_potential(Matrix::from_rows({{2.0, 0.5}, {0.5, 1.0}}), {0.3, -0.2}, 0.1);
  const Potential ent = entropy_potential(2);
  const Potential persp = perspective_potential(ScalarGenerator::square(2.0));

  struct Case {
    const Potential* f;
    double lo, hi;   // sampling box for z, both coordinates
    double ylo, yhi; // y-range override (perspective allows y < 0)
  };
  const std::vector<Case> cases{{&quad, -2, 2, -2, 2}, {&ent, 0.05, 3, 0.05, 3}, {&persp, 0.05, 3, -3, 3}};

  for (const SymplecticForm& form : forms) {
    for (const Case& c : cases) {
      for (int i = 0; i < 1000; ++i) {
        const PhasePoint z(Vector{rng.uniform(c.lo, c.hi), rng.uniform(c.ylo, c.yhi)});
        Vector zp_raw;
        if (c.f == &persp && i % 2 == 0) {
          // Draw z' so that Ω^T z' lies in dom F* = {s + t²/4 <= 0}.
          const double t = rng.uniform(-3, 3);
          const Vector s{-t * t / 4.0 - rng.uniform(0, 2), t};
          zp_raw = LuDecomposition(form.matrix().transpose()).solve(s);
        } else {
          zp_raw = rng.uniform_vector(2, -2, 2);
        }
        const PhasePoint zp(zp_raw);
        const ExtendedReal lhs = c.f->eval(z.coords()) + symplectic_conjugate_value(*c.f, form, zp).value;
        const double rhs = form.evaluate(zp, z);
        violation.add(lhs.is_infinite() ? 0.0 : std::max(0.0, rhs - lhs.value()));

        const PhasePoint g = symplectic_gradient(*c.f, form, z);
        const ExtendedReal at_grad = c.f->eval(z.coords()) + symplectic_conjugate_value(*c.f, form, g).value;
        if (at_grad.is_infinite()) {
          equality.fail();
        } else {
          equality.add(std::abs(at_grad.value() - form.evaluate(g, z)));
        }
      }
    }
  }
  return result(3, "symplectic Fenchel-Young inequality", {{"violation", &violation}, {"equality", &equality}});
}

// 4. Solver vs 601-point grid for the low-dimensional built-ins, and the
// quadratic closed form vs the Legendre formula.
CheckResult check_conjugate_oracles(std::uint64_t seed) {
  Tally grid{1e-3}, closed{1e-10};
  struct Case {
    Potential f;
    Vector target;
    Box box;
  };
  const std::vector<Case> cases{
      {half_squared_norm(2), {1, 0}, {{-3, -3}, {3, 3}}},
      {half_squared_norm(2), {0, 0}, {{-3, -3}, {3, 3}}},
      {quadratic_potential(Matrix::from_rows({{2.0, 0.5}, {0.5, 1.0}}), {0.1, -0.2}, 0.3), {0.5, 0.3}, {{-3, -3}, {3, 3}}},
      {entropy_potential(2), {0.2, -0.3}, {{0, 0}, {3, 3}}},
      {separable_potential({ScalarGenerator::square(), ScalarGenerator::exp()}), {0.5, 1.5}, {{-3, -3}, {3, 3}}},
      {perspective_potential(ScalarGenerator::square(2.0)), {-1, 0.5}, {{0, -0.3}, {0.3, 0.3}}},
      {log_sum_exp_potential(2), {0.3, 0.7}, {{-3, -3}, {3, 3}}},
      {separable_potential({ScalarGenerator::exp()}), {1}, {{-3}, {3}}},
      {separable_potential({ScalarGenerator::entropy()}), {1}, {{0}, {3}}},
      {separable_potential({ScalarGenerator::xlogx()}), {1}, {{0}, {3}}},
      {separable_potential({ScalarGenerator::square(2.0)}), {-1.5}, {{-3}, {3}}},
  };
  for (const Case& c : cases) {
    const double brute = fenchel_conjugate_grid(c.f, c.target, c.box, 601);
    const ConjugateResult solved = fenchel_conjugate(c.f, c.target);
    grid.add(std::abs(solved.value - brute));
  }

  CounterRng rng = stream(seed, 4);
  for (std::size_t d : {1u, 2u, 4u}) {
    const Matrix a = rng.spd_matrix(d);
    const Vector b = rng.uniform_vector(d, -1, 1);
    const double c0 = rng.uniform(-1, 1);
    const Potential q = quadratic_potential(a, b, c0);
    const Matrix a_inv = inverse(a);
    for (int i = 0; i < 100; ++i) {
      const Vector s = rng.uniform_vector(d, -3, 3);
      const Vector x = a_inv * subtract(s, b);
      const double legendre = dot(s, x) - q.eval_finite(x);
      closed.add(std::abs(q.closed_conjugate()->value(s).value() - legendre));
    }
  }
  return result(4, "conjugate oracle equivalence", {{"solver vs grid", &grid}, {"closed form", &closed}});
}

// 5. Symplectic Bregman under the Q-induced form equals the composite
// inner-product Bregman divergence.
CheckResult check_composite_reduction(std::uint64_t seed) {
  CounterRng rng = stream(seed, 5);
  Tally diff{1e-8};
  for (std::size_t n : {1u, 2u, 5u}) {
    const Matrix q = rng.spd_matrix(n);
    const SymplecticForm form = form_from_inner_product(q);
    const Potential quad = quadratic_potential(rng.spd_matrix(2 * n), rng.uniform_vector(2 * n, -1, 1));
    std::vector<ScalarGenerator> gens;
    const std::vector<ScalarGenerator> palette{ScalarGenerator::square(1.5), ScalarGenerator::exp(),
                                               ScalarGenerator::entropy(), ScalarGenerator::xlogx()};
    for (std::size_t i = 0; i < 2 * n; ++i) gens.push_back(palette[i % palette.size()]);
    const Potential sep = separable_potential(gens);
    for (int i = 0; i < 500; ++i) {
      const PhasePoint z1 = random_point(rng, n, -2, 2), z2 = random_point(rng, n, -2, 2);
      diff.add(std::abs(symplectic_bregman(quad, form, z1, z2).raw - bregman_composite(quad, z1, z2, q).raw));
      const PhasePoint p1 = random_point(rng, n, 0.2, 2), p2 = random_point(rng, n, 0.2, 2);
      diff.add(std::abs(symplectic_bregman(sep, form, p1, p2).raw - bregman_composite(sep, p1, p2, q).raw));
    }
  }
  return result(5, "composite inner-product reduction", {{"|B^w - B_composite|", &diff}});
}

// 6. B^ω_F(z1:z2) = B_F1(x1:x2) + B_F2(y1:y2) for F(x, y) = F1(x) + F2(y).
CheckResult check_separability(std::uint64_t seed) {
  CounterRng rng = stream(seed, 6);
  Tally diff{1e-8};
  for (std::size_t n : {1u, 2u, 5u}) {
    const Potential f1 = entropy_potential(n);
    const Potential f2 = quadratic_potential(rng.spd_matrix(n), rng.uniform_vector(n, -1, 1));
    const Potential f = direct_sum(f1, f2);
    const std::vector<SymplecticForm> forms{SymplecticForm::canonical(n), form_from_inner_product(rng.spd_matrix(n))};
    for (int i = 0; i < 500; ++i) {
      const PhasePoint z1(rng.uniform_vector(n, 0.1, 3), rng.uniform_vector(n, -2, 2));
      const PhasePoint z2(rng.uniform_vector(n, 0.1, 3), rng.uniform_vector(n, -2, 2));
      const double split = bregman(f1, z1.x(), z2.x()).raw + bregman(f2, z1.y(), z2.y()).raw;
      const SymplecticForm& form = forms[static_cast<std::size_t>(i) % forms.size()];
      diff.add(std::abs(symplectic_bregman(f, form, z1, z2).raw - split));
    }
  }
  return result(6, "separable generators", {{"|B^w - (B_F1 + B_F2)|", &diff}});
}

// 7. Analytic gradients vs central finite differences.
CheckResult check_gradients(std::uint64_t seed) {
  CounterRng rng = stream(seed, 7);
  Tally rel{1e-4};
  struct Case {
    Potential f;
    double lo, hi;
  };
  const Matrix a3 = rng.spd_matrix(3);
  const Potential quad3 = quadratic_potential(a3, rng.uniform_vector(3, -1, 1), 0.5);
  const std::vector<Case> cases{
      {half_squared_norm(4, 0.7), -3, 3},
      {quad3, -3, 3},
      {separable_potential({ScalarGenerator::square(2.0), ScalarGenerator::xlogx(), ScalarGenerator::entropy(),
                            ScalarGenerator::exp()}),
       0.1, 3},
      {entropy_potential(3), 0.1, 5},
      {perspective_potential(ScalarGenerator::square(2.0)), 0.2, 3},
      {perspective_potential(ScalarGenerator::xlogx()), 0.2, 3},
      {log_sum_exp_potential(3), -3, 3},
      {direct_sum(entropy_potential(2), half_squared_norm(2)), 0.1, 3},
      {reparameterize_generator(quad3, Matrix::identity(3) + rng.uniform_matrix(3, -0.3, 0.3),
                                rng.uniform_vector(3, -1, 1), rng.uniform_vector(3, -1, 1), 0.2),
       -2, 2},
      {legendre_dual(quad3), -3, 3},
  };
  for (const Case& c : cases) {
    int drawn = 0;
    while (drawn < 100) {
      const Vector z = rng.uniform_vector(c.f.dim(), c.lo, c.hi);
      if (!c.f.in_domain(z)) continue;
      ++drawn;
      const Vector ga = c.f.gradient(z);
      const Vector gf = c.f.finite_difference_gradient(z);
      rel.add(max_abs(subtract(ga, gf)) / std::max(1.0, max_abs(ga)));
    }
  }
  return result(7, "gradient checks", {{"relative error", &rel}});
}

// 8. B_F(θ1:θ2) = B_F̄(θ̄1:θ̄2) under F̄(θ) = F(Aθ + b) + <c, θ> + d.
CheckResult check_reparameterization(std::uint64_t seed) {
  CounterRng rng = stream(seed, 8);
  Tally diff{1e-8};
  for (int i = 0; i < 100; ++i) {
    const std::size_t d = 1 + static_cast<std::size_t>(i % 3);
    const Matrix a = random_invertible(rng, d) + 1.5 * Matrix::identity(d);
    const Vector b = rng.uniform_vector(d, -1, 1);
    const Vector c = rng.uniform_vector(d, -1, 1);
    const double d0 = rng.uniform(-2, 2);
    const bool use_entropy = i % 2 == 1;
    const Potential f = use_entropy ? entropy_potential(d) : quadratic_potential(rng.spd_matrix(d));
    const Potential fbar = reparameterize_generator(f, a, b, c, d0);
    const double lo = use_entropy ? 0.1 : -3, hi = 3;
    const Vector t1 = rng.uniform_vector(d, lo, hi), t2 = rng.uniform_vector(d, lo, hi);
    const double lhs = bregman(f, t1, t2).raw;
    const double rhs = bregman(fbar, reparameterized_point(a, b, t1), reparameterized_point(a, b, t2)).raw;
    diff.add(std::abs(lhs - rhs));
  }
  return result(8, "reparameterization invariance", {{"|B_F - B_Fbar|", &diff}});
}

// 9. Moreau decomposition z = w + w* with Fenchel-Young equality.
CheckResult check_moreau(std::uint64_t seed) {
  CounterRng rng = stream(seed, 9);
  Tally exact{0.0}, gap{1e-7};
  const Potential quad = quadratic_potential(rng.spd_matrix(3), rng.uniform_vector(3, -1, 1));
  const Potential ent = entropy_potential(3);
  for (int i = 0; i < 200; ++i) {
    const bool use_entropy = i % 2 == 1;
    const Potential& f = use_entropy ? ent : quad;
    const Vector z = rng.uniform_vector(3, -2, 3);
    const MoreauPair p = moreau_decompose(f, z);
    // Exact means bit-for-bit: any differing coordinate is a failure even
    // when its floating-point difference rounds to zero.
    double mismatch = 0.0;
    bool equal = true;
    for (std::size_t k = 0; k < z.size(); ++k) {
      const double sum = p.w[k] + p.w_star[k];
      if (sum != z[k]) {
        equal = false;
        mismatch = std::max(mismatch, std::abs(sum - z[k]));
      }
    }
    if (equal) {
      exact.add(0.0);
    } else if (mismatch == 0.0) {
      exact.fail();
    } else {
      exact.add(mismatch);
    }
    const ExtendedReal fy = f.eval(p.w) + conjugate(f, p.w_star).value;
    if (fy.is_infinite() || !p.converged) {
      gap.fail();
    } else {
      gap.add(std::abs(fy.value() - dot(p.w, p.w_star)));
    }
  }
  return result(9, "Moreau decomposition", {{"w + w* - z", &exact}, {"Fenchel-Young gap", &gap}});
}

// 10. Zero action on the decomposed path, strict increase under 0.1
// perturbations, and recovery of ∇^ωφ by direct minimization.
CheckResult check_sben(std::uint64_t seed) {
  CounterRng rng = stream(seed, 10);
  constexpr std::size_t kNodes = 50;
  Tally zero{static_cast<double>(kNodes) * 1e-7}, increase{0.0}, recovery{1e-4};
  const SampledTrajectory tr = damped_oscillator(kNodes, 5.0, 0.3, 2.0);
  const SymplecticForm canonical = SymplecticForm::canonical(1);
  const SymplecticForm pairing = form_from_pairing(DualSystem(Matrix::from_rows({{1.3}})));
  const std::vector<Potential> phis{
      half_squared_norm(2, 0.7),
      quadratic_potential(Matrix::from_rows({{1.5, 0.4}, {0.4, 0.8}})),
      separable_potential({ScalarGenerator::square(1.2), ScalarGenerator::exp()}),
  };
  for (const Potential& phi : phis) {
    for (const SymplecticForm* form : {&canonical, &pairing}) {
      const DiscretePath path = natural_path(tr.times, tr.points, phi, *form);
      const double action = path_action(path, phi, *form);
      zero.add(std::abs(action));

      for (int i = 0; i < 100 / 6 + 1; ++i) {
        const std::size_t node = static_cast<std::size_t>(rng.uniform() * kNodes) % kNodes;
        const double angle = rng.uniform(0, 2 * M_PI);
        std::vector<PhasePoint> irr = path.irr_rates();
        irr[node] = irr[node] + PhasePoint(Vector{0.1 * std::cos(angle), 0.1 * std::sin(angle)});
        const double perturbed = path_action(path.with_irr_rates(std::move(irr)), phi, *form);
        increase.add(perturbed > action ? 0.0 : action - perturbed + 1.0);
      }

      const IrrMinimization m = minimize_irr(tr.times, tr.points, phi, *form);
      double worst = 0.0;
      for (std::size_t k = 0; k < kNodes; ++k) {
        worst = std::max(worst, max_abs(subtract(m.path.irr_rates()[k].coords(), path.irr_rates()[k].coords())));
      }
      recovery.add(m.converged ? worst : 1.0);
    }
  }
  return result(10, "SBEN demonstration",
                {{"action on decomposed path", &zero}, {"perturbation increase", &increase}, {"minimizer recovery", &recovery}});
}

// 11. S^T Ω S = Ω0 for the Darboux basis of random pairing forms.
CheckResult check_darboux(std::uint64_t seed) {
  CounterRng rng = stream(seed, 11);
  Tally err{1e-8};
  for (std::size_t n : {1u, 2u, 3u}) {
    for (int i = 0; i < 50; ++i) {
      const SymplecticForm form = form_from_pairing(DualSystem(random_invertible(rng, n)));
      const Matrix s = basis_matrix(darboux_basis(form));
      err.add(max_abs_diff(s.transpose() * form.matrix() * s, omega0(n)));
    }
  }
  return result(11, "Darboux basis", {{"||S^T Omega S - Omega0||", &err}});
}

const std::vector<CheckCase>& check_suite() {
  static const std::vector<CheckCase> suite{
      {1, "symplectic form axioms", check_form_axioms},
      {2, "Sp(2n) group suite", check_symplectic_group},
      {3, "symplectic Fenchel-Young inequality", check_fenchel_young_inequality},
      {4, "conjugate oracle equivalence", check_conjugate_oracles},
      {5, "composite inner-product reduction", check_composite_reduction},
      {6, "separable generators", check_separability},
      {7, "gradient checks", check_gradients},
      {8, "reparameterization invariance", check_reparameterization},
      {9, "Moreau decomposition", check_moreau},
      {10, "SBEN demonstration", check_sben},
      {11, "Darboux basis", check_darboux},
  };
  return suite;
}

std::vector<CheckResult> run_check_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  for (const CheckCase& c : check_suite()) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = c.run(seed);
    } catch (const std::exception& e) {
      r.id = c.id;
      r.name = c.name;
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_check_table(const std::vector<CheckResult>& results) {
  std::ostringstream os;
  std::size_t passed = 0;
  for (const CheckResult& r : results) {
    char head[96];
    std::snprintf(head, sizeof head, "[%s] %2d %-38s %7.3fs  ", r.passed ? "PASS" : "FAIL", r.id,
                  r.name.c_str(), r.seconds);
    os << head << r.detail << '\n';
    passed += r.passed ? 1 : 0;
  }
  os << passed << "/" << results.size() << " checks passed\n";
  return os.str();
}

}  // namespace sympdiv
