#include "sympdiv/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sympdiv/errors.hpp"

namespace sympdiv {

// ---------------------------------------------------------------- Potential

Potential::Potential(PotentialDefinition def) {
  if (def.dim == 0) throw DimensionError("potential '" + def.name + "' has dimension 0");
  if (!def.value) throw SchemaError("potential '" + def.name + "' has no value map");
  if (def.interior_point.empty()) def.interior_point.assign(def.dim, 0.0);
  if (def.interior_point.size() != def.dim) {
    throw DimensionError("potential '" + def.name + "': interior point has wrong dimension");
  }
  if (def.domain && !def.domain(def.interior_point)) {
    throw DomainError("potential '" + def.name + "': interior point is outside the domain");
  }
  impl_ = std::make_shared<const PotentialDefinition>(std::move(def));
}

void Potential::check_dim(std::span<const double> z) const {
  if (z.size() != dim()) {
    throw DimensionError("potential '" + name() + "' has dimension " + std::to_string(dim()) +
                         ", got a point of dimension " + std::to_string(z.size()));
  }
}

bool Potential::in_domain(std::span<const double> z) const {
  check_dim(z);
  for (double v : z) {
    if (!std::isfinite(v)) return false;
  }
  return !impl_->domain || impl_->domain(z);
}

ExtendedReal Potential::eval(std::span<const double> z) const {
  if (!in_domain(z)) return ExtendedReal::infinity();
  const double v = impl_->value(z);
  if (!std::isfinite(v)) return ExtendedReal::infinity();
  return v;
}

double Potential::eval_finite(std::span<const double> z) const {
  const ExtendedReal v = eval(z);
  if (v.is_infinite()) throw DomainError("potential '" + name() + "' is +inf at the given point");
  return v.value();
}

Vector Potential::gradient(std::span<const double> z, double h) const {
  if (!in_domain(z)) throw DomainError("gradient of '" + name() + "' outside its domain");
  if (impl_->gradient) return impl_->gradient(z);
  return finite_difference_gradient(z, h);
}

Vector Potential::finite_difference_gradient(std::span<const double> z, double h) const {
  if (!in_domain(z)) throw DomainError("gradient of '" + name() + "' outside its domain");
  Vector g(dim());
  Vector zp(z.begin(), z.end());
  Vector zm(z.begin(), z.end());
  for (std::size_t i = 0; i < dim(); ++i) {
    const double hi = h * (1.0 + std::abs(z[i]));
    zp[i] = z[i] + hi;
    zm[i] = z[i] - hi;
    if (!in_domain(zp) || !in_domain(zm)) {
      throw DomainError("gradient of '" + name() + "': point is on or too close to the boundary");
    }
    g[i] = (impl_->value(zp) - impl_->value(zm)) / (zp[i] - zm[i]);
    zp[i] = z[i];
    zm[i] = z[i];
  }
  return g;
}

// ---------------------------------------------------------------- ScalarGenerator

ScalarGenerator ScalarGenerator::square(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("square generator needs a > 0");
  return ScalarGenerator(Kind::Square, a);
}

std::string ScalarGenerator::name() const {
  switch (kind_) {
    case Kind::Square: return "square";
    case Kind::XLogX: return "xlogx";
    case Kind::Entropy: return "entropy";
    case Kind::Exp: return "exp";
  }
  return "unknown";
}

bool ScalarGenerator::in_domain(double u) const {
  if (!std::isfinite(u)) return false;
  switch (kind_) {
    case Kind::XLogX:
    case Kind::Entropy: return u > 0.0;
    default: return true;
  }
}

double ScalarGenerator::value(double u) const {
  switch (kind_) {
    case Kind::Square: return 0.5 * param_ * u * u;
    case Kind::XLogX: return u * std::log(u);
    case Kind::Entropy: return u * std::log(u) - u;
    case Kind::Exp: return std::exp(u);
  }
  return 0.0;
}

double ScalarGenerator::derivative(double u) const {
  switch (kind_) {
    case Kind::Square: return param_ * u;
    case Kind::XLogX: return std::log(u) + 1.0;
    case Kind::Entropy: return std::log(u);
    case Kind::Exp: return std::exp(u);
  }
  return 0.0;
}

ExtendedReal ScalarGenerator::conjugate(double s) const {
  switch (kind_) {
    case Kind::Square: return s * s / (2.0 * param_);
    case Kind::XLogX: return std::exp(s - 1.0);
    case Kind::Entropy: return std::exp(s);
    case Kind::Exp:
      if (s < 0.0) return ExtendedReal::infinity();
      if (s == 0.0) return 0.0;
      return s * std::log(s) - s;
  }
  return 0.0;
}

double ScalarGenerator::conjugate_derivative(double s) const {
  switch (kind_) {
    case Kind::Square: return s / param_;
    case Kind::XLogX: return std::exp(s - 1.0);
    case Kind::Entropy: return std::exp(s);
    case Kind::Exp:
      if (!(s > 0.0)) throw DomainError("exp generator: conjugate derivative needs s > 0");
      return std::log(s);
  }
  return 0.0;
}

double ScalarGenerator::interior_point() const {
  switch (kind_) {
    case Kind::XLogX:
    case Kind::Entropy: return 1.0;
    default: return 0.0;
  }
}

// ---------------------------------------------------------------- built-ins

Potential quadratic_potential(const Matrix& a, Vector b, double c) {
  cholesky(a);
  const std::size_t d = a.rows();
  if (b.empty()) b.assign(d, 0.0);
  if (b.size() != d) throw DimensionError("quadratic potential: linear term has wrong length");
  auto lu = std::make_shared<const LuDecomposition>(a);

  PotentialDefinition def;
  def.name = "quadratic";
  def.dim = d;
  def.value = [a, b, c](std::span<const double> z) {
    return 0.5 * dot(z, a * z) + dot(b, z) + c;
  };
  def.gradient = [a, b](std::span<const double> z) { return add(a * z, b); };
  def.conjugate = ClosedFormConjugate{
      [lu, b, c](std::span<const double> s) -> ExtendedReal {
        const Vector r = subtract(s, b);
        return 0.5 * dot(r, lu->solve(r)) - c;
      },
      [lu, b](std::span<const double> s) { return lu->solve(subtract(s, b)); }};
  return Potential(std::move(def));
}

Potential half_squared_norm(std::size_t dim, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("half_squared_norm needs lambda > 0");
  PotentialDefinition def;
  def.name = "half_squared_norm";
  def.dim = dim;
  def.value = [lambda](std::span<const double> z) { return 0.5 * lambda * dot(z, z); };
  def.gradient = [lambda](std::span<const double> z) { return scale(z, lambda); };
  def.conjugate = ClosedFormConjugate{
      [lambda](std::span<const double> s) -> ExtendedReal { return dot(s, s) / (2.0 * lambda); },
      [lambda](std::span<const double> s) { return scale(s, 1.0 / lambda); }};
  return Potential(std::move(def));
}

Potential separable_potential(const std::vector<ScalarGenerator>& generators) {
  if (generators.empty()) throw DimensionError("separable potential needs generators");
  std::string name = "separable(";
  for (std::size_t i = 0; i < generators.size(); ++i) {
    name += (i ? "," : "") + generators[i].name();
  }
  name += ")";

  PotentialDefinition def;
  def.name = name;
  def.dim = generators.size();
  def.domain = [generators](std::span<const double> z) {
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (!generators[i].in_domain(z[i])) return false;
    }
    return true;
  };
  def.value = [generators](std::span<const double> z) {
    double v = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) v += generators[i].value(z[i]);
    return v;
  };
  def.gradient = [generators](std::span<const double> z) {
    Vector g(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) g[i] = generators[i].derivative(z[i]);
    return g;
  };
  def.conjugate = ClosedFormConjugate{
      [generators](std::span<const double> s) {
        ExtendedReal v = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) v = v + generators[i].conjugate(s[i]);
        return v;
      },
      [generators](std::span<const double> s) {
        Vector x(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) x[i] = generators[i].conjugate_derivative(s[i]);
        return x;
      }};
  for (const auto& g : generators) def.interior_point.push_back(g.interior_point());
  return Potential(std::move(def));
}

Potential entropy_potential(std::size_t dim) {
  return separable_potential(std::vector<ScalarGenerator>(dim, ScalarGenerator::entropy()));
}

Potential perspective_potential(const ScalarGenerator& f) {
  PotentialDefinition def;
  def.name = "perspective(" + f.name() + ")";
  def.dim = 2;
  def.domain = [f](std::span<const double> z) { return z[0] > 0.0 && f.in_domain(z[1] / z[0]); };
  def.value = [f](std::span<const double> z) { return z[0] * f.value(z[1] / z[0]); };
  def.gradient = [f](std::span<const double> z) {
    const double u = z[1] / z[0];
    const double df = f.derivative(u);
    return Vector{f.value(u) - u * df, df};
  };
  // Indicator of {s + f*(t) <= 0}. The boundary test carries a relative
  // slack of 1e-12 so that points exactly on the boundary (such as ∇F
  // itself) are not lost to rounding.
  def.conjugate = ClosedFormConjugate{
      [f](std::span<const double> s) -> ExtendedReal {
        const ExtendedReal ft = f.conjugate(s[1]);
        if (ft.is_infinite()) return ExtendedReal::infinity();
        const double gap = s[0] + ft.value();
        const double slack = 1e-12 * (1.0 + std::abs(s[0]) + std::abs(ft.value()));
        return gap <= slack ? ExtendedReal(0.0) : ExtendedReal::infinity();
      },
      {}};
  def.interior_point = {1.0, f.interior_point()};
  return Potential(std::move(def));
}

Potential log_sum_exp_potential(std::size_t dim) {
  PotentialDefinition def;
  def.name = "logsumexp";
  def.dim = dim;
  def.value = [](std::span<const double> z) {
    const double m = *std::max_element(z.begin(), z.end());
    double s = 0.0;
    for (double v : z) s += std::exp(v - m);
    return m + std::log(s);
  };
  def.gradient = [](std::span<const double> z) {
    const double m = *std::max_element(z.begin(), z.end());
    Vector g(z.size());
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) s += (g[i] = std::exp(z[i] - m));
    for (double& v : g) v /= s;
    return g;
  };
  def.conjugate = ClosedFormConjugate{
      [](std::span<const double> s) -> ExtendedReal {
        double total = 0.0, v = 0.0;
        for (double si : s) {
          if (si < 0.0) return ExtendedReal::infinity();
          total += si;
          if (si > 0.0) v += si * std::log(si);
        }
        if (std::abs(total - 1.0) > 1e-12) return ExtendedReal::infinity();
        return v;
      },
      [](std::span<const double> s) {
        Vector z(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
          if (!(s[i] > 0.0)) throw DomainError("logsumexp: conjugate argmax needs s > 0");
          z[i] = std::log(s[i]);
        }
        return z;
      }};
  return Potential(std::move(def));
}

Potential direct_sum(const Potential& f1, const Potential& f2) {
  const std::size_t d1 = f1.dim();
  PotentialDefinition def;
  def.name = f1.name() + "+" + f2.name();
  def.dim = d1 + f2.dim();
  def.domain = [f1, f2, d1](std::span<const double> z) {
    return f1.in_domain(z.first(d1)) && f2.in_domain(z.subspan(d1));
  };
  def.value = [f1, f2, d1](std::span<const double> z) {
    return f1.eval_finite(z.first(d1)) + f2.eval_finite(z.subspan(d1));
  };
  def.gradient = [f1, f2, d1](std::span<const double> z) {
    Vector g = f1.gradient(z.first(d1));
    const Vector g2 = f2.gradient(z.subspan(d1));
    g.insert(g.end(), g2.begin(), g2.end());
    return g;
  };
  const auto& c1 = f1.closed_conjugate();
  const auto& c2 = f2.closed_conjugate();
  if (c1 && c2) {
    ClosedFormConjugate c;
    c.value = [c1, c2, d1](std::span<const double> s) {
      return c1->value(s.first(d1)) + c2->value(s.subspan(d1));
    };
    if (c1->argmax && c2->argmax) {
      c.argmax = [c1, c2, d1](std::span<const double> s) {
        Vector x = c1->argmax(s.first(d1));
        const Vector x2 = c2->argmax(s.subspan(d1));
        x.insert(x.end(), x2.begin(), x2.end());
        return x;
      };
    }
    def.conjugate = std::move(c);
  }
  def.interior_point = f1.interior_point();
  def.interior_point.insert(def.interior_point.end(), f2.interior_point().begin(),
                            f2.interior_point().end());
  return Potential(std::move(def));
}

Potential legendre_dual(const Potential& f) {
  const auto& conj = f.closed_conjugate();
  if (!conj || !conj->argmax) {
    throw DomainError("legendre_dual: '" + f.name() + "' has no closed-form conjugate gradient");
  }
  PotentialDefinition def;
  def.name = "dual(" + f.name() + ")";
  def.dim = f.dim();
  def.domain = [conj](std::span<const double> s) { return conj->value(s).is_finite(); };
  def.value = [conj](std::span<const double> s) { return conj->value(s).value(); };
  def.gradient = conj->argmax;
  def.conjugate = ClosedFormConjugate{[f](std::span<const double> z) { return f.eval(z); },
                                      [f](std::span<const double> z) { return f.gradient(z); }};
  def.interior_point = f.gradient(f.interior_point());
  return Potential(std::move(def));
}

std::size_t midpoint_convexity_violations(const Potential& f,
                                          const std::vector<std::pair<Vector, Vector>>& pairs,
                                          double slack) {
  std::size_t violations = 0;
  for (const auto& [a, b] : pairs) {
    const ExtendedReal fa = f.eval(a), fb = f.eval(b);
    if (fa.is_infinite() || fb.is_infinite()) continue;
    const Vector mid = scale(add(a, b), 0.5);
    const ExtendedReal fm = f.eval(mid);
    if (fm.is_infinite() || fm.value() > 0.5 * fa.value() + 0.5 * fb.value() + slack) {
      ++violations;
    }
  }
  return violations;
}

}  // namespace sympdiv
