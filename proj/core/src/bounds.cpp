#include "stpca/bounds.hpp"

#include <cmath>
#include <limits>

namespace stpca::bounds {

namespace {

double sigmoid(double s) {
  if (s >= 0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

double logit(double a) { return std::log(a / (1.0 - a)); }

double power_growth(double a, double b, int p, double t) {
  const double q = static_cast<double>(p - 2);
  const double f = 1.0 - q * b * std::pow(a, q) * t;
  if (f <= 0) throw BlowupError(bihari_blowup_time(a, b, p));
  return a * std::pow(f, -1.0 / q);
}

double recursion_increment(BoundKind kind, int p, double u) {
  switch (kind) {
    case BoundKind::Gronwall:
      return u;
    case BoundKind::Bihari: {
      double v = 1.0;
      for (int k = 0; k < p - 1; ++k) v *= u;
      return v;
    }
    case BoundKind::Logistic:
      return u * (1.0 - u);
  }
  return 0.0;
}

}  // namespace

void SequenceBoundSpec::validate() const {
  if (p < 2) throw ConfigError("p must be >= 2");
  if (a1 <= 0 || b1 <= 0) throw ConfigError("coefficients must be positive");
  if (a1 > a2 || b1 > b2)
    throw ConfigError("coefficient box needs a1 <= a2 and b1 <= b2");
}

Envelope gronwall_envelope(const SequenceBoundSpec& spec, double t) {
  spec.validate();
  if (spec.p != 2) throw ConfigError("Gronwall envelope requires p = 2");
  return {std::exp(std::log(spec.a1) + t * std::log1p(spec.b1)),
          std::exp(std::log(spec.a2) + t * std::log1p(spec.b2))};
}

Envelope bihari_lasalle_envelope(const SequenceBoundSpec& spec, double t,
                                 std::optional<double> u_prev) {
  spec.validate();
  if (spec.p < 3) throw ConfigError("power-growth envelope requires p >= 3");
  double b_low = spec.b1;
  if (u_prev) {
    double corr = 1.0 + spec.b1 * std::pow(*u_prev, spec.p - 2);
    b_low = spec.b1 / std::pow(corr, spec.p - 1);
  }
  Envelope env;
  env.upper = power_growth(spec.a2, spec.b2, spec.p, t);
  env.lower = power_growth(spec.a1, b_low, spec.p, t);
  return env;
}

double bihari_blowup_time(double a, double b, int p) {
  if (p < 3) throw ConfigError("blow-up time requires p >= 3");
  if (a <= 0 || b <= 0) throw ConfigError("coefficients must be positive");
  return 1.0 / ((p - 2) * b * std::pow(a, p - 2));
}

Envelope logistic_envelope(const SequenceBoundSpec& spec, double t) {
  spec.validate();
  if (spec.a1 >= 1.0 || spec.a2 >= 1.0)
    throw ConfigError("logistic envelope requires a in (0,1)");
  return {sigmoid(logit(spec.a1) + (spec.b1 / (1.0 + spec.b1)) * t),
          sigmoid(logit(spec.a2) + spec.b2 * t)};
}

SandwichReport verify_sandwich(const std::vector<double>& u,
                               const SequenceBoundSpec& spec, BoundKind kind) {
  spec.validate();
  if (kind == BoundKind::Gronwall && spec.p != 2)
    throw ConfigError("Gronwall check requires p = 2");
  if (kind == BoundKind::Bihari && spec.p < 3)
    throw ConfigError("power-growth check requires p >= 3");

  SandwichReport report;
  auto fail = [&](long t, const std::string& what) {
    report.ok = false;
    report.first_violation = t;
    report.what = what + " at index " + std::to_string(t);
    return report;
  };

  // Range limits: Logistic bounds hold up to the first u >= 1/2 inclusive;
  // the Bihari upper envelope only exists pre-blow-up.
  long range_end = static_cast<long>(u.size());
  if (kind == BoundKind::Logistic) {
    for (long t = 0; t < range_end; ++t)
      if (u[static_cast<std::size_t>(t)] >= 0.5) {
        range_end = t + 1;
        break;
      }
  }

  const double rtol = 1e-9;
  double sum = 0.0;
  for (long t = 0; t < static_cast<long>(u.size()); ++t) {
    const double ut = u[static_cast<std::size_t>(t)];
    if (!std::isfinite(ut)) return fail(t, "non-finite value");
    const double lo = spec.a1 + spec.b1 * sum;
    const double hi = spec.a2 + spec.b2 * sum;
    const double slack = rtol * (1.0 + std::abs(hi));
    if (ut < lo - slack || ut > hi + slack)
      return fail(t, "recursion violated");
    if (t < range_end) {
      Envelope env;
      switch (kind) {
        case BoundKind::Gronwall:
          env = gronwall_envelope(spec, static_cast<double>(t));
          break;
        case BoundKind::Bihari: {
          double b_low = spec.b1;
          if (t > 0) {
            const double up = u[static_cast<std::size_t>(t - 1)];
            b_low = spec.b1 /
                    std::pow(1.0 + spec.b1 * std::pow(up, spec.p - 2),
                             spec.p - 1);
          }
          // Each side makes no claim past its own blow-up time.
          try {
            env.lower = power_growth(spec.a1, b_low, spec.p,
                                     static_cast<double>(t));
          } catch (const BlowupError&) {
            env.lower = -std::numeric_limits<double>::infinity();
          }
          try {
            env.upper = power_growth(spec.a2, spec.b2, spec.p,
                                     static_cast<double>(t));
          } catch (const BlowupError&) {
            env.upper = std::numeric_limits<double>::infinity();
          }
          break;
        }
        case BoundKind::Logistic:
          env = logistic_envelope(spec, static_cast<double>(t));
          break;
      }
      const double etol = rtol * (1.0 + std::abs(env.upper));
      if (ut < env.lower - etol) return fail(t, "lower envelope violated");
      if (ut > env.upper + etol) return fail(t, "upper envelope violated");
    }
    sum += recursion_increment(kind, spec.p, ut);
  }
  return report;
}

}  // namespace stpca::bounds
