#pragma once

#include "stpca/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stpca::bounds {

/// Coefficient box for the discrete comparison inequalities: sequences
/// satisfying a1 + b1 sum f(u_s) <= u_t <= a2 + b2 sum f(u_s) for the
/// kind-specific increment f.
struct SequenceBoundSpec {
  int p = 2;
  double a1 = 0.0, a2 = 0.0;
  double b1 = 0.0, b2 = 0.0;

  void validate() const;
};

enum class BoundKind { Gronwall, Bihari, Logistic };

struct Envelope {
  double lower = 0.0;
  double upper = 0.0;
};

/// Thrown when a power-growth envelope is evaluated at or past its
/// finite-time blow-up t* = 1 / ((p-2) b a^{p-2}).
class BlowupError : public NumericError {
 public:
  BlowupError(double t_star)
      : NumericError("envelope evaluated at or past blow-up time t* = " +
                     std::to_string(t_star)),
        t_star_(t_star) {}
  double t_star() const { return t_star_; }

 private:
  double t_star_;
};

/// p = 2 envelope for u_t = a + b sum u_s:
/// (a1 (1+b1)^t, a2 (1+b2)^t), evaluated in log space.
Envelope gronwall_envelope(const SequenceBoundSpec& spec, double t);

/// p >= 3 envelope for u_t = a + b sum u_s^{p-1}:
/// a (1 - (p-2) b a^{p-2} t)^{-1/(p-2)} on both sides. The plain lower
/// bound can overshoot genuine sequences by the first step; supplying
/// u_prev = u_{t-1} switches the lower side to the refined rate
/// b1 / (1 + b1 u_prev^{p-2})^{p-1}, which is valid for every sequence in
/// the class.
Envelope bihari_lasalle_envelope(const SequenceBoundSpec& spec, double t,
                                 std::optional<double> u_prev = std::nullopt);

/// Blow-up time of the power-growth envelope with coefficients (a, b).
double bihari_blowup_time(double a, double b, int p);

/// Envelope for u_t = a + b sum u_s (1 - u_s) with u in [0,1], valid up to
/// (and including) the first t with u_t >= 1/2:
/// sigmoid(logit(a1) + (b1/(1+b1)) t) <= u_t <= sigmoid(logit(a2) + b2 t).
Envelope logistic_envelope(const SequenceBoundSpec& spec, double t);

struct SandwichReport {
  bool ok = true;
  long first_violation = -1;
  std::string what;
};

/// Checks that u satisfies the two-sided defining recursion of the given
/// kind and that every in-range index lies inside the matching envelope
/// (refined lower side for Bihari; Logistic indices past the first
/// crossing of 1/2 are out of range). Returns the first violation if any.
SandwichReport verify_sandwich(const std::vector<double>& u,
                               const SequenceBoundSpec& spec, BoundKind kind);

}  // namespace stpca::bounds
