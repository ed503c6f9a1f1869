#include <cmath>

#include "dulab/expsum.hpp"
#include "dulab/rational.hpp"

namespace dulab {

RationalApprox diophantine_approx(double alpha, std::uint64_t Qmax) {
  if (Qmax < 1) throw DomainError("diophantine_approx: Qmax must be >= 1");
  if (!std::isfinite(alpha)) throw DomainError("diophantine_approx: alpha must be finite");
  const Rational x = from_double(alpha);
  const BigInt qmax = from_u64(Qmax);

  // Convergents h/k with h_{-1}/k_{-1} = 1/0 and h_{-2}/k_{-2} = 0/1.
  BigInt h_prev = 1, k_prev = 0, h_prev2 = 0, k_prev2 = 1;
  Rational rem = x;
  BigInt best_h, best_k;
  bool have = false;
  for (;;) {
    BigInt a;
    mpz_fdiv_q(a.get_mpz_t(), rem.get_num_mpz_t(), rem.get_den_mpz_t());
    const BigInt h = a * h_prev + h_prev2;
    const BigInt k = a * k_prev + k_prev2;
    if (k > qmax) {
      // Largest intermediate fraction still within the bound.
      BigInt t = (qmax - k_prev2) / k_prev;
      if (t >= 1 && have) {
        const BigInt sh = t * h_prev + h_prev2;
        const BigInt sk = t * k_prev + k_prev2;
        const Rational e_conv = abs(x - Rational(best_h, best_k));
        const Rational e_semi = abs(x - Rational(sh, sk));
        if (e_semi < e_conv) {
          best_h = sh;
          best_k = sk;
        }
      }
      break;
    }
    best_h = h;
    best_k = k;
    have = true;
    h_prev2 = h_prev;
    k_prev2 = k_prev;
    h_prev = h;
    k_prev = k;
    const Rational frac = rem - Rational(a);
    if (frac == 0) break;
    rem = 1 / frac;
  }
  Rational best(best_h, best_k);
  best.canonicalize();
  RationalApprox out;
  out.a = best.get_num().get_si();
  out.q = to_u64(best.get_den());
  out.err = Rational(x - best).get_d();
  return out;
}

}  // namespace dulab
