#ifndef PSI_COMPOSITION_TABLES_HPP
#define PSI_COMPOSITION_TABLES_HPP

// Coefficient tables for symmetric compositions
//
//   Psi_h = Phi_{alpha_s h} o Phi*_{beta_s h} o ... o Phi_{alpha_1 h} o Phi*_{beta_1 h}
//
// of a first-order method Phi and its adjoint Phi*.  Sources:
//
//   R.I. McLachlan, On the numerical integration of ordinary differential
//   equations by symmetric composition methods, SIAM J. Sci. Comput. 16
//   (1995); also Hairer, Lubich, Wanner, Geometric Numerical Integration,
//   2nd ed., Sect. V.3.2 (order 4, s = 5, coefficients in radicals of 19).
//
//   S. Blanes, P.C. Moan, Practical symplectic partitioned Runge-Kutta and
//   Runge-Kutta-Nystrom methods, J. Comput. Appl. Math. 142 (2002), order-4
//   six-stage symmetric scheme, here in alpha/beta form (adjacent flows of
//   the published splitting merged pairwise).
//
// Literals are kept to 17 significant digits; the palindrome and consistency
// identities close to the last digit.

#include <string>
#include <vector>

namespace psi {

struct CompositionPair {
  double alpha;
  double beta;
};

struct CompositionTable {
  std::string name;
  int order;
  std::vector<CompositionPair> pairs;
};

// McLachlan (1995), order 4, s = 5:
//   alpha_1 = (146 + 5 sqrt(19)) / 540   alpha_2 = (-2 + 10 sqrt(19)) / 135
//   alpha_3 = 1/5                        alpha_4 = (-23 - 20 sqrt(19)) / 270
//   alpha_5 = (14 - sqrt(19)) / 108      beta_i  = alpha_{6-i}
inline CompositionTable mclachlan_order4_s5() {
  return {"mclachlan-o4-s5",
          4,
          {{0.31073054577352475, 0.089269454226475245},
           {0.30806658841042026, -0.40806658841042026},
           {0.20000000000000000, 0.20000000000000000},
           {-0.40806658841042026, 0.30806658841042026},
           {0.089269454226475245, 0.31073054577352475}}};
}

// Blanes & Moan (2002), order 4, s = 6.
inline CompositionTable blanes_moan_order4_s6() {
  return {"blanes-moan-o4-s6",
          4,
          {{0.13031141018216630, 0.079203696431195700},
           {-0.36671326904742565, 0.22286149586760770},
           {0.10968847787674980, 0.32464818868970620},
           {0.32464818868970620, 0.10968847787674980},
           {0.22286149586760770, -0.36671326904742565},
           {0.079203696431195700, 0.13031141018216630}}};
}

}  // namespace psi

#endif
