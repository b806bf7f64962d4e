#ifndef SDS_CONSTANTS_HPP
#define SDS_CONSTANTS_HPP

// Single source of truth for the numeric tolerances used by both the
// library invariant checks and the test suites.
namespace sds::tol {

inline constexpr double generator_row_sum = 1e-12;    // conservativity check
inline constexpr double stationary_sum = 1e-12;       // |sum(pi) - 1|
inline constexpr double stationary_residual = 1e-10;  // ||pi * Gamma||_inf
inline constexpr double skeleton_row_sum = 1e-10;     // rows of exp(tau*Gamma)
inline constexpr double kappa_rel = 1e-10;            // bisection on eta sign change
inline constexpr double root_rel = 1e-12;             // threshold root solving
inline constexpr double grid_align_rel = 1e-9;        // tau, tau0 vs dt grid
inline constexpr double blowup_max_norm = 1e12;       // |x|_inf above this counts as blowup

}  // namespace sds::tol

#endif
