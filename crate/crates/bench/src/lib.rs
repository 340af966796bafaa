//! Fixtures shared by the benchmarks.

use dblint_core::Problem;

/// Coarse step counts used for ladder benchmarks, from the pilot stepsize
/// 0.01 down to the headline 6.3e-4 on `[1, 5]`.
pub const STEP_COUNTS: [usize; 3] = [400, 1600, 6349];

/// The reference problem ∫_1^5 ∫_{x/5}^{x²+1} sin(xt) dt dx.
pub fn example() -> Problem {
    Problem::sin_xt_example()
}
