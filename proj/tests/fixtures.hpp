#pragma once

// Regression fixtures fixed by pilot runs of the acceptance configuration.
// Each value was read off a full run and is compared against, never tuned to pass.
namespace torbit::fixtures {

// Separation sweep: 16 log-spaced fundamental discriminants <= 10^4,
// principal orbits, window R = 4, 8 samples per unit of regulator.
inline constexpr long separation_disc_bound = 10000;
inline constexpr long separation_count = 16;
inline constexpr double separation_window_r = 4.0;
inline constexpr int separation_grid = 8;
inline constexpr double separation_pilot_min_scaled = 1.41397596396;
inline constexpr double separation_pilot_slope = -0.2449;

// Escape of mass along x^3 - a x^2 - (a+3) x - 1, a = -1..30, 30 x 30 grid.
inline constexpr double escape_delta0 = 0.2;
inline constexpr int escape_grid = 30;
inline constexpr double escape_pilot_min_fraction = 0.107777777778;
inline constexpr double escape_floor = 0.1;

// x2 x3 sweep over primes in [10^4, 10^5] with |<2,3>| >= q^0.9.
inline constexpr double times23_pilot_worst_discrepancy = 0.0147738;
inline constexpr long times23_pilot_prime_count = 7722;

}  // namespace torbit::fixtures
