#ifndef ROBBA_ERRORS_HPP
#define ROBBA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace robba {

// Error taxonomy. The CLI maps these onto its exit-code contract:
// parse errors -> 2, regime errors -> 3, precision errors -> 4,
// validation errors -> 5.

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed inputs: bad dimensions, basis mismatch, zero denominator, ...
struct invalid_argument_error : error {
    using error::error;
};

// Radius/regime violations: nonpositive radius, no dominant monomial,
// geometric series fails to contract, invalid psi=0 component.
struct regime_error : error {
    using error::error;
};

// Requested certainty exceeds available precision: indeterminate rank,
// indeterminate residue, tail contamination.
struct precision_error : error {
    using error::error;
};

// Structural precondition failures surfaced by validators (commutation
// relations, psi(f) != 0 where the decomposition demands it).
struct validation_error : error {
    using error::error;
};

} // namespace robba

#endif
