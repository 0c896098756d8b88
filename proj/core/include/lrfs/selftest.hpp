#pragma once

#include <ostream>

namespace lrfs {

// Runs the condensed oracle-backed property suite (exhaustive Bayes vs the
// conjugate update, marginal-product preservation, KL minimality spot
// checks, prediction algebra, Bessel reference, assignment solver).
// Prints one line per check; returns the number of failures.
int run_selftest(std::ostream& out);

}  // namespace lrfs
