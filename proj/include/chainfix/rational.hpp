#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace chainfix {

using Rat = mpq_class;
using Int = mpz_class;

// Parses "p", "-p/q" style strings. Throws std::invalid_argument on garbage
// or zero denominator.
Rat parse_rat(const std::string& s);

// Canonical text form "p/q" (or "p" when the denominator is 1).
std::string rat_str(const Rat& r);

// 2^e for e of either sign.
Rat pow2(int e);

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

// |r| as a rational.
inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// Exception type for contract violations on user-supplied data.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& m) : std::runtime_error(m) {}
};

// Internal invariant failures (index axioms, acyclicity, ...) distinct from
// malformed input.
struct CheckError : std::runtime_error {
  explicit CheckError(const std::string& m) : std::runtime_error(m) {}
};

#define CFX_INPUT(cond, msg) \
  do { if (!(cond)) throw ::chainfix::InputError(msg); } while (0)
#define CFX_CHECK(cond, msg) \
  do { if (!(cond)) throw ::chainfix::CheckError(msg); } while (0)

}  // namespace chainfix
