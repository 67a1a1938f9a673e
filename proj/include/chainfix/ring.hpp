#pragma once

#include "chainfix/rational.hpp"

namespace chainfix {

enum class RingKind { Integers, Rationals, IntegersModP };

// Coefficient ring of a chain complex. Elements are carried as rationals;
// for Z they are integral, for Z/p they are residues 0..p-1. All entry
// points normalize, so arithmetic can stay plain mpq internally.
struct Ring {
  RingKind kind = RingKind::Integers;
  long p = 0;  // modulus when kind == IntegersModP (prime)

  static Ring Z() { return {RingKind::Integers, 0}; }
  static Ring Q() { return {RingKind::Rationals, 0}; }
  static Ring Zp(long p);

  bool is_field() const { return kind != RingKind::Integers; }

  // Canonical representative; rejects elements outside the ring
  // (non-integers over Z, denominators divisible by p over Z/p).
  Rat normalize(const Rat& x) const;

  Rat add(const Rat& a, const Rat& b) const { return normalize(a + b); }
  Rat sub(const Rat& a, const Rat& b) const { return normalize(a - b); }
  Rat mul(const Rat& a, const Rat& b) const { return normalize(a * b); }
  Rat neg(const Rat& a) const { return normalize(-a); }

  bool is_zero(const Rat& x) const { return normalize(x) == 0; }
  bool is_unit(const Rat& x) const;
  Rat inv(const Rat& x) const;

  // Exact division b/a when a divides b in the ring.
  bool divides(const Rat& a, const Rat& b) const;
  Rat div(const Rat& b, const Rat& a) const;

  // Traces and Lefschetz numbers live in the fraction field: Q for Z and Q,
  // Z/p for Z/p. normalize() of the fraction field.
  Rat fraction_field_normalize(const Rat& x) const;

  std::string name() const;

  bool operator==(const Ring& o) const { return kind == o.kind && p == o.p; }
};

// Parses "Z", "Q", "Zp:<p>".
Ring parse_ring(const std::string& s);

}  // namespace chainfix
