// -*- mode: c++ -*-
//
// The seven parsing semirings: boolean, counting, inside, Viterbi,
// Viterbi-derivation, Viterbi-n-best and derivation-forest.  Values are
// immutable; all operations are pure.

#ifndef SEMPARSE_SEMIRING_HPP
#define SEMPARSE_SEMIRING_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "semparse/term.hpp"

namespace semparse {

// One node of a derivation tree.  Leaves are axioms (grammar terms,
// input words, the pivot); internal nodes are inferred items.
struct DerivNode;
using DerivPtr = std::shared_ptr<const DerivNode>;

struct DerivNode {
  Term term;
  std::vector<DerivPtr> children;
  std::string key;  // canonical serialization, used for deterministic tie-breaks

  static DerivPtr leaf(const Term& t);
  static DerivPtr node(const Term& t, std::vector<DerivPtr> children);
};

// A scored derivation.  Mid-inference it is an unrooted fragment (the
// ordered derivations of the antecedents seen so far); finalize() roots
// the fragment at the consequent.
struct Derivation {
  double prob = 0.0;
  std::vector<DerivPtr> nodes;
  std::string key;

  bool operator==(const Derivation& o) const { return prob == o.prob && key == o.key; }
};

enum class SemiringId : unsigned char {
  Boolean,
  Counting,
  Inside,
  Viterbi,
  ViterbiDeriv,
  ViterbiNBest,
  Forest
};

class Value {
 public:
  Value() = default;

  SemiringId sid() const { return sid_; }
  bool as_bool() const { return std::get<bool>(v_); }
  std::uint64_t as_count() const { return std::get<std::uint64_t>(v_); }
  double as_real() const { return std::get<double>(v_); }
  const std::optional<Derivation>& as_deriv() const {
    return std::get<std::optional<Derivation>>(v_);
  }
  const std::vector<Derivation>& as_nbest() const {
    return std::get<std::vector<Derivation>>(v_);
  }

 private:
  friend class Semiring;
  using Payload =
      std::variant<bool, std::uint64_t, double, std::optional<Derivation>, std::vector<Derivation>>;
  Value(SemiringId sid, Payload v) : sid_(sid), v_(std::move(v)) {}
  SemiringId sid_ = SemiringId::Boolean;
  Payload v_ = false;
};

class Semiring {
 public:
  static Semiring boolean();
  static Semiring counting();
  static Semiring inside(bool log_space = false);
  static Semiring viterbi(bool log_space = false);
  static Semiring viterbi_deriv();
  static Semiring viterbi_nbest(int n);
  static Semiring forest();
  // "boolean" | "counting" | "inside" | "viterbi" | "viterbi-deriv" |
  // "viterbi-nbest:<n>" | "forest"
  static Semiring from_flag(const std::string& flag);

  SemiringId id() const { return id_; }
  int nbest() const { return nbest_; }
  bool log_space() const { return log_space_; }
  std::string flag() const;

  // total order on values usable by best-first search
  bool ordered() const;
  // a (+) a = a
  bool idempotent() const;
  // value carries derivation structure that finalize() must root
  bool derivational() const;

  Value zero() const;
  Value one() const;
  Value plus(const Value& a, const Value& b) const;
  Value times(const Value& a, const Value& b) const;

  // Lift a grammar or input weight into the semiring.  axiom() attaches
  // the derivation leaf for the derivation-bearing semirings.
  Value weight(double w) const;
  Value axiom(double w, const Term& t) const;
  // Root the derivation fragment of a per-antecedent-set product at the
  // consequent.  Identity for non-derivational semirings.
  Value finalize(const Term& consequent, const Value& v) const;

  bool is_zero(const Value& v) const;
  // numeric magnitude: probability, count, 0/1 for booleans; n-best
  // values report the sum over their derivations
  double mass(const Value& v) const;
  bool equals(const Value& a, const Value& b) const;
  bool approx_equals(const Value& a, const Value& b, double rel_tol) const;
  // ordered semirings: -1 / 0 / +1 comparing a to b
  int compare(const Value& a, const Value& b) const;
  std::string str(const Value& v) const;

 private:
  Semiring(SemiringId id, int nbest, bool log_space)
      : id_(id), nbest_(nbest), log_space_(log_space) {}
  void check(const Value& v) const;
  SemiringId id_;
  int nbest_;
  bool log_space_;
};

}  // namespace semparse

#endif
