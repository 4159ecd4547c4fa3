#include "semparse/semiring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace semparse {

namespace {

constexpr double kLogZero = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// higher probability first, then lexicographically least key
bool better(const Derivation& a, const Derivation& b) {
  if (a.prob != b.prob) return a.prob > b.prob;
  return a.key < b.key;
}

Derivation times_deriv(const Derivation& a, const Derivation& b) {
  Derivation out;
  out.prob = a.prob * b.prob;
  out.nodes.reserve(a.nodes.size() + b.nodes.size());
  out.nodes.insert(out.nodes.end(), a.nodes.begin(), a.nodes.end());
  out.nodes.insert(out.nodes.end(), b.nodes.begin(), b.nodes.end());
  out.key = a.key + b.key;
  return out;
}

// merge, dedup by key, keep the n best
std::vector<Derivation> top_n(std::vector<Derivation> all, int n) {
  std::stable_sort(all.begin(), all.end(), better);
  std::vector<Derivation> out;
  for (auto& d : all) {
    if (d.prob <= 0.0) continue;
    bool dup = false;
    for (const auto& kept : out) dup = dup || kept.key == d.key;
    if (dup) continue;
    out.push_back(std::move(d));
    if (static_cast<int>(out.size()) == n) break;
  }
  return out;
}

}  // namespace

DerivPtr DerivNode::leaf(const Term& t) {
  auto n = std::make_shared<DerivNode>();
  n->term = t;
  n->key = t.sig();
  return n;
}

DerivPtr DerivNode::node(const Term& t, std::vector<DerivPtr> children) {
  auto n = std::make_shared<DerivNode>();
  n->term = t;
  n->key = t.sig() + "(";
  for (const auto& c : children) n->key += c->key;
  n->key += ")";
  n->children = std::move(children);
  return n;
}

Semiring Semiring::boolean() { return Semiring(SemiringId::Boolean, 0, false); }
Semiring Semiring::counting() { return Semiring(SemiringId::Counting, 0, false); }
Semiring Semiring::inside(bool log_space) { return Semiring(SemiringId::Inside, 0, log_space); }
Semiring Semiring::viterbi(bool log_space) { return Semiring(SemiringId::Viterbi, 0, log_space); }
Semiring Semiring::viterbi_deriv() { return Semiring(SemiringId::ViterbiDeriv, 1, false); }
Semiring Semiring::viterbi_nbest(int n) {
  if (n < 1) throw std::runtime_error("viterbi-nbest needs n >= 1");
  return Semiring(SemiringId::ViterbiNBest, n, false);
}
Semiring Semiring::forest() { return Semiring(SemiringId::Forest, 0, false); }

Semiring Semiring::from_flag(const std::string& flag) {
  if (flag == "boolean") return boolean();
  if (flag == "counting") return counting();
  if (flag == "inside") return inside();
  if (flag == "viterbi") return viterbi();
  if (flag == "viterbi-deriv") return viterbi_deriv();
  if (flag == "forest") return forest();
  if (flag.rfind("viterbi-nbest:", 0) == 0) return viterbi_nbest(std::stoi(flag.substr(14)));
  throw std::runtime_error("unknown semiring: " + flag);
}

std::string Semiring::flag() const {
  switch (id_) {
    case SemiringId::Boolean: return "boolean";
    case SemiringId::Counting: return "counting";
    case SemiringId::Inside: return "inside";
    case SemiringId::Viterbi: return "viterbi";
    case SemiringId::ViterbiDeriv: return "viterbi-deriv";
    case SemiringId::ViterbiNBest: return "viterbi-nbest:" + std::to_string(nbest_);
    case SemiringId::Forest: return "forest";
  }
  return "?";
}

bool Semiring::ordered() const {
  return id_ == SemiringId::Inside || id_ == SemiringId::Viterbi ||
         id_ == SemiringId::ViterbiDeriv || id_ == SemiringId::ViterbiNBest;
}

bool Semiring::idempotent() const {
  return id_ == SemiringId::Boolean || id_ == SemiringId::Viterbi ||
         id_ == SemiringId::ViterbiDeriv || id_ == SemiringId::Forest;
}

bool Semiring::derivational() const {
  return id_ == SemiringId::ViterbiDeriv || id_ == SemiringId::ViterbiNBest;
}

void Semiring::check(const Value& v) const {
  if (v.sid() != id_)
    throw std::logic_error("semiring contract violation: value from another semiring");
}

Value Semiring::zero() const {
  switch (id_) {
    case SemiringId::Boolean:
    case SemiringId::Forest: return Value(id_, false);
    case SemiringId::Counting: return Value(id_, std::uint64_t{0});
    case SemiringId::Inside:
    case SemiringId::Viterbi: return Value(id_, log_space_ ? kLogZero : 0.0);
    case SemiringId::ViterbiDeriv: return Value(id_, std::optional<Derivation>());
    case SemiringId::ViterbiNBest: return Value(id_, std::vector<Derivation>());
  }
  return Value(id_, false);
}

Value Semiring::one() const { return weight(1.0); }

Value Semiring::weight(double w) const {
  switch (id_) {
    case SemiringId::Boolean:
    case SemiringId::Forest: return Value(id_, w != 0.0);
    case SemiringId::Counting: return Value(id_, std::uint64_t{w != 0.0 ? 1u : 0u});
    case SemiringId::Inside:
    case SemiringId::Viterbi: return Value(id_, log_space_ ? std::log(w) : w);
    case SemiringId::ViterbiDeriv: {
      if (w == 0.0) return zero();
      return Value(id_, std::optional<Derivation>(Derivation{w, {}, ""}));
    }
    case SemiringId::ViterbiNBest: {
      if (w == 0.0) return zero();
      return Value(id_, std::vector<Derivation>{Derivation{w, {}, ""}});
    }
  }
  return zero();
}

Value Semiring::axiom(double w, const Term& t) const {
  if (!derivational() || w == 0.0) return weight(w);
  Derivation d{w, {DerivNode::leaf(t)}, t.sig()};
  if (id_ == SemiringId::ViterbiDeriv) return Value(id_, std::optional<Derivation>(d));
  return Value(id_, std::vector<Derivation>{d});
}

Value Semiring::finalize(const Term& consequent, const Value& v) const {
  check(v);
  if (!derivational() || is_zero(v)) return v;
  auto root = [&](const Derivation& d) {
    DerivPtr n = DerivNode::node(consequent, d.nodes);
    return Derivation{d.prob, {n}, n->key};
  };
  if (id_ == SemiringId::ViterbiDeriv)
    return Value(id_, std::optional<Derivation>(root(*v.as_deriv())));
  std::vector<Derivation> out;
  out.reserve(v.as_nbest().size());
  for (const auto& d : v.as_nbest()) out.push_back(root(d));
  return Value(id_, std::move(out));
}

Value Semiring::plus(const Value& a, const Value& b) const {
  check(a);
  check(b);
  switch (id_) {
    case SemiringId::Boolean:
    case SemiringId::Forest: return Value(id_, a.as_bool() || b.as_bool());
    case SemiringId::Counting: return Value(id_, a.as_count() + b.as_count());
    case SemiringId::Inside:
      return Value(id_, log_space_ ? log_add(a.as_real(), b.as_real())
                                   : a.as_real() + b.as_real());
    case SemiringId::Viterbi: return Value(id_, std::max(a.as_real(), b.as_real()));
    case SemiringId::ViterbiDeriv: {
      const auto& da = a.as_deriv();
      const auto& db = b.as_deriv();
      if (!da) return b;
      if (!db) return a;
      return better(*da, *db) ? a : b;
    }
    case SemiringId::ViterbiNBest: {
      std::vector<Derivation> all = a.as_nbest();
      all.insert(all.end(), b.as_nbest().begin(), b.as_nbest().end());
      return Value(id_, top_n(std::move(all), nbest_));
    }
  }
  return zero();
}

Value Semiring::times(const Value& a, const Value& b) const {
  check(a);
  check(b);
  switch (id_) {
    case SemiringId::Boolean:
    case SemiringId::Forest: return Value(id_, a.as_bool() && b.as_bool());
    case SemiringId::Counting: return Value(id_, a.as_count() * b.as_count());
    case SemiringId::Inside:
    case SemiringId::Viterbi:
      return Value(id_, log_space_ ? a.as_real() + b.as_real() : a.as_real() * b.as_real());
    case SemiringId::ViterbiDeriv: {
      const auto& da = a.as_deriv();
      const auto& db = b.as_deriv();
      if (!da || !db) return zero();
      return Value(id_, std::optional<Derivation>(times_deriv(*da, *db)));
    }
    case SemiringId::ViterbiNBest: {
      std::vector<Derivation> all;
      for (const auto& da : a.as_nbest())
        for (const auto& db : b.as_nbest()) all.push_back(times_deriv(da, db));
      return Value(id_, top_n(std::move(all), nbest_));
    }
  }
  return zero();
}

bool Semiring::is_zero(const Value& v) const {
  check(v);
  switch (id_) {
    case SemiringId::Boolean:
    case SemiringId::Forest: return !v.as_bool();
    case SemiringId::Counting: return v.as_count() == 0;
    case SemiringId::Inside:
    case SemiringId::Viterbi: return log_space_ ? v.as_real() == kLogZero : v.as_real() == 0.0;
    case SemiringId::ViterbiDeriv: return !v.as_deriv().has_value();
    case SemiringId::ViterbiNBest: return v.as_nbest().empty();
  }
  return true;
}

double Semiring::mass(const Value& v) const {
  check(v);
  switch (id_) {
    case SemiringId::Boolean:
    case SemiringId::Forest: return v.as_bool() ? 1.0 : 0.0;
    case SemiringId::Counting: return static_cast<double>(v.as_count());
    case SemiringId::Inside:
    case SemiringId::Viterbi: return log_space_ ? std::exp(v.as_real()) : v.as_real();
    case SemiringId::ViterbiDeriv: return v.as_deriv() ? v.as_deriv()->prob : 0.0;
    case SemiringId::ViterbiNBest: {
      double total = 0.0;
      for (const auto& d : v.as_nbest()) total += d.prob;
      return total;
    }
  }
  return 0.0;
}

bool Semiring::equals(const Value& a, const Value& b) const {
  check(a);
  check(b);
  switch (id_) {
    case SemiringId::Boolean:
    case SemiringId::Forest: return a.as_bool() == b.as_bool();
    case SemiringId::Counting: return a.as_count() == b.as_count();
    case SemiringId::Inside:
    case SemiringId::Viterbi: return a.as_real() == b.as_real();
    case SemiringId::ViterbiDeriv: return a.as_deriv() == b.as_deriv();
    case SemiringId::ViterbiNBest: return a.as_nbest() == b.as_nbest();
  }
  return false;
}

bool Semiring::approx_equals(const Value& a, const Value& b, double rel_tol) const {
  auto close = [rel_tol](double x, double y) {
    double scale = std::max({std::abs(x), std::abs(y), 1e-300});
    return std::abs(x - y) <= rel_tol * scale;
  };
  switch (id_) {
    case SemiringId::Inside:
    case SemiringId::Viterbi: return close(mass(a), mass(b));
    case SemiringId::ViterbiDeriv: {
      check(a);
      check(b);
      const auto& da = a.as_deriv();
      const auto& db = b.as_deriv();
      if (!da || !db) return da.has_value() == db.has_value();
      return da->key == db->key && close(da->prob, db->prob);
    }
    case SemiringId::ViterbiNBest: {
      check(a);
      check(b);
      // order is probability-driven and may wobble with rounding, so
      // compare as key-sorted sets
      auto sorted = [](std::vector<Derivation> v) {
        std::sort(v.begin(), v.end(),
                  [](const Derivation& x, const Derivation& y) { return x.key < y.key; });
        return v;
      };
      auto va = sorted(a.as_nbest()), vb = sorted(b.as_nbest());
      if (va.size() != vb.size()) return false;
      for (size_t i = 0; i < va.size(); ++i)
        if (va[i].key != vb[i].key || !close(va[i].prob, vb[i].prob)) return false;
      return true;
    }
    default: return equals(a, b);
  }
}

int Semiring::compare(const Value& a, const Value& b) const {
  if (!ordered()) throw std::logic_error("semiring " + flag() + " is not ordered");
  double ma = mass(a), mb = mass(b);
  if (ma < mb) return -1;
  if (ma > mb) return 1;
  return 0;
}

std::string Semiring::str(const Value& v) const {
  check(v);
  std::ostringstream os;
  switch (id_) {
    case SemiringId::Boolean:
    case SemiringId::Forest: os << (v.as_bool() ? "true" : "false"); break;
    case SemiringId::Counting: os << v.as_count(); break;
    case SemiringId::Inside:
    case SemiringId::Viterbi: os << mass(v); break;
    case SemiringId::ViterbiDeriv:
      os << (v.as_deriv() ? v.as_deriv()->prob : 0.0);
      break;
    case SemiringId::ViterbiNBest: {
      os << '{';
      for (size_t i = 0; i < v.as_nbest().size(); ++i) {
        if (i) os << ',';
        os << v.as_nbest()[i].prob;
      }
      os << '}';
      break;
    }
  }
  return os.str();
}

}  // namespace semparse
