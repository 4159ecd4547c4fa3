#include "semparse/chart.hpp"

#include <algorithm>

namespace semparse {

Value Chart::value(const Term& t) const {
  auto it = entries_.find(t);
  return it == entries_.end() ? semiring_.zero() : it->second.value;
}

std::uint64_t Chart::version(const Term& t) const {
  auto it = entries_.find(t);
  return it == entries_.end() ? 0 : it->second.version;
}

const std::set<AntSet>* Chart::ant_sets(const Term& t) const {
  auto it = entries_.find(t);
  return it == entries_.end() ? nullptr : &it->second.ant_sets;
}

bool Chart::is_axiom(const Term& t) const {
  auto it = entries_.find(t);
  return it != entries_.end() && it->second.axiom;
}

Chart::Entry& Chart::materialize(const Term& t) {
  auto [it, fresh] = entries_.try_emplace(t);
  if (fresh) {
    it->second.value = semiring_.zero();
    it->second.axiom_value = semiring_.zero();
    note_new_item(t);
  }
  return it->second;
}

void Chart::note_new_item(const Term& t) {
  if (t.kind() == TermKind::Nonterminal) {
    if (t.reverse())
      reverse_items_.push_back(t);
    else
      forward_items_.push_back(t);
  } else if (t.kind() == TermKind::Terminal && !t.reverse()) {
    terminal_axioms_.push_back(t);
  }
}

void Chart::init_axiom(const Term& t, double weight) {
  Entry& e = materialize(t);
  e.axiom = true;
  e.axiom_value = semiring_.axiom(weight, t);
  double old_mass = semiring_.mass(e.value);
  bool had_old = !semiring_.is_zero(e.value);
  e.value = e.ant_sets.empty() ? e.axiom_value : recompute(t, e);
  ++e.version;
  update_class_index(t, old_mass, semiring_.mass(e.value), had_old);
}

Value Chart::recompute(const Term& t, const Entry& e) const {
  Value v = e.axiom ? e.axiom_value : semiring_.zero();
  for (const auto& ants : e.ant_sets) {
    Value product = semiring_.one();
    for (const auto& x : ants) product = semiring_.times(product, value(x));
    v = semiring_.plus(v, semiring_.finalize(t, product));
  }
  return v;
}

bool Chart::add_ant_set(const Term& y, const AntSet& ants, bool incremental) {
  Entry& e = materialize(y);
  bool fresh = e.ant_sets.insert(ants).second;
  Value next;
  if (incremental && semiring_.idempotent()) {
    if (!fresh) return false;
    Value product = semiring_.one();
    for (const auto& x : ants) product = semiring_.times(product, value(x));
    next = semiring_.plus(e.value, semiring_.finalize(y, product));
  } else {
    next = recompute(y, e);
  }
  if (semiring_.equals(next, e.value)) return false;
  double old_mass = semiring_.mass(e.value);
  bool had_old = !semiring_.is_zero(e.value) || e.version > 0;
  e.value = std::move(next);
  ++e.version;
  update_class_index(y, old_mass, semiring_.mass(e.value), had_old);
  return true;
}

bool Chart::remove_ant_set(const Term& y, const AntSet& ants) {
  auto it = entries_.find(y);
  if (it == entries_.end()) {
    materialize(y);  // the consequent stays at zero but becomes visible
    return false;
  }
  Entry& e = it->second;
  if (e.ant_sets.erase(ants) == 0) return false;
  Value next = recompute(y, e);
  if (semiring_.equals(next, e.value)) return false;
  double old_mass = semiring_.mass(e.value);
  e.value = std::move(next);
  ++e.version;
  update_class_index(y, old_mass, semiring_.mass(e.value), true);
  return true;
}

std::vector<Term> Chart::all_terms() const {
  std::vector<Term> out;
  out.reserve(entries_.size());
  for (const auto& [t, e] : entries_) out.push_back(t);
  std::sort(out.begin(), out.end());
  return out;
}

void Chart::update_class_index(const Term& t, double old_mass, double new_mass, bool had_old) {
  if (!t.is_forward_item()) return;
  auto& masses = class_masses_[{t.activity_mask(), t.total_width()}];
  if (had_old) {
    auto it = std::find(masses.begin(), masses.end(), old_mass);
    if (it != masses.end()) masses.erase(it);
  }
  masses.push_back(new_mass);
}

double Chart::best_in_class(unsigned activity, int width) const {
  auto it = class_masses_.find({activity, width});
  if (it == class_masses_.end() || it->second.empty()) return 0.0;
  return *std::max_element(it->second.begin(), it->second.end());
}

const std::vector<double>* Chart::class_masses(unsigned activity, int width) const {
  auto it = class_masses_.find({activity, width});
  return it == class_masses_.end() ? nullptr : &it->second;
}

bool Chart::consistent(double rel_tol) const {
  for (const auto& [t, e] : entries_) {
    Value expect = recompute(t, e);
    if (!semiring_.approx_equals(expect, e.value, rel_tol)) return false;
  }
  return true;
}

}  // namespace semparse
