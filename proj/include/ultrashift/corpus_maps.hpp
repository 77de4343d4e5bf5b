// Map presentations of the built-in fixtures.
#pragma once

#include <memory>

#include "ultrashift/corpus_graphs.hpp"
#include "ultrashift/map.hpp"

namespace ultrashift::corpus {

inline int emitter_named(const ShiftSpace& sp, const std::string& name) {
  auto set = sp.graph().named_set(name);
  if (!set) throw Error(ErrorKind::Semantic, "no named set " + name + " in " + sp.name());
  auto id = sp.emitter_id(*set);
  if (!id) throw Error(ErrorKind::Semantic, name + " is not a minimal infinite emitter of " + sp.name());
  return *id;
}

inline Pattern schema(std::vector<Atom> atoms, IndexSet param = IndexSet::all(), std::size_t anchor = 1) {
  return {anchor, std::move(atoms), param};
}

inline OracleItem oracle(std::string name, RuleFn fn) {
  return {std::move(name), std::make_shared<const RuleFn>(std::move(fn))};
}

/// C_B = [A] ∪ [rep(d) A] ∪ {ddd...}; C_{e_j} = [f_j] ∪ [rep(d) f_j].
inline MapPresentation example_a_map() {
  MapPresentation m{"Phi", ShiftSpace(example_a_source()), ShiftSpace(example_a_target()), {}};
  const Symbol a = Symbol::emitter_symbol(emitter_named(m.source, "A"));
  const Symbol d = Symbol::of(EdgeRef{0, 0});
  MapClass cb{ClassTarget::fixed(Symbol::emitter_symbol(emitter_named(m.target, "B"))), IndexSet::all(), {}};
  cb.items.push_back(schema({Atom::literal(a)}));
  cb.items.push_back(schema({Atom::rep(d), Atom::literal(a)}));
  cb.items.push_back(PointItem{Point::periodic({}, {d.edge}), std::nullopt});
  MapClass ce{ClassTarget::of_family(0), IndexSet::at_least(1), {}};
  ce.items.push_back(schema({Atom::of_family(1)}, IndexSet::at_least(1)));
  ce.items.push_back(schema({Atom::rep(d), Atom::of_family(1)}, IndexSet::at_least(1)));
  m.classes = {cb, ce};
  return m;
}

/// Φ(x)_1 for Example b: x_1 when it is a nonzero edge, A on A or an
/// all-zero tail, otherwise k where x_1..x_{k+1} = 0 and x_{k+2} != 0.
inline Symbol example_b_rule(const Point& x, int emitter) {
  Symbol s = x.coordinate(1);
  if (s.is_emitter()) return Symbol::emitter_symbol(emitter);
  if (s.edge.index != 0) return s;
  auto zeros = x.run_length(1, [](const Symbol& t) { return t.is_edge() && t.edge.index == 0; });
  if (!zeros) return Symbol::emitter_symbol(emitter);
  return Symbol::of(EdgeRef{0, static_cast<Index>(*zeros) - 1});
}

inline MapPresentation example_b_map() {
  ShiftSpace sp(example_b_graph());
  MapPresentation m{"Phi", sp, sp, {}};
  const int a = emitter_named(sp, "A");
  auto rule = oracle("example-b", [a](const Point& x) { return example_b_rule(x, a); });
  m.classes.push_back({ClassTarget::fixed(Symbol::emitter_symbol(a)), IndexSet::all(), {rule}});
  m.classes.push_back({ClassTarget::of_family(0), IndexSet::at_least(0), {rule}});
  return m;
}

/// Φ(x)_1 for Example d: P on an all-e_0 tail, f_{-k} after exactly k
/// leading e_0, f_k on e_k (k != 0), Q on A.
inline Symbol example_d_rule(const Point& x, int p, int q) {
  Symbol s = x.coordinate(1);
  if (s.is_emitter()) return Symbol::emitter_symbol(q);
  if (s.edge.index != 0) return Symbol::of(EdgeRef{0, s.edge.index});
  auto zeros = x.run_length(1, [](const Symbol& t) { return t.is_edge() && t.edge.index == 0; });
  if (!zeros) return Symbol::emitter_symbol(p);
  return Symbol::of(EdgeRef{0, -static_cast<Index>(*zeros)});
}

inline MapPresentation example_d_map() {
  MapPresentation m{"Phi", ShiftSpace(example_d_source()), ShiftSpace(example_d_target()), {}};
  const int p = emitter_named(m.target, "P"), q = emitter_named(m.target, "Q");
  auto rule = oracle("example-d", [p, q](const Point& x) { return example_d_rule(x, p, q); });
  m.classes.push_back({ClassTarget::fixed(Symbol::emitter_symbol(p)), IndexSet::all(), {rule}});
  m.classes.push_back({ClassTarget::fixed(Symbol::emitter_symbol(q)), IndexSet::all(), {rule}});
  m.classes.push_back({ClassTarget::of_family(0), domains::nonzero(), {rule}});
  return m;
}

/// C_{e_k} = [f_k] (k >= 1), C_{e_0} = [f_j] (j <= -1) ∪ [P], C_A = [Q].
inline MapPresentation example_d_inverse() {
  MapPresentation m{"PhiInv", ShiftSpace(example_d_target()), ShiftSpace(example_d_source()), {}};
  const Symbol p = Symbol::emitter_symbol(emitter_named(m.source, "P"));
  const Symbol q = Symbol::emitter_symbol(emitter_named(m.source, "Q"));
  const Symbol a = Symbol::emitter_symbol(emitter_named(m.target, "A"));
  MapClass ek{ClassTarget::of_family(0), IndexSet::at_least(1), {schema({Atom::of_family(0)}, IndexSet::at_least(1))}};
  MapClass e0{ClassTarget::fixed(Symbol::of(EdgeRef{0, 0})), IndexSet::all(),
              {schema({Atom::of_family(0)}, IndexSet::at_most(-1)), schema({Atom::literal(p)})}};
  MapClass ca{ClassTarget::fixed(a), IndexSet::all(), {schema({Atom::literal(q)})}};
  m.classes = {ek, e0, ca};
  return m;
}

/// Example c, cylinder branch: C_{e_1} = [d], C_{e_{j+1}} = [f_j], C_B = [A].
inline MapPresentation example_c1_map() {
  MapPresentation m{"Phi", ShiftSpace(example_a_source()), ShiftSpace(example_a_target()), {}};
  const Symbol a = Symbol::emitter_symbol(emitter_named(m.source, "A"));
  const Symbol b = Symbol::emitter_symbol(emitter_named(m.target, "B"));
  m.classes.push_back({ClassTarget::fixed(b), IndexSet::all(), {schema({Atom::literal(a)})}});
  m.classes.push_back({ClassTarget::fixed(Symbol::of(EdgeRef{0, 1})), IndexSet::all(), {schema({Atom::literal(EdgeRef{0, 0})})}});
  m.classes.push_back({ClassTarget::of_family(0, AffineIndexMap::shift(1)), IndexSet::at_least(1),
                       {schema({Atom::of_family(1)}, IndexSet::at_least(1))}});
  return m;
}

/// Example c, violating branch: C_{e_1} = D_{A,{f_1}}, C_{e_2} = [f_1], so
/// Φ(AAA...) = (e_1 e_1 ...) but σ(D_{A,F}) ⊄ C_{e_1} for every finite F.
inline MapPresentation example_c2_map() {
  MapPresentation m{"Phi", ShiftSpace(example_a_source()), ShiftSpace(example_a_target()), {}};
  const Symbol a = Symbol::emitter_symbol(emitter_named(m.source, "A"));
  MapClass e1{ClassTarget::fixed(Symbol::of(EdgeRef{0, 1})), IndexSet::all(),
              {schema({Atom::literal(a)}), schema({Atom::literal(EdgeRef{0, 0})}),
               schema({Atom::of_family(1)}, IndexSet::at_least(2))}};
  MapClass e2{ClassTarget::fixed(Symbol::of(EdgeRef{0, 2})), IndexSet::all(), {schema({Atom::literal(EdgeRef{1, 1})})}};
  m.classes = {e1, e2};
  return m;
}

/// Φ ≡ (e_1 e_1 ...) on Example a's source.
inline MapPresentation constant_map() {
  MapPresentation m{"Const", ShiftSpace(example_a_source()), ShiftSpace(example_a_target()), {}};
  m.classes.push_back({ClassTarget::fixed(Symbol::of(EdgeRef{0, 1})), IndexSet::all(), {schema({Atom::any()})}});
  return m;
}

/// Identity on Example a's source.
inline MapPresentation identity_map() {
  ShiftSpace sp(example_a_source());
  MapPresentation m{"Id", sp, sp, {}};
  const Symbol a = Symbol::emitter_symbol(emitter_named(sp, "A"));
  m.classes.push_back({ClassTarget::fixed(Symbol::of(EdgeRef{0, 0})), IndexSet::all(), {schema({Atom::literal(EdgeRef{0, 0})})}});
  m.classes.push_back({ClassTarget::of_family(1), IndexSet::at_least(1), {schema({Atom::of_family(1)}, IndexSet::at_least(1))}});
  m.classes.push_back({ClassTarget::fixed(a), IndexSet::all(), {schema({Atom::literal(a)})}});
  return m;
}

}  // namespace ultrashift::corpus
