#include "circlephase/phase.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "circlephase/errors.hpp"
#include "circlephase/smoothstep.hpp"

namespace circlephase {

using nlohmann::json;

struct PhaseTree::Node {
  std::variant<ConstLeaf, IntLeaf, BlendNode, SwitchNode> v;
  Kind kind;
};

PhaseTree PhaseTree::constant(double value) {
  return PhaseTree(std::make_shared<const Node>(Node{ConstLeaf{value}, Kind::Smooth}));
}

PhaseTree PhaseTree::integer(std::int64_t value) {
  return PhaseTree(std::make_shared<const Node>(Node{IntLeaf{value}, Kind::Integer}));
}

double blend_center(double t, double w) { return (1.0 + w) - t * (1.0 + 2.0 * w); }

PhaseTree PhaseTree::blend_unchecked(PhaseTree lo, PhaseTree hi, double t, double w) {
  const double c = blend_center(t, w);
  return PhaseTree(std::make_shared<const Node>(
      Node{BlendNode{std::move(lo), std::move(hi), t, w, c}, Kind::Smooth}));
}

PhaseTree PhaseTree::switch_unchecked(PhaseTree lo, PhaseTree hi, double t) {
  return PhaseTree(
      std::make_shared<const Node>(Node{SwitchNode{std::move(lo), std::move(hi), t}, Kind::Integer}));
}

PhaseTree::Kind PhaseTree::kind() const { return node_->kind; }

const ConstLeaf* PhaseTree::as_const() const { return std::get_if<ConstLeaf>(&node_->v); }
const IntLeaf* PhaseTree::as_int() const { return std::get_if<IntLeaf>(&node_->v); }
const BlendNode* PhaseTree::as_blend() const { return std::get_if<BlendNode>(&node_->v); }
const SwitchNode* PhaseTree::as_switch() const { return std::get_if<SwitchNode>(&node_->v); }

double PhaseTree::operator()(double x) const {
  const Node* n = node_.get();
  for (;;) {
    if (const auto* c = std::get_if<ConstLeaf>(&n->v)) return c->value;
    if (const auto* b = std::get_if<BlendNode>(&n->v)) {
      const double a = (x - b->center) / b->w;
      if (a <= -1.0) {
        n = b->lo.node_.get();
        continue;
      }
      if (a >= 1.0) {
        n = b->hi.node_.get();
        continue;
      }
      const double s = SmoothStep::standard()(a);
      return (1.0 - s) * b->lo(x) + s * b->hi(x);
    }
    if (const auto* i = std::get_if<IntLeaf>(&n->v)) return static_cast<double>(i->value);
    const auto& sw = std::get<SwitchNode>(n->v);
    n = (x < 1.0 - sw.t) ? sw.lo.node_.get() : sw.hi.node_.get();
  }
}

int PhaseTree::depth() const {
  if (const auto* b = as_blend()) return 1 + std::max(b->lo.depth(), b->hi.depth());
  if (const auto* s = as_switch()) return 1 + std::max(s->lo.depth(), s->hi.depth());
  return 0;
}

int PhaseTree::internal_count() const {
  if (const auto* b = as_blend()) return 1 + b->lo.internal_count() + b->hi.internal_count();
  if (const auto* s = as_switch()) return 1 + s->lo.internal_count() + s->hi.internal_count();
  return 0;
}

double eval_g(const PhaseTree& tree, double x) { return tree(x); }

std::complex<double> eval_h(const PhaseTree& tree, double x) {
  const double g = tree(x);
  if (tree.is_smooth()) return {std::cos(g), std::sin(g)};
  const auto k = static_cast<std::int64_t>(std::llround(g));
  return (k % 2 == 0) ? 1.0 : -1.0;
}

PhaseTree blend(const PhaseTree& lo, const PhaseTree& hi, double t, double w) {
  if (!lo.is_smooth() || !hi.is_smooth()) throw PreconditionError("blend requires smooth trees");
  if (!(t >= 0.0 && t <= 1.0)) throw PreconditionError("blend parameter t must lie in [0, 1]");
  if (!(w > 0.0 && w <= 1.0)) throw PreconditionError("blend width w must lie in (0, 1]");
  if (!leq(lo, hi)) throw PreconditionError("blend requires lo <= hi pointwise");
  return PhaseTree::blend_unchecked(lo, hi, t, w);
}

PhaseTree hard_switch(const PhaseTree& lo, const PhaseTree& hi, double t) {
  if (lo.is_smooth() || hi.is_smooth()) throw PreconditionError("hard switch requires integer trees");
  if (!(t >= 0.0 && t <= 1.0)) throw PreconditionError("switch parameter t must lie in [0, 1]");
  if (!leq(lo, hi)) throw PreconditionError("hard switch requires lo <= hi pointwise");
  return PhaseTree::switch_unchecked(lo, hi, t);
}

PhaseTree shift(const PhaseTree& tree, std::int64_t k) {
  if (const auto* c = tree.as_const()) {
    return PhaseTree::constant(c->value + static_cast<double>(k) * std::numbers::pi);
  }
  if (const auto* i = tree.as_int()) return PhaseTree::integer(i->value + k);
  if (const auto* b = tree.as_blend()) {
    return PhaseTree::blend_unchecked(shift(b->lo, k), shift(b->hi, k), b->t, b->w);
  }
  const SwitchNode& s = *tree.as_switch();
  return PhaseTree::switch_unchecked(shift(s.lo, k), shift(s.hi, k), s.t);
}

namespace {

void collect_windows(const PhaseTree& tree, double activeLo, double activeHi, int depth,
                     std::vector<TransitionWindow>& out) {
  if (activeHi <= activeLo) return;
  if (const auto* b = tree.as_blend()) {
    const double left = b->center - b->w;
    const double right = b->center + b->w;
    if (std::max(left, activeLo) < std::min(right, activeHi)) {
      out.push_back({b->center, b->w, depth});
    }
    collect_windows(b->lo, activeLo, std::min(activeHi, right), depth + 1, out);
    collect_windows(b->hi, std::max(activeLo, left), activeHi, depth + 1, out);
  } else if (const auto* s = tree.as_switch()) {
    const double cut = 1.0 - s->t;
    if (activeLo < cut && cut < activeHi) out.push_back({cut, 0.0, depth});
    collect_windows(s->lo, activeLo, std::min(activeHi, cut), depth + 1, out);
    collect_windows(s->hi, std::max(activeLo, cut), activeHi, depth + 1, out);
  }
}

void append_boundaries(const PhaseTree& tree, std::vector<double>& xs) {
  for (const TransitionWindow& win : transition_windows(tree)) {
    for (double x : {win.center - win.halfWidth, win.center + win.halfWidth}) {
      if (x >= 0.0 && x <= 1.0) {
        xs.push_back(x);
        if (x > 0.0) xs.push_back(std::nextafter(x, 0.0));
      }
    }
  }
}

}  // namespace

std::vector<TransitionWindow> transition_windows(const PhaseTree& tree) {
  std::vector<TransitionWindow> out;
  collect_windows(tree, 0.0, 1.0, 0, out);
  std::stable_sort(out.begin(), out.end(),
                   [](const TransitionWindow& a, const TransitionWindow& b) { return a.center < b.center; });
  return out;
}

bool leq(const PhaseTree& a, const PhaseTree& b) {
  constexpr int kGrid = 4096;
  std::vector<double> xs;
  xs.reserve(kGrid + 16);
  for (int i = 0; i < kGrid; ++i) xs.push_back(static_cast<double>(i) / (kGrid - 1));
  append_boundaries(a, xs);
  append_boundaries(b, xs);
  return std::all_of(xs.begin(), xs.end(), [&](double x) { return a(x) <= b(x) + 1e-12; });
}

double w11_norm(const PhaseTree& tree) {
  if (!tree.is_smooth()) throw UnsupportedKindError("W^{1,1} norm is defined for smooth trees only");
  return 1.0 + (tree(1.0) - tree(0.0));
}

int sign_changes(const PhaseTree& tree) {
  if (tree.is_smooth()) throw UnsupportedKindError("sign changes are defined for integer trees only");
  std::vector<double> cuts{0.0, 1.0};
  for (const TransitionWindow& win : transition_windows(tree)) cuts.push_back(win.center);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  int changes = 0;
  std::int64_t prevParity = -1;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const std::int64_t parity = std::llround(tree(mid)) & 1;
    if (prevParity >= 0 && parity != prevParity) ++changes;
    prevParity = parity;
  }
  return changes;
}

json tree_to_json(const PhaseTree& tree) {
  if (const auto* c = tree.as_const()) return json{{"const", c->value}};
  if (const auto* i = tree.as_int()) return json{{"int", i->value}};
  if (const auto* b = tree.as_blend()) {
    return json{{"blend", {{"lo", tree_to_json(b->lo)}, {"hi", tree_to_json(b->hi)}, {"t", b->t}, {"w", b->w}}}};
  }
  const SwitchNode& s = *tree.as_switch();
  return json{{"switch", {{"lo", tree_to_json(s.lo)}, {"hi", tree_to_json(s.hi)}, {"t", s.t}}}};
}

namespace {

PhaseTree tree_from_json_unchecked(const json& j) {
  if (!j.is_object() || j.size() != 1) throw InputError("phase tree node must be a single-key object");
  if (j.contains("const")) return PhaseTree::constant(j["const"].get<double>());
  if (j.contains("int")) return PhaseTree::integer(j["int"].get<std::int64_t>());
  if (j.contains("blend")) {
    const json& b = j["blend"];
    PhaseTree lo = tree_from_json_unchecked(b.at("lo"));
    PhaseTree hi = tree_from_json_unchecked(b.at("hi"));
    const double t = b.at("t").get<double>();
    const double w = b.at("w").get<double>();
    if (!lo.is_smooth() || !hi.is_smooth()) throw InputError("blend children must be smooth");
    if (!(t >= 0.0 && t <= 1.0) || !(w > 0.0 && w <= 1.0)) throw InputError("blend t/w out of range");
    return PhaseTree::blend_unchecked(std::move(lo), std::move(hi), t, w);
  }
  if (j.contains("switch")) {
    const json& s = j["switch"];
    PhaseTree lo = tree_from_json_unchecked(s.at("lo"));
    PhaseTree hi = tree_from_json_unchecked(s.at("hi"));
    const double t = s.at("t").get<double>();
    if (lo.is_smooth() || hi.is_smooth()) throw InputError("switch children must be integer trees");
    if (!(t >= 0.0 && t <= 1.0)) throw InputError("switch t out of range");
    return PhaseTree::switch_unchecked(std::move(lo), std::move(hi), t);
  }
  throw InputError("unknown phase tree node");
}

bool ordered_everywhere(const PhaseTree& tree) {
  if (const auto* b = tree.as_blend()) {
    return leq(b->lo, b->hi) && ordered_everywhere(b->lo) && ordered_everywhere(b->hi);
  }
  if (const auto* s = tree.as_switch()) {
    return leq(s->lo, s->hi) && ordered_everywhere(s->lo) && ordered_everywhere(s->hi);
  }
  return true;
}

}  // namespace

PhaseTree tree_from_json(const json& j) {
  PhaseTree tree = [&] {
    try {
      return tree_from_json_unchecked(j);
    } catch (const json::exception& e) {
      throw InputError(std::string("malformed phase tree: ") + e.what());
    }
  }();
  if (!ordered_everywhere(tree)) throw InputError("phase tree violates lo <= hi ordering");
  return tree;
}

}  // namespace circlephase
