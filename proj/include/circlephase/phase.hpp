#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include <json.hpp>

namespace circlephase {

class PhaseTree;

struct ConstLeaf {
  double value;  // radians
};

struct IntLeaf {
  std::int64_t value;
};

/// Smooth transition from `lo` to `hi` centred at c(t) = (1+w) − t(1+2w)
/// with half-width w; at t = 0 the window lies right of [0,1] and at t = 1
/// left of it, so the path starts at lo and ends at hi exactly.
struct BlendNode;

/// Integer-valued cut: lo on [0, 1−t), hi on [1−t, 1].
struct SwitchNode;

/// Finitely represented nondecreasing phase function g on [0,1].
///
/// Smooth trees (Const / Blend) are C^∞ and map to h = e^{ig}; integer trees
/// (Int / Switch) are step functions and map to h = (−1)^g. Trees are
/// immutable and cheap to copy.
class PhaseTree {
 public:
  enum class Kind { Smooth, Integer };

  static PhaseTree constant(double value);
  static PhaseTree integer(std::int64_t value);

  /// No ordering check; callers must guarantee lo ⪯ hi.
  static PhaseTree blend_unchecked(PhaseTree lo, PhaseTree hi, double t, double w);
  static PhaseTree switch_unchecked(PhaseTree lo, PhaseTree hi, double t);

  Kind kind() const;
  bool is_smooth() const { return kind() == Kind::Smooth; }

  double operator()(double x) const;

  const ConstLeaf* as_const() const;
  const IntLeaf* as_int() const;
  const BlendNode* as_blend() const;
  const SwitchNode* as_switch() const;

  /// Longest root-to-leaf chain of Blend/Switch nodes.
  int depth() const;
  /// Number of Blend/Switch nodes.
  int internal_count() const;

 private:
  struct Node;
  explicit PhaseTree(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct BlendNode {
  PhaseTree lo;
  PhaseTree hi;
  double t;
  double w;
  double center;
};

struct SwitchNode {
  PhaseTree lo;
  PhaseTree hi;
  double t;
};

/// Window centre used by blends: c(t) = (1+w) − t(1+2w).
double blend_center(double t, double w);

double eval_g(const PhaseTree& tree, double x);
std::complex<double> eval_h(const PhaseTree& tree, double x);

/// Checked blend; throws PreconditionError unless leq(lo, hi), t ∈ [0,1],
/// w ∈ (0,1] and both trees are smooth.
PhaseTree blend(const PhaseTree& lo, const PhaseTree& hi, double t, double w);
/// Checked integer switch (the hard-switch path of integer step functions).
PhaseTree hard_switch(const PhaseTree& lo, const PhaseTree& hi, double t);

/// Adds kπ (smooth) or k (integer) to every leaf.
PhaseTree shift(const PhaseTree& tree, std::int64_t k);

/// Grid certificate of a ⪯ b: 4096 uniform points plus every window
/// boundary of both trees, tolerance 1e−12.
bool leq(const PhaseTree& a, const PhaseTree& b);

/// 1 + g(1) − g(0); throws UnsupportedKindError for integer trees.
double w11_norm(const PhaseTree& tree);

struct TransitionWindow {
  double center;
  double halfWidth;  // zero for integer switch points
  int depth;
};

/// Windows where some τ argument lies in (−1,1), restricted to the parts of
/// [0,1] where the owning subtree is actually selected; sorted by centre.
/// Outside them g is locally constant.
std::vector<TransitionWindow> transition_windows(const PhaseTree& tree);

/// Number of parity flips of an integer tree inside (0,1).
int sign_changes(const PhaseTree& tree);

nlohmann::json tree_to_json(const PhaseTree& tree);
/// Throws InputError on malformed input or an order-violating node.
PhaseTree tree_from_json(const nlohmann::json& j);

}  // namespace circlephase
