#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace convergo {

/// Description of a built-in group family. Element 0 is always the identity.
///
/// Element labelings:
///   cyclic(n)    residues 0..n-1
///   product      mixed radix, leftmost factor most significant
///   dihedral(n)  0..n-1 rotations r^j, n..2n-1 reflections r^j*s
///   symmetric(n) lexicographic rank of the one-line notation
///   cayley       as given (row-major table, 0-based, identity at 0)
struct GroupSpec {
  enum class Family { cyclic, product, dihedral, symmetric, cayley };

  Family family = Family::cyclic;
  int n = 1;
  std::vector<GroupSpec> factors;
  std::vector<std::vector<int>> table;

  static GroupSpec cyclic(int n);
  static GroupSpec product(std::vector<GroupSpec> factors);
  static GroupSpec dihedral(int n);
  static GroupSpec symmetric(int n);
  static GroupSpec cayley(std::vector<std::vector<int>> table);

  std::string name() const;
};

/// 5040 = 7!, the largest symmetric-group order we allow; dense |G|x|G|
/// matrices downstream make bigger groups pointless at desk scale.
inline constexpr int kMaxGroupOrder = 5040;

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

/// A finite group as a dense multiplication table over elements 0..order-1.
/// Immutable after construction; safe to share across threads.
class FiniteGroup {
 public:
  int order() const noexcept { return order_; }
  int mul(int x, int y) const {
    return mul_[static_cast<std::size_t>(x) * order_ + y];
  }
  int inv(int x) const { return inv_[x]; }
  int identity() const noexcept { return 0; }
  bool abelian() const noexcept { return abelian_; }
  const GroupSpec& spec() const noexcept { return spec_; }

  /// Family-specific digits of an element: cyclic {x}, product one digit per
  /// factor, dihedral {rotation, reflected}, symmetric the one-line notation.
  std::vector<int> decode(int x) const;
  std::string element_name(int x) const;

  FiniteGroup(const FiniteGroup&) = delete;
  FiniteGroup& operator=(const FiniteGroup&) = delete;

 private:
  FiniteGroup() = default;
  friend GroupPtr build_group(const GroupSpec& spec);

  int order_ = 1;
  std::vector<int> mul_;
  std::vector<int> inv_;
  bool abelian_ = true;
  GroupSpec spec_;
};

/// Builds a group from its spec. Throws InputError on size caps and on
/// malformed Cayley tables (non-Latin-square, wrong identity, non-associative).
GroupPtr build_group(const GroupSpec& spec);

/// Subgroup of a fixed parent group, stored as its sorted element set.
struct Subgroup {
  std::vector<int> elements;

  int order() const noexcept { return static_cast<int>(elements.size()); }
  bool contains(int x) const;
  bool operator==(const Subgroup&) const = default;
};

Subgroup trivial_subgroup(const FiniteGroup& g);
Subgroup whole_group(const FiniteGroup& g);
bool is_subgroup(const FiniteGroup& g, const Subgroup& h);
bool is_normal(const FiniteGroup& g, const Subgroup& h);

/// Least subgroup containing `gens`, by closure iteration.
Subgroup generated_subgroup(const FiniteGroup& g, std::span<const int> gens);

/// Least normal subgroup containing `gens`: closure of all conjugates.
Subgroup normal_closure(const FiniteGroup& g, std::span<const int> gens);

/// Least normal subgroup N with S ⊆ xN for some x, and one such x.
/// Computed as N = normal_closure(S⁻¹S), x = min(S).
struct NormalCoset {
  Subgroup subgroup;
  int representative = 0;
};
NormalCoset minimal_normal_coset(const FiniteGroup& g, std::span<const int> s);

int subgroup_index(const FiniteGroup& g, const Subgroup& h);

/// The subgroup as a standalone group (identity relabeled to 0, the rest in
/// parent order), plus the map back to parent element indices.
struct SubgroupGroup {
  GroupPtr group;
  std::vector<int> to_parent;
};
SubgroupGroup subgroup_as_group(const FiniteGroup& g, const Subgroup& h);

/// A maximal proper subgroup of an abelian group of order >= 2, obtained as
/// an index-p subgroup for the smallest prime p dividing |G|.
Subgroup maximal_proper_subgroup(const FiniteGroup& g);

}  // namespace convergo
