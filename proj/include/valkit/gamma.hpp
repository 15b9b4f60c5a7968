#ifndef VALKIT_GAMMA_HPP
#define VALKIT_GAMMA_HPP

#include <compare>
#include <string>
#include <vector>

#include "valkit/numbers.hpp"

namespace valkit {

/// Ambient universe: named series axes (most significant first), a count of
/// infinitesimal axes sitting below every main axis, named residue-field
/// transcendentals, and the default precision cap used when an operation
/// must truncate.
struct Universe {
  std::vector<std::string> axes;
  int inf_rank = 0;
  std::vector<std::string> res_vars;
  long precision_cap = 8;

  int main_rank() const { return static_cast<int>(axes.size()); }
  int var_count() const { return static_cast<int>(res_vars.size()); }

  int axis_index(const std::string& name) const;
  int var_index(const std::string& name) const;
};

enum class Ordering { less, equal, greater };

/// Element of the value group: one exact rational per main axis followed by
/// one per infinitesimal axis. Earlier coordinates dominate; every
/// infinitesimal coordinate is dominated by every main coordinate.
class GammaElement {
 public:
  GammaElement() = default;
  GammaElement(std::vector<Rat> main, std::vector<Rat> inf = {})
      : main_(std::move(main)), inf_(std::move(inf)) {}

  static GammaElement zero(int main_rank, int inf_rank = 0);
  // Unit vector on a main axis.
  static GammaElement axis_unit(int main_rank, int axis, int inf_rank = 0);
  // Unit vector on an infinitesimal axis.
  static GammaElement inf_unit(int main_rank, int inf_rank, int inf_axis);

  const std::vector<Rat>& main() const { return main_; }
  const std::vector<Rat>& inf() const { return inf_; }
  int main_rank() const { return static_cast<int>(main_.size()); }
  int inf_rank() const { return static_cast<int>(inf_.size()); }

  bool is_zero() const;
  bool main_block_zero() const;

  GammaElement operator+(const GammaElement& other) const;
  GammaElement operator-(const GammaElement& other) const;
  GammaElement operator-() const;
  GammaElement scaled(const Rat& factor) const;

  bool operator==(const GammaElement& other) const;

  std::string to_string() const;

 private:
  std::vector<Rat> main_;
  std::vector<Rat> inf_;

  friend Ordering lex_compare(const GammaElement& a, const GammaElement& b);
};

/// Total order: main block first, coordinatewise most-significant-first,
/// then the infinitesimal block. Throws structural_error on rank mismatch.
Ordering lex_compare(const GammaElement& a, const GammaElement& b);

inline bool lex_less(const GammaElement& a, const GammaElement& b) {
  return lex_compare(a, b) == Ordering::less;
}
inline bool lex_leq(const GammaElement& a, const GammaElement& b) {
  return lex_compare(a, b) != Ordering::greater;
}

const GammaElement& lex_min(const GammaElement& a, const GammaElement& b);

// Flattened coordinates (main then inf); used by the lattice routines.
std::vector<Rat> flatten(const GammaElement& g);
GammaElement unflatten(const std::vector<Rat>& coords, int main_rank, int inf_rank);

}  // namespace valkit

#endif
