#include "valkit/gamma.hpp"

#include <sstream>

#include "valkit/errors.hpp"

namespace valkit {

int Universe::axis_index(const std::string& name) const {
  for (int i = 0; i < main_rank(); ++i)
    if (axes[i] == name) return i;
  return -1;
}

int Universe::var_index(const std::string& name) const {
  for (int i = 0; i < var_count(); ++i)
    if (res_vars[i] == name) return i;
  return -1;
}

GammaElement GammaElement::zero(int main_rank, int inf_rank) {
  return GammaElement(std::vector<Rat>(main_rank, Rat(0)), std::vector<Rat>(inf_rank, Rat(0)));
}

GammaElement GammaElement::axis_unit(int main_rank, int axis, int inf_rank) {
  GammaElement g = zero(main_rank, inf_rank);
  g.main_.at(axis) = 1;
  return g;
}

GammaElement GammaElement::inf_unit(int main_rank, int inf_rank, int inf_axis) {
  GammaElement g = zero(main_rank, inf_rank);
  g.inf_.at(inf_axis) = 1;
  return g;
}

bool GammaElement::is_zero() const {
  for (const Rat& c : main_)
    if (c != 0) return false;
  for (const Rat& c : inf_)
    if (c != 0) return false;
  return true;
}

bool GammaElement::main_block_zero() const {
  for (const Rat& c : main_)
    if (c != 0) return false;
  return true;
}

namespace {
void check_ranks(const GammaElement& a, const GammaElement& b) {
  if (a.main_rank() != b.main_rank() || a.inf_rank() != b.inf_rank())
    throw structural_error("value-group rank mismatch: " + a.to_string() + " vs " + b.to_string());
}
}  // namespace

GammaElement GammaElement::operator+(const GammaElement& other) const {
  check_ranks(*this, other);
  GammaElement out = *this;
  for (int i = 0; i < main_rank(); ++i) out.main_[i] += other.main_[i];
  for (int i = 0; i < inf_rank(); ++i) out.inf_[i] += other.inf_[i];
  return out;
}

GammaElement GammaElement::operator-(const GammaElement& other) const {
  return *this + (-other);
}

GammaElement GammaElement::operator-() const {
  GammaElement out = *this;
  for (Rat& c : out.main_) c = -c;
  for (Rat& c : out.inf_) c = -c;
  return out;
}

GammaElement GammaElement::scaled(const Rat& factor) const {
  GammaElement out = *this;
  for (Rat& c : out.main_) c *= factor;
  for (Rat& c : out.inf_) c *= factor;
  return out;
}

bool GammaElement::operator==(const GammaElement& other) const {
  return main_ == other.main_ && inf_ == other.inf_;
}

std::string GammaElement::to_string() const {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < main_rank(); ++i) {
    if (i) os << ",";
    os << rat_to_string(main_[i]);
  }
  if (!inf_.empty()) {
    os << "|";
    for (int i = 0; i < inf_rank(); ++i) {
      if (i) os << ",";
      os << rat_to_string(inf_[i]);
    }
  }
  os << ")";
  return os.str();
}

Ordering lex_compare(const GammaElement& a, const GammaElement& b) {
  check_ranks(a, b);
  for (int i = 0; i < a.main_rank(); ++i) {
    int c = cmp(a.main_[i], b.main_[i]);
    if (c < 0) return Ordering::less;
    if (c > 0) return Ordering::greater;
  }
  for (int i = 0; i < a.inf_rank(); ++i) {
    int c = cmp(a.inf_[i], b.inf_[i]);
    if (c < 0) return Ordering::less;
    if (c > 0) return Ordering::greater;
  }
  return Ordering::equal;
}

const GammaElement& lex_min(const GammaElement& a, const GammaElement& b) {
  return lex_compare(b, a) == Ordering::less ? b : a;
}

std::vector<Rat> flatten(const GammaElement& g) {
  std::vector<Rat> out = g.main();
  out.insert(out.end(), g.inf().begin(), g.inf().end());
  return out;
}

GammaElement unflatten(const std::vector<Rat>& coords, int main_rank, int inf_rank) {
  if (static_cast<int>(coords.size()) != main_rank + inf_rank)
    throw structural_error("unflatten: coordinate count mismatch");
  std::vector<Rat> main(coords.begin(), coords.begin() + main_rank);
  std::vector<Rat> inf(coords.begin() + main_rank, coords.end());
  return GammaElement(std::move(main), std::move(inf));
}

}  // namespace valkit
