#include "valkit/numbers.hpp"

namespace valkit {

Rat rat_from_string(const std::string& text) {
  if (text.empty()) throw structural_error("empty rational literal");
  Rat q;
  if (q.set_str(text, 10) != 0) throw structural_error("bad rational literal: " + text);
  if (q.get_den() == 0) throw arithmetic_error("zero denominator in rational literal: " + text);
  q.canonicalize();
  return q;
}

std::string rat_to_string(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Int common_denominator(const std::vector<Rat>& values) {
  Int d = 1;
  for (const Rat& v : values) {
    Int l;
    mpz_lcm(l.get_mpz_t(), d.get_mpz_t(), v.get_den().get_mpz_t());
    d = l;
  }
  return d;
}

}  // namespace valkit
