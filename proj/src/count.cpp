#include "amc/count.hpp"

#include <cmath>
#include <limits>

namespace amc {

Count pow2(std::int64_t e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  if (e >= 0) return Count(p);
  return Count(mpz_class(1), p);
}

std::string to_string(const Count& c) {
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

namespace {

double log2_mpz(const mpz_class& z) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log2(mant) + static_cast<double>(exp);
}

}  // namespace

double log2(const Count& c) {
  if (sgn(c) == 0) return -std::numeric_limits<double>::infinity();
  return log2_mpz(c.get_num()) - log2_mpz(c.get_den());
}

bool is_integer(const Count& c) { return c.get_den() == 1; }

Count count_from_string(const std::string& s) {
  Count c(s, 10);
  c.canonicalize();
  return c;
}

}  // namespace amc
