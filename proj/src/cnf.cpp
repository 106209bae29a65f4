#include "amc/cnf.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "amc/errors.hpp"

namespace amc {

namespace {

// Sorts and dedupes in place; returns false for a tautology.
bool normalize_clause(std::vector<Lit>& c) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i].var() == c[i - 1].var()) return false;
  }
  return true;
}

}  // namespace

Cnf::Cnf(Var num_vars, std::initializer_list<std::initializer_list<std::int64_t>> dimacs)
    : num_vars_(num_vars) {
  std::vector<Lit> buf;
  for (const auto& c : dimacs) {
    buf.clear();
    for (auto d : c) buf.push_back(Lit::from_dimacs(d));
    add_clause(buf);
  }
}

Cnf::Cnf(Var num_vars, const std::vector<std::vector<Lit>>& clauses) : num_vars_(num_vars) {
  for (const auto& c : clauses) add_clause(c);
}

Cnf Cnf::make_false(Var num_vars) {
  Cnf f(num_vars);
  f.add_clause({});
  return f;
}

void Cnf::add_clause(std::span<const Lit> lits) {
  std::vector<Lit> c(lits.begin(), lits.end());
  for (Lit l : c) {
    if (l.var() == 0 || l.var() > num_vars_) {
      throw ContractViolation("literal " + std::to_string(l.to_dimacs()) + " outside universe of " +
                              std::to_string(num_vars_) + " variables");
    }
  }
  if (!normalize_clause(c)) return;
  if (c.empty()) has_empty_ = true;
  starts_.push_back(static_cast<std::uint32_t>(lits_.size()));
  lits_.insert(lits_.end(), c.begin(), c.end());
  for (Lit l : c) {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), l.var());
    if (it == vars_.end() || *it != l.var()) vars_.insert(it, l.var());
  }
}

std::size_t Cnf::num_binary() const {
  std::size_t n = 0;
  for (auto c : clauses()) n += c.size() == 2;
  return n;
}

ComponentKey Cnf::key() const {
  std::vector<std::span<const Lit>> cls;
  cls.reserve(num_clauses());
  for (auto c : clauses()) cls.push_back(c);
  auto less = [](std::span<const Lit> a, std::span<const Lit> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  };
  auto eq = [](std::span<const Lit> a, std::span<const Lit> b) { return std::equal(a.begin(), a.end(), b.begin(), b.end()); };
  std::sort(cls.begin(), cls.end(), less);
  cls.erase(std::unique(cls.begin(), cls.end(), eq), cls.end());

  ComponentKey k;
  k.words.reserve(lits_.size() + cls.size());
  std::size_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint32_t w) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (auto c : cls) {
    for (Lit l : c) {
      k.words.push_back(l.code());
      mix(l.code());
    }
    k.words.push_back(0);
    mix(0);
  }
  k.hash = h;
  return k;
}

Cnf condition(const Cnf& cnf, std::span<const Lit> lits) {
  if (lits.empty()) return cnf;
  // 0 unassigned, 1 true, 2 false (per variable)
  std::vector<std::uint8_t> val(cnf.num_vars() + 1, 0);
  for (Lit l : lits) val[l.var()] = l.negative() ? 2 : 1;

  Cnf out(cnf.num_vars());
  std::vector<Lit> buf;
  for (auto c : cnf.clauses()) {
    buf.clear();
    bool sat = false;
    for (Lit l : c) {
      const std::uint8_t v = val[l.var()];
      if (v == 0) {
        buf.push_back(l);
      } else if ((v == 1) != l.negative()) {
        sat = true;
        break;
      }
    }
    if (sat) continue;
    if (buf.empty()) return Cnf::make_false(cnf.num_vars());
    out.add_clause(buf);
  }
  return out;
}

Cnf condition(const Cnf& cnf, Lit lit) { return condition(cnf, std::span<const Lit>(&lit, 1)); }

Cnf parse_dimacs(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  Var num_vars = 0;
  Cnf cnf;
  std::vector<Lit> cur;
  std::size_t cur_line = 0;

  while (std::getline(in, line)) {
    ++lineno;
    std::size_t p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos) continue;
    if (line[p] == 'c' || line[p] == '%') continue;
    if (line[p] == 'p') {
      if (have_header) throw ParseError(lineno, "duplicate header");
      std::istringstream hs(line.substr(p + 1));
      std::string fmt;
      long long v = -1, c = -1;
      if (!(hs >> fmt >> v >> c) || fmt != "cnf" || v < 0 || c < 0) {
        throw ParseError(lineno, "malformed header, expected 'p cnf <vars> <clauses>'");
      }
      std::string extra;
      if (hs >> extra) throw ParseError(lineno, "trailing tokens in header");
      have_header = true;
      num_vars = static_cast<Var>(v);
      cnf = Cnf(num_vars);
      continue;
    }
    if (!have_header) throw ParseError(lineno, "clause before header");
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      long long d = 0;
      std::size_t used = 0;
      try {
        d = std::stoll(tok, &used);
      } catch (const std::exception&) {
        throw ParseError(lineno, "not an integer: '" + tok + "'");
      }
      if (used != tok.size()) throw ParseError(lineno, "not an integer: '" + tok + "'");
      if (d == 0) {
        cnf.add_clause(cur);
        cur.clear();
        continue;
      }
      if (static_cast<unsigned long long>(d < 0 ? -d : d) > num_vars) {
        throw ParseError(lineno, "literal " + tok + " exceeds declared variable count " + std::to_string(num_vars));
      }
      if (cur.empty()) cur_line = lineno;
      cur.push_back(Lit::from_dimacs(d));
    }
  }
  if (!have_header) throw ParseError(0, "missing 'p cnf' header");
  if (!cur.empty()) throw ParseError(cur_line, "clause not terminated by 0");
  return cnf;
}

Cnf parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

Cnf read_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return parse_dimacs(in);
}

void write_dimacs(std::ostream& out, const Cnf& cnf) {
  out << "p cnf " << cnf.num_vars() << ' ' << cnf.num_clauses() << '\n';
  for (auto c : cnf.clauses()) {
    for (Lit l : c) out << l.to_dimacs() << ' ';
    out << "0\n";
  }
}

}  // namespace amc
