#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "padmm/errors.hpp"
#include "padmm/problems.hpp"

namespace padmm::problems {

namespace {

using linalg::ConstraintMap;
using linalg::SparseSym;

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_block(std::ostream& os, const char* name, const SymMatrix& m) {
  os << name << '\n';
  for (int j = 0; j < m.dim(); ++j)
    for (int i = 0; i <= j; ++i)
      if (m(i, j) != 0.0) os << i + 1 << ' ' << j + 1 << ' ' << fmt(m(i, j)) << '\n';
  os << "end\n";
}

void write_rows(std::ostream& os, const char* name, const ConstraintMap& a, const Vector& b) {
  for (int r = 0; r < a.rows(); ++r) {
    os << name << ' ' << r + 1 << '\n';
    for (const auto& e : a.row(r)) os << e.row + 1 << ' ' << e.col + 1 << ' ' << fmt(e.value) << '\n';
    os << "b " << fmt(b(r)) << '\n';
  }
}

void write_vector(std::ostream& os, const char* name, const Vector& v) {
  os << name << '\n';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << fmt(v(i)) << '\n';
  os << "end\n";
}

/// Tokenized reader skipping blank lines and '#' comments, tracking line numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  /// Next nonblank line split on whitespace; false at end of input.
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(is_, line)) {
      ++line_;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ss(line);
      tokens.clear();
      for (std::string t; ss >> t;) tokens.push_back(t);
      if (!tokens.empty()) return true;
    }
    return false;
  }

  std::vector<std::string> expect(const std::string& what) {
    std::vector<std::string> t;
    if (!next(t)) throw ParseError(line_ + 1, "unexpected end of input, expected " + what);
    return t;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, what); }
  int line() const { return line_; }

  double number(const std::string& s) const {
    double v = 0.0;
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) fail("malformed number '" + s + "'");
    if (!std::isfinite(v)) fail("non-finite value '" + s + "'");
    return v;
  }

  int integer(const std::string& s) const {
    int v = 0;
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) fail("malformed integer '" + s + "'");
    return v;
  }

  /// 1-based index in [1, n] converted to 0-based.
  int index(const std::string& s, int n) const {
    const int v = integer(s);
    if (v < 1 || v > n) fail("index " + s + " outside 1.." + std::to_string(n));
    return v - 1;
  }

 private:
  std::istream& is_;
  int line_ = 0;
};

/// Entries of a matrix block up to its terminating end line.
SymMatrix read_block(LineReader& in, int n) {
  SymMatrix m(n);
  for (;;) {
    const auto t = in.expect("matrix entry or end");
    if (t.size() == 1 && t[0] == "end") return m;
    if (t.size() != 3) in.fail("expected 'i j v'");
    m.set(in.index(t[0], n), in.index(t[1], n), in.number(t[2]));
  }
}

/// Constraint rows labelled name 1..count, each closed by a 'b v' line.
void read_rows(LineReader& in, const std::string& name, int count, int n, ConstraintMap& a,
               Vector& b, std::vector<std::string>& pending) {
  a = ConstraintMap(n);
  b = Vector::Zero(count);
  for (int r = 0; r < count; ++r) {
    if (pending.size() != 2 || pending[0] != name || in.integer(pending[1]) != r + 1)
      in.fail("expected '" + name + " " + std::to_string(r + 1) + "'");
    SparseSym row;
    for (;;) {
      const auto t = in.expect("row entry or b line");
      if (t.size() == 2 && t[0] == "b") {
        b(r) = in.number(t[1]);
        break;
      }
      if (t.size() != 3) in.fail("expected 'i j v' or 'b v'");
      int i = in.index(t[0], n), j = in.index(t[1], n);
      if (i > j) std::swap(i, j);
      row.push_back({i, j, in.number(t[2])});
    }
    try {
      a.add_row(std::move(row));
    } catch (const InvalidInputError& e) {
      in.fail(e.what());
    }
    if (!in.next(pending)) pending.clear();
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open '" + path + "' for reading");
  return is;
}

Vector read_vector(LineReader& in, const std::string& name, int size) {
  const auto h = in.expect(name);
  if (h.size() != 1 || h[0] != name) in.fail("expected '" + name + "'");
  Vector v(size);
  for (int i = 0; i < size; ++i) {
    const auto t = in.expect("value");
    if (t.size() != 1) in.fail("expected one value per line");
    v(i) = in.number(t[0]);
  }
  const auto e = in.expect("end");
  if (e.size() != 1 || e[0] != "end") in.fail("expected 'end'");
  return v;
}

SymMatrix read_named_block(LineReader& in, const std::string& name, int n) {
  const auto h = in.expect(name);
  if (h.size() != 1 || h[0] != name) in.fail("expected '" + name + "'");
  return read_block(in, n);
}

}  // namespace

void write_problem(std::ostream& os, const DnnsdpProblem& p) {
  os << "DNNSDP " << p.n << ' ' << p.m_e() << ' ' << p.m_i() << '\n';
  write_block(os, "C", p.C);
  write_block(os, "M", p.M);
  write_rows(os, "AE", p.AE, p.bE);
  write_rows(os, "AI", p.AI, p.bI);
}

void write_problem(const std::string& path, const DnnsdpProblem& p) {
  auto os = open_out(path);
  write_problem(os, p);
  if (!os) throw Error("failed writing '" + path + "'");
}

DnnsdpProblem read_problem(std::istream& is) {
  LineReader in(is);
  const auto h = in.expect("header");
  if (h.size() != 4 || h[0] != "DNNSDP") in.fail("expected header 'DNNSDP n mE mI'");
  DnnsdpProblem p;
  p.n = in.integer(h[1]);
  const int m_e = in.integer(h[2]);
  const int m_i = in.integer(h[3]);
  if (p.n < 1 || m_e < 0 || m_i < 0) in.fail("header sizes must satisfy n >= 1, mE >= 0, mI >= 0");

  std::vector<std::string> t = in.expect("C block");
  if (t.size() != 1 || t[0] != "C") in.fail("expected 'C'");
  p.C = read_block(in, p.n);
  // The M block may be omitted for M = 0.
  p.M = SymMatrix(p.n);
  if (!in.next(t)) t.clear();
  if (t.size() == 1 && t[0] == "M") {
    p.M = read_block(in, p.n);
    if (!in.next(t)) t.clear();
  }
  read_rows(in, "AE", m_e, p.n, p.AE, p.bE, t);
  read_rows(in, "AI", m_i, p.n, p.AI, p.bI, t);
  if (!t.empty()) in.fail("unexpected trailing content '" + t[0] + "'");
  return p;
}

DnnsdpProblem read_problem(const std::string& path) {
  auto is = open_in(path);
  return read_problem(is);
}

void write_reference(std::ostream& os, const PlantedInstance& inst) {
  const DualIterate& s = inst.solution;
  os << "PLANTED " << inst.problem.n << ' ' << inst.problem.m_e() << ' ' << inst.problem.m_i()
     << '\n';
  os << "value " << fmt(inst.optimal_value) << '\n';
  write_block(os, "X", s.X);
  write_block(os, "Z", s.Z);
  write_block(os, "S", s.S);
  write_vector(os, "yE", s.yE);
  write_vector(os, "yI", s.yI);
}

void write_reference(const std::string& path, const PlantedInstance& inst) {
  auto os = open_out(path);
  write_reference(os, inst);
  if (!os) throw Error("failed writing '" + path + "'");
}

PlantedInstance read_reference(std::istream& is, const DnnsdpProblem& p) {
  LineReader in(is);
  const auto h = in.expect("header");
  if (h.size() != 4 || h[0] != "PLANTED") in.fail("expected header 'PLANTED n mE mI'");
  if (in.integer(h[1]) != p.n || in.integer(h[2]) != p.m_e() || in.integer(h[3]) != p.m_i())
    in.fail("reference sizes do not match the problem");
  PlantedInstance inst;
  inst.problem = p;
  const auto v = in.expect("value");
  if (v.size() != 2 || v[0] != "value") in.fail("expected 'value v'");
  inst.optimal_value = in.number(v[1]);
  inst.solution.X = read_named_block(in, "X", p.n);
  inst.solution.Z = read_named_block(in, "Z", p.n);
  inst.solution.S = read_named_block(in, "S", p.n);
  inst.solution.yE = read_vector(in, "yE", p.m_e());
  inst.solution.yI = read_vector(in, "yI", p.m_i());
  std::vector<std::string> t;
  if (in.next(t)) in.fail("unexpected trailing content '" + t[0] + "'");
  return inst;
}

PlantedInstance read_reference(const std::string& path, const DnnsdpProblem& p) {
  auto is = open_in(path);
  return read_reference(is, p);
}

}  // namespace padmm::problems
