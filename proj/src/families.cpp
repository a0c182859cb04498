#include "szpiro/families.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

namespace szpiro {

namespace {

using T = Torsion;

BigRat rat(long n, long d = 1) {
  BigRat r(n, d);
  r.canonicalize();
  return r;
}

std::vector<FamilyTraits> make_traits() {
  std::vector<FamilyTraits> v;
  auto add = [&](T id, std::string_view nm, int arity, int m, SzpiroExponent l, std::vector<UBranch> br, int order,
                 bool full2) { v.push_back({id, nm, arity, m, l, std::move(br), order, full2}); };
  add(T::C1, "C1", 0, 0, {1, 1}, {}, 1, false);
  add(T::C2, "C2", 3, 6, {3, 2}, {{1, rat(256)}, {2, rat(4)}, {4, rat(1, 64)}}, 2, false);
  add(T::C3, "C3", 2, 12, {2, 1}, {{1, rat(1)}}, 3, false);
  add(T::C4, "C4", 2, 12, {12, 5}, {{1, rat(2)}, {2, rat(1, 16)}}, 4, false);
  add(T::C5, "C5", 2, 12, {3, 1}, {{1, rat(1)}}, 5, false);
  add(T::C6, "C6", 2, 12, {3, 1}, {{1, rat(1)}, {2, rat(1, 8)}}, 6, false);
  add(T::C7, "C7", 2, 24, {4, 1}, {{1, rat(1)}}, 7, false);
  add(T::C8, "C8", 2, 24, {4, 1}, {{1, rat(1)}, {2, rat(1, 8)}}, 8, false);
  add(T::C9, "C9", 2, 36, {9, 2}, {{1, rat(1)}}, 9, false);
  add(T::C10, "C10", 2, 36, {9, 2}, {{1, rat(1)}, {2, rat(1, 4)}}, 10, false);
  add(T::C12, "C12", 2, 48, {24, 5}, {{1, rat(1)}, {2, rat(1, 8)}}, 12, false);
  add(T::C2xC2, "C2xC2", 3, 6, {2, 1}, {{1, rat(64)}, {2, rat(1)}}, 2, true);
  add(T::C2xC4, "C2xC4", 2, 12, {3, 1}, {{1, rat(8)}, {2, rat(1, 2)}, {4, rat(1, 32)}}, 4, true);
  add(T::C2xC6, "C2xC6", 2, 24, {4, 1}, {{1, rat(1)}, {4, rat(1, 8)}, {16, rat(1, 512)}}, 6, true);
  add(T::C2xC8, "C2xC8", 2, 48, {24, 5}, {{1, rat(2)}, {16, rat(1, 128)}, {64, rat(1, 4096)}}, 8, true);
  add(T::C3_0, "C3_0", 1, 0, {2, 1}, {}, 3, false);
  return v;
}

const std::vector<FamilyTraits>& all_traits() {
  static const std::vector<FamilyTraits> table = make_traits();
  return table;
}

constexpr std::array kParameterized = {T::C2,  T::C3,    T::C4,    T::C5,    T::C6,    T::C7,    T::C8,   T::C9,
                                       T::C10, T::C12, T::C2xC2, T::C2xC4, T::C2xC6, T::C2xC8, T::C3_0};
constexpr std::array kMazur = {T::C1, T::C2,  T::C3,    T::C4,    T::C5,    T::C6,    T::C7,   T::C8,
                               T::C9, T::C10, T::C12, T::C2xC2, T::C2xC4, T::C2xC6, T::C2xC8};

BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// (a, b) of the two-parameter rows from the slot vector.
std::pair<BigRat, BigRat> ab_of(T id, std::span<const BigRat> s) {
  switch (id) {
    case T::C2:
    case T::C2xC2:
      return {s[0], s[1]};
    case T::C3:
      return {s[0] * s[0] * s[0] * s[1] * s[1] * s[2], s[3]};
    case T::C4:
      return {s[0] * s[0] * s[1], s[2]};
    case T::C3_0:
      return {s[0], 0};
    default:
      return {s[0], s[1]};
  }
}

std::size_t slot_count(T id) {
  switch (id) {
    case T::C2:
    case T::C2xC2:
    case T::C4:
      return 3;
    case T::C3:
      return 4;
    case T::C3_0:
      return 1;
    case T::C1:
      return 0;
    default:
      return 2;
  }
}

bool is_cubefree(const BigInt& a) {
  for (const auto& pe : factorize(a)) {
    if (pe.exponent >= 3) return false;
  }
  return true;
}

}  // namespace

const FamilyTraits& traits(Torsion t) { return all_traits().at(static_cast<std::size_t>(t)); }

std::string_view name(Torsion t) { return traits(t).name; }

Torsion parse_torsion(std::string_view text) {
  std::string s(text);
  for (auto& ch : s) {
    if (ch == 'X' || ch == '*') ch = 'x';
  }
  if (s == "C3^0" || s == "C30" || s == "C3_0") return T::C3_0;
  for (const auto& tr : all_traits()) {
    if (tr.name == s) return tr.id;
  }
  throw std::invalid_argument("unknown torsion group '" + std::string(text) + "'");
}

std::span<const Torsion> parameterized_families() { return kParameterized; }
std::span<const Torsion> mazur_groups() { return kMazur; }

Decomposition decompose_a(Torsion id, const BigInt& a) {
  if (id != T::C3 && id != T::C4) throw std::invalid_argument("decompose_a applies to C3 and C4 only");
  if (a <= 0) throw InvalidParameters("a must be positive");
  Decomposition out;
  for (const auto& pe : factorize(a)) {
    unsigned k = pe.exponent;
    if (id == T::C3) {
      out.c *= ipow(pe.prime, k / 3);
      if (k % 3 == 2) out.d *= pe.prime;
      if (k % 3 == 1) out.e *= pe.prime;
    } else {
      out.c *= ipow(pe.prime, k / 2);
      if (k % 2 == 1) out.d *= pe.prime;
    }
  }
  return out;
}

std::vector<BigRat> FamilyInstance::slots() const {
  switch (id) {
    case T::C2:
    case T::C2xC2:
      return {BigRat(a), BigRat(b), BigRat(d)};
    case T::C3:
      return {BigRat(split->c), BigRat(split->d), BigRat(split->e), BigRat(b)};
    case T::C4:
      return {BigRat(split->c), BigRat(split->d), BigRat(b)};
    case T::C3_0:
      return {BigRat(a)};
    default:
      return {BigRat(a), BigRat(b)};
  }
}

std::string FamilyInstance::describe() const {
  std::ostringstream os;
  os << name(id) << "(a=" << a;
  if (id != T::C3_0) os << ",b=" << b;
  if (id == T::C2 || id == T::C2xC2) os << ",d=" << d;
  os << ")";
  return os.str();
}

FamilyInstance validate_params(Torsion id, const BigInt& a, const BigInt& b, std::optional<BigInt> d) {
  if (id == T::C1) throw InvalidParameters("C1 has no parameterized family");
  FamilyInstance inst;
  inst.id = id;
  inst.a = a;
  inst.b = id == T::C3_0 ? BigInt(0) : b;
  inst.d = 1;

  if (id == T::C2 || id == T::C2xC2) {
    if (!d) throw InvalidParameters("d is required for " + std::string(name(id)));
    inst.d = *d;
    if (inst.d == 0 || !is_squarefree(inst.d)) throw InvalidParameters("d must be squarefree");
  }

  if (id == T::C2) {
    if (inst.d == 1) throw InvalidParameters("d must not be 1");
    if (b == 0) throw InvalidParameters("b must be nonzero");
    if (!is_squarefree(gcd(a, b))) throw InvalidParameters("gcd(a,b) must be squarefree");
  } else if (id == T::C2xC2) {
    if (gcd(a, b) != 1) throw InvalidParameters("gcd(a,b) must be 1");
    if (a % 2 != 0) throw InvalidParameters("a must be even");
  } else if (id == T::C3_0) {
    if (a <= 0) throw InvalidParameters("a must be positive");
    if (!is_cubefree(a)) throw InvalidParameters("a must be cubefree");
  } else {
    if (a <= 0) throw InvalidParameters("a must be positive");
    if (gcd(a, b) != 1) throw InvalidParameters("gcd(a,b) must be 1");
  }

  if (id == T::C3 || id == T::C4) inst.split = decompose_a(id, a);

  if (compute_invariants(build_model(inst)).delta == 0) {
    throw InvalidParameters("singular parameters (discriminant is zero)");
  }
  return inst;
}

WeierstrassModel family_model(Torsion id, std::span<const BigRat> s) {
  if (s.size() != slot_count(id)) throw std::invalid_argument("wrong number of parameters for " + std::string(name(id)));
  WeierstrassModel m{0, 0, 0, 0, 0};
  if (id == T::C3_0) {
    m.a3 = s[0];
    return m;
  }
  auto [a, b] = ab_of(id, s);
  BigRat a2 = a * a, a3 = a2 * a, a4 = a3 * a, a5 = a4 * a, a6 = a5 * a;
  BigRat b2 = b * b, b3 = b2 * b, b4 = b3 * b, b5 = b4 * b;
  switch (id) {
    case T::C2: {
      const BigRat& d = s[2];
      m.a2 = 2 * a;
      m.a4 = a2 - b2 * d;
      break;
    }
    case T::C3:
      m.a1 = a;
      m.a3 = a2 * b;
      break;
    case T::C4:
      m.a1 = a;
      m.a2 = -a * b;
      m.a3 = -a2 * b;
      break;
    case T::C5:
      m.a1 = a - b;
      m.a2 = -a * b;
      m.a3 = -a2 * b;
      break;
    case T::C6:
      m.a1 = a - b;
      m.a2 = -a * b - b2;
      m.a3 = -a2 * b - a * b2;
      break;
    case T::C7:
      m.a1 = a2 + a * b - b2;
      m.a2 = a2 * b2 - a * b3;
      m.a3 = a4 * b2 - a3 * b3;
      break;
    case T::C8:
      m.a1 = -a2 + 4 * a * b - 2 * b2;
      m.a2 = -a2 * b2 + 3 * a * b3 - 2 * b4;
      m.a3 = -a3 * b3 + 3 * a2 * b4 - 2 * a * b5;
      break;
    case T::C9:
      m.a1 = a3 + a * b2 - b3;
      m.a2 = a4 * b2 - 2 * a3 * b3 + 2 * a2 * b4 - a * b5;
      m.a3 = a3 * m.a2;
      break;
    case T::C10:
      m.a1 = a3 - 2 * a2 * b - 2 * a * b2 + 2 * b3;
      m.a2 = -a3 * b3 + 3 * a2 * b4 - 2 * a * b5;
      m.a3 = (a3 - 3 * a2 * b + a * b2) * m.a2;
      break;
    case T::C12: {
      m.a1 = -a4 + 2 * a3 * b + 2 * a2 * b2 - 8 * a * b3 + 6 * b4;
      BigRat amb = a - b;
      m.a2 = b * (a - 2 * b) * amb * amb * (a2 - 3 * a * b + 3 * b2) * (a2 - 2 * a * b + 2 * b2);
      BigRat bma = b - a;
      m.a3 = a * bma * bma * bma * m.a2;
      break;
    }
    case T::C2xC2: {
      const BigRat& d = s[2];
      m.a2 = a * d + b * d;
      m.a4 = a * b * d * d;
      break;
    }
    case T::C2xC4:
      m.a1 = a;
      m.a2 = -a * b - 4 * b2;
      m.a3 = -a2 * b - 4 * a * b2;
      break;
    case T::C2xC6:
      m.a1 = -19 * a2 + 2 * a * b + b2;
      m.a2 = -10 * a4 + 22 * a3 * b - 14 * a2 * b2 + 2 * a * b3;
      m.a3 = 90 * a6 - 198 * a5 * b + 116 * a4 * b2 + 4 * a3 * b3 - 14 * a2 * b4 + 2 * a * b5;
      break;
    case T::C2xC8: {
      m.a1 = -a4 - 8 * a3 * b - 24 * a2 * b2 + 64 * b4;
      BigRat ap4b = a + 4 * b;
      m.a2 = -4 * a * b2 * (a + 2 * b) * ap4b * ap4b * (a2 + 4 * a * b + 8 * b2);
      m.a3 = -2 * b * ap4b * (a2 - 8 * b2) * m.a2;
      break;
    }
    default:
      throw std::invalid_argument("no model for " + std::string(name(id)));
  }
  return m;
}

BigRat delta_base(Torsion id, std::span<const BigRat> s) {
  if (s.size() != slot_count(id)) throw std::invalid_argument("wrong number of parameters for " + std::string(name(id)));
  switch (id) {
    case T::C2: {
      const BigRat &a = s[0], &b = s[1], &d = s[2];
      return b * b * d * (b * b * d - a * a);
    }
    case T::C3: {
      const BigRat &c = s[0], &d = s[1], &e = s[2], &b = s[3];
      BigRat e2 = e * e;
      return 3 * b * d * d * e2 * e2 * (c * c * c * d * d * e - 27 * b);
    }
    case T::C4: {
      const BigRat &c = s[0], &d = s[1], &b = s[2];
      return b * c * d * d * d * (16 * b + c * c * d);
    }
    case T::C2xC2: {
      const BigRat &a = s[0], &b = s[1], &d = s[2];
      return a * b * d * d * d * (a - b);
    }
    case T::C3_0:
    case T::C1:
      throw std::invalid_argument("no delta polynomial for " + std::string(name(id)));
    default:
      break;
  }
  const BigRat &a = s[0], &b = s[1];
  BigRat a2 = a * a, b2 = b * b, ab = a * b;
  switch (id) {
    case T::C5:
      return ab * (a2 + 11 * ab - b2);
    case T::C6:
      return ab * (a + b) * (a + 9 * b);
    case T::C7:
      return ab * (a - b) * (a2 * a + 5 * a2 * b - 8 * a * b2 + b2 * b);
    case T::C8:
      return ab * (a - 2 * b) * (a - b) * (a2 - 8 * ab + 8 * b2);
    case T::C9:
      return ab * (a - b) * (a2 - ab + b2) * (a2 * a + 3 * a2 * b - 6 * a * b2 + b2 * b);
    case T::C10:
      return ab * (a - 2 * b) * (a - b) * (a2 + 2 * ab - 4 * b2) * (a2 - 3 * ab + b2);
    case T::C12:
      return ab * (a - 2 * b) * (a - b) * (a2 - 6 * ab + 6 * b2) * (a2 - 2 * ab + 2 * b2) * (a2 - 3 * ab + 3 * b2);
    case T::C2xC4:
      return ab * (a + 4 * b) * (a + 8 * b);
    case T::C2xC6:
      return a * (a - b) * (3 * a - b) * (5 * a - b) * (9 * a - b) * (3 * a + b);
    case T::C2xC8:
      return ab * (a + 2 * b) * (a + 4 * b) * (a2 - 8 * b2) * (a2 + 8 * ab + 8 * b2) * (a2 + 4 * ab + 8 * b2);
    default:
      throw std::invalid_argument("no delta polynomial for " + std::string(name(id)));
  }
}

WeierstrassModel build_model(const FamilyInstance& inst) {
  auto s = inst.slots();
  return family_model(inst.id, s);
}

FamilyInvariants family_invariants(const FamilyInstance& inst) {
  auto inv = compute_invariants(build_model(inst).integer_coefficients());
  return {inv.c4, inv.c6, inv.delta};
}

const UBranch& branch(Torsion id, long v) {
  for (const auto& br : traits(id).branches) {
    if (br.v == v) return br;
  }
  throw ContractViolation("u_T branch v = " + std::to_string(v) + " is not allowed for " + std::string(name(id)));
}

BigInt u_base(const FamilyInstance& inst) {
  if (inst.id == T::C3) return inst.split->c * inst.split->c * inst.split->d;
  if (inst.id == T::C4) return inst.split->c;
  return 1;
}

UTRecovery recover_uT(const FamilyInstance& inst) {
  auto model = build_model(inst);
  auto min = minimal_model(model);
  ReductionSummary summary;
  summary.min = min;
  return recover_uT(inst, summary);
}

UTRecovery recover_uT(const FamilyInstance& inst, const ReductionSummary& summary) {
  UTRecovery out;
  out.u = summary.min.scaling_u;
  if (inst.id == T::C3_0) {
    out.v = 1;
    return out;
  }
  BigInt base = u_base(inst);
  if (out.u % base == 0) {
    BigInt q = out.u / base;
    for (const auto& br : traits(inst.id).branches) {
      if (q == br.v) {
        out.v = br.v;
        return out;
      }
    }
  }
  throw ContractViolation("contract violation: " + inst.describe() + " has u_T = " + out.u.get_str() +
                          ", outside the allowed set");
}

BigInt delta_eval(const FamilyInstance& inst, long v) {
  const UBranch& br = branch(inst.id, v);
  auto s = inst.slots();
  BigRat val = br.delta_factor * delta_base(inst.id, s);
  if (val.get_den() != 1) {
    throw ContractViolation("contract violation: delta_{T,u} = " + val.get_str() + " is not an integer at " +
                            inst.describe());
  }
  return val.get_num();
}

bool ConductorBoundReport::ok() const {
  return global_ok && std::all_of(primes.begin(), primes.end(), [](const PrimeBoundCheck& c) { return c.ok; });
}

std::string ConductorBoundReport::describe() const {
  std::ostringstream os;
  os << "N=" << conductor << " bound=" << bound << " u=" << ut.u;
  for (const auto& c : primes) {
    if (!c.ok) os << " v_" << c.p << "(N)=" << c.v_conductor << ">v_" << c.p << "(delta)=" << c.v_delta;
  }
  if (!global_ok) os << " N>bound";
  return os.str();
}

ConductorBoundReport verify_conductor_bound(const FamilyInstance& inst) {
  return verify_conductor_bound(inst, analyze(build_model(inst)));
}

ConductorBoundReport verify_conductor_bound(const FamilyInstance& inst, const ReductionSummary& summary) {
  ConductorBoundReport rep;
  rep.conductor = summary.conductor;
  rep.ut = recover_uT(inst, summary);
  if (inst.id == T::C3_0) {
    rep.bound = 27 * inst.a * inst.a;
    rep.global_ok = rep.conductor <= rep.bound;
    return rep;
  }
  BigInt delta = delta_eval(inst, rep.ut.v);
  rep.bound = abs(delta);
  rep.global_ok = rep.conductor <= rep.bound;
  for (const auto& loc : summary.local) {
    PrimeBoundCheck c;
    c.p = loc.p;
    c.v_conductor = loc.fp;
    c.v_delta = delta == 0 ? 0 : valuation_unchecked(delta, loc.p);
    c.ok = delta != 0 && c.v_conductor <= c.v_delta;
    rep.primes.push_back(c);
  }
  return rep;
}

TorsionCertificate certify_torsion(const FamilyInstance& inst) {
  TorsionCertificate cert;
  const auto& tr = traits(inst.id);
  cert.expected_order = tr.cyclic_order;
  auto model = build_model(inst);
  cert.order_of_origin = point_order(model, AffinePoint{0, 0, false});
  cert.ok = cert.order_of_origin == tr.cyclic_order;
  if (tr.full_two_torsion) {
    cert.two_torsion_points = two_torsion_points(model).size();
    cert.ok = cert.ok && cert.two_torsion_points == 3;
  }
  return cert;
}

std::vector<FamilyInstance> enumerate_instances(Torsion id, long bound, long bound_c3_0) {
  std::vector<FamilyInstance> out;
  auto try_add = [&](const BigInt& a, const BigInt& b, std::optional<BigInt> d) {
    try {
      out.push_back(validate_params(id, a, b, d));
    } catch (const InvalidParameters&) {
    }
  };
  if (id == T::C3_0) {
    for (long a = 1; a <= bound_c3_0; ++a) try_add(a, 0, std::nullopt);
    return out;
  }
  if (id == T::C2 || id == T::C2xC2) {
    for (long a = -bound; a <= bound; ++a) {
      if (id == T::C2xC2 && a % 2 != 0) continue;
      for (long b = -bound; b <= bound; ++b) {
        if (id == T::C2 ? b == 0 : std::gcd(a, b) != 1) continue;
        for (long d = -bound; d <= bound; ++d) {
          if (d == 0) continue;
          if (id == T::C2 && d == 1) continue;
          try_add(a, b, BigInt(d));
        }
      }
    }
    return out;
  }
  for (long a = 1; a <= bound; ++a) {
    for (long b = -bound; b <= bound; ++b) {
      if (std::gcd(a, b) != 1) continue;
      try_add(a, b, std::nullopt);
    }
  }
  return out;
}

}  // namespace szpiro
