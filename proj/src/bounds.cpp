#include "szpiro/bounds.hpp"

#include "szpiro/sweep.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace szpiro {

namespace {

using T = Torsion;

constexpr unsigned long kRootBits = 200;

BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

BigRat qabs(const BigRat& x) { return x < 0 ? BigRat(-x) : x; }

BigRat rat_max(const BigRat& a, const BigRat& b) { return a < b ? b : a; }

// floor(x^(1/q) * 2^kRootBits) / 2^kRootBits for x >= 0.
BigRat rational_root(const BigRat& x, long q) {
  if (q == 1) return x;
  BigInt scaled = x.get_num();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), kRootBits * static_cast<unsigned long>(q));
  mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), x.get_den_mpz_t());
  BigInt r;
  mpz_root(r.get_mpz_t(), scaled.get_mpz_t(), static_cast<unsigned long>(q));
  BigInt den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), kRootBits);
  BigRat out(r, den);
  out.canonicalize();
  return out;
}

struct ScaledSlots {
  std::vector<BigRat> pattern;
  BigRat scale_ab;     // multiplies alpha with exponent m/3, beta with m/2
  BigRat scale_delta;  // multiplies delta with exponent m/l
};

ScaledSlots scaled_slots(const FamilyInstance& inst) {
  ScaledSlots s;
  switch (inst.id) {
    case T::C2: {
      BigRat a(inst.a), b(inst.b), d(inst.d);
      s.pattern = {1, 1, b * b * d / (a * a)};
      s.scale_ab = s.scale_delta = a;
      break;
    }
    case T::C3: {
      const auto& sp = *inst.split;
      BigRat a(inst.a);
      s.pattern = {1, 1, 1, BigRat(inst.b) / a};
      s.scale_ab = a;
      s.scale_delta = BigRat(sp.c * sp.d * sp.e);
      break;
    }
    case T::C4: {
      const auto& sp = *inst.split;
      BigRat a(inst.a);
      s.pattern = {1, 1, BigRat(inst.b) / a};
      s.scale_ab = a;
      s.scale_delta = BigRat(sp.c * sp.d);
      break;
    }
    case T::C2xC2: {
      BigRat a(inst.a);
      s.pattern = {1, BigRat(inst.b) / a, 1};
      s.scale_ab = s.scale_delta = a * BigRat(inst.d);
      break;
    }
    default: {
      BigRat a(inst.a);
      s.pattern = {1, BigRat(inst.b) / a};
      s.scale_ab = s.scale_delta = a;
      break;
    }
  }
  return s;
}

}  // namespace

BigInt naive_height(const BigInt& c4, const BigInt& c6) {
  BigInt a = abs(c4 * c4 * c4);
  BigInt b = c6 * c6;
  return a < b ? b : a;
}

BigInt naive_height(const WeierstrassModel& model) {
  if (compute_invariants(model).delta == 0) throw SingularModel();
  auto min = minimal_model(model);
  auto inv = compute_invariants(min.minimal.integer_coefficients());
  return naive_height(inv.c4, inv.c6);
}

double szpiro_ratio(const BigInt& height, const BigInt& conductor) {
  if (conductor <= 1) throw std::domain_error("conductor must exceed 1");
  return log_abs(height) / log_abs(conductor);
}

double szpiro_ratio(const WeierstrassModel& model, const FactorOptions& opts) {
  auto s = analyze(model, opts);
  return szpiro_ratio(naive_height(s.invariants.c4, s.invariants.c6), s.conductor);
}

bool exceeds(const BigInt& height, const BigInt& conductor, const SzpiroExponent& bound) {
  if (conductor <= 1) throw std::domain_error("conductor must exceed 1");
  return ipow(height, static_cast<unsigned long>(bound.q)) > ipow(conductor, static_cast<unsigned long>(bound.p));
}

bool exceeds(const WeierstrassModel& model, const SzpiroExponent& bound, const FactorOptions& opts) {
  auto s = analyze(model, opts);
  return exceeds(naive_height(s.invariants.c4, s.invariants.c6), s.conductor, bound);
}

double abc_quality(const BigInt& a, const BigInt& b, const BigInt& c) {
  if (a <= 0 || b <= 0 || c <= 0) throw std::invalid_argument("a, b, c must be positive");
  if (a + b != c) throw std::invalid_argument("a + b must equal c");
  if (gcd(a, b) != 1) throw std::invalid_argument("gcd(a,b) must be 1");
  BigInt rad = radical(a * b * c);
  return log_abs(c) / log_abs(rad);
}

std::vector<BigRat> PhiSpec::slots_at(const BigRat& x) const {
  switch (id) {
    case T::C2:
    case T::C4:
      return {1, 1, x};
    case T::C3:
      return {1, 1, 1, x};
    case T::C2xC2:
      return {1, x, 1};
    case T::C3_0:
    case T::C1:
      throw std::invalid_argument("no phi function for " + std::string(name(id)));
    default:
      return {1, x};
  }
}

BigRat PhiSpec::height_factor() const {
  if (id == T::C3) return 1;
  return rpow(BigRat(v), -12);
}

std::string PhiSpec::describe() const {
  std::string u = std::to_string(v);
  if (id == T::C4) u = v == 1 ? "c" : "2c";
  if (id == T::C3) u = "c^2d";
  return std::string(name(id)) + " u=" + u;
}

std::vector<PhiSpec> all_phi_specs() {
  std::vector<PhiSpec> out;
  for (T id : parameterized_families()) {
    if (id == T::C3_0) continue;
    for (const auto& br : traits(id).branches) out.push_back({id, br.v});
  }
  return out;
}

PhiSpec make_phi_spec(Torsion id, const std::string& u) {
  if (id == T::C3_0 || id == T::C1) throw ContractViolation("no phi function for " + std::string(name(id)));
  long v = 0;
  if (id == T::C4) {
    if (u == "c" || u == "1") v = 1;
    else if (u == "2c" || u == "2") v = 2;
  } else if (id == T::C3) {
    if (u == "c2d" || u == "c^2d" || u == "1") v = 1;
  } else {
    try {
      std::size_t used = 0;
      v = std::stol(u, &used);
      if (used != u.size()) v = 0;
    } catch (const std::exception&) {
      v = 0;
    }
  }
  branch(id, v);  // throws for values outside the allowed set
  return {id, v};
}

const PhiPolys& phi_polys(const PhiSpec& spec) {
  static std::mutex mu;
  static std::map<T, PhiPolys> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(spec.id);
  if (it != cache.end()) return it->second;
  PhiSpec probe{spec.id, 1};
  constexpr int kPoints = 52;
  PhiPolys polys;
  polys.alpha = interpolate([&](const BigRat& x) { return compute_invariants(family_model(spec.id, probe.slots_at(x))).c4; }, kPoints);
  polys.beta = interpolate([&](const BigRat& x) { return compute_invariants(family_model(spec.id, probe.slots_at(x))).c6; }, kPoints);
  polys.delta = interpolate([&](const BigRat& x) { return delta_base(spec.id, probe.slots_at(x)); }, kPoints);
  return cache.emplace(spec.id, std::move(polys)).first->second;
}

PhiValue phi_eval(const PhiSpec& spec, const BigRat& x) {
  const auto& polys = phi_polys(spec);
  const auto& tr = traits(spec.id);
  BigRat alpha = polys.alpha(x);
  BigRat beta = polys.beta(x);
  BigRat delta = qabs(branch(spec.id, spec.v).delta_factor * polys.delta(x));
  BigRat lhs = spec.height_factor() * rat_max(qabs(alpha * alpha * alpha), beta * beta);
  BigRat dp = rpow(delta, tr.l.p);
  PhiValue out;
  out.sign = cmp(rpow(lhs, tr.l.q), dp);
  out.sign = out.sign > 0 ? 1 : (out.sign < 0 ? -1 : 0);
  if (out.sign != 0) out.approx = BigRat(lhs - rational_root(dp, tr.l.q)).get_d();
  return out;
}

namespace {

PhiScanResult scan_range(const PhiSpec& spec, long denominator, const BigInt& k_lo, const BigInt& k_hi,
                         unsigned jobs) {
  if (denominator < 1) throw std::invalid_argument("denominator must be at least 1");
  PhiScanResult res;
  if (k_hi < k_lo) return res;
  BigInt count_big = k_hi - k_lo + 1;
  if (!count_big.fits_slong_p()) throw std::invalid_argument("grid too large");
  auto n = static_cast<std::size_t>(count_big.get_si());
  phi_polys(spec);
  auto x_at = [&](std::size_t i) {
    BigRat x(k_lo + BigInt(static_cast<unsigned long>(i)), denominator);
    x.canonicalize();
    return x;
  };
  auto values = parallel_map<PhiValue>(n, jobs, [&](std::size_t i) { return phi_eval(spec, x_at(i)); });
  res.points = n;
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i].sign < 0) res.violations.push_back(x_at(i));
    if (values[i].sign == 0) res.zeros.push_back(x_at(i));
    if (values[i].approx < values[best].approx) best = i;
  }
  res.min_value = values[best].approx;
  res.argmin = x_at(best);
  return res;
}

}  // namespace

PhiScanResult phi_scan(const PhiSpec& spec, long denominator, const BigRat& range, unsigned jobs) {
  BigRat span = qabs(range) * denominator;
  BigInt k;
  mpz_fdiv_q(k.get_mpz_t(), span.get_num_mpz_t(), span.get_den_mpz_t());
  return scan_range(spec, denominator, -k, k, jobs);
}

PhiScanResult phi_scan_window(const PhiSpec& spec, long denominator, double center, const BigRat& radius,
                              unsigned jobs) {
  BigRat c(center);
  BigRat lo = (c - qabs(radius)) * denominator;
  BigRat hi = (c + qabs(radius)) * denominator;
  BigInt k_lo, k_hi;
  mpz_cdiv_q(k_lo.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  mpz_fdiv_q(k_hi.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
  return scan_range(spec, denominator, k_lo, k_hi, jobs);
}

TailDominance phi_tail(const PhiSpec& spec) {
  const auto& polys = phi_polys(spec);
  const auto& tr = traits(spec.id);
  TailDominance out;
  out.deg_alpha = polys.alpha.degree();
  out.deg_beta = polys.beta.degree();
  out.deg_delta = polys.delta.degree();
  long da = 3L * out.deg_alpha, db = 2L * out.deg_beta;
  BigRat lead;
  if (da > db) {
    lead = qabs(rpow(polys.alpha.leading(), 3));
  } else if (db > da) {
    lead = polys.beta.leading() * polys.beta.leading();
  } else {
    lead = rat_max(qabs(rpow(polys.alpha.leading(), 3)), polys.beta.leading() * polys.beta.leading());
  }
  lead *= spec.height_factor();
  long lhs_deg = std::max(da, db);
  out.lhs_degree = BigRat(lhs_deg);
  out.rhs_degree = BigRat(tr.l.p * out.deg_delta, tr.l.q);
  out.rhs_degree.canonicalize();
  if (out.lhs_degree != out.rhs_degree) {
    out.dominates = out.lhs_degree > out.rhs_degree;
  } else {
    BigRat dl = qabs(branch(spec.id, spec.v).delta_factor * polys.delta.leading());
    out.dominates = rpow(lead, tr.l.q) > rpow(dl, tr.l.p);
  }
  return out;
}

HomogeneityReport homogeneity_check(const FamilyInstance& inst) {
  if (inst.id == T::C3_0) throw std::invalid_argument("no homogeneity identities for C3_0");
  if (inst.a == 0) throw std::invalid_argument("leading parameter must be nonzero");
  const auto& tr = traits(inst.id);
  auto s = inst.slots();
  auto scaled = scaled_slots(inst);
  auto full = compute_invariants(family_model(inst.id, s));
  auto pat = compute_invariants(family_model(inst.id, scaled.pattern));
  long m = tr.m;
  long ml = m * tr.l.q / tr.l.p;
  HomogeneityReport rep;
  rep.alpha = full.c4 == rpow(scaled.scale_ab, m / 3) * pat.c4;
  rep.beta = full.c6 == rpow(scaled.scale_ab, m / 2) * pat.c6;
  rep.delta = delta_base(inst.id, s) == rpow(scaled.scale_delta, ml) * delta_base(inst.id, scaled.pattern);
  return rep;
}

HeightBoundReport verify_height_bound(const FamilyInstance& inst) {
  return verify_height_bound(inst, analyze(build_model(inst)));
}

HeightBoundReport verify_height_bound(const FamilyInstance& inst, const ReductionSummary& summary) {
  const auto& tr = traits(inst.id);
  auto fi = family_invariants(inst);
  auto ut = recover_uT(inst, summary);
  BigRat h = BigRat(naive_height(fi.alpha, fi.beta)) / BigRat(ipow(ut.u, 12));
  if (h.get_den() != 1) throw ContractViolation("u^-12 max{|alpha^3|, beta^2} is not an integer at " + inst.describe());
  HeightBoundReport rep;
  rep.height = h.get_num();
  rep.delta = inst.id == T::C3_0 ? BigInt(27 * inst.a * inst.a) : delta_eval(inst, ut.v);
  rep.ok = ipow(abs(rep.delta), static_cast<unsigned long>(tr.l.p)) <
           ipow(rep.height, static_cast<unsigned long>(tr.l.q));
  return rep;
}

}  // namespace szpiro
