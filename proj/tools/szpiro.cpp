// szpiro: command-line front end for curve invariants, family sweeps, the
// phi scans and the sharpness series.
//
// Exit codes: 0 all checks passed, 1 a mathematical check failed (or the
// curve is singular), 2 usage or validation error.

#include "szpiro/arith.hpp"
#include "szpiro/bounds.hpp"
#include "szpiro/families.hpp"
#include "szpiro/reduction.hpp"
#include "szpiro/sharpness.hpp"
#include "szpiro/sweep.hpp"
#include "szpiro/weierstrass.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace szpiro;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string str(const BigInt& n) { return n.get_str(); }
std::string str(const BigRat& q) { return to_string(q); }

json model_json(const WeierstrassModel& m) {
  return json::array({str(m.a1), str(m.a2), str(m.a3), str(m.a4), str(m.a6)});
}

WeierstrassModel parse_model(const std::string& text) {
  std::vector<BigRat> c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) c.push_back(parse_rational(item));
  if (c.size() != 5) throw UsageError("--model needs exactly five coefficients a1,a2,a3,a4,a6");
  return {c[0], c[1], c[2], c[3], c[4]};
}

BigInt parse_int(const std::string& text, const char* what) {
  BigRat q;
  try {
    q = parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw UsageError(std::string(what) + " must be an integer, got '" + text + "'");
  }
  if (q.get_den() != 1) throw UsageError(std::string(what) + " must be an integer, got '" + text + "'");
  return q.get_num();
}

// ---------------------------------------------------------------------------
// Output: JSON lines, or CSV with a fresh header whenever the columns change.

enum class Format { JsonLines, Csv };

Format parse_format(const std::string& f) {
  if (f == "jsonl" || f == "json") return Format::JsonLines;
  if (f == "csv") return Format::Csv;
  throw UsageError("unknown format '" + f + "' (jsonl or csv)");
}

class RowWriter {
 public:
  RowWriter(const std::string& path, Format format) : format_(format) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot open " + path + " for writing");
    }
  }

  void write(const json& row) {
    std::ostream& os = out();
    if (format_ == Format::JsonLines) {
      os << row.dump() << '\n';
      return;
    }
    std::vector<std::string> keys;
    for (auto it = row.begin(); it != row.end(); ++it) keys.push_back(it.key());
    if (keys != header_) {
      header_ = keys;
      for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
      os << '\n';
    }
    std::size_t i = 0;
    for (auto it = row.begin(); it != row.end(); ++it, ++i) os << (i ? "," : "") << cell(*it);
    os << '\n';
  }

  void flush() { out().flush(); }

 private:
  std::ostream& out() { return file_ ? *file_ : std::cout; }

  static std::string cell(const json& v) {
    std::string s;
    if (v.is_null()) return "";
    if (v.is_string()) {
      s = v.get<std::string>();
    } else if (v.is_number_float()) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
      return buf;
    } else {
      s = v.dump();
    }
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }

  Format format_;
  std::unique_ptr<std::ofstream> file_;
  std::vector<std::string> header_;
};

// ---------------------------------------------------------------------------
// curve

int cmd_curve(const std::string& what, const std::string& model_text) {
  WeierstrassModel model = parse_model(model_text);
  json out;
  out["model"] = model_json(model);
  if (what == "invariants") {
    auto inv = compute_invariants(model);
    out["b2"] = str(inv.b2);
    out["b4"] = str(inv.b4);
    out["b6"] = str(inv.b6);
    out["b8"] = str(inv.b8);
    out["c4"] = str(inv.c4);
    out["c6"] = str(inv.c6);
    out["delta"] = str(inv.delta);
    if (inv.delta == 0) {
      out["singular"] = true;
      std::cout << out.dump() << '\n';
      std::cerr << "error: singular model (discriminant is zero)\n";
      return kExitFailed;
    }
    out["j"] = str(j_invariant(model));
  } else if (what == "minimal") {
    auto mm = minimal_model(model);
    out["minimal"] = model_json(mm.minimal);
    out["u"] = str(mm.scaling_u);
    out["iso"] = {{"u", str(mm.iso.u)}, {"r", str(mm.iso.r)}, {"s", str(mm.iso.s)}, {"t", str(mm.iso.t)}};
    out["delta_min"] = str(mm.delta_min);
  } else if (what == "conductor") {
    auto summary = analyze(model);
    out["minimal"] = model_json(summary.min.minimal);
    out["delta_min"] = str(summary.min.delta_min);
    json local = json::array();
    for (const auto& l : summary.local)
      local.push_back({{"p", str(l.p)}, {"v_delta", l.vp_delta}, {"f_p", l.fp}, {"kodaira", l.kodaira},
                       {"semistable", l.semistable}});
    out["local"] = local;
    out["conductor"] = str(summary.conductor);
    out["semistable"] = summary.semistable();
  } else if (what == "ratio") {
    auto summary = analyze(model);
    BigInt h = naive_height(summary.invariants.c4, summary.invariants.c6);
    out["c4"] = str(summary.invariants.c4);
    out["c6"] = str(summary.invariants.c6);
    out["height"] = str(h);
    out["conductor"] = str(summary.conductor);
    if (summary.conductor > 1) {
      out["sigma_m"] = szpiro_ratio(h, summary.conductor);
    } else {
      out["sigma_m"] = nullptr;
    }
  } else {
    throw UsageError("unknown curve subcommand '" + what + "'");
  }
  std::cout << out.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// family

std::string exponent_str(const SzpiroExponent& l) {
  return l.q == 1 ? std::to_string(l.p) : std::to_string(l.p) + "/" + std::to_string(l.q);
}

struct InstanceCheck {
  json row;
  bool ok = true;
  // Per-check failure flags, in the order of kCheckNames.
  bool failed[6] = {};
  double sigma = 0.0;
  bool has_sigma = false;
};

constexpr const char* kCheckNames[6] = {"szpiro_bound", "conductor_bound", "torsion", "order2_bound", "height_bound",
                                       "homogeneity"};

InstanceCheck check_instance(const FamilyInstance& inst, bool bounds, bool height) {
  InstanceCheck res;
  json& row = res.row;
  const auto& tr = traits(inst.id);
  row["kind"] = "instance";
  row["T"] = std::string(tr.name);
  row["a"] = str(inst.a);
  row["b"] = str(inst.b);
  row["d"] = str(inst.d);

  WeierstrassModel model = build_model(inst);
  auto summary = analyze(model);
  BigInt h = naive_height(summary.invariants.c4, summary.invariants.c6);
  row["model"] = model_json(model);
  row["height"] = str(h);
  row["conductor"] = str(summary.conductor);
  if (summary.conductor > 1) {
    res.sigma = szpiro_ratio(h, summary.conductor);
    res.has_sigma = true;
    row["sigma_m"] = res.sigma;
  } else {
    row["sigma_m"] = nullptr;
  }

  std::vector<std::string> failures;
  auto mark = [&](int idx, bool ok, const std::string& why) {
    row[kCheckNames[idx]] = ok;
    if (!ok) {
      res.failed[idx] = true;
      failures.push_back(why);
    }
  };

  if (bounds) {
    mark(0, exceeds(h, summary.conductor, tr.l), "height^q <= N^p for l_T = " + exponent_str(tr.l));
    try {
      auto cb = verify_conductor_bound(inst, summary);
      row["u"] = str(cb.ut.u);
      row["delta_bound"] = str(cb.bound);
      mark(1, cb.ok(), cb.describe());
    } catch (const ContractViolation& e) {
      row["u"] = nullptr;
      row["delta_bound"] = nullptr;
      mark(1, false, e.what());
    }
    auto cert = certify_torsion(inst);
    row["order_of_origin"] = cert.order_of_origin ? json(*cert.order_of_origin) : json(nullptr);
    mark(2, cert.ok, "order of (0,0) is not " + std::to_string(cert.expected_order));
    if (cert.two_torsion_points > 0) {
      mark(3, exceeds(h, summary.conductor, SzpiroExponent{3, 2}), "point of order 2 with sigma_m <= 3/2");
    } else {
      row[kCheckNames[3]] = nullptr;
    }
  }
  if (height) {
    auto hb = verify_height_bound(inst, summary);
    mark(4, hb.ok, "|delta|^l >= u^-12 max{|alpha^3|, beta^2}");
    if (inst.id != Torsion::C3_0 && inst.a != 0) {
      auto hr = homogeneity_check(inst);
      mark(5, hr.ok(), "homogeneity identity failed");
    } else {
      row[kCheckNames[5]] = nullptr;
    }
  }
  res.ok = failures.empty();
  row["ok"] = res.ok;
  std::string joined;
  for (const auto& f : failures) joined += (joined.empty() ? "" : "; ") + f;
  row["failures"] = joined;
  return res;
}

int cmd_family_build(const std::string& T, const std::string& a, const std::string& b,
                     const std::optional<std::string>& d) {
  Torsion id = parse_torsion(T);
  std::optional<BigInt> dv;
  if (d) dv = parse_int(*d, "d");
  BigInt bv = (id == Torsion::C3_0 && b.empty()) ? BigInt(0) : parse_int(b.empty() ? "0" : b, "b");
  FamilyInstance inst = validate_params(id, parse_int(a, "a"), bv, dv);

  InstanceCheck res = check_instance(inst, true, true);
  json out;
  out["instance"] = inst.describe();
  if (inst.split) out["decomposition"] = {{"c", str(inst.split->c)}, {"d", str(inst.split->d)}, {"e", str(inst.split->e)}};
  auto fi = family_invariants(inst);
  out["alpha"] = str(fi.alpha);
  out["beta"] = str(fi.beta);
  out["gamma"] = str(fi.gamma);
  out["l_T"] = exponent_str(traits(id).l);
  for (auto it = res.row.begin(); it != res.row.end(); ++it) {
    if (it.key() == "kind" || it.key() == "T" || it.key() == "a" || it.key() == "b" || it.key() == "d") continue;
    out[it.key()] = it.value();
  }
  std::cout << out.dump() << '\n';
  return res.ok ? kExitOk : kExitFailed;
}

std::vector<Torsion> select_families(const std::string& T, bool include_c1) {
  if (T == "all") {
    std::vector<Torsion> out;
    if (include_c1) out.push_back(Torsion::C1);
    for (Torsion t : parameterized_families()) out.push_back(t);
    return out;
  }
  return {parse_torsion(T)};
}

struct VerifyOptions {
  std::string T = "all";
  long max = 30;
  long max_c3_0 = 100;
  std::string checks = "bounds";
  unsigned jobs = 1;
  std::string format = "jsonl";
  std::string out;
  bool emit_all = false;
  long den = 64;
  std::string range = "20";
  long sharp_n = 50;
};

int cmd_family_verify(const VerifyOptions& o) {
  bool bounds = false, height = false, phi = false, sharp = false;
  {
    std::stringstream ss(o.checks);
    std::string c;
    while (std::getline(ss, c, ',')) {
      if (c == "bounds") bounds = true;
      else if (c == "height") height = true;
      else if (c == "phi") phi = true;
      else if (c == "sharp") sharp = true;
      else throw UsageError("unknown check '" + c + "' (bounds, height, phi, sharp)");
    }
  }
  if (o.max < 1 || o.max_c3_0 < 1) throw UsageError("bounds must be positive");
  if (o.den < 1) throw UsageError("--den must be positive");
  RowWriter writer(o.out, parse_format(o.format));
  std::vector<Torsion> families = select_families(o.T, sharp);
  bool all_ok = true;

  for (Torsion id : families) {
    const std::string tname(name(id));
    if ((bounds || height) && id != Torsion::C1) {
      auto instances = enumerate_instances(id, o.max, o.max_c3_0);
      auto results = parallel_map<InstanceCheck>(instances.size(), o.jobs, [&](std::size_t i) {
        return check_instance(instances[i], bounds, height);
      });
      std::size_t fail_counts[6] = {};
      std::size_t failed = 0;
      double min_sigma = 0.0;
      bool have_sigma = false;
      for (const auto& r : results) {
        if (!r.ok) ++failed;
        for (int k = 0; k < 6; ++k) fail_counts[k] += r.failed[k];
        if (r.has_sigma && (!have_sigma || r.sigma < min_sigma)) {
          min_sigma = r.sigma;
          have_sigma = true;
        }
        if (o.emit_all || !r.ok) writer.write(r.row);
      }
      json s;
      s["kind"] = "family_summary";
      s["T"] = tname;
      s["instances"] = instances.size();
      s["failed"] = failed;
      for (int k = 0; k < 6; ++k) s[kCheckNames[k]] = fail_counts[k];
      s["min_sigma_m"] = have_sigma ? json(min_sigma) : json(nullptr);
      s["l_T"] = exponent_str(traits(id).l);
      writer.write(s);
      all_ok = all_ok && failed == 0;
    }
    if (phi) {
      for (const auto& spec : all_phi_specs()) {
        if (spec.id != id) continue;
        auto scan = phi_scan(spec, o.den, parse_rational(o.range), o.jobs);
        auto tail = phi_tail(spec);
        json r;
        r["kind"] = "phi";
        r["T"] = tname;
        r["u"] = spec.describe();
        r["points"] = scan.points;
        r["min"] = scan.min_value;
        r["argmin"] = str(scan.argmin);
        r["violations"] = scan.violations.size();
        r["zeros"] = scan.zeros.size();
        r["tail_dominates"] = tail.dominates;
        writer.write(r);
        all_ok = all_ok && scan.violations.empty() && tail.dominates;
      }
    }
    if (sharp && id != Torsion::C3_0) {
      std::vector<long> ns;
      for (long n = 2; n <= o.sharp_n; ++n) {
        ns.push_back(-n);
        ns.push_back(n);
      }
      auto reps = parallel_map<SharpConsistencyReport>(ns.size(), o.jobs, [&](std::size_t i) {
        return verify_sharp_consistency(id, BigInt(ns[i]));
      });
      std::size_t failed = 0;
      for (const auto& rep : reps) {
        if (rep.ok()) continue;
        ++failed;
        json r;
        r["kind"] = "sharp_mismatch";
        r["T"] = tname;
        r["n"] = str(rep.n);
        std::string joined;
        for (const auto& d : rep.discrepancies) joined += (joined.empty() ? "" : "; ") + d;
        r["discrepancies"] = joined;
        writer.write(r);
      }
      json s;
      s["kind"] = "sharp_summary";
      s["T"] = tname;
      s["checked"] = ns.size();
      s["failed"] = failed;
      s["degree_ratio"] = str(degree_ratio(id));
      s["degree_limit_ok"] = degree_limit_check(id);
      writer.write(s);
      all_ok = all_ok && failed == 0 && degree_limit_check(id);
    }
  }
  writer.flush();
  return all_ok ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------
// phi

struct PhiOptions {
  std::string T;
  std::string u = "1";
  long den = 64;
  std::string range = "20";
  std::optional<double> center;
  std::string radius = "1/16";
  unsigned jobs = 1;
  bool list_violations = false;
};

int cmd_phi(const PhiOptions& o) {
  Torsion id = parse_torsion(o.T);
  PhiSpec spec;
  try {
    spec = make_phi_spec(id, o.u);
  } catch (const ContractViolation& e) {
    throw UsageError(e.what());
  }
  if (o.den < 1) throw UsageError("--den must be positive");
  PhiScanResult scan = o.center ? phi_scan_window(spec, o.den, *o.center, parse_rational(o.radius), o.jobs)
                                : phi_scan(spec, o.den, parse_rational(o.range), o.jobs);
  auto tail = phi_tail(spec);
  json out;
  out["T"] = std::string(name(id));
  out["u"] = spec.describe();
  out["v"] = spec.v;
  out["den"] = o.den;
  if (o.center) {
    out["center"] = *o.center;
    out["radius"] = o.radius;
  } else {
    out["range"] = o.range;
  }
  out["points"] = scan.points;
  out["min"] = scan.min_value;
  out["argmin"] = str(scan.argmin);
  out["violations"] = scan.violations.size();
  out["zeros"] = scan.zeros.size();
  if (o.list_violations) {
    json v = json::array();
    for (const auto& x : scan.violations) v.push_back(str(x));
    out["violation_points"] = v;
  }
  out["tail"] = {{"lhs_degree", str(tail.lhs_degree)}, {"rhs_degree", str(tail.rhs_degree)},
                 {"dominates", tail.dominates}};
  std::cout << out.dump() << '\n';
  return scan.violations.empty() && tail.dominates ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------
// sharp

struct SharpOptions {
  std::string T;
  long nmin = 2;
  long nmax = 1000;
  long consistency = 0;
  std::size_t spot_stride = 0;
  unsigned jobs = 1;
  std::string format = "jsonl";
  std::string out;
  bool summary_only = false;
};

int cmd_sharp(const SharpOptions& o) {
  Torsion id = parse_torsion(o.T);
  if (id == Torsion::C3_0) throw UsageError("C3_0 has no sharpness family");
  if (o.nmax < 10) throw UsageError("--nmax must be at least 10");
  if (o.nmin < 2 || o.nmin > o.nmax) throw UsageError("--nmin must lie in [2, nmax]");
  RowWriter writer(o.out, parse_format(o.format));
  const std::string tname(name(id));
  bool ok = true;

  if (o.consistency > 0) {
    if (o.consistency < 2) throw UsageError("--consistency must be at least 2");
    std::vector<long> ns;
    for (long n = 2; n <= o.consistency; ++n) {
      ns.push_back(-n);
      ns.push_back(n);
    }
    auto reps = parallel_map<SharpConsistencyReport>(
        ns.size(), o.jobs, [&](std::size_t i) { return verify_sharp_consistency(id, BigInt(ns[i])); });
    std::size_t failed = 0;
    for (const auto& rep : reps) {
      if (!rep.ok()) ++failed;
      if (o.summary_only && rep.ok()) continue;
      json r;
      r["kind"] = "consistency";
      r["T"] = tname;
      r["n"] = str(rep.n);
      r["height"] = str(rep.height);
      r["f"] = str(rep.f);
      r["conductor"] = str(rep.conductor);
      r["squarefree"] = rep.squarefree;
      r["ok"] = rep.ok();
      std::string joined;
      for (const auto& d : rep.discrepancies) joined += (joined.empty() ? "" : "; ") + d;
      r["discrepancies"] = joined;
      writer.write(r);
    }
    json s;
    s["kind"] = "consistency_summary";
    s["T"] = tname;
    s["checked"] = ns.size();
    s["failed"] = failed;
    writer.write(s);
    ok = ok && failed == 0;
  }

  ConvergenceOptions copts;
  copts.n_min = o.nmin;
  copts.n_max = o.nmax;
  copts.jobs = o.jobs;
  copts.keep_records = !o.summary_only;
  copts.spot_stride = o.spot_stride;
  ConvergenceResult res;
  try {
    res = convergence_scan(id, copts);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
  for (const auto& rec : res.records) {
    json r;
    r["kind"] = "record";
    r["T"] = tname;
    r["n"] = rec.n;
    r["height"] = str(rec.height);
    r["f"] = str(rec.f_value);
    r["conductor"] = str(rec.conductor);
    r["sigma_m"] = rec.sigma_m;
    r["exceeds_l"] = rec.exceeds_l;
    writer.write(r);
  }
  for (const auto& d : res.discrepancies) {
    json r;
    r["kind"] = "spot_mismatch";
    r["T"] = tname;
    r["detail"] = d;
    writer.write(r);
  }
  const auto& tr = traits(id);
  json s;
  s["kind"] = "fit";
  s["T"] = tname;
  s["l_T"] = exponent_str(tr.l);
  s["count"] = res.fit.count;
  s["intercept"] = res.fit.intercept;
  s["slope"] = res.fit.slope;
  s["intercept_error"] = res.fit.intercept - tr.l.value();
  s["min_excess"] = res.fit.min_excess;
  s["last_sigma_m"] = res.fit.last_sigma;
  s["all_exceed"] = res.fit.all_exceed;
  s["spot_checks"] = res.spot_checks;
  s["spot_mismatches"] = res.discrepancies.size();
  s["degree_ratio"] = str(degree_ratio(id));
  writer.write(s);
  writer.flush();
  ok = ok && res.fit.all_exceed && res.discrepancies.empty();
  return ok ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact elliptic-curve invariants, conductors and Szpiro-ratio checks"};
  app.require_subcommand(1);
  unsigned jobs = default_jobs();

  auto* curve = app.add_subcommand("curve", "invariants, minimal model, conductor or Szpiro ratio of one curve");
  curve->require_subcommand(1);
  std::string model_text;
  std::string curve_what;
  for (const char* what : {"invariants", "minimal", "conductor", "ratio"}) {
    auto* sub = curve->add_subcommand(what);
    sub->add_option("--model", model_text, "a1,a2,a3,a4,a6 (integers or p/q)")->required()->allow_extra_args(false);
    sub->callback([&curve_what, what] { curve_what = what; });
  }

  auto* family = app.add_subcommand("family", "torsion-family models and sweeps");
  family->require_subcommand(1);
  auto* build = family->add_subcommand("build", "one family member with every bound check");
  std::string fT, fa, fb;
  std::optional<std::string> fd;
  build->add_option("--T", fT, "torsion structure, e.g. C5, C2xC4, C3_0")->required();
  build->add_option("--a", fa, "parameter a")->required();
  build->add_option("--b", fb, "parameter b");
  build->add_option("--d", fd, "parameter d (C2 and C2xC2)");

  VerifyOptions vo;
  vo.jobs = jobs;
  auto* verify = family->add_subcommand("verify", "sweep every valid instance up to a parameter bound");
  verify->add_option("--T", vo.T, "torsion structure or 'all'");
  verify->add_option("--max", vo.max, "bound on |a|, |b|, |d|");
  verify->add_option("--max-c3-0", vo.max_c3_0, "bound on a for C3_0");
  verify->add_option("--checks", vo.checks, "comma list of bounds, height, phi, sharp");
  verify->add_option("--jobs", vo.jobs, "worker threads (default SZPIRO_JOBS or core count)")->check(CLI::PositiveNumber);
  verify->add_option("--format", vo.format, "jsonl or csv");
  verify->add_option("--out", vo.out, "output file (default stdout)");
  verify->add_flag("--emit-all", vo.emit_all, "write every instance, not only failures");
  verify->add_option("--den", vo.den, "phi grid denominator");
  verify->add_option("--range", vo.range, "phi grid half-width");
  verify->add_option("--sharp-n", vo.sharp_n, "consistency check covers 2 <= |n| <= this");

  PhiOptions po;
  po.jobs = jobs;
  auto* phi = app.add_subcommand("phi", "nonnegativity scan of phi_{T,u} on a rational grid");
  phi->add_option("--T", po.T, "torsion structure")->required();
  phi->add_option("--u", po.u, "scaling: 1, 2, c or 2c");
  phi->add_option("--den", po.den, "grid denominator");
  phi->add_option("--range", po.range, "grid half-width");
  phi->add_option("--center", po.center, "scan a window around this point instead");
  phi->add_option("--radius", po.radius, "window half-width (with --center)");
  phi->add_option("--jobs", po.jobs, "worker threads")->check(CLI::PositiveNumber);
  phi->add_flag("--list-violations", po.list_violations, "print every negative grid point");

  SharpOptions so;
  so.jobs = jobs;
  auto* sharp = app.add_subcommand("sharp", "Szpiro ratios along the sharpness family F_T(n)");
  sharp->add_option("--T", so.T, "torsion structure (C1 allowed)")->required();
  sharp->add_option("--nmin", so.nmin, "smallest n");
  sharp->add_option("--nmax", so.nmax, "largest n");
  sharp->add_option("--consistency", so.consistency, "also cross-check the tables for 2 <= |n| <= N");
  sharp->add_option("--spot-stride", so.spot_stride, "recompute every k-th conductor from scratch");
  sharp->add_option("--jobs", so.jobs, "worker threads")->check(CLI::PositiveNumber);
  sharp->add_option("--format", so.format, "jsonl or csv");
  sharp->add_option("--out", so.out, "output file (default stdout)");
  sharp->add_flag("--summary-only", so.summary_only, "omit per-n records");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (curve->parsed()) return cmd_curve(curve_what, model_text);
    if (build->parsed()) return cmd_family_build(fT, fa, fb, fd);
    if (verify->parsed()) return cmd_family_verify(vo);
    if (phi->parsed()) return cmd_phi(po);
    if (sharp->parsed()) return cmd_sharp(so);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SingularModel& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  } catch (const std::invalid_argument& e) {
    // InvalidParameters, unknown torsion names, malformed numbers.
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitUsage;
}
