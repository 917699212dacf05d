// Command-line front end: classification, tables, constructions and sweeps.
//
// Exit codes: 0 all agree, 1 disagreement (witness on stderr), 2 usage or
// parse error, 3 size gate exceeded.

#include <cstdlib>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nto1/acceptance.hpp"
#include "nto1/nto1.hpp"

using namespace nto1;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDisagree = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGate = 3;

struct Options {
  std::string field;
  std::string poly;
  std::string params;
  std::string id;
  std::string family;
  std::uint64_t max_domain = 4096;
  unsigned workers = 0;
  std::uint64_t seed = 1;
  bool nightly = false;
  bool all = false;
  int degree = 3;
  int phi = 1;
  unsigned k = 1;
  std::uint64_t count = 20;
  std::uint64_t max_a = 100;
  // construct shortcuts
  std::uint64_t q1 = 0;
  unsigned m = 0;
  std::string delta;
};

bool nightly(const Options& o) {
  const char* env = std::getenv("NTO1_NIGHTLY");
  return o.nightly || (env && std::string(env) == "1");
}

void gate(const Options& o, std::uint64_t size, std::uint64_t limit, const std::string& what) {
  if (size > limit && !nightly(o))
    fail(ErrorKind::GateExceeded, what + " of size " + std::to_string(size) + " exceeds gate " + std::to_string(limit) +
                                      " (use --nightly or NTO1_NIGHTLY=1)");
}

Field require_field(const Options& o) {
  if (o.field.empty()) fail(ErrorKind::ParseError, "--field is required");
  return parse_field(o.field);
}

std::string quoted(const Json& j) {
  std::string s = j.dump();
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// "k=v,k=v"; commas inside brackets belong to the value
std::map<std::string, std::string> parse_params(const std::string& text) {
  std::map<std::string, std::string> out;
  std::string cur;
  int depth = 0;
  auto flush = [&] {
    if (cur.empty()) return;
    const auto eq = cur.find('=');
    if (eq == std::string::npos) fail(ErrorKind::ParseError, "expected key=value in --params: " + cur);
    out[cur.substr(0, eq)] = cur.substr(eq + 1);
    cur.clear();
  };
  for (char c : text) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0)
      flush();
    else
      cur += c;
  }
  flush();
  return out;
}

class Params {
 public:
  explicit Params(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}
  bool has(const std::string& k) const { return kv_.count(k) > 0; }
  const std::string& str(const std::string& k) const {
    auto it = kv_.find(k);
    if (it == kv_.end()) fail(ErrorKind::ParseError, "missing parameter " + k);
    return it->second;
  }
  std::uint64_t uint(const std::string& k) const { return detail::parse_uint(str(k), k.c_str()); }
  std::uint64_t uint_or(const std::string& k, std::uint64_t d) const { return has(k) ? uint(k) : d; }
  Element elem(const Field& F, const std::string& k) const { return parse_element(F, str(k)); }
  Element elem_or(const Field& F, const std::string& k, const Element& d) const { return has(k) ? elem(F, k) : d; }
  PolyMap poly(const Field& F, const std::string& k) const { return parse_poly(F, str(k)); }
  void set_default(const std::string& k, const std::string& v) { kv_.emplace(k, v); }

 private:
  std::map<std::string, std::string> kv_;
};

Params gather_params(const Options& o) {
  auto kv = parse_params(o.params);
  if (o.q1) kv.emplace("q1", std::to_string(o.q1));
  if (o.m) kv.emplace("m", std::to_string(o.m));
  if (!o.delta.empty()) kv.emplace("delta", o.delta);
  return Params(kv);
}

// --- families ------------------------------------------------------------------------

bool is_gouzao(const std::string& f) { return f == "gouzao1" || f == "gouzao2" || f == "gouzao3"; }
bool is_binary(const std::string& f) { return f == "2gouzao1" || f == "2gouzao2"; }
bool is_mu(const std::string& f) { return f == "miu2" || f == "miu3" || f == "nmiu3"; }

// GF(q^2) with q = q1^m, when --field is absent.
Field family_field(const Options& o, const std::string& family, const Params& P) {
  if (!o.field.empty()) return parse_field(o.field);
  if ((is_gouzao(family) || is_binary(family)) && P.has("q1")) {
    const std::uint64_t p = is_gouzao(family) ? 3 : 2;
    const int j = exact_log(P.uint("q1"), p);
    if (j <= 0) fail(ErrorKind::InvalidArgument, "q1 must be a power of " + std::to_string(p));
    return Field::make(p, 2 * static_cast<unsigned>(j) * static_cast<unsigned>(P.uint_or("m", 1)));
  }
  fail(ErrorKind::ParseError, "--field is required for " + family);
}

std::uint64_t default_q1(const Field& F, const std::string& family) {
  if (family == "2gouzao2") return 0;
  return checked_pow(F.p(), F.m() / 2);
}

FamilyInstance build_family(const std::string& family, const Field& F, const Params& P, Mode mode) {
  if (is_gouzao(family)) {
    return construct_gouzao(family.back() - '0', F, P.uint_or("q1", default_q1(F, family)),
                            P.elem_or(F, "delta", F.zero()), mode);
  }
  if (is_binary(family)) {
    return construct_binary(family == "2gouzao1" ? 'A' : 'B', F, P.uint_or("q1", default_q1(F, family)),
                            P.elem_or(F, "delta", F.zero()), mode);
  }
  if (family == "miu2") return construct_miu2(F, P.uint("r"), P.elem(F, "a"), P.elem(F, "b"), mode);
  if (family == "miu3") return construct_miu3(F, P.uint("r"), P.elem(F, "a"), P.elem(F, "b"), P.elem(F, "c"), mode);
  if (family == "nmiu3")
    return construct_nmiu3(F, P.uint("r"), P.elem(F, "a"), P.elem(F, "b"), P.elem(F, "c"), P.elem(F, "d"), mode);
  if (family == "xrhxs") return build_xr_hxs(F, P.uint("r"), P.uint("s"), P.poly(F, "h"), P.uint("n"), mode);
  if (family == "zcriterion") {
    return zcriterion(F, static_cast<unsigned>(P.uint("e")), static_cast<unsigned>(P.uint("k")),
                      P.elem_or(F, "delta", F.zero()), P.elem_or(F, "c", F.one()), P.poly(F, "g"), P.uint("n"), mode);
  }
  fail(ErrorKind::ParseError,
       "unknown family " + family + " (gouzao1..3, 2gouzao1, 2gouzao2, miu2, miu3, nmiu3, xrhxs, zcriterion)");
}

Json instance_to_json(const FamilyInstance& I, const FamilyVerdict& v) {
  Json params = Json::object();
  for (const auto& [k, val] : I.params) params[k] = val;
  return Json{{"family", I.family},
              {"field", field_to_json(I.field)},
              {"n", I.n},
              {"params", params},
              {"f", poly_to_json(I.f)},
              {"predicate", v.predicate},
              {"brute_force", v.f_nto1},
              {"reduced", v.reduced_nto1},
              {"agree", v.agree()},
              {"warnings", I.warnings}};
}

// Class sweep for the mu-families: r coprime to s, values run over coset representatives.
CsvTable mu_sweep_table(const std::string& family, const Field& F, std::uint64_t& disagreements, std::string& witness) {
  const std::uint64_t ell = family == "miu2" ? 2 : family == "miu3" ? 3 : 4;
  const std::uint64_t q = F.order();
  if ((q - 1) % ell) fail(ErrorKind::InvalidArgument, family + " needs " + std::to_string(ell) + " | q - 1");
  const std::uint64_t s = (q - 1) / ell;
  std::vector<Element> reps;
  for (std::uint64_t j = 0; j < ell; ++j) reps.push_back(F.pow(F.beta(), j));
  CsvTable t{family + "/1", {"r"}, {}};
  for (std::uint64_t i = 0; i < ell; ++i) t.header.push_back(std::string(1, static_cast<char>('a' + i)));
  for (const char* h : {"predicate", "brute_force", "agree"}) t.header.push_back(h);
  for (std::uint64_t r = 1; r < q; ++r) {
    if (std::gcd(r, s) != 1) continue;
    std::vector<std::size_t> idx(ell, 0);
    for (;;) {
      std::vector<Element> v;
      for (auto i : idx) v.push_back(reps[i]);
      const FamilyInstance I = ell == 2   ? construct_miu2(F, r, v[0], v[1])
                               : ell == 3 ? construct_miu3(F, r, v[0], v[1], v[2])
                                          : construct_nmiu3(F, r, v[0], v[1], v[2], v[3]);
      const auto verdict = evaluate(I);
      std::vector<std::string> row{std::to_string(r)};
      for (const auto& x : v) row.push_back(std::to_string(F.code(x)));
      row.push_back(csv_bool(verdict.predicate));
      row.push_back(csv_bool(verdict.f_nto1));
      row.push_back(csv_bool(verdict.agree()));
      if (!verdict.agree() && disagreements++ == 0) {
        witness = family + " r=" + std::to_string(r);
        for (const auto& x : v) witness += " " + std::to_string(F.code(x));
      }
      t.add(row);
      std::size_t k = 0;
      while (k < ell && ++idx[k] == ell) idx[k++] = 0;
      if (k == ell) break;
    }
  }
  return t;
}

CsvTable trace_sweep_table(const Options& o, const std::string& family, const Field& F, const Params& P,
                           std::uint64_t& disagreements, std::string& witness) {
  const unsigned e = F.m() / 2;
  auto rows = trace_sweep(F, e, [&](const Element& d) {
    Params local = P;
    local.set_default("q1", std::to_string(default_q1(F, family)));
    return is_gouzao(family) ? construct_gouzao(family.back() - '0', F, local.uint("q1"), d)
                             : construct_binary(family == "2gouzao1" ? 'A' : 'B', F, local.uint("q1"), d);
  }, o.workers);
  CsvTable t{family + "/1", {"trace", "delta", "predicate", "brute_force", "agree"}, {}};
  for (const auto& r : rows) {
    t.add({quoted(element_to_json(F, F.from_code(r.trace))), quoted(element_to_json(F, F.from_code(r.delta))),
           csv_bool(r.predicate), csv_bool(r.brute_force), csv_bool(r.agree())});
    if (!r.agree() && disagreements++ == 0) witness = family + " delta code " + std::to_string(r.delta);
  }
  return t;
}

CsvTable cubic_table(const Field& F, std::uint64_t& disagreements, std::string& witness) {
  CsvTable t{"lowdeg3/1", {"a", "b", "predicted", "brute_force", "agree"}, {}};
  for (const auto& r : cubic_sweep(F)) {
    t.add({std::to_string(r.a), std::to_string(r.b), csv_bool(r.predicted), csv_bool(r.brute_force), csv_bool(r.agree())});
    if (!r.agree() && disagreements++ == 0) witness = "x^3 with a=" + std::to_string(r.a) + " b=" + std::to_string(r.b);
  }
  return t;
}

int finish(const CsvTable& t, std::uint64_t disagreements, const std::string& witness) {
  std::cout << t.str();
  if (disagreements) {
    std::cerr << disagreements << " disagreements; first: " << witness << "\n";
    return kExitDisagree;
  }
  return kExitOk;
}

// --- subcommands ---------------------------------------------------------------------

int cmd_field(const Options& o) {
  const Field F = require_field(o);
  Json j = field_to_json(F);
  j["order"] = F.order();
  std::cout << j.dump() << "\n";
  return kExitOk;
}

int cmd_classify(const Options& o) {
  const Field F = require_field(o);
  gate(o, F.order(), kLogTableLimit, "field");
  if (o.poly.empty()) fail(ErrorKind::ParseError, "--poly is required");
  std::cout << report_to_json(F, classify(parse_poly(F, o.poly))).dump() << "\n";
  return kExitOk;
}

int cmd_walsh(const Options& o) {
  const Field F = require_field(o);
  gate(o, F.order(), kMaxWalshOrder, "field");
  if (o.poly.empty()) fail(ErrorKind::ParseError, "--poly is required");
  const auto values = parse_poly(F, o.poly).value_codes();
  const PhiGadget g = o.phi == 1 ? phi1(F.p(), F.m()) : phi2(F.p(), F.m(), o.k);
  const WalshZeroTable W = walsh_zero_table(F, values);
  CsvTable t{"walsh/1", {"v", "walsh"}, {}};
  for (std::uint64_t v = 0; v < F.order(); ++v)
    t.add({quoted(element_to_json(F, F.from_code(v))), quoted(Json(W.at(v).coeffs()))});
  const Rational s = char_sum(F, values, g);
  std::cout << t.str();
  std::cout << "#char_sum=" << numerator(s).str() << "/" << denominator(s).str() << "\n";
  std::cout << "#n=" << g.n << ",verdict=" << csv_bool(spectral_verdict(F, values, g)) << "\n";
  return kExitOk;
}

int cmd_lowdeg(const Options& o) {
  const Field F = require_field(o);
  std::uint64_t bad = 0;
  std::string witness;
  if (o.degree == 3) {
    gate(o, F.order(), 4096, "field");
    return finish(cubic_table(F, bad, witness), bad, witness);
  }
  if (o.degree != 4) fail(ErrorKind::ParseError, "--degree must be 3 or 4");
  gate(o, F.order(), 49, "field");
  const auto res = quartic_3to1_search(F, o.workers, o.seed);
  CsvTable t{"lowdeg4/1", {"a", "b", "c", "predicted", "brute_force", "agree"}, {}};
  // no normalized quartic is predicted 3-to-1 once q > 4, so every listed hit disagrees
  const bool predicted = F.order() <= 4;
  for (const auto& h : res.hits) {
    t.add({std::to_string(h[0]), std::to_string(h[1]), std::to_string(h[2]), csv_bool(predicted), "true",
           csv_bool(predicted)});
    if (!predicted && bad++ == 0)
      witness = "x^4 + a x^3 + b x^2 + c x with (a,b,c) = (" + std::to_string(h[0]) + "," + std::to_string(h[1]) + "," +
                std::to_string(h[2]) + ")";
  }
  const int rc = finish(t, bad, witness);
  std::cout << "#triples_checked=" << res.triples_checked << ",sampled=" << csv_bool(res.sampled) << "\n";
  return rc;
}

int cmd_diagram(const Options& o) {
  std::mt19937_64 rng(o.seed);
  CsvTable t{"diagram/1", {"index", "size_a", "size_s", "n", "f_nto1", "g_nto1", "condition3", "forward", "backward"}, {}};
  std::uint64_t bad = 0;
  std::string witness;
  for (std::uint64_t i = 0; i < o.count; ++i) {
    const auto P = random_diagram_params(rng, o.max_a);
    const auto d = random_diagram(P, rng);
    const auto c = verify_diagram(d, std::max(1u, o.workers));
    const auto v = transfer(c);
    const bool ok = c.ok() && v.forward_holds() && v.backward_holds();
    t.add({std::to_string(i), std::to_string(d.A.size()), std::to_string(d.S.size()), std::to_string(d.n),
           csv_bool(v.f_nto1), csv_bool(v.g_nto1), csv_bool(v.condition3), csv_bool(v.forward_holds()),
           csv_bool(v.backward_holds())});
    if (!ok && bad++ == 0) witness = "diagram " + std::to_string(i);
  }
  return finish(t, bad, witness);
}

int cmd_construct(const Options& o) {
  const Params P = gather_params(o);
  const Field F = family_field(o, o.family, P);
  gate(o, F.order(), kLogTableLimit, "field");
  const FamilyInstance I = build_family(o.family, F, P, Mode::Strict);
  const auto v = evaluate(I);
  std::cout << instance_to_json(I, v).dump() << "\n";
  if (!v.agree()) {
    std::cerr << "predicate " << csv_bool(v.predicate) << " but brute force " << csv_bool(v.f_nto1) << "\n";
    return kExitDisagree;
  }
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  const Params P = gather_params(o);
  const Field F = family_field(o, o.family, P);
  gate(o, F.order(), o.max_domain, "field");
  std::uint64_t bad = 0;
  std::string witness;
  if (is_gouzao(o.family) || is_binary(o.family)) return finish(trace_sweep_table(o, o.family, F, P, bad, witness), bad, witness);
  if (is_mu(o.family)) return finish(mu_sweep_table(o.family, F, bad, witness), bad, witness);
  fail(ErrorKind::ParseError, "sweep supports gouzao1..3, 2gouzao1, 2gouzao2, miu2, miu3, nmiu3");
}

// Field-specific sweeps bound to theorem ids.
int verify_on_field(const Options& o) {
  const Field F = parse_field(o.field);
  gate(o, F.order(), o.max_domain, "field");
  std::uint64_t bad = 0;
  std::string witness;
  const std::string& id = o.id;
  if (id == "de3p3" || id == "de3pne3") {
    if ((id == "de3p3") != (F.p() == 3)) fail(ErrorKind::InvalidArgument, id + " does not apply in characteristic " + std::to_string(F.p()));
    return finish(cubic_table(F, bad, witness), bad, witness);
  }
  if (id == "monomial") {
    CsvTable t{"monomial/1", {"d", "gcd", "n", "exception", "agree"}, {}};
    for (std::uint64_t d = 1; d < F.order(); ++d) {
      const auto r = classify(PolyMap::monomial(F, F.one(), d));
      const std::uint64_t n = std::gcd(d, F.order() - 1);
      const bool ok = r.n == n && (n > 1 ? r.exception && r.exception->first == 0 && r.exception->second == 1 : !r.exception);
      t.add({std::to_string(d), std::to_string(n), std::to_string(r.n), csv_bool(r.exception.has_value()), csv_bool(ok)});
      if (!ok && bad++ == 0) witness = "x^" + std::to_string(d);
    }
    return finish(t, bad, witness);
  }
  if (id == "quartic") {
    Options q = o;
    q.degree = 4;
    return cmd_lowdeg(q);
  }
  if (is_mu(id)) return finish(mu_sweep_table(id, F, bad, witness), bad, witness);
  if (is_gouzao(id) || is_binary(id)) {
    const Params P = gather_params(o);
    return finish(trace_sweep_table(o, id, F, P, bad, witness), bad, witness);
  }
  fail(ErrorKind::ParseError, "theorem " + id + " has no field-specific sweep; run it without --field");
}

int cmd_verify(const Options& o) {
  if (!o.all && o.id.empty()) fail(ErrorKind::ParseError, "give a theorem id or --all");
  if (!o.all && !find_criterion(o.id)) fail(ErrorKind::ParseError, "unknown theorem id " + o.id);
  if (!o.all && !o.field.empty()) return verify_on_field(o);
  bool all_pass = true;
  for (const auto& c : criteria()) {
    if (!o.all && c.id != o.id) continue;
    const auto r = run_criterion(c, o.workers);
    std::cout << format_result(c, r) << std::endl;
    if (!r.pass) {
      std::cerr << c.id << ": " << r.detail << "\n";
      all_pass = false;
    }
  }
  return all_pass ? kExitOk : kExitDisagree;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"n-to-1 mappings over finite fields"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--workers", o.workers, "worker threads (0 = hardware)");
  app.add_flag("--nightly", o.nightly, "lift size gates");
  app.add_option("--max-domain", o.max_domain, "largest field order swept without --nightly");

  auto field_opt = [&](CLI::App* sub) { sub->add_option("--field", o.field, "p=..,m=..[,modulus=c0:c1:..] or JSON"); };

  auto* field = app.add_subcommand("field", "print the field and its primitive element");
  field_opt(field);
  auto* cls = app.add_subcommand("classify", "classify a polynomial map");
  field_opt(cls);
  cls->add_option("--poly", o.poly, "polynomial, e.g. \"x^3 + b^2*x\" or [[3,[1]]]");
  auto* walsh = app.add_subcommand("walsh", "Walsh table at u = 0 and the characterization sum");
  field_opt(walsh);
  walsh->add_option("--poly", o.poly);
  walsh->add_option("--phi", o.phi, "1: n = 2 gadget, 2: n = p^k gadget")->check(CLI::IsMember({1, 2}));
  walsh->add_option("--k", o.k, "exponent for the second gadget");
  auto* low = app.add_subcommand("lowdeg", "normalized cubic or quartic sweep");
  field_opt(low);
  low->add_option("--degree", o.degree)->check(CLI::IsMember({3, 4}));
  low->add_option("--seed", o.seed);
  auto* dia = app.add_subcommand("diagram", "random commutative diagrams through the transfer theorem");
  dia->add_option("--seed", o.seed);
  dia->add_option("--count", o.count);
  dia->add_option("--max-a", o.max_a);
  auto* con = app.add_subcommand("construct", "build one family instance");
  con->add_option("family", o.family)->required();
  field_opt(con);
  con->add_option("--params", o.params, "k=v,...");
  con->add_option("--q1", o.q1);
  con->add_option("--m", o.m);
  con->add_option("--delta", o.delta);
  auto* swp = app.add_subcommand("sweep", "sweep a family over its parameter classes");
  swp->add_option("family", o.family)->required();
  field_opt(swp);
  swp->add_option("--params", o.params);
  swp->add_option("--q1", o.q1);
  swp->add_option("--m", o.m);
  auto* ver = app.add_subcommand("verify-theorem", "run the acceptance check bound to a theorem id");
  ver->add_option("id", o.id);
  ver->add_flag("--all", o.all);
  field_opt(ver);
  ver->add_option("--q1", o.q1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*field) return cmd_field(o);
    if (*cls) return cmd_classify(o);
    if (*walsh) return cmd_walsh(o);
    if (*low) return cmd_lowdeg(o);
    if (*dia) return cmd_diagram(o);
    if (*con) return cmd_construct(o);
    if (*swp) return cmd_sweep(o);
    if (*ver) return cmd_verify(o);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.kind() == ErrorKind::GateExceeded ? kExitGate : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
