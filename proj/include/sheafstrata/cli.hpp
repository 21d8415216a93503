#pragma once

// Command-line driver. Exit codes: 0 success, 1 domain error or failed check, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sheafstrata/blowup.hpp"
#include "sheafstrata/io.hpp"
#include "sheafstrata/strata.hpp"

namespace sheafstrata::cli {

inline constexpr const char* kPrimeEnv = "SHEAF_STRATA_PRIME";

struct Options {
  std::string file = "-";
  std::string output;
  bool json = false;
  std::uint64_t seed = 1;
  int height = kDefaultHeight;
  int trials = 10000;
  std::uint32_t prime = 0;  // 0: environment or default
  int twist = 0;
  int dual_twist = 1;
  int variant = 10;
  std::string stratum;
  std::string f, points, q1, l1, q2, l2, p1, p2;
  std::vector<std::size_t> block;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::uint32_t resolve_prime(std::uint32_t flag) {
  std::uint64_t p = flag;
  if (p == 0) {
    if (const char* env = std::getenv(kPrimeEnv); env && *env) {
      char* end = nullptr;
      p = std::strtoull(env, &end, 10);
      if (*end != '\0') throw UsageError(std::string(kPrimeEnv) + " is not an integer");
    } else {
      p = kDefaultPrime;
    }
  }
  if (p > 0xFFFFFFFFull || !is_prime(p)) throw UsageError("prime " + std::to_string(p) + " is not a 32-bit prime");
  return static_cast<std::uint32_t>(p);
}

inline std::string read_input(const std::string& file, std::istream& in) {
  if (file.empty() || file == "-") return {std::istreambuf_iterator<char>(in), {}};
  std::ifstream f(file);
  if (!f) throw Error(ErrorKind::parse_error, "cannot open '" + file + "'");
  return {std::istreambuf_iterator<char>(f), {}};
}

inline void emit_presentation(const Presentation& p, const Options& o, std::ostream& out) {
  const std::string text = to_json(p).dump(2) + "\n";
  if (o.output.empty() || o.output == "-") {
    out << text;
    return;
  }
  std::ofstream f(o.output);
  if (!f) throw Error(ErrorKind::parse_error, "cannot write '" + o.output + "'");
  f << text;
}

inline VerifyOptions verify_options(const Options& o) { return {o.trials, resolve_prime(o.prime), o.seed}; }

inline std::string hilbert_text(const HilbertPolynomial& h) {
  return std::to_string(h.r) + "m" + (h.chi < 0 ? "" : "+") + std::to_string(h.chi);
}

inline Json checks_json(const StratumReport& r) {
  Json a = Json::array();
  for (const auto& c : r.checks) {
    Json e{{"name", c.name}, {"verdict", std::string(to_string(c.verdict))}};
    if (!c.detail.empty()) e["detail"] = c.detail;
    a.push_back(std::move(e));
  }
  return a;
}

inline void print_checks(const StratumReport& r, std::ostream& out) {
  for (const auto& c : r.checks) {
    out << "check=\"" << c.name << "\" verdict=" << to_string(c.verdict);
    if (!c.detail.empty()) out << " detail=\"" << c.detail << "\"";
    out << "\n";
  }
}

inline Point parse_point_arg(const std::string& s) { return parse_point(s); }

inline std::string matrix_text(const Matrix<Rational>& m) {
  std::string s = "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    s += r ? ",[" : "[";
    for (std::size_t c = 0; c < m.cols(); ++c) s += (c ? "," : "") + to_string(m(r, c));
    s += "]";
  }
  return s + "]";
}

// ---- subcommands ----

inline int cmd_classify(const Options& o, std::istream& in, std::ostream& out) {
  const Presentation p = parse_presentation(read_input(o.file, in));
  const Analysis a = analyze(p, verify_options(o));
  if (o.json) {
    Json j{{"stratum", name(a.stratum)},
           {"triple", {a.triple.h0_minus1, a.triple.h1, a.triple.h0_omega}},
           {"status", std::string(to_string(a.status))},
           {"hilbert", "6m+3"}};
    if (a.report) {
      j["possibly_properly_semistable"] = a.report->possibly_properly_semistable;
      j["checks"] = checks_json(*a.report);
    }
    out << j.dump(2) << "\n";
    return 0;
  }
  out << "stratum=" << name(a.stratum) << " triple=" << to_string(a.triple) << "\n";
  out << "status=" << to_string(a.status) << "\n";
  out << "hilbert=6m+3\n";
  if (a.report) {
    out << "possibly_properly_semistable=" << (a.report->possibly_properly_semistable ? "true" : "false") << "\n";
    print_checks(*a.report, out);
  }
  return 0;
}

inline int cmd_verify(const Options& o, std::istream& in, std::ostream& out) {
  const Presentation p = parse_presentation(read_input(o.file, in));
  const StratumReport r = verify_w(p, parse_stratum(o.stratum), verify_options(o));
  if (o.json) {
    Json j{{"stratum", name(r.stratum)}, {"all_pass", r.all_pass()}, {"certified", r.certified()}};
    if (r.triple) j["triple"] = {r.triple->h0_minus1, r.triple->h1, r.triple->h0_omega};
    if (r.hilbert) j["hilbert"] = hilbert_text(*r.hilbert);
    j["possibly_properly_semistable"] = r.possibly_properly_semistable;
    j["checks"] = checks_json(r);
    out << j.dump(2) << "\n";
  } else {
    out << "stratum=" << name(r.stratum) << " triple=" << (r.triple ? to_string(*r.triple) : "none") << "\n";
    if (r.hilbert) out << "hilbert=" << hilbert_text(*r.hilbert) << "\n";
    print_checks(r, out);
    out << "possibly_properly_semistable=" << (r.possibly_properly_semistable ? "true" : "false") << "\n";
    out << "all_pass=" << (r.all_pass() ? "true" : "false") << " certified=" << (r.certified() ? "true" : "false")
        << "\n";
  }
  return r.all_pass() ? 0 : 1;
}

inline int cmd_sample(const Options& o, std::ostream& out) {
  Rng rng(o.seed);
  emit_presentation(sample(parse_stratum(o.stratum), rng, o.height, verify_options(o)), o, out);
  return 0;
}

inline int cmd_audit(const Options& o, std::ostream& out) {
  const auto rows = codim_audit();
  bool ok = true;
  Json j = Json::array();
  for (const auto& r : rows) {
    ok = ok && r.pass;
    if (o.json) {
      j.push_back({{"stratum", name(r.stratum)}, {"dimension", r.dimension}, {"codim", r.expected_codim},
                   {"pass", r.pass}});
    } else {
      out << "stratum=" << name(r.stratum) << " dimension=" << r.dimension << " codim=" << r.expected_codim
          << " result=" << (r.pass ? "pass" : "fail") << "\n";
    }
  }
  if (o.json) out << j.dump(2) << "\n";
  return ok ? 0 : 1;
}

inline int cmd_build(const std::string& kind, const Options& o, std::istream& in, std::ostream& out) {
  Rng rng(o.seed);
  if (kind == "sextic") {
    emit_presentation(sextic_sheaf(parse_form(o.f, 6)), o, out);
  } else if (kind == "jz3") {
    std::istringstream pts(read_input(o.points, in));
    const PointSet z = parse_points(pts);
    const QForm f = o.f.empty() ? random_sextic_through(z, rng, o.height) : parse_form(o.f, 6);
    emit_presentation(twisted_ideal_sheaf(z, f), o, out);
  } else if (kind == "x5") {
    emit_presentation(
        x5_normal_form(parse_form(o.q1, 2), parse_form(o.l1, 1), parse_form(o.q2, 2), parse_form(o.l2, 1), rng, o.height),
        o, out);
  } else {
    emit_presentation(x6_normal_form(parse_point_arg(o.p1), parse_point_arg(o.p2), std::nullopt, rng, o.height), o, out);
  }
  return 0;
}

inline int cmd_cohomology(const Options& o, std::istream& in, std::ostream& out) {
  const Presentation p = parse_presentation(read_input(o.file, in));
  const int a = h0(p, o.twist), b = h1(p, o.twist);
  const long long chi = euler_characteristic(p, o.twist);
  const CohomologyTable t = cohomology_table(p);
  const HilbertPolynomial hp = hilbert_polynomial(p);
  if (o.json) {
    out << Json{{"twist", o.twist}, {"h0", a}, {"h1", b}, {"chi", chi},
                {"triple", {t.h0_minus1, t.h1, t.h0_omega}}, {"hilbert", hilbert_text(hp)}}
                   .dump(2)
        << "\n";
  } else {
    out << "twist=" << o.twist << " h0=" << a << " h1=" << b << " chi=" << chi << "\n";
    out << "triple=" << to_string(t) << "\n";
    out << "hilbert=" << hilbert_text(hp) << "\n";
  }
  return 0;
}

inline int cmd_dualize(const Options& o, std::istream& in, std::ostream& out) {
  const Presentation p = parse_presentation(read_input(o.file, in));
  require_valid(p);
  emit_presentation(dualize(p, o.dual_twist), o, out);
  return 0;
}

inline int cmd_kron(const Options& o, std::istream& in, std::ostream& out) {
  Presentation p = parse_presentation(read_input(o.file, in));
  if (!o.block.empty()) {
    if (o.block.size() != 4 || o.block[0] >= o.block[1] || o.block[2] >= o.block[3] || o.block[1] > p.rows() ||
        o.block[3] > p.cols())
      throw UsageError("--block expects r0,r1,c0,c1 with r0 < r1 <= rows and c0 < c1 <= cols");
    p = p.block(o.block[0], o.block[1], o.block[2], o.block[3]);
  }
  const auto mod = kronecker_module(p);
  Rng rng(o.seed);
  const KroneckerVerdict v = check_semistability(mod, o.trials, rng, resolve_prime(o.prime));
  if (o.json) {
    Json j{{"q", mod.q}, {"p", mod.p}, {"m", mod.m()}, {"verdict", std::string(to_string(v.verdict))}, {"trials", v.trials}};
    if (v.witness) j["witness"] = {{"u", matrix_text(v.witness->u)}, {"w", matrix_text(v.witness->w)}};
    out << j.dump(2) << "\n";
  } else {
    out << "shape=" << mod.q << "x" << mod.p << " m=" << mod.m() << "\n";
    out << "verdict=" << to_string(v.verdict) << " trials=" << v.trials << "\n";
    if (v.witness) out << "witness_u=" << matrix_text(v.witness->u) << "\nwitness_w=" << matrix_text(v.witness->w) << "\n";
  }
  return 0;
}

inline int cmd_blowdown(const Options& o, std::istream& in, std::ostream& out) {
  const BlowdownVariant v = parse_variant(o.variant);
  const Presentation p = parse_presentation(read_input(o.file, in));
  const Presentation d = blowdown(p, v);
  const Rational c = blowdown_scalar(p, v);
  const DeterminantLaw l = law(v);
  std::optional<FiberReport> fr;
  if (c != 0) fr = fiber_consistency(p, v);
  if (!o.output.empty()) emit_presentation(d, o, out);
  const std::string law_text = std::string(l.sign < 0 ? "-" : "+") + "c^" + std::to_string(l.exponent);
  if (o.json) {
    Json j{{"variant", o.variant}, {"c", to_string(c)}, {"image", to_json(d)}, {"det_law", law_text}};
    if (fr) {
      j["input_triple"] = to_string(fr->input);
      j["image_triple"] = to_string(fr->image);
      j["match"] = fr->match();
    }
    out << j.dump(2) << "\n";
  } else {
    out << "variant=" << o.variant << " c=" << to_string(c) << "\n";
    out << "image=" << to_json(d).dump() << "\n";
    out << "det_law=" << law_text << "\n";
    if (fr)
      out << "input_triple=" << to_string(fr->input) << " image_triple=" << to_string(fr->image)
          << " match=" << (fr->match() ? "true" : "false") << "\n";
    else
      out << "fiber=skipped\n";
  }
  return !fr || fr->match() ? 0 : 1;
}

inline void add_common(CLI::App* app, Options& o) {
  app->add_option("--seed", o.seed, "RNG seed");
  app->add_option("--trials", o.trials, "Kronecker search trials")->check(CLI::PositiveNumber);
  app->add_option("--prime", o.prime, std::string("search prime (default: $") + kPrimeEnv + " or 10007)");
  app->add_flag("--json", o.json, "JSON output");
}

inline const std::vector<std::string>& stratum_names() {
  static const std::vector<std::string> n = [] {
    std::vector<std::string> v;
    for (auto s : kAllStrata) v.push_back(name(s));
    return v;
  }();
  return n;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  using namespace detail;
  Options o;
  CLI::App app{"Stratification of the moduli space M(6,3) of plane sheaves"};
  app.name("sheaf-strata");
  app.require_subcommand(1);

  auto* classify_cmd = app.add_subcommand("classify", "Classify a presentation by its cohomology triple");
  classify_cmd->add_option("file", o.file, "presentation JSON ('-' for stdin)");
  add_common(classify_cmd, o);

  auto* verify_cmd = app.add_subcommand("verify", "Run the structural checks of one stratum");
  verify_cmd->add_option("file", o.file, "presentation JSON ('-' for stdin)");
  verify_cmd->add_option("--stratum", o.stratum)->required()->transform(CLI::IsMember(stratum_names(), CLI::ignore_case));
  add_common(verify_cmd, o);

  auto* sample_cmd = app.add_subcommand("sample", "Draw a random presentation of a stratum");
  sample_cmd->add_option("stratum", o.stratum)->required()->transform(CLI::IsMember(stratum_names(), CLI::ignore_case));
  sample_cmd->add_option("--height", o.height, "coefficient height")->check(CLI::PositiveNumber);
  sample_cmd->add_option("-o,--output", o.output);
  add_common(sample_cmd, o);

  auto* audit_cmd = app.add_subcommand("audit", "Codimension table");
  audit_cmd->add_flag("--json", o.json);

  auto* build_cmd = app.add_subcommand("build", "Presentations from geometric data");
  build_cmd->require_subcommand(1);
  auto* b_sextic = build_cmd->add_subcommand("sextic", "O_C(2) for a sextic f");
  b_sextic->add_option("--f", o.f, "sextic form")->required();
  auto* b_jz3 = build_cmd->add_subcommand("jz3", "J_Z(3) for six points Z on a sextic");
  b_jz3->add_option("--points", o.points, "point file ('-' for stdin)")->required();
  b_jz3->add_option("--f", o.f, "sextic through Z (random if omitted)");
  auto* b_x5 = build_cmd->add_subcommand("x5", "X5 normal form");
  b_x5->add_option("--q1", o.q1)->required();
  b_x5->add_option("--l1", o.l1)->required();
  b_x5->add_option("--q2", o.q2)->required();
  b_x5->add_option("--l2", o.l2)->required();
  auto* b_x6 = build_cmd->add_subcommand("x6", "X6 normal form");
  b_x6->add_option("--p1", o.p1, "point x:y:z")->required();
  b_x6->add_option("--p2", o.p2, "point x:y:z")->required();
  for (auto* b : {b_sextic, b_jz3, b_x5, b_x6}) {
    b->add_option("--seed", o.seed);
    b->add_option("--height", o.height)->check(CLI::PositiveNumber);
    b->add_option("-o,--output", o.output);
  }

  auto* coh_cmd = app.add_subcommand("cohomology", "h0, h1 and chi at a twist, plus the triple");
  coh_cmd->add_option("file", o.file);
  coh_cmd->add_option("--twist", o.twist);
  coh_cmd->add_flag("--json", o.json);

  auto* dual_cmd = app.add_subcommand("dualize", "Graded transpose twisted by k");
  dual_cmd->add_option("file", o.file);
  dual_cmd->add_option("--twist", o.dual_twist, "extra twist k (default 1)");
  dual_cmd->add_option("-o,--output", o.output);

  auto* kron_cmd = app.add_subcommand("kron", "Kronecker module tools");
  kron_cmd->require_subcommand(1);
  auto* kcheck = kron_cmd->add_subcommand("check", "Semistability of a block of one degree");
  kcheck->add_option("file", o.file);
  kcheck->add_option("--block", o.block, "r0,r1,c0,c1 (half-open)")->delimiter(',')->expected(4);
  add_common(kcheck, o);

  auto* blow_cmd = app.add_subcommand("blowdown", "Blow-down map delta and its consistency report");
  blow_cmd->add_option("file", o.file);
  blow_cmd->add_option("--variant", o.variant)->check(CLI::IsMember(std::vector<int>{7, 10}));
  blow_cmd->add_option("-o,--output", o.output, "write the image presentation here");
  blow_cmd->add_flag("--json", o.json);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*classify_cmd) return cmd_classify(o, in, out);
    if (*verify_cmd) return cmd_verify(o, in, out);
    if (*sample_cmd) return cmd_sample(o, out);
    if (*audit_cmd) return cmd_audit(o, out);
    if (*build_cmd) {
      for (auto* b : {b_sextic, b_jz3, b_x5, b_x6})
        if (*b) return cmd_build(b->get_name(), o, in, out);
    }
    if (*coh_cmd) return cmd_cohomology(o, in, out);
    if (*dual_cmd) return cmd_dualize(o, in, out);
    if (*kcheck) return cmd_kron(o, in, out);
    if (*blow_cmd) return cmd_blowdown(o, in, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    out << "error=" << to_string(e.kind()) << "\n";
    err << "message=" << e.what() << "\n";
    return 1;
  }
  return 2;
}

inline int run(int argc, char** argv) {
  return run(std::vector<std::string>(argv + 1, argv + argc), std::cin, std::cout, std::cerr);
}

}  // namespace sheafstrata::cli
