#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "cps/error.hpp"
#include "cps/ifs.hpp"
#include "cps/io.hpp"
#include "cps/lattice.hpp"
#include "cps/pattern.hpp"
#include "cps/scheme.hpp"
#include "cps/substitution.hpp"
#include "cps/window.hpp"

namespace cps::cli {

namespace {

using io::Json;

struct Options {
  std::string scheme;
  std::string window;
  std::string rule;
  std::string ifs;
  std::string radius;
  std::string shift;
  std::string out;
  std::string svg;
  std::string alpha;
  std::string matrix;
  std::string companion;
  std::string label;
  unsigned power = 0;
  unsigned depth = 12;
  unsigned probes = 3;
  unsigned times = 0;
  unsigned samples = 1000;
  std::uint64_t seed = 1;
  std::size_t max_candidates = 64;
  std::string max_radius = "64";
  bool centred = false;
};

Scheme load_scheme(const Options& o) { return io::scheme_from_json(io::read_json_file(o.scheme)); }

Window load_window(const Options& o, const Scheme& s) { return io::window_from_json(io::read_json_file(o.window), s); }

FieldScalar radius_or(const Options& o, const Scheme& s, long fallback) {
  if (o.radius.empty()) return FieldScalar(fallback);
  FieldScalar r = FieldScalar::parse(o.radius, s.radicand());
  if (r.sign() <= 0) throw Error(ErrorCode::kValidation, "--radius must be positive");
  return r;
}

Shift shift_of(const Options& o, const Scheme& s) {
  if (o.shift.empty()) return Shift::zero(s.n());
  FieldVector t = io::parse_vector(o.shift, s.radicand());
  if (static_cast<int>(t.size()) != s.n()) throw Error(ErrorCode::kDimensionMismatch, "--shift has the wrong length");
  return Shift::at(std::move(t));
}

std::string render(const Json& j) { return j.dump(2) + "\n"; }

void emit(const Options& o, const Json& j, std::ostream& out) {
  if (o.out.empty()) {
    out << render(j);
  } else {
    io::write_text_file(o.out, render(j));
  }
}

// SVG output always gets a sidecar with the exact data it was drawn from.
void emit_svg(const Options& o, const std::string& svg, const Json& exact) {
  if (o.svg.empty()) return;
  io::write_text_file(o.svg, svg);
  io::write_text_file(o.svg + ".json", render(exact));
}

RuleOptions rule_options(const Options& o, const Scheme& s) {
  RuleOptions r;
  r.max_cutters = o.max_candidates;
  r.max_radius = FieldScalar::parse(o.max_radius, s.radicand());
  return r;
}

std::string verdict_line(const SubVerdict& v) {
  std::ostringstream os;
  if (v.substitutional) {
    os << "YES p=" << v.fd_order << " N=" << v.denominator.get_str() << " m=" << v.power;
  } else {
    os << "NO " << v.reason;
  }
  return os.str();
}

// ----------------------------------------------------------------- commands

int cmd_scheme_from_slope(const Options& o, std::ostream& out) {
  FieldScalar alpha = FieldScalar::parse(o.alpha);
  ContinuedFraction cf = cf_expand(alpha);
  SlopeMatrix sm = cf_to_matrix(cf);
  Scheme s = Scheme::build(sm.matrix, std::nullopt, o.label);
  Json j = io::to_json(s);
  std::vector<std::string> pre;
  std::vector<std::string> per;
  for (const auto& q : cf.preperiod) pre.push_back(q.get_str());
  for (const auto& q : cf.period) per.push_back(q.get_str());
  j["slope"] = {{"alpha", io::to_json(alpha)},
                {"preperiod", pre},
                {"period", per},
                {"eigenvalue", io::to_json(sm.eigenvalue)},
                {"normalizer", sm.normalizer.to_rows()}};
  if (!o.out.empty()) io::write_text_file(o.out, render(j));
  out << "M = " << sm.matrix.to_string() << "  lambda = " << sm.eigenvalue.to_string() << '\n';
  return kOk;
}

int cmd_scheme_from_matrix(const Options& o, std::ostream& out) {
  Scheme s = [&] {
    if (!o.companion.empty()) {
      std::vector<std::int64_t> c;
      for (const auto& x : Json::parse("[" + o.companion + "]")) c.push_back(x.get<std::int64_t>());
      return Scheme::companion(c);
    }
    if (o.matrix.empty()) throw Error(ErrorCode::kValidation, "give --matrix or --companion");
    return io::scheme_from_json(Json{{"M", Json::parse(o.matrix)}, {"label", o.label}});
  }();
  Json j = io::to_json(s);
  if (!o.label.empty()) j["label"] = o.label;
  if (!o.out.empty()) io::write_text_file(o.out, render(j));
  out << "k=" << s.k() << " d=" << s.d() << " n=" << s.n() << " D=" << s.radicand() << '\n';
  for (const auto& w : s.warnings()) out << "warning: " << w << '\n';
  return kOk;
}

int cmd_canonical_window(const Options& o, std::ostream& out) {
  Scheme s = load_scheme(o);
  Region w = canonical_window(s);
  if (o.centred) {
    RationalVector half(static_cast<std::size_t>(s.k()), Rational(-1, 2));
    w = w.translate(s.star(half));
  }
  Json j = io::to_json(Window::single(w));
  emit(o, j, out);
  emit_svg(o, io::svg_polygons(io::internal_frame(s, io::float_polygons(w))), j);
  return kOk;
}

int cmd_generate(const Options& o, std::ostream& out, std::ostream& err) {
  Scheme s = load_scheme(o);
  FieldScalar r = radius_or(o, s, 20);
  Shift t = shift_of(o, s);
  PointSet ps;
  std::size_t undetermined = 0;
  if (!o.ifs.empty()) {
    // IFS window: classify every candidate in the containment box exactly.
    io::IfsSpec spec = io::ifs_from_json(io::read_json_file(o.ifs), s);
    IfsWindow w(s, spec.z, spec.seed_core);
    FieldVector lo(static_cast<std::size_t>(s.n()), -w.radius());
    FieldVector hi(static_cast<std::size_t>(s.n()), w.radius());
    ps.shift = t;
    ps.radius = r;
    for (const auto& g : enumerate_lattice(s, r, lo - t.base, hi - t.base)) {
      Membership m = w.member(s.star(g) + t.base);
      if (m == Membership::kInside) ps.points.push_back({g, 0});
      if (m == Membership::kUndetermined) {
        ps.boundary_hits.push_back(g);
        ++undetermined;
      }
    }
  } else {
    ps = generate(s, load_window(o, s), t, r);
  }
  Json j = io::to_json(s, ps);
  if (o.out.empty()) {
    out << render(j);
  } else if (std::filesystem::path(o.out).extension() == ".csv") {
    io::write_text_file(o.out, io::to_csv(s, ps));
  } else {
    io::write_text_file(o.out, render(j));
  }
  emit_svg(o, io::svg_points(s, ps), j);
  if (undetermined > 0) err << "warning: " << undetermined << " points with undetermined membership flagged\n";
  if (!ps.boundary_hits.empty() && undetermined == 0) err << "warning: " << ps.boundary_hits.size() << " boundary hits flagged\n";
  if (!o.out.empty()) out << ps.points.size() << " points\n";
  return kOk;
}

int cmd_check_sub(const Options& o, std::ostream& out) {
  Scheme s = load_scheme(o);
  SubVerdict v = decide_sub(s, load_window(o, s));
  if (!o.out.empty()) io::write_text_file(o.out, render(io::to_json(v)));
  out << verdict_line(v) << '\n';
  return v.substitutional ? kOk : kNo;
}

int cmd_derive_rule(const Options& o, std::ostream& out) {
  Scheme s = load_scheme(o);
  Window w = load_window(o, s);
  RuleOptions ro = rule_options(o, s);
  SubstitutionRule rule;
  std::vector<unsigned> tried;
  if (o.power > 0) {
    rule = derive_rule(s, w, o.power, ro);
  } else {
    SubVerdict v = decide_sub(s, w);
    if (!v.substitutional) {
      out << verdict_line(v) << '\n';
      return kNo;
    }
    FieldScalar r = radius_or(o, s, s.d() == 1 ? 100 : 15);
    PowerSearch ps = find_minimal_rule(s, w, v, random_shifts(w, o.probes, o.seed), r, ro);
    rule = std::move(ps.rule);
    tried = ps.tried;
  }
  Json j = io::to_json(rule);
  if (!tried.empty()) j["powers_tried"] = tried;
  emit(o, j, out);
  if (!o.svg.empty()) {
    std::vector<io::FloatPolygon> cells;
    for (const auto& c : rule.cells) {
      for (auto& p : io::float_polygons(c.region)) cells.push_back(std::move(p));
    }
    emit_svg(o, io::svg_polygons(io::internal_frame(s, cells), io::internal_frame(s, io::float_polygons(w.support()))),
             j);
  }
  if (!o.out.empty()) {
    out << "m=" << rule.power << (rule.fast_path ? " fast" : " general") << " |Z0|=" << j["Z0"].size()
        << " cells=" << rule.cells.size() << '\n';
  }
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  Scheme s = load_scheme(o);
  Window w = load_window(o, s);
  SubstitutionRule rule = io::rule_from_json(io::read_json_file(o.rule), s);
  FieldScalar r = radius_or(o, s, s.d() == 1 ? 100 : 15);
  std::vector<Shift> shifts = o.shift.empty() ? random_shifts(w, o.probes, o.seed) : std::vector<Shift>{shift_of(o, s)};
  Json reports = Json::array();
  bool ok = true;
  for (const auto& t : shifts) {
    VerifyReport rep = verify_self_similarity(s, w, rule, t, r);
    Json j = io::to_json(rep);
    j["shift"] = io::to_json(t);
    reports.push_back(j);
    ok = ok && rep.ok;
    out << (rep.ok ? "ok" : "mismatch") << " shift=" << t.base.front().to_string() << (t.base.size() > 1 ? ",..." : "")
        << " points=" << rep.expected << (rep.note.empty() ? "" : " (" + rep.note + ")") << '\n';
  }
  if (!o.out.empty()) io::write_text_file(o.out, render(Json{{"ok", ok}, {"reports", reports}}));
  return ok ? kOk : kNo;
}

int cmd_lids(const Options& o, std::ostream& out) {
  Scheme s = load_scheme(o);
  Window w = load_window(o, s);
  SubstitutionRule rule = io::rule_from_json(io::read_json_file(o.rule), s);
  FieldScalar r = radius_or(o, s, s.d() == 1 ? 30 : 6);
  Shift t = shift_of(o, s);
  LidsResult res = lids_power(s, w, rule, t, r);
  Json j = io::to_json(res);
  j["torus_param"] = io::to_json(torus_param(s, t.base));
  bool fixed = true;
  if (o.times > 0) {
    fixed = is_fixed_after(s, w, rule, t, o.times, r);
    j["fixed_after"] = {{"times", o.times}, {"fixed", fixed}};
  }
  if (!o.out.empty()) io::write_text_file(o.out, render(j));
  out << "power=" << res.power << " torus_period=" << res.torus_period << " N=" << res.denominator.get_str()
      << (res.singular ? " singular" : "");
  if (o.times > 0) out << " fixed_after_" << o.times << '=' << (fixed ? "yes" : "no");
  out << '\n';
  return fixed ? kOk : kNo;
}

int cmd_symmetry(const Options& o, std::ostream& out) {
  Scheme s = load_scheme(o);
  Window w = load_window(o, s);
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& r : Json::parse(o.matrix)) rows.push_back(io::int_vector_from_json(r));
  SymmetryResult res = symmetry_check(s, w, IntMatrix(rows));
  if (!o.out.empty()) io::write_text_file(o.out, render(io::to_json(res)));
  if (res.symmetric) {
    out << "yes shift=";
    for (std::size_t i = 0; i < res.shift->size(); ++i) out << (i ? "," : "") << (*res.shift)[i].to_string();
    out << '\n';
  } else {
    out << "no " << res.reason << '\n';
  }
  return res.symmetric ? kOk : kNo;
}

int cmd_attractor(const Options& o, std::ostream& out) {
  Scheme s = load_scheme(o);
  io::IfsSpec spec = io::ifs_from_json(io::read_json_file(o.ifs), s);
  if (o.depth != 12 || spec.depth == 0) spec.depth = o.depth;
  IfsWindow w(s, spec.z, spec.seed_core);
  FieldScalar r = radius_or(o, s, 12);
  FieldVector lo(static_cast<std::size_t>(s.n()), -w.radius());
  FieldVector hi(static_cast<std::size_t>(s.n()), w.radius());
  auto pts = enumerate_lattice(s, r, lo, hi);
  std::size_t stride = std::max<std::size_t>(1, pts.size() / std::max(1u, o.samples));
  std::size_t inside = 0, outside = 0, undetermined = 0, approx_in = 0, contradictions = 0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < pts.size() && used < o.samples; i += stride, ++used) {
    Membership m = w.member_lattice(pts[i]);
    bool in_approx = w.in_approximant(s.star(pts[i]), spec.depth);
    approx_in += in_approx;
    if (m == Membership::kInside) {
      ++inside;
      if (!in_approx) ++contradictions;
    } else if (m == Membership::kOutside) {
      ++outside;
    } else {
      ++undetermined;
    }
  }
  Json j{{"Z", spec.z},
         {"depth", spec.depth},
         {"radius", io::to_json(w.radius())},
         {"contraction", io::to_json(w.contraction())},
         {"samples", used},
         {"inside", inside},
         {"outside", outside},
         {"undetermined", undetermined},
         {"inside_approximant", approx_in},
         {"contradictions", contradictions}};
  emit(o, j, out);
  if (!o.svg.empty()) emit_svg(o, io::svg_polygons(io::internal_frame(s, w.render(spec.depth, 50000))), j);
  if (!o.out.empty()) {
    out << "inside=" << inside << " outside=" << outside << " undetermined=" << undetermined
        << " contradictions=" << contradictions << '\n';
  }
  return contradictions == 0 ? kOk : kNo;
}

int cmd_acceptance(const Options& o, std::ostream& out) {
  Scheme s = load_scheme(o);
  Window w = load_window(o, s);
  FieldScalar r = radius_or(o, s, 1);
  auto cells = acceptance_partition(s, w, r, o.max_candidates);
  FieldScalar total;
  for (const auto& c : cells) total += c.region.measure();
  Json j{{"radius", io::to_json(r)}, {"cells", io::to_json(cells)}, {"tiles", total == w.support().measure()}};
  emit(o, j, out);
  if (!o.svg.empty()) {
    std::vector<io::FloatPolygon> polys;
    for (const auto& c : cells) {
      for (auto& p : io::float_polygons(c.region)) polys.push_back(std::move(p));
    }
    auto frame = io::internal_frame(s, polys);
    emit_svg(o, io::svg_polygons({}, frame), j);
  }
  if (!o.out.empty()) out << cells.size() << " cells\n";
  return kOk;
}

int cmd_gifs(const Options& o, std::ostream& out) {
  Scheme s = load_scheme(o);
  SubstitutionRule rule = io::rule_from_json(io::read_json_file(o.rule), s);
  Gifs g = emit_gifs(s, rule);
  emit(o, io::to_json(g), out);
  if (!o.out.empty()) out << g.components.size() << " components, verified=" << (g.verified ? "yes" : "no") << '\n';
  return g.verified ? kOk : kNo;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cut-and-project schemes: generation, substitution rules and verification", "cps"};
  app.require_subcommand(1);
  Options o;

  auto scheme_flag = [&](CLI::App* c) { c->add_option("-s,--scheme", o.scheme, "scheme JSON")->required()->check(CLI::ExistingFile); };
  auto window_flag = [&](CLI::App* c) { c->add_option("-w,--window", o.window, "window JSON")->required()->check(CLI::ExistingFile); };
  auto rule_flag = [&](CLI::App* c) { c->add_option("-r,--rule", o.rule, "rule JSON")->required()->check(CLI::ExistingFile); };
  auto out_flag = [&](CLI::App* c) { c->add_option("-o,--out", o.out, "output file"); };
  auto svg_flag = [&](CLI::App* c) { c->add_option("--svg", o.svg, "SVG output (a .json sidecar is written next to it)"); };
  auto radius_flag = [&](CLI::App* c) { c->add_option("--radius", o.radius, "physical radius, exact syntax"); };
  auto shift_flag = [&](CLI::App* c) { c->add_option("--shift", o.shift, "internal shift t, comma separated"); };
  auto seed_flag = [&](CLI::App* c) { c->add_option("--seed", o.seed, "seed for sampled shifts"); };

  auto* slope = app.add_subcommand("scheme-from-slope", "2-to-1 scheme preserving a quadratic irrational slope");
  slope->add_option("--alpha", o.alpha, "slope, e.g. \"(-1+sqrt2)\"")->required();
  slope->add_option("--label", o.label);
  out_flag(slope);

  auto* from_matrix = app.add_subcommand("scheme-from-matrix", "scheme from an integer matrix");
  from_matrix->add_option("--matrix", o.matrix, "JSON rows, e.g. [[1,1],[1,0]]");
  from_matrix->add_option("--companion", o.companion, "coefficients c0,...,c(k-1) of the characteristic polynomial");
  from_matrix->add_option("--label", o.label);
  out_flag(from_matrix);

  auto* canon = app.add_subcommand("canonical-window", "projection of the unit cube");
  scheme_flag(canon);
  canon->add_flag("--centred", o.centred, "translate the centre to the origin");
  out_flag(canon);
  svg_flag(canon);

  auto* gen = app.add_subcommand("generate", "generate the point set in a ball");
  scheme_flag(gen);
  auto* gw = gen->add_option("-w,--window", o.window, "window JSON")->check(CLI::ExistingFile);
  auto* gi = gen->add_option("--ifs", o.ifs, "IFS window JSON")->check(CLI::ExistingFile);
  gw->excludes(gi);
  radius_flag(gen);
  shift_flag(gen);
  out_flag(gen);
  svg_flag(gen);

  auto* check = app.add_subcommand("check-sub", "decide whether the window gives substitutional patterns");
  scheme_flag(check);
  window_flag(check);
  out_flag(check);

  auto* derive = app.add_subcommand("derive-rule", "derive an executable substitution rule");
  scheme_flag(derive);
  window_flag(derive);
  derive->add_option("--power", o.power, "use this power instead of searching");
  derive->add_option("--probes", o.probes, "number of sampled shifts used to accept a power");
  derive->add_option("--max-candidates", o.max_candidates, "cap on cutters per cell arrangement");
  derive->add_option("--max-radius", o.max_radius, "cap on the candidate radius");
  radius_flag(derive);
  seed_flag(derive);
  out_flag(derive);
  svg_flag(derive);

  auto* verify = app.add_subcommand("verify", "check a rule against direct generation");
  scheme_flag(verify);
  window_flag(verify);
  rule_flag(verify);
  radius_flag(verify);
  shift_flag(verify);
  seed_flag(verify);
  verify->add_option("--probes", o.probes, "number of sampled shifts when --shift is absent");
  out_flag(verify);

  auto* lids = app.add_subcommand("lids", "fixed-point power at a rational shift");
  scheme_flag(lids);
  window_flag(lids);
  rule_flag(lids);
  radius_flag(lids);
  shift_flag(lids);
  lids->add_option("--times", o.times, "also check fixedness after this many applications");
  out_flag(lids);

  auto* sym = app.add_subcommand("symmetry", "is the window a translate of its image under S");
  scheme_flag(sym);
  window_flag(sym);
  sym->add_option("--matrix", o.matrix, "S as JSON rows")->required();
  out_flag(sym);

  auto* attr = app.add_subcommand("attractor", "IFS window: render and cross-check exact membership");
  scheme_flag(attr);
  attr->add_option("--ifs", o.ifs, "IFS JSON")->required()->check(CLI::ExistingFile);
  attr->add_option("--depth", o.depth, "approximant depth");
  attr->add_option("--samples", o.samples, "lattice points classified");
  radius_flag(attr);
  out_flag(attr);
  svg_flag(attr);

  auto* acc = app.add_subcommand("acceptance", "acceptance-domain partition for radius-r patches");
  scheme_flag(acc);
  window_flag(acc);
  radius_flag(acc);
  acc->add_option("--max-candidates", o.max_candidates, "cap on cutters");
  out_flag(acc);
  svg_flag(acc);

  auto* gifs = app.add_subcommand("gifs", "graph-directed IFS description of a rule");
  scheme_flag(gifs);
  rule_flag(gifs);
  out_flag(gifs);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*slope) return cmd_scheme_from_slope(o, out);
    if (*from_matrix) return cmd_scheme_from_matrix(o, out);
    if (*canon) return cmd_canonical_window(o, out);
    if (*gen) {
      if (o.window.empty() && o.ifs.empty()) {
        err << "generate needs --window or --ifs\n";
        return kUsage;
      }
      return cmd_generate(o, out, err);
    }
    if (*check) return cmd_check_sub(o, out);
    if (*derive) return cmd_derive_rule(o, out);
    if (*verify) return cmd_verify(o, out);
    if (*lids) return cmd_lids(o, out);
    if (*sym) return cmd_symmetry(o, out);
    if (*attr) return cmd_attractor(o, out);
    if (*acc) return cmd_acceptance(o, out);
    if (*gifs) return cmd_gifs(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::kBoundExceeded:
      case ErrorCode::kCutterOverflow:
      case ErrorCode::kUnsupported:
      case ErrorCode::kNotLids:
      case ErrorCode::kInternal:
        return kNo;
      default:
        return kUsage;
    }
  } catch (const io::Json::exception& e) {
    err << "error: malformed JSON: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace cps::cli
