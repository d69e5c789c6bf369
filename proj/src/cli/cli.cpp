#include "nwn/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "nwn/explore.hpp"
#include "nwn/format.hpp"

namespace nwn {

namespace {

using json = nlohmann::ordered_json;

struct Style {
  bool on = false;
  std::string wrap(const std::string& s, const char* code) const {
    return on ? std::string("\033[") + code + "m" + s + "\033[0m" : s;
  }
  std::string good(const std::string& s) const { return wrap(s, "32"); }
  std::string bad(const std::string& s) const { return wrap(s, "31"); }
  std::string warn(const std::string& s) const { return wrap(s, "33"); }
};

struct Ctx {
  std::ostream& out;
  std::ostream& err;
  Style st;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::Usage, "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// "-" writes to standard output.
void write_file(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) fail(Errc::Usage, "cannot write '" + path + "'");
}

struct Options {
  std::string file, output, json_path, dot_path, target_path, trace_path, kind, loss_mode = "exhaustive";
  std::optional<std::size_t> max_depth, max_states;
  std::optional<std::uint64_t> max_tokens, budget_ms;
  unsigned jobs = 1;
  std::uint64_t seed = 0, count = 1;
  std::optional<std::size_t> places, transitions;
  bool timing = false, lossy = false, staged = false, provenance = false, conservative = false;

  Limits limits(Limits base = {}) const {
    if (max_depth) base.max_depth = *max_depth;
    if (max_states) base.max_states = *max_states;
    if (max_tokens) base.max_tokens = *max_tokens;
    if (budget_ms) base.budget_ms = *budget_ms;
    base.jobs = jobs;
    return base;
  }
  LossMode loss() const {
    if (!lossy) return LossMode::None;
    return loss_mode == "lazy" ? LossMode::Lazy : LossMode::Exhaustive;
  }
};

void emit_json_report(Ctx& c, const Options& o, const json& j) {
  if (!o.json_path.empty()) write_file(o.json_path, j.dump(2) + "\n", c.out);
}

json limits_json(const Limits& l) {
  json j;
  j["max_depth"] = l.max_depth;
  j["max_states"] = l.max_states;
  j["max_tokens"] = l.max_tokens;
  j["budget_ms"] = l.budget_ms;
  return j;
}

json summary(const Document& d) {
  json j;
  j["kind"] = formalism_name(d.kind);
  j["name"] = d.name;
  switch (d.kind) {
    case Formalism::PN:
      j["places"] = d.pn.num_places();
      j["transitions"] = d.pn.num_transitions();
      break;
    case Formalism::EOS: {
      std::size_t own = 0;
      for (const auto& i : d.eos.idle_of) own += !i;
      j["places"] = d.eos.system.num_places();
      j["transitions"] = own;
      j["objects"] = d.eos.objects.size() - 1;
      j["events"] = d.eos.events.size();
      break;
    }
    default:
      j["places"] = d.nu.base.num_places();
      j["transitions"] = d.nu.base.transitions().size();
  }
  j["generated"] = d.prov.size();
  return j;
}

std::string summary_text(const json& s) {
  std::ostringstream os;
  os << s["kind"].get<std::string>() << " '" << s["name"].get<std::string>() << "': " << s["places"] << " places, "
     << s["transitions"] << " transitions";
  if (s.contains("objects")) os << ", " << s["objects"] << " object nets, " << s["events"] << " events";
  return os.str();
}

void set_init(Document& d, const Vec& s) { d.pn_init = s; }
void set_init(Document& d, const NuConfig& s) { d.nu_init = s; }
void set_init(Document& d, const NestedMarking& s) { d.eos_init = s; }

// Runs f(system, init, target) with the system matching the document kind.
template <class F>
int dispatch(const Document& d, F&& f) {
  switch (d.kind) {
    case Formalism::PN: {
      PnSystem s(d.pn);
      return f(s, d.pn_init, d.pn_target);
    }
    case Formalism::EOS: {
      EosSystem s(d.eos);
      return f(s, d.eos_init, d.eos_target);
    }
    default: {
      NuSystem s(d.nu, d.kind == Formalism::NuPN ? NuSemantics::Plain : NuSemantics::Channel);
      return f(s, d.nu_init, d.nu_target);
    }
  }
}

template <class S>
const S& need_init(const std::optional<S>& init) {
  if (!init) fail(Errc::Usage, "document has no INIT section");
  return *init;
}

int cmd_validate(Ctx& c, const Options& o) {
  auto text = read_file(o.file);
  json j;
  j["command"] = "validate";
  j["file"] = o.file;
  int rc = kExitOk;
  try {
    auto d = parse_doc(text);
    auto s = summary(d);
    c.out << c.st.good("valid") << " " << summary_text(s) << "\n";
    j["valid"] = true;
    j["summary"] = s;
    if (!o.dot_path.empty()) write_file(o.dot_path, emit_dot(d), c.out);
  } catch (const FormatError& e) {
    c.out << c.st.bad("invalid") << " " << o.file << ": " << e.diag().to_string() << "\n";
    j["valid"] = false;
    j["error"] = {{"code", errc_name(e.code())},
                  {"line", e.diag().line},
                  {"col", e.diag().col},
                  {"message", e.diag().message}};
    rc = kExitNegative;
  }
  emit_json_report(c, o, j);
  return rc;
}

std::vector<std::string> read_trace(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

// Prints the intermediate configurations of a channel step.
void print_stages(Ctx& c, const CNuPN& net, const NuSystem& sys, const NuConfig& s, const std::string& label,
                  json& step) {
  auto t = net.base.find_transition(label.substr(0, label.find(' ')));
  if (!t) return;
  for (const auto& m : nupn_modes(net.base, s, *t).modes) {
    if (sys.mode_label(*t, s, m) != label) continue;
    auto st = cnupn_fire_staged(net, s, *t, m);
    auto show = [&](const NuConfig& x) { return sys.show(canonical(x)); };
    c.out << "   stage1 " << show(st.stage1) << "\n   stage2 " << show(st.stage2) << "\n";
    step["stage1"] = show(st.stage1);
    step["stage2"] = show(st.stage2);
    return;
  }
}

int cmd_simulate(Ctx& c, const Options& o) {
  auto d = parse_doc(read_file(o.file));
  auto trace = read_trace(o.trace_path);
  return dispatch(d, [&](const auto& sys, const auto& init, const auto&) {
    using S = std::decay_t<decltype(*init)>;
    S s = sys.canon(need_init(init));
    json j;
    j["command"] = "simulate";
    j["file"] = o.file;
    j["init"] = sys.show(s);
    j["steps"] = json::array();
    c.out << "init " << sys.show(s) << "\n";
    Limits lim;
    lim.max_modes = SIZE_MAX;
    int rc = kExitOk;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      json step;
      step["label"] = trace[i];
      if constexpr (std::is_same_v<S, NuConfig>)
        if (o.staged) {
          c.out << i + 1 << ". " << trace[i] << "\n";
          print_stages(c, d.nu, sys, s, trace[i], step);
        }
      auto e = detail::expand<S>(sys, s, lim, o.loss());
      auto it = std::find_if(e.next.begin(), e.next.end(), [&](const auto& x) { return x.label == trace[i]; });
      if (it == e.next.end()) {
        auto msg = "step " + std::to_string(i) + " not enabled: " + trace[i];
        c.out << c.st.bad("stuck") << " " << msg << "\n";
        j["error"] = msg;
        rc = kExitNegative;
        break;
      }
      s = it->state;
      if (!(std::is_same_v<S, NuConfig> && o.staged)) c.out << i + 1 << ". " << trace[i] << "\n";
      c.out << "   -> " << sys.show(s) << "\n";
      step["state"] = sys.show(s);
      j["steps"].push_back(step);
    }
    j["final"] = sys.show(s);
    j["ok"] = rc == kExitOk;
    if (rc == kExitOk) c.out << c.st.good("final") << " " << sys.show(s) << "\n";
    if (!o.output.empty()) {
      Document out = d;
      set_init(out, s);
      write_file(o.output, emit_doc(out), c.out);
    }
    emit_json_report(c, o, j);
    return rc;
  });
}

int cmd_translate(Ctx& c, const Options& o) {
  auto src = parse_doc(read_file(o.file));
  auto d = translate_doc(o.kind, src);
  auto text = emit_doc(d);
  auto s = summary(d);
  if (o.output.empty()) {
    c.out << text;
  } else {
    write_file(o.output, text, c.out);
    c.out << c.st.good("translated") << " " << formalism_name(src.kind) << " -> " << summary_text(s) << ", "
          << d.prov.size() << " generated elements\n";
  }
  if (o.provenance)
    for (const auto& p : d.prov)
      c.out << p.id << "\t" << p.kind << "\t" << p.tag << "\t" << (p.source.empty() ? "-" : p.source) << "\n";
  if (!o.dot_path.empty()) write_file(o.dot_path, emit_dot(d), c.out);
  json j;
  j["command"] = "translate";
  j["kind"] = o.kind;
  j["file"] = o.file;
  j["source"] = summary(src);
  j["target"] = s;
  emit_json_report(c, o, j);
  return kExitOk;
}

int cmd_cover(Ctx& c, const Options& o) {
  auto d = parse_doc(read_file(o.file));
  if (!o.target_path.empty()) {
    auto ov = parse_overlay(read_file(o.target_path), d);
    if (!ov.pn_target && !ov.nu_target && !ov.eos_target) fail(Errc::Usage, "target file has no TARGET section");
    d.pn_target = ov.pn_target;
    d.nu_target = ov.nu_target;
    d.eos_target = ov.eos_target;
  }
  auto lim = o.limits();
  return dispatch(d, [&](const auto& sys, const auto& init, const auto& target) {
    if (!target) fail(Errc::Usage, "no TARGET section and no --target file");
    auto v = coverability(sys, need_init(init), *target, o.loss(), lim);
    int rc = kExitInconclusive;
    std::string head;
    if (v.outcome == Outcome::Covered) {
      rc = kExitOk;
      head = c.st.good("covered") + " at depth " + std::to_string(v.depth);
    } else if (v.outcome == Outcome::NotFound && v.exhausted) {
      rc = kExitNegative;
      head = c.st.bad("not coverable") + " (state space exhausted)";
    } else if (v.outcome == Outcome::NotFound) {
      head = c.st.warn("inconclusive") + " (search bounds hit)";
    } else {
      head = c.st.warn("inconclusive") + " (" + v.error + ")";
    }
    c.out << head << ", " << v.states << " states explored";
    if (o.timing) c.out << ", " << v.millis << " ms";
    c.out << "\n";
    for (std::size_t i = 0; i < v.trace.size(); ++i) c.out << "  " << i + 1 << ". " << v.trace[i] << "\n";
    if (!o.output.empty() && v.outcome == Outcome::Covered) {
      std::string w = "# witness for " + o.file + ", depth " + std::to_string(v.depth) + "\n";
      for (const auto& l : v.trace) w += l + "\n";
      write_file(o.output, w, c.out);
    }
    json j;
    j["command"] = "cover";
    j["file"] = o.file;
    j["kind"] = formalism_name(d.kind);
    j["loss"] = o.lossy ? o.loss_mode : "none";
    j["limits"] = limits_json(lim);
    j["outcome"] = outcome_name(v.outcome);
    j["depth"] = v.depth;
    j["exhausted"] = v.exhausted;
    j["boundary"] = v.boundary;
    j["states"] = v.states;
    j["max_depth_seen"] = v.max_depth_seen;
    j["trace"] = v.trace;
    j["error"] = v.error.empty() ? json() : json(v.error);
    j["millis"] = o.timing ? json(v.millis) : json();
    emit_json_report(c, o, j);
    return rc;
  });
}

int cmd_gen(Ctx& c, const Options& o) {
  Formalism f;
  SizeParams sz;
  if (auto k = parse_formalism(o.kind)) {
    f = *k;
  } else {
    auto spec = kind_spec(o.kind);
    f = spec.source;
    sz = spec.size;
  }
  if (o.places) sz.places = *o.places;
  if (o.transitions) sz.transitions = *o.transitions;
  if (o.conservative) sz.conservative = true;
  auto d = random_instance(f, o.seed, sz);
  auto text = emit_doc(d);
  if (o.output.empty()) {
    c.out << text;
  } else {
    write_file(o.output, text, c.out);
    c.out << c.st.good("generated") << " " << summary_text(summary(d)) << "\n";
  }
  if (!o.dot_path.empty()) write_file(o.dot_path, emit_dot(d), c.out);
  json j;
  j["command"] = "gen";
  j["kind"] = o.kind;
  j["seed"] = o.seed;
  j["summary"] = summary(d);
  emit_json_report(c, o, j);
  return kExitOk;
}

int cmd_crosscheck(Ctx& c, const Options& o) {
  Limits base;
  base.max_depth = 40;
  base.max_states = 20'000;
  base.max_tokens = 30;
  auto lim = o.limits(base);
  CrossOptions opt;
  opt.timing = o.timing;
  opt.loss = o.loss_mode == "lazy" ? LossMode::Lazy : LossMode::Exhaustive;
  std::vector<CrossReport> reps;
  if (!o.file.empty()) {
    reps.push_back(crosscheck(o.kind, parse_doc(read_file(o.file)), lim, o.seed, opt));
  } else {
    auto spec = kind_spec(o.kind);
    for (std::uint64_t s = o.seed; s < o.seed + o.count; ++s)
      reps.push_back(crosscheck(o.kind, random_instance(spec.source, s, spec.size), lim, s, opt));
  }
  std::size_t mism = 0, inc = 0;
  json arr = json::array();
  for (const auto& r : reps) {
    mism += r.mismatches.size();
    inc += r.inconclusive;
    c.out << "crosscheck " << r.kind << " seed " << r.seed << ": " << r.verdicts.size() << " checks, "
          << (r.mismatches.empty() ? c.st.good("0 mismatches") : c.st.bad(std::to_string(r.mismatches.size()) + " mismatches"))
          << ", " << r.inconclusive << " inconclusive";
    if (o.timing) c.out << ", " << r.millis << " ms";
    c.out << "\n";
    for (const auto& m : r.mismatches) c.out << "  " << m.direction << " " << m.source << ": " << m.detail << "\n";
    arr.push_back(json::parse(r.to_json()));
  }
  if (reps.size() == 1) {
    emit_json_report(c, o, arr[0]);
  } else {
    json j;
    j["kind"] = o.kind;
    j["seed"] = o.seed;
    j["count"] = o.count;
    j["mismatches"] = mism;
    j["inconclusive"] = inc;
    j["reports"] = arr;
    emit_json_report(c, o, j);
  }
  if (mism) return kExitNegative;
  return inc ? kExitInconclusive : kExitOk;
}

void add_limits(CLI::App* s, Options& o) {
  s->add_option("--max-depth", o.max_depth, "Search depth bound")->check(CLI::PositiveNumber);
  s->add_option("--max-states", o.max_states, "Visited state bound")->check(CLI::PositiveNumber);
  s->add_option("--max-tokens", o.max_tokens, "Token bound per state")->check(CLI::PositiveNumber);
  s->add_option("--budget-ms", o.budget_ms, "Wall-clock budget in milliseconds")->check(CLI::PositiveNumber);
  s->add_option("--jobs", o.jobs, "Worker threads for layer expansion")->check(CLI::PositiveNumber);
  s->add_flag("--timing", o.timing, "Report wall-clock times");
}

void add_json(CLI::App* s, Options& o) {
  s->add_option("--json", o.json_path, "Write a structured report to this path ('-' for standard output)");
}

int code_for(Errc e) { return e == Errc::Usage || e == Errc::OrderUnavailable ? kExitUsage : kExitNegative; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool styled) {
  const char* color = std::getenv("NWN_COLOR");
  Ctx c{out, err, Style{styled && !(color && std::string(color) == "0")}};
  Options o;
  CLI::App app{"Nested net semantics, translations and bounded exploration", "nwn"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "Parse and validate a document");
  validate->add_option("file", o.file, "Input document")->required();
  validate->add_option("--dot", o.dot_path, "Write the net structure as DOT");
  add_json(validate, o);

  auto* simulate = app.add_subcommand("simulate", "Replay a trace file of step labels from INIT");
  simulate->add_option("file", o.file, "Input document")->required();
  simulate->add_option("trace", o.trace_path, "Trace file, one step label per line")->required();
  simulate->add_flag("--lossy", o.lossy, "Allow lossy steps");
  simulate->add_option("--loss-mode", o.loss_mode, "Lossy step set")->check(CLI::IsMember({"exhaustive", "lazy"}));
  simulate->add_flag("--staged", o.staged, "Print intermediate configurations of channel steps");
  simulate->add_option("-o", o.output, "Write the document with INIT set to the final configuration");
  add_json(simulate, o);

  auto* translate = app.add_subcommand("translate", "Compile a document into another formalism");
  translate->add_option("file", o.file, "Input document")->required();
  translate->add_option("--kind", o.kind, "Translation kind")->required();
  translate->add_option("-o", o.output, "Output document");
  translate->add_flag("--provenance", o.provenance, "Print the provenance table");
  translate->add_option("--dot", o.dot_path, "Write the target structure as DOT");
  add_json(translate, o);

  auto* cover = app.add_subcommand("cover", "Bounded coverability search");
  cover->add_option("file", o.file, "Input document")->required();
  cover->add_option("--target", o.target_path, "Document holding a TARGET section");
  cover->add_flag("--lossy", o.lossy, "Use lossy semantics");
  cover->add_option("--loss-mode", o.loss_mode, "Lossy step set")->check(CLI::IsMember({"exhaustive", "lazy"}));
  cover->add_option("-o,--witness", o.output, "Write the witness trace");
  add_limits(cover, o);
  add_json(cover, o);

  auto* gen = app.add_subcommand("gen", "Generate a seeded random document");
  gen->add_option("--kind", o.kind, "Formalism or crosscheck kind")->required();
  gen->add_option("--seed", o.seed, "Random seed");
  gen->add_option("--places", o.places, "Number of places")->check(CLI::PositiveNumber);
  gen->add_option("--transitions", o.transitions, "Number of transitions")->check(CLI::PositiveNumber);
  gen->add_flag("--conservative", o.conservative, "Generate a conservative EOS");
  gen->add_option("-o", o.output, "Output document");
  gen->add_option("--dot", o.dot_path, "Write the structure as DOT");
  add_json(gen, o);

  auto* cross = app.add_subcommand("crosscheck", "Differential check of a translation");
  cross->add_option("file", o.file, "Source document; seeded random sources when omitted");
  cross->add_option("--kind", o.kind, "Translation kind")->required();
  cross->add_option("--seed", o.seed, "First seed");
  cross->add_option("--count", o.count, "Number of seeds")->check(CLI::PositiveNumber);
  cross->add_option("--loss-mode", o.loss_mode, "Lossy step set for closure")
      ->check(CLI::IsMember({"exhaustive", "lazy"}));
  add_limits(cross, o);
  add_json(cross, o);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(c, o);
    if (*simulate) return cmd_simulate(c, o);
    if (*translate) return cmd_translate(c, o);
    if (*cover) return cmd_cover(c, o);
    if (*gen) return cmd_gen(c, o);
    if (*cross) return cmd_crosscheck(c, o);
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "error: " << o.file << ": " << e.diag().to_string() << "\n";
    return kExitNegative;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNegative;
  } catch (...) {
    err << "error: unknown failure\n";
    return kExitNegative;
  }
}

}  // namespace nwn
