#include <set>

#include "nwn/format.hpp"

namespace nwn {

std::string Diagnostic::to_string() const {
  std::string s = errc_name(code);
  if (line) s += " at " + std::to_string(line) + ":" + std::to_string(col);
  return s + ": " + message;
}

namespace {

struct Tok {
  enum Kind { Name, Sym, Arrow, FatArrow } kind;
  std::string text;
  std::size_t col;
};

bool is_sym(char c) { return std::string_view(":[]<>|,*=").find(c) != std::string_view::npos; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<Tok> lex(std::string_view line) {
  std::vector<Tok> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (is_space(c)) {
      ++i;
    } else if (c == '#') {
      break;
    } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      out.push_back({Tok::Arrow, "->", i + 1});
      i += 2;
    } else if (c == '=' && i + 1 < line.size() && line[i + 1] == '>') {
      out.push_back({Tok::FatArrow, "=>", i + 1});
      i += 2;
    } else if (is_sym(c)) {
      out.push_back({Tok::Sym, std::string(1, c), i + 1});
      ++i;
    } else {
      std::size_t j = i;
      while (j < line.size() && !is_space(line[j]) && line[j] != '#' && !is_sym(line[j]) &&
             !(line[j] == '-' && j + 1 < line.size() && line[j + 1] == '>'))
        ++j;
      out.push_back({Tok::Name, std::string(line.substr(i, j - i)), i + 1});
      i = j;
    }
  }
  return out;
}

enum class Sec { None, Places, Trans, Arcs, Channels, Events, Init, Target };

std::optional<Sec> keyword(const std::string& s) {
  if (s == "PLACES") return Sec::Places;
  if (s == "TRANS") return Sec::Trans;
  if (s == "ARCS") return Sec::Arcs;
  if (s == "CHANNELS") return Sec::Channels;
  if (s == "EVENTS") return Sec::Events;
  if (s == "INIT") return Sec::Init;
  if (s == "TARGET") return Sec::Target;
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::string_view text, const Document* base) : text_(text), base_(base) {
    if (base) doc_ = *base;
  }

  Document run() {
    std::size_t start = 0;
    while (start <= text_.size()) {
      std::size_t end = text_.find('\n', start);
      if (end == std::string_view::npos) end = text_.size();
      ++line_;
      line_text_ = text_.substr(start, end - start);
      try {
        line(line_text_);
      } catch (const FormatError&) {
        throw;
      } catch (const Error& e) {
        Errc c = e.code();
        if (c == Errc::Overflow) c = Errc::SyntaxError;
        if (c == Errc::UnknownObjectNet || c == Errc::UnknownTransition) c = Errc::ResolutionError;
        if (c != Errc::SyntaxError && c != Errc::ResolutionError) c = Errc::ValidationError;
        throw FormatError({c, line_, 1, e.what()});
      }
      start = end + 1;
    }
    ++line_;
    if (!header_seen_ && !base_) err(Errc::SyntaxError, 1, "missing header 'nwn 1 <kind>'");
    if (obj_) err(Errc::SyntaxError, 1, "OBJECT block '" + obj_->name + "' is not closed by END");
    finish();
    return std::move(doc_);
  }

 private:
  std::string_view text_;
  const Document* base_;
  Document doc_;
  NuPN nu_;
  std::vector<std::pair<std::size_t, TransferEntry>> entries_;
  std::set<std::tuple<std::size_t, Var, std::size_t>> pre_channel_uses_;
  std::size_t line_ = 0;
  std::string_view line_text_;
  bool header_seen_ = false;
  bool any_section_ = false;
  bool has_channels_ = false;
  Sec sec_ = Sec::None;
  std::optional<PetriNet> obj_;
  std::optional<Vec> pn_cfg_[2];
  std::optional<NuConfig> nu_cfg_[2];
  std::optional<NestedMarking> eos_cfg_[2];

  [[noreturn]] void err(Errc c, std::size_t col, const std::string& msg) { throw FormatError({c, line_, col, msg}); }

  Formalism kind() const { return doc_.kind; }

  void line(std::string_view raw) {
    std::size_t first = 0;
    while (first < raw.size() && is_space(raw[first])) ++first;
    std::string_view body = raw.substr(first);
    if (body.rfind("# prov ", 0) == 0) return prov(body.substr(7), first + 8);
    auto toks = lex(raw);
    if (toks.empty()) return;
    if (!header_seen_ && toks[0].kind == Tok::Name && toks[0].text == "nwn") return header(toks);
    if (!header_seen_ && !base_) err(Errc::SyntaxError, toks[0].col, "expected header 'nwn 1 <kind>'");
    if (toks.size() == 1 && toks[0].kind == Tok::Name) {
      if (auto k = keyword(toks[0].text)) return section(*k, toks[0]);
      if (toks[0].text == "END") return end_object(toks[0]);
    }
    if (toks.size() == 2 && toks[0].kind == Tok::Name && toks[0].text == "OBJECT" && toks[1].kind == Tok::Name)
      return begin_object(toks[1]);
    if (toks[0].kind == Tok::Name && toks[0].text == "name" && !any_section_ && !base_) {
      auto pos = body.find("name") + 4;
      std::string_view rest = body.substr(pos);
      auto hash = rest.find('#');
      if (hash != std::string_view::npos) rest = rest.substr(0, hash);
      while (!rest.empty() && is_space(rest.front())) rest.remove_prefix(1);
      while (!rest.empty() && is_space(rest.back())) rest.remove_suffix(1);
      doc_.name = std::string(rest);
      return;
    }
    data(toks);
  }

  void header(const std::vector<Tok>& t) {
    if (t.size() != 3 || t[1].kind != Tok::Name || t[2].kind != Tok::Name)
      err(Errc::SyntaxError, t[0].col, "header must be 'nwn 1 <kind>'");
    if (t[1].text != "1") err(Errc::SyntaxError, t[1].col, "unsupported version '" + t[1].text + "'");
    auto f = parse_formalism(t[2].text);
    if (!f) err(Errc::SyntaxError, t[2].col, "unknown formalism '" + t[2].text + "'");
    if (base_ && *f != base_->kind) err(Errc::SyntaxError, t[2].col, "formalism does not match the net");
    header_seen_ = true;
    if (!base_) doc_.kind = *f;
  }

  void prov(std::string_view rest, std::size_t col) {
    if (!header_seen_ && !base_) err(Errc::SyntaxError, col, "provenance before header");
    std::vector<std::string> parts;
    std::size_t i = 0;
    while (i < rest.size()) {
      while (i < rest.size() && is_space(rest[i])) ++i;
      std::size_t j = i;
      while (j < rest.size() && !is_space(rest[j])) ++j;
      if (j > i) parts.emplace_back(rest.substr(i, j - i));
      i = j;
    }
    if (parts.size() != 4) err(Errc::SyntaxError, col, "provenance needs: id kind tag source");
    doc_.prov.push_back({parts[0], parts[1], parts[2], parts[3] == "-" ? "" : parts[3]});
  }

  void section(Sec s, const Tok& t) {
    any_section_ = true;
    if (base_ && s != Sec::Init && s != Sec::Target)
      err(Errc::SyntaxError, t.col, "only INIT and TARGET may extend an existing net");
    if (obj_ && s != Sec::Places && s != Sec::Trans && s != Sec::Arcs)
      err(Errc::SyntaxError, t.col, "section " + t.text + " is not allowed inside OBJECT");
    if (s == Sec::Channels && kind() != Formalism::CNuPN && kind() != Formalism::RNuPN)
      err(Errc::SyntaxError, t.col, "CHANNELS needs a cnupn or rnupn document");
    if (s == Sec::Events && kind() != Formalism::EOS) err(Errc::SyntaxError, t.col, "EVENTS needs an eos document");
    if (s == Sec::Channels) has_channels_ = true;
    sec_ = s;
    if (s == Sec::Init || s == Sec::Target) {
      int i = s == Sec::Target;
      switch (kind()) {
        case Formalism::PN:
          if (!pn_cfg_[i]) pn_cfg_[i] = doc_.pn.marking();
          break;
        case Formalism::EOS:
          if (!eos_cfg_[i]) eos_cfg_[i] = NestedMarking{};
          break;
        default:
          if (!nu_cfg_[i]) nu_cfg_[i] = NuConfig{};
      }
    }
  }

  void begin_object(const Tok& name) {
    if (kind() != Formalism::EOS || base_) err(Errc::SyntaxError, name.col, "OBJECT needs an eos document");
    if (obj_) err(Errc::SyntaxError, name.col, "nested OBJECT block");
    any_section_ = true;
    obj_ = PetriNet{};
    obj_->name = name.text;
    sec_ = Sec::None;
  }

  void end_object(const Tok& t) {
    if (!obj_) err(Errc::SyntaxError, t.col, "END without OBJECT");
    doc_.eos.add_object(std::move(*obj_));
    obj_.reset();
    sec_ = Sec::None;
  }

  // Token stream helpers over one line.
  struct Cursor {
    Parser& p;
    const std::vector<Tok>& t;
    std::size_t i = 0;
    bool done() const { return i >= t.size(); }
    const Tok& peek() const { return t[i]; }
    bool at_sym(const char* s) const { return !done() && t[i].kind == Tok::Sym && t[i].text == s; }
    std::size_t col() const { return done() ? (t.empty() ? 1 : t.back().col + t.back().text.size()) : t[i].col; }
    const Tok& name(const char* what) {
      if (done() || t[i].kind != Tok::Name) p.err(Errc::SyntaxError, col(), std::string("expected ") + what);
      return t[i++];
    }
    void sym(const char* s) {
      if (!at_sym(s)) p.err(Errc::SyntaxError, col(), std::string("expected '") + s + "'");
      ++i;
    }
    void end() {
      if (!done()) p.err(Errc::SyntaxError, col(), "unexpected '" + t[i].text + "'");
    }
  };

  Count count(const Tok& t) {
    if (t.text.empty() || t.text.size() > 10) err(Errc::SyntaxError, t.col, "bad count '" + t.text + "'");
    std::uint64_t v = 0;
    for (char c : t.text) {
      if (c < '0' || c > '9') err(Errc::SyntaxError, t.col, "bad count '" + t.text + "'");
      v = v * 10 + std::uint64_t(c - '0');
    }
    if (v > kMaxCount) err(Errc::SyntaxError, t.col, "count too large");
    return Count(v);
  }

  static bool numeric(const Tok& t) {
    return t.kind == Tok::Name && !t.text.empty() &&
           std::all_of(t.text.begin(), t.text.end(), [](char c) { return c >= '0' && c <= '9'; });
  }

  Var var(const Tok& t) {
    auto v = parse_var(t.text);
    if (!v) err(Errc::SyntaxError, t.col, "bad variable '" + t.text + "'");
    return *v;
  }

  std::size_t nu_place(const Tok& t) {
    auto p = nu_.find_place(t.text);
    if (!p) err(Errc::ResolutionError, t.col, "unknown place '" + t.text + "'");
    return *p;
  }

  std::size_t nu_trans(const Tok& t) {
    auto x = nu_.find_transition(t.text);
    if (!x) err(Errc::ResolutionError, t.col, "unknown transition '" + t.text + "'");
    return *x;
  }

  PetriNet& flat() {
    if (obj_) return *obj_;
    return kind() == Formalism::EOS ? doc_.eos.system : doc_.pn;
  }

  std::size_t flat_place(const Tok& t, const PetriNet& n) {
    auto p = n.find_place(t.text);
    if (!p) err(Errc::ResolutionError, t.col, "unknown place '" + t.text + "'");
    return *p;
  }

  void data(const std::vector<Tok>& toks) {
    Cursor c{*this, toks};
    switch (sec_) {
      case Sec::None: err(Errc::SyntaxError, toks[0].col, "data outside of a section");
      case Sec::Places: return places(c);
      case Sec::Trans: return trans(c);
      case Sec::Arcs: return arcs(c);
      case Sec::Channels: return channels(c);
      case Sec::Events: return events(c);
      case Sec::Init: return config(c, 0);
      case Sec::Target: return config(c, 1);
    }
  }

  void places(Cursor& c) {
    while (!c.done()) {
      const Tok& n = c.name("place name");
      if (obj_ || kind() == Formalism::PN) {
        flat().add_place(n.text);
      } else if (kind() == Formalism::EOS) {
        std::size_t type = kBlack;
        if (c.at_sym(":")) {
          c.sym(":");
          const Tok& ty = c.name("object net name");
          auto o = doc_.eos.find_object(ty.text);
          if (!o) err(Errc::ResolutionError, ty.col, "unknown object net '" + ty.text + "'");
          type = *o;
        }
        doc_.eos.add_place(n.text, type);
      } else {
        nu_.add_place(n.text);
      }
    }
  }

  void trans(Cursor& c) {
    if (is_nu(kind()) && !obj_) {
      const Tok& n = c.name("transition name");
      auto t = nu_.add_transition(n.text);
      if (c.done()) return;
      c.sym(":");
      while (!c.done()) nu_.ensure_var(t, var(c.name("variable")));
      return;
    }
    while (!c.done()) {
      const Tok& n = c.name("transition name");
      if (!obj_ && kind() == Formalism::EOS)
        doc_.eos.add_transition(n.text);
      else
        flat().add_transition(n.text);
    }
  }

  void arcs(Cursor& c) {
    const Tok& a = c.name("arc source");
    if (c.done() || c.peek().kind != Tok::Arrow) err(Errc::SyntaxError, c.col(), "expected '->'");
    ++c.i;
    const Tok& b = c.name("arc target");
    if (is_nu(kind()) && !obj_) {
      auto pa = nu_.find_place(a.text);
      bool pre = pa.has_value();
      std::size_t p = pre ? *pa : nu_place(b), t = pre ? nu_trans(b) : nu_trans(a);
      c.sym(":");
      if (c.done()) err(Errc::SyntaxError, c.col(), "expected variables");
      while (!c.done()) {
        Count w = 1;
        if (numeric(c.peek())) {
          w = count(c.name("weight"));
          c.sym("*");
        }
        Var v = var(c.name("variable"));
        if (pre)
          nu_.add_pre(p, t, v, w);
        else
          nu_.add_post(t, p, v, w);
      }
      return;
    }
    PetriNet& n = flat();
    Count w = 1;
    if (!c.done()) {
      c.sym(":");
      w = count(c.name("weight"));
      c.end();
    }
    if (auto p = n.find_place(a.text)) {
      auto t = n.find_transition(b.text);
      if (!t) err(Errc::ResolutionError, b.col, "unknown transition '" + b.text + "'");
      n.add_pre(*p, *t, w);
    } else {
      auto t = n.find_transition(a.text);
      if (!t) err(Errc::ResolutionError, a.col, "unknown place or transition '" + a.text + "'");
      n.add_post(*t, flat_place(b, n), w);
    }
  }

  void use_pre(std::size_t t, Var x, std::size_t p, std::size_t col) {
    if (!pre_channel_uses_.insert({t, x, p}).second)
      err(Errc::ValidationError, col,
          var_name(x) + " occurs in more than one pre-channel position from " + nu_.places()[p]);
  }

  Var channel_var(std::size_t t, const Tok& tok) {
    Var v = var(tok);
    if (v.kind != VarKind::Std || !nu_.trans(t).slot(v))
      err(Errc::ResolutionError, tok.col, var_name(v) + " is not a standard variable of " + nu_.trans(t).name);
    return v;
  }

  void channels(Cursor& c) {
    auto t = nu_trans(c.name("transition name"));
    c.sym(":");
    const Tok& first = c.name("channel");
    if (first.text.rfind("G(", 0) == 0 && c.at_sym(",")) {
      Tok xa = first;
      xa.text = first.text.substr(2);
      xa.col += 2;
      c.sym(",");
      Tok xb = c.name("variable");
      if (xb.text.empty() || xb.text.back() != ')') err(Errc::SyntaxError, xb.col, "expected ')'");
      xb.text.pop_back();
      Var a = channel_var(t, xa), b = channel_var(t, xb);
      c.sym("[");
      auto p = nu_place(c.name("place"));
      c.sym("]");
      c.sym("=");
      auto q = nu_place(c.name("place"));
      c.end();
      use_pre(t, a, p, xa.col);
      entries_.push_back({t, {a, b, p, q}});
      return;
    }
    auto p = nu_place(first);
    c.sym("[");
    std::vector<std::pair<Var, std::size_t>> pre, post;
    while (!c.at_sym("]")) {
      const Tok& v = c.name("variable");
      pre.push_back({channel_var(t, v), v.col});
    }
    c.sym("]");
    if (c.done() || c.peek().kind != Tok::FatArrow) err(Errc::SyntaxError, c.col(), "expected '=>'");
    ++c.i;
    auto q = nu_place(c.name("place"));
    c.sym("[");
    while (!c.at_sym("]")) {
      const Tok& v = c.name("variable");
      post.push_back({channel_var(t, v), v.col});
    }
    c.sym("]");
    c.end();
    if (pre.empty() || pre.size() != post.size())
      err(Errc::SyntaxError, first.col, "channel labels must be non-empty and of equal length");
    for (std::size_t i = 0; i < pre.size(); ++i) {
      use_pre(t, pre[i].first, p, pre[i].second);
      entries_.push_back({t, {pre[i].first, post[i].first, p, q}});
    }
  }

  void events(Cursor& c) {
    EOS& e = doc_.eos;
    const Tok& tn = c.name("system transition");
    auto t = e.system.find_transition(tn.text);
    if (!t) err(Errc::ResolutionError, tn.col, "unknown system transition '" + tn.text + "'");
    Event ev = e.empty_event(*t);
    if (!c.done()) {
      c.sym(":");
      while (!c.done()) {
        Count w = 1;
        if (numeric(c.peek())) {
          w = count(c.name("multiplicity"));
          c.sym("*");
        }
        const Tok& ot = c.name("object transition");
        bool found = false;
        for (std::size_t n = 1; n < e.objects.size() && !found; ++n) {
          const auto& o = e.objects[n];
          if (ot.text.size() > o.name.size() + 1 && ot.text.compare(0, o.name.size(), o.name) == 0 &&
              ot.text[o.name.size()] == '.')
            if (auto x = o.find_transition(std::string_view(ot.text).substr(o.name.size() + 1))) {
              ev.theta[n][*x] = checked_add(ev.theta[n][*x], w);
              found = true;
            }
        }
        if (!found) err(Errc::ResolutionError, ot.col, "unknown object transition '" + ot.text + "'");
      }
    }
    e.events.push_back(std::move(ev));
  }

  Vec flat_marking(Cursor& c, const PetriNet& n, const char* close) {
    Vec m(n.num_places());
    while (!c.done() && !(close && c.at_sym(close))) {
      const Tok& p = c.name("place");
      auto pi = flat_place(p, n);
      Count w = 1;
      if (c.at_sym(":")) {
        c.sym(":");
        w = count(c.name("count"));
      }
      m.inc(pi, w);
    }
    return m;
  }

  void config(Cursor& c, int which) {
    switch (kind()) {
      case Formalism::PN: {
        pn_cfg_[which] = *pn_cfg_[which] + flat_marking(c, doc_.pn, nullptr);
        return;
      }
      case Formalism::EOS: {
        const EOS& e = doc_.eos;
        while (!c.done()) {
          c.sym("<");
          const Tok& p = c.name("system place");
          auto pi = flat_place(p, e.system);
          Vec inner(e.type_of(pi).num_places());
          if (c.at_sym("|")) {
            c.sym("|");
            inner = flat_marking(c, e.type_of(pi), ">");
          }
          c.sym(">");
          eos_cfg_[which]->push_back({pi, inner});
        }
        return;
      }
      default: {
        const NuPN& n = base_ ? doc_.nu.base : nu_;
        while (!c.done()) {
          c.sym("[");
          Vec v(n.num_places());
          while (!c.at_sym("]")) {
            const Tok& p = c.name("place");
            auto pi = n.find_place(p.text);
            if (!pi) err(Errc::ResolutionError, p.col, "unknown place '" + p.text + "'");
            Count w = 1;
            if (c.at_sym(":")) {
              c.sym(":");
              w = count(c.name("count"));
            }
            v.inc(*pi, w);
          }
          c.sym("]");
          nu_cfg_[which]->push_back(v);
        }
      }
    }
  }

  void check_generated(const std::string& name) {
    if (name.rfind(kGenPrefix, 0) == 0 && !find_prov(doc_.prov, name))
      throw FormatError({Errc::ResolutionError, 0, 0, "generated name '" + name + "' has no provenance entry"});
  }

  void invalid(const std::vector<Violation>& v) {
    if (!v.empty())
      throw FormatError({Errc::ValidationError, 0, 0, v[0].element + ": " + v[0].condition + ": " + v[0].detail});
  }

  void finish() {
    if (!base_ && is_nu(kind())) {
      doc_.nu = CNuPN{nu_, {}};
      doc_.nu.transfers.resize(nu_.transitions().size());
      for (auto& [t, e] : entries_) doc_.nu.add_transfer(t, e);
      fill_identity_defaults(doc_.nu);
    }
    if (pn_cfg_[0]) doc_.pn_init = pn_cfg_[0];
    if (pn_cfg_[1]) doc_.pn_target = pn_cfg_[1];
    if (nu_cfg_[0]) doc_.nu_init = canonical(*nu_cfg_[0]);
    if (nu_cfg_[1]) doc_.nu_target = canonical(*nu_cfg_[1]);
    if (eos_cfg_[0]) doc_.eos_init = nm_canon(*eos_cfg_[0]);
    if (eos_cfg_[1]) doc_.eos_target = nm_canon(*eos_cfg_[1]);
    if (base_) return;
    doc_.pn.name = doc_.nu.base.name = doc_.eos.name = doc_.name;
    switch (kind()) {
      case Formalism::PN:
        for (const auto& p : doc_.pn.places()) check_generated(p);
        for (const auto& t : doc_.pn.transitions()) check_generated(t);
        break;
      case Formalism::EOS:
        for (const auto& o : doc_.eos.objects) {
          check_generated(o.name);
          for (const auto& p : o.places()) check_generated(p);
          for (const auto& t : o.transitions()) check_generated(t);
        }
        for (const auto& p : doc_.eos.system.places()) check_generated(p);
        for (const auto& t : doc_.eos.system.transitions())
          if (t.rfind("id(", 0) != 0) check_generated(t);
        invalid(eos_validate(doc_.eos).violations);
        break;
      default: {
        for (const auto& p : doc_.nu.base.places()) check_generated(p);
        for (const auto& t : doc_.nu.base.transitions()) check_generated(t.name);
        invalid(nupn_validate(doc_.nu.base));
        invalid(validate_transfer(doc_.nu));
        if (kind() == Formalism::RNuPN) {
          auto r = is_rnupn(doc_.nu);
          if (!r.ok) throw FormatError({Errc::ValidationError, 0, 0, "not a rename net: " + r.report});
        }
      }
    }
  }
};

}  // namespace

Document parse_doc(std::string_view text) { return Parser(text, nullptr).run(); }

Document parse_overlay(std::string_view text, const Document& base) { return Parser(text, &base).run(); }

}  // namespace nwn
