#include "whp/io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace whp::io {

namespace {

struct Line {
  int number = 0;
  std::string text;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++number;
    std::string t = trim(text.substr(pos, nl - pos));
    if (!t.empty() && t[0] != '#') out.push_back({number, std::move(t)});
    pos = nl + 1;
  }
  return out;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::vector<std::string> split_on(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    auto at = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, at == std::string_view::npos ? std::string_view::npos : at - pos)));
    if (at == std::string_view::npos) break;
    pos = at + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& toks, std::size_t from, std::size_t to) {
  std::string out;
  for (std::size_t i = from; i < to; ++i) out += (i > from ? " " : "") + toks[i];
  return out;
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
  throw ParseError(source + ":" + std::to_string(line) + ": " + msg);
}

long parse_long(const std::string& s, const std::string& source, int line, const std::string& what) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(source, line, "bad integer for " + what + ": '" + s + "'");
}

/// key=value fields; a value runs until the next token that starts a known
/// key, so words with spaces need no quoting. Surrounding quotes are removed.
std::map<std::string, std::string> parse_fields(const std::vector<std::string>& toks, std::size_t from,
                                                const std::set<std::string>& keys, const std::string& source,
                                                int line) {
  std::map<std::string, std::string> out;
  std::string current;
  for (std::size_t i = from; i < toks.size(); ++i) {
    const std::string& t = toks[i];
    const auto eq = t.find('=');
    if (eq != std::string::npos && eq > 0) {
      std::string key = t.substr(0, eq);
      if (!keys.count(key)) fail(source, line, "unknown key '" + key + "'");
      if (out.count(key)) fail(source, line, "duplicate key '" + key + "'");
      current = key;
      out[key] = t.substr(eq + 1);
      continue;
    }
    if (current.empty()) fail(source, line, "unexpected token '" + t + "'");
    out[current] += (out[current].empty() ? "" : " ") + t;
  }
  for (auto& [k, v] : out) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
    v = trim(v);
  }
  return out;
}

const std::string& require(const std::map<std::string, std::string>& f, const std::string& key,
                           const std::string& source, int line) {
  auto it = f.find(key);
  if (it == f.end() || it->second.empty()) fail(source, line, "missing " + key + "=");
  return it->second;
}

std::vector<std::string> name_list(const std::string& v, const std::string& source, int line) {
  auto names = split_on(v, ',');
  for (const auto& n : names)
    if (n.empty() || n.find_first_of(" \t^") != std::string::npos) fail(source, line, "bad generator name '" + n + "'");
  return names;
}

Word parse_word_at(const std::string& text, const Alphabet& a, const std::string& source, int line) {
  try {
    return parse_word(text, a);
  } catch (const Error& e) {
    fail(source, line, e.what());
  }
}

struct TupleLine {
  CoordKind kind;
  std::string word;
  std::optional<std::string> group;
};

TupleLine parse_tuple_line(const Line& l, const std::string& source) {
  auto toks = split_ws(l.text);
  TupleLine out{CoordKind::Exact, {}, std::nullopt};
  if (toks[0] == "exact") out.kind = CoordKind::Exact;
  else if (toks[0] == "cyclic") out.kind = CoordKind::Cyclic;
  else fail(source, l.number, "expected 'exact' or 'cyclic', got '" + toks[0] + "'");
  std::size_t end = toks.size();
  if (toks.size() >= 3 && toks[toks.size() - 2] == "group") {
    out.group = toks.back();
    end -= 2;
  }
  if (end < 2) fail(source, l.number, "missing word (use eps for the identity)");
  out.word = join(toks, 1, end);
  return out;
}

void surface_fields(const std::map<std::string, std::string>& f, const std::string& source, int line,
                    SurfaceSpec& out) {
  const long genus = parse_long(require(f, "genus", source, line), source, line, "genus");
  const long boundary = parse_long(require(f, "boundary", source, line), source, line, "boundary");
  if (genus < 0 || boundary < 1 || genus > 64 || boundary > 64)
    fail(source, line, "surface needs genus >= 0 and boundary >= 1");
  try {
    if (auto it = f.find("names"); it != f.end())
      out = SurfaceSpec::standard(static_cast<int>(genus), static_cast<int>(boundary),
                                  name_list(it->second, source, line));
    else
      out = SurfaceSpec::standard(static_cast<int>(genus), static_cast<int>(boundary));
  } catch (const Error& e) {
    fail(source, line, e.what());
  }
}

gog::Element parse_image(const std::string& text, const gog::Vertex& v, const std::string& source, int line) {
  gog::Element out;
  if (!text.empty() && text.front() == '(') {
    if (text.back() != ')') fail(source, line, "unterminated vector '" + text + "'");
    if (v.kind != gog::VertexKind::Abelian) fail(source, line, "vector image at non-abelian vertex " + v.label);
    for (const auto& c : split_on(text.substr(1, text.size() - 2), ','))
      out.vec.push_back(parse_long(c, source, line, "vector entry"));
    if (static_cast<int>(out.vec.size()) != v.rank())
      fail(source, line, "vector has " + std::to_string(out.vec.size()) + " entries, vertex " + v.label + " has rank " +
                             std::to_string(v.rank()));
    return out;
  }
  Word w = parse_word_at(text, v.alphabet, source, line);
  if (v.kind == gog::VertexKind::Abelian) {
    out.vec.assign(v.rank(), 0);
    for (Letter l : w.letters()) out.vec[l.gen()] += l.sign();
  } else {
    out.word = w;
  }
  return out;
}

struct MapLine {
  bool inverse = false;
  std::string name, image;
};

MapLine parse_map_line(const Line& l, const std::string& source) {
  MapLine out;
  std::string text = l.text;
  if (text.rfind("inverse ", 0) == 0) {
    out.inverse = true;
    text = trim(text.substr(8));
  }
  const auto arrow = text.find("->");
  if (arrow == std::string::npos) fail(source, l.number, "expected 'name -> word'");
  out.name = trim(text.substr(0, arrow));
  out.image = trim(text.substr(arrow + 2));
  if (out.name.empty()) fail(source, l.number, "missing generator name");
  if (out.image.empty()) fail(source, l.number, "missing image (use eps for the identity)");
  return out;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << contents;
  if (!out) throw IoError("cannot write " + path);
}

TupleInstance parse_free_tuple(std::string_view text, const Alphabet& alphabet, const std::string& source) {
  TupleInstance t{alphabet, {}};
  std::map<std::string, int> groups;
  for (const Line& l : content_lines(text)) {
    TupleLine tl = parse_tuple_line(l, source);
    Coordinate c{tl.kind, parse_word_at(tl.word, alphabet, source, l.number), -1};
    if (tl.group) {
      if (tl.kind == CoordKind::Exact) fail(source, l.number, "exact coordinates cannot be grouped");
      c.group = groups.emplace(*tl.group, static_cast<int>(groups.size())).first->second;
    }
    t.coords.push_back(std::move(c));
  }
  try {
    t.validate();
  } catch (const Error& e) {
    throw ValidationError(source + ": " + e.what());
  }
  return t;
}

canon::GTuple parse_gog_tuple(std::string_view text, const gog::Splitting& s, const std::string& source) {
  canon::GTuple t;
  for (const Line& l : content_lines(text)) {
    TupleLine tl = parse_tuple_line(l, source);
    if (tl.group) fail(source, l.number, "grouped conjugacy is not supported for graphs of groups");
    try {
      t.elements.push_back(s.parse(tl.word));
    } catch (const Error& e) {
      fail(source, l.number, e.what());
    }
    t.cyclic.push_back(tl.kind == CoordKind::Cyclic);
  }
  return t;
}

std::string format_free_tuple(const TupleInstance& t) {
  std::string out;
  for (const auto& c : t.coords) {
    out += (c.kind == CoordKind::Exact ? "exact " : "cyclic ") + format_word(c.word, t.alphabet);
    if (c.group >= 0) out += " group " + std::to_string(c.group);
    out += '\n';
  }
  return out;
}

std::string format_gog_tuple(const gog::Splitting& s, const canon::GTuple& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i)
    out += (t.cyclic[i] ? "cyclic " : "exact ") + s.format(t.elements[i]) + '\n';
  return out;
}

gog::GraphOfGroups parse_group(std::string_view text, const std::string& source) {
  gog::GraphOfGroups g;
  for (const Line& l : content_lines(text)) {
    auto toks = split_ws(l.text);
    const std::string& kw = toks[0];
    if (kw == "vertex") {
      if (toks.size() < 3) fail(source, l.number, "expected 'vertex <label> <kind> ...'");
      const std::string& label = toks[1];
      if (g.vertex_index(label)) fail(source, l.number, "vertex " + label + " declared twice");
      const std::string& kind = toks[2];
      if (kind == "free") {
        auto f = parse_fields(toks, 3, {"gens"}, source, l.number);
        g.add_free(label, name_list(require(f, "gens", source, l.number), source, l.number));
      } else if (kind == "abelian") {
        auto f = parse_fields(toks, 3, {"rank", "names"}, source, l.number);
        const long rank = parse_long(require(f, "rank", source, l.number), source, l.number, "rank");
        if (rank < 1 || rank > 64) fail(source, l.number, "abelian rank must be between 1 and 64");
        std::vector<std::string> names;
        if (auto it = f.find("names"); it != f.end()) names = name_list(it->second, source, l.number);
        if (!names.empty() && static_cast<long>(names.size()) != rank)
          fail(source, l.number, "names= lists " + std::to_string(names.size()) + " names for rank " +
                                     std::to_string(rank));
        g.add_abelian(label, static_cast<int>(rank), names);
      } else if (kind == "surface") {
        auto f = parse_fields(toks, 3, {"genus", "boundary", "names"}, source, l.number);
        SurfaceSpec spec;
        surface_fields(f, source, l.number, spec);
        g.add_surface(label, std::move(spec));
      } else {
        fail(source, l.number, "unknown vertex kind '" + kind + "'");
      }
    } else if (kw == "edge") {
      if (toks.size() < 4) fail(source, l.number, "expected 'edge <label> <v1> <v2> ...'");
      gog::Edge e;
      e.label = toks[1];
      if (g.edge_index(e.label)) fail(source, l.number, "edge " + e.label + " declared twice");
      auto v1 = g.vertex_index(toks[2]);
      if (!v1) fail(source, l.number, "undeclared vertex '" + toks[2] + "'");
      auto v2 = g.vertex_index(toks[3]);
      if (!v2) fail(source, l.number, "undeclared vertex '" + toks[3] + "'");
      e.from = *v1;
      e.to = *v2;
      auto f = parse_fields(toks, 4, {"img1", "img2", "tree", "order", "letter"}, source, l.number);
      e.image_from = parse_image(require(f, "img1", source, l.number), g.vertices[e.from], source, l.number);
      e.image_to = parse_image(require(f, "img2", source, l.number), g.vertices[e.to], source, l.number);
      const std::string& tree = require(f, "tree", source, l.number);
      if (tree == "none") e.tree = gog::TreeFlag::None;
      else if (tree == "T") e.tree = gog::TreeFlag::T;
      else if (tree == "T1") e.tree = gog::TreeFlag::T1;
      else fail(source, l.number, "tree= must be none, T or T1");
      if (auto it = f.find("order"); it != f.end())
        e.order = static_cast<int>(parse_long(it->second, source, l.number, "order"));
      if (auto it = f.find("letter"); it != f.end()) e.letter = it->second;
      g.add_edge(std::move(e));
    } else if (kw == "twist") {
      if (toks.size() < 3) fail(source, l.number, "expected 'twist <vertex> <gen> -> <word> ; ...'");
      auto v = g.vertex_index(toks[1]);
      if (!v) fail(source, l.number, "undeclared vertex '" + toks[1] + "'");
      gog::Vertex& vx = g.vertices[*v];
      if (vx.kind != gog::VertexKind::Surface) fail(source, l.number, "twists need a surface vertex");
      std::vector<Word> images;
      for (int i = 0; i < vx.rank(); ++i) images.push_back(Word::generator(i));
      std::set<int> seen;
      for (const auto& part : split_on(join(toks, 2, toks.size()), ';')) {
        MapLine m = parse_map_line(Line{l.number, part}, source);
        if (m.inverse) fail(source, l.number, "inverse images are computed for twists");
        auto gen = vx.alphabet.find(m.name);
        if (!gen) fail(source, l.number, "unknown generator '" + m.name + "' of vertex " + vx.label);
        if (!seen.insert(*gen).second) fail(source, l.number, "generator " + m.name + " mapped twice");
        images[*gen] = parse_word_at(m.image, vx.alphabet, source, l.number);
      }
      auto aut = verify_basis(Endomorphism(vx.alphabet, images));
      if (!aut) fail(source, l.number, "twist is not an automorphism");
      vx.qh_twists.push_back(*aut);
    } else {
      fail(source, l.number, "unknown directive '" + kw + "'");
    }
  }
  return g;
}

gog::Splitting load_group(std::string_view text, const std::string& source) {
  gog::GraphOfGroups g = parse_group(text, source);
  try {
    return gog::Splitting(std::move(g));
  } catch (const Error& e) {
    throw ValidationError(source + ": " + e.what());
  }
}

std::string format_group(const gog::GraphOfGroups& g) {
  auto names = [](const Alphabet& a) {
    std::string out;
    for (const auto& n : a.names()) out += (out.empty() ? "" : ",") + n;
    return out;
  };
  std::string out;
  for (const auto& v : g.vertices) {
    out += "vertex " + v.label + " " + gog::kind_name(v.kind);
    switch (v.kind) {
      case gog::VertexKind::Free: out += " gens=" + names(v.alphabet); break;
      case gog::VertexKind::Abelian: out += " rank=" + std::to_string(v.rank()) + " names=" + names(v.alphabet); break;
      case gog::VertexKind::Surface:
        out += " genus=" + std::to_string(v.surface->genus) + " boundary=" + std::to_string(v.surface->boundary) +
               " names=" + names(v.alphabet);
        break;
    }
    out += '\n';
  }
  for (const auto& v : g.vertices)
    for (const auto& tw : v.qh_twists) {
      out += "twist " + v.label;
      for (int i = 0; i < v.rank(); ++i)
        out += (i ? " ; " : " ") + v.alphabet.name(i) + " -> " + format_word(tw.forward().image(i), v.alphabet);
      out += '\n';
    }
  auto image = [&](const gog::Vertex& v, const gog::Element& x) {
    if (v.kind != gog::VertexKind::Abelian) return format_word(x.word, v.alphabet);
    std::string s = "(";
    for (std::size_t i = 0; i < x.vec.size(); ++i) s += (i ? "," : "") + std::to_string(x.vec[i]);
    return s + ")";
  };
  for (const auto& e : g.edges) {
    out += "edge " + e.label + " " + g.vertices[e.from].label + " " + g.vertices[e.to].label +
           " img1=" + image(g.vertices[e.from], e.image_from) + " img2=" + image(g.vertices[e.to], e.image_to) +
           " tree=" + (e.tree == gog::TreeFlag::None ? "none" : e.tree == gog::TreeFlag::T ? "T" : "T1") +
           " order=" + std::to_string(e.order);
    if (!e.letter.empty()) out += " letter=" + e.letter;
    out += '\n';
  }
  return out;
}

Automorphism parse_free_auto(std::string_view text, const Alphabet& alphabet, const std::string& source) {
  const int n = alphabet.rank();
  std::vector<std::optional<Word>> fwd(n), inv(n);
  int inverse_lines = 0;
  for (const Line& l : content_lines(text)) {
    MapLine m = parse_map_line(l, source);
    auto gen = alphabet.find(m.name);
    if (!gen) fail(source, l.number, "unknown generator '" + m.name + "'");
    auto& slot = (m.inverse ? inv : fwd)[*gen];
    if (slot) fail(source, l.number, "generator " + m.name + " mapped twice");
    slot = parse_word_at(m.image, alphabet, source, l.number);
    inverse_lines += m.inverse;
  }
  std::vector<Word> f, b;
  for (int i = 0; i < n; ++i) {
    if (!fwd[i]) throw ParseError(source + ": no image for generator " + alphabet.name(i));
    f.push_back(*fwd[i]);
    if (inverse_lines) {
      if (!inv[i]) throw ParseError(source + ": no inverse image for generator " + alphabet.name(i));
      b.push_back(*inv[i]);
    }
  }
  if (inverse_lines) {
    try {
      return Automorphism(Endomorphism(alphabet, f), Endomorphism(alphabet, b));
    } catch (const Error&) {
      throw ValidationError(source + ": inverse images do not invert the map");
    }
  }
  auto aut = verify_basis(Endomorphism(alphabet, f));
  if (!aut) throw ValidationError(source + ": images do not form a basis");
  return *aut;
}

gog::GAutomorphism parse_gog_auto(std::string_view text, const gog::Splitting& s, const std::string& source) {
  const std::size_t n = s.generators().size();
  std::vector<std::optional<gog::NormalForm>> fwd(n), inv(n);
  for (const Line& l : content_lines(text)) {
    MapLine m = parse_map_line(l, source);
    auto gen = s.find_generator(m.name);
    if (!gen) fail(source, l.number, "unknown generator '" + m.name + "'");
    auto& slot = (m.inverse ? inv : fwd)[*gen];
    if (slot) fail(source, l.number, "generator " + m.name + " mapped twice");
    try {
      slot = s.parse(m.image);
    } catch (const Error& e) {
      fail(source, l.number, e.what());
    }
  }
  gog::GAutomorphism phi;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& name = s.generators()[i].name;
    if (!fwd[i]) throw ParseError(source + ": no image for generator " + name);
    if (!inv[i]) throw ParseError(source + ": no inverse image for generator " + name);
    phi.forward.push_back(*fwd[i]);
    phi.backward.push_back(*inv[i]);
  }
  if (!s.is_automorphism(phi)) throw ValidationError(source + ": not an automorphism of the group");
  return phi;
}

std::string format_free_auto(const Automorphism& phi) {
  const Alphabet& a = phi.alphabet();
  std::string out;
  for (int i = 0; i < a.rank(); ++i) out += a.name(i) + " -> " + format_word(phi.forward().image(i), a) + '\n';
  for (int i = 0; i < a.rank(); ++i)
    out += "inverse " + a.name(i) + " -> " + format_word(phi.backward().image(i), a) + '\n';
  return out;
}

std::string format_gog_auto(const gog::Splitting& s, const gog::GAutomorphism& phi) {
  std::string out;
  const auto& gens = s.generators();
  for (std::size_t i = 0; i < gens.size(); ++i) out += gens[i].name + " -> " + s.format(phi.forward[i]) + '\n';
  for (std::size_t i = 0; i < gens.size(); ++i)
    out += "inverse " + gens[i].name + " -> " + s.format(phi.backward[i]) + '\n';
  return out;
}

QHExponentQuery parse_qh_query(std::string_view text, const std::string& source) {
  QHExponentQuery q;
  bool have_surface = false;
  std::map<std::string, Word> words;
  for (const Line& l : content_lines(text)) {
    auto toks = split_ws(l.text);
    if (toks[0] == "surface") {
      if (have_surface) fail(source, l.number, "second surface line");
      auto f = parse_fields(toks, 1, {"genus", "boundary", "names"}, source, l.number);
      surface_fields(f, source, l.number, q.surface);
      have_surface = true;
    } else if (toks[0] == "u" || toks[0] == "v" || toks[0] == "c" || toks[0] == "d") {
      if (!have_surface) fail(source, l.number, "the surface line must come first");
      if (words.count(toks[0])) fail(source, l.number, "second '" + toks[0] + "' line");
      if (toks.size() < 2) fail(source, l.number, "missing word");
      words[toks[0]] = parse_word_at(join(toks, 1, toks.size()), q.surface.alphabet, source, l.number);
    } else {
      fail(source, l.number, "expected surface, u, v, c or d, got '" + toks[0] + "'");
    }
  }
  if (!have_surface) throw ParseError(source + ": missing surface line");
  for (const char* k : {"u", "v", "c", "d"})
    if (!words.count(k)) throw ParseError(source + ": missing '" + k + "' line");
  q.u = words["u"];
  q.v = words["v"];
  q.c = words["c"];
  q.d = words["d"];
  return q;
}

}  // namespace whp::io
