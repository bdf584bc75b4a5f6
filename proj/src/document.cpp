#include "koszulkit/document.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace koszulkit {

namespace docdetail {

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace((unsigned char)s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || std::isdigit((unsigned char)s[0])) return false;
  for (char c : s)
    if (!std::isalnum((unsigned char)c) && c != '_') return false;
  return true;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::size_t to_size(const std::string& tok, std::size_t line, const char* what) {
  try {
    if (tok.empty() || tok[0] == '-') throw std::invalid_argument(tok);
    std::size_t pos = 0;
    unsigned long long v = std::stoull(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return (std::size_t)v;
  } catch (const std::exception&) {
    throw ParseError(line, std::string("expected a nonnegative ") + what + ", got '" + tok + "'");
  }
}

long to_long(const std::string& tok, std::size_t line, const char* what) {
  try {
    std::size_t pos = 0;
    long v = std::stol(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, std::string("expected an integer ") + what + ", got '" + tok + "'");
  }
}

std::uint64_t to_u64(const std::string& tok, std::size_t line, const char* what) {
  try {
    if (tok.empty() || tok[0] == '-') throw std::invalid_argument(tok);
    std::size_t pos = 0;
    unsigned long long v = std::stoull(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return (std::uint64_t)v;
  } catch (const std::exception&) {
    throw ParseError(line, std::string("expected a number for ") + what + ", got '" + tok + "'");
  }
}

Cursor::Cursor(const std::string& text) {
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string raw =
        nl == std::string::npos ? text.substr(start) : text.substr(start, nl - start);
    ++number;
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    while (!raw.empty() && std::isspace((unsigned char)raw.back())) raw.pop_back();
    std::size_t lead = 0;
    while (lead < raw.size() && std::isspace((unsigned char)raw[lead])) ++lead;
    raw.erase(0, lead);
    if (!raw.empty()) lines.push_back(Line{number, std::move(raw)});
    if (nl == std::string::npos) break;
    start = nl + 1;
  }
}

const Cursor::Line& Cursor::peek() const {
  if (done()) throw ParseError(lines.empty() ? 1 : lines.back().number, "unexpected end of document");
  return lines[idx];
}

Cursor::Line Cursor::take() {
  const Line& l = peek();
  ++idx;
  return l;
}

void Cursor::fail(const std::string& msg) const {
  std::size_t ln = idx < lines.size() ? lines[idx].number
                                      : (lines.empty() ? 1 : lines.back().number);
  throw ParseError(ln, msg);
}

}  // namespace docdetail

using docdetail::Cursor;
using docdetail::is_identifier;
using docdetail::split_ws;
using docdetail::to_long;
using docdetail::to_size;
using docdetail::to_u64;

namespace {

RingDescriptor parse_ring_line(const std::vector<std::string>& toks, std::size_t line) {
  RingDescriptor d;
  std::size_t i = 1;
  auto need = [&](const char* what) -> const std::string& {
    if (i >= toks.size()) throw ParseError(line, std::string("ring: expected ") + what);
    return toks[i++];
  };
  const std::string& kind = need("a ring kind");
  if (kind == "integers") {
    d.kind = RingDescriptor::Kind::integers;
  } else if (kind == "rationals") {
    d.kind = RingDescriptor::Kind::rationals;
  } else if (kind == "prime-field") {
    d.kind = RingDescriptor::Kind::prime_field;
    d.p = to_u64(need("a modulus"), line, "modulus");
  } else if (kind == "polynomial") {
    d.kind = RingDescriptor::Kind::polynomial;
    const std::string& base = need("a coefficient ring");
    if (base == "rationals") {
      d.base_is_rationals = true;
    } else if (base == "prime-field") {
      d.base_is_rationals = false;
      d.p = to_u64(need("a modulus"), line, "modulus");
    } else {
      throw ParseError(line, "ring: coefficient ring must be rationals or prime-field");
    }
    if (need("vars") != "vars") throw ParseError(line, "ring: expected 'vars'");
    while (i < toks.size() && toks[i] != "order") {
      if (!is_identifier(toks[i])) throw ParseError(line, "ring: bad variable name '" + toks[i] + "'");
      d.vars.push_back(toks[i++]);
    }
    if (i < toks.size()) {
      ++i;  // "order"
      try {
        d.order = mon_order_from_string(need("an order name"));
      } catch (const std::exception& e) {
        throw ParseError(line, std::string("ring: ") + e.what());
      }
    }
  } else {
    throw ParseError(line, "ring: unknown kind '" + kind + "'");
  }
  if (i != toks.size()) throw ParseError(line, "ring: unexpected token '" + toks[i] + "'");
  try {
    d.validate();
  } catch (const std::exception& e) {
    throw ParseError(line, e.what());
  }
  return d;
}

template <class R>
R parse_element(const RingCtx<R>& ctx, const std::string& text, std::size_t line) {
  std::string t = text;
  std::size_t lead = 0;
  while (lead < t.size() && std::isspace((unsigned char)t[lead])) ++lead;
  t.erase(0, lead);
  while (!t.empty() && std::isspace((unsigned char)t.back())) t.pop_back();
  if (t.empty()) throw ParseError(line, "expected a ring element");
  try {
    return ctx.parse_scalar(t);
  } catch (const std::exception& e) {
    throw ParseError(line, std::string("bad ring element: ") + e.what());
  }
}

// `rows` lines "row a, b, ..." then "end".
template <class R>
Matrix<R> read_matrix_rows(Cursor& cur, const RingCtx<R>& ctx, std::size_t rows,
                           std::size_t cols) {
  Matrix<R> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    Cursor::Line ln = cur.take();
    if (ln.text.compare(0, 3, "row") != 0 ||
        (ln.text.size() > 3 && !std::isspace((unsigned char)ln.text[3])))
      throw ParseError(ln.number, "expected a 'row' line");
    std::string rest = ln.text.size() > 3 ? ln.text.substr(4) : "";
    std::vector<std::string> cells;
    if (!rest.empty()) {
      std::size_t start = 0;
      while (true) {
        std::size_t comma = rest.find(',', start);
        cells.push_back(rest.substr(start, comma == std::string::npos ? comma : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
    if (cells.size() != cols)
      throw ParseError(ln.number, "row has " + std::to_string(cells.size()) + " cells, expected " +
                                      std::to_string(cols));
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = parse_element(ctx, cells[j], ln.number);
  }
  Cursor::Line fin = cur.take();
  if (fin.text != "end") throw ParseError(fin.number, "expected 'end' after matrix rows");
  return m;
}

struct NameRegistry {
  std::set<std::string> used;
  void claim(const std::string& name, std::size_t line) {
    if (!is_identifier(name)) throw ParseError(line, "bad entity name '" + name + "'");
    if (!used.insert(name).second)
      throw ParseError(line, "duplicate entity name '" + name + "'");
  }
};

template <class R>
struct poly_base_field;
template <class F>
struct poly_base_field<Poly<F>> {
  using type = F;
};

template <class R>
Mask parse_subset(const std::string& tok, const DirectionSet& dirs, std::size_t line,
                  const Cube<R>*) {
  if (tok.size() < 2 || tok.front() != '{' || tok.back() != '}')
    throw ParseError(line, "expected a direction subset like {dx,dy}, got '" + tok + "'");
  Mask m = 0;
  std::string inner = tok.substr(1, tok.size() - 2);
  if (inner.empty()) return m;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = inner.find(',', start);
    std::string lab = inner.substr(start, comma == std::string::npos ? comma : comma - start);
    bool found = false;
    for (std::size_t i = 0; i < dirs.size(); ++i)
      if (dirs.label(i) == lab) {
        Mask bit = Mask(1) << i;
        if (m & bit) throw ParseError(line, "repeated direction '" + lab + "' in subset");
        m |= bit;
        found = true;
        break;
      }
    if (!found) throw ParseError(line, "unknown direction '" + lab + "' in subset");
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return m;
}

template <class R>
void parse_sequence_block(Cursor& cur, TypedDoc<R>& td, const std::string& name,
                          std::size_t header_line) {
  if constexpr (!RingTraits<R>::is_polynomial) {
    (void)td;
    (void)name;
    throw ParseError(header_line, "sequence entities require a polynomial ring");
  } else {
    SequenceEntity<R> ent;
    while (cur.peek().text != "end") {
      Cursor::Line ln = cur.take();
      std::size_t sp = ln.text.find_first_of(" \t");
      std::string label = sp == std::string::npos ? ln.text : ln.text.substr(0, sp);
      if (!is_identifier(label)) throw ParseError(ln.number, "bad direction label '" + label + "'");
      if (sp == std::string::npos) throw ParseError(ln.number, "expected a polynomial after the label");
      ent.labels.push_back(label);
      ent.polys.push_back(parse_element(td.ctx, ln.text.substr(sp + 1), ln.number));
    }
    cur.take();  // end
    if (ent.labels.empty()) throw ParseError(header_line, "sequence '" + name + "' is empty");
    using F = typename poly_base_field<R>::type;
    try {
      RegularSequence<F> check(td.ctx, ent.labels, ent.polys);
    } catch (const std::exception& e) {
      throw ParseError(header_line, "sequence '" + name + "': " + e.what());
    }
    td.sequences.emplace(name, std::move(ent));
  }
}

template <class R>
void parse_cube_block(Cursor& cur, TypedDoc<R>& td, const std::vector<std::string>& toks,
                      std::size_t header_line, NameRegistry& names) {
  const std::string& name = toks[1];
  names.claim(name, header_line);
  if (toks[2] == "typ") {
    if constexpr (!RingTraits<R>::is_polynomial) {
      throw ParseError(header_line, "typ cubes require a polynomial ring");
    } else {
      if (toks.size() < 5) throw ParseError(header_line, "usage: cube NAME typ SEQUENCE e1 e2 ...");
      auto it = td.sequences.find(toks[3]);
      if (it == td.sequences.end())
        throw ParseError(header_line, "unknown sequence '" + toks[3] + "'");
      std::vector<unsigned> exps;
      for (std::size_t i = 4; i < toks.size(); ++i)
        exps.push_back((unsigned)to_size(toks[i], header_line, "exponent"));
      using F = typename poly_base_field<R>::type;
      try {
        RegularSequence<F> seq(td.ctx, it->second.labels, it->second.polys);
        td.cubes.emplace(name, typ_cube(td.ctx, seq, exps));
      } catch (const std::exception& e) {
        throw ParseError(header_line, std::string("cube '") + name + "': " + e.what());
      }
      return;
    }
  }
  if (toks[2] != "dirs") throw ParseError(header_line, "usage: cube NAME dirs l1 l2 ... | cube NAME typ SEQUENCE e1 ...");
  std::vector<std::string> labels(toks.begin() + 3, toks.end());
  DirectionSet dirs(labels);
  const std::size_t n = labels.size();
  const Mask nverts = Mask(1) << n;
  std::vector<std::optional<Matrix<R>>> rels(nverts);
  std::map<std::pair<Mask, std::size_t>, Matrix<R>> bnds;
  while (cur.peek().text != "end") {
    Cursor::Line ln = cur.take();
    std::vector<std::string> t = split_ws(ln.text);
    if (t[0] == "vertex") {
      if (t.size() != 4) throw ParseError(ln.number, "usage: vertex SUBSET gens relcols");
      Mask m = parse_subset<R>(t[1], dirs, ln.number, nullptr);
      std::size_t gens = to_size(t[2], ln.number, "generator count");
      std::size_t relc = to_size(t[3], ln.number, "relation count");
      if (rels[m]) throw ParseError(ln.number, "vertex " + t[1] + " declared twice");
      rels[m] = read_matrix_rows(cur, td.ctx, gens, relc);
    } else if (t[0] == "boundary") {
      if (t.size() != 5) throw ParseError(ln.number, "usage: boundary SUBSET direction rows cols");
      Mask m = parse_subset<R>(t[1], dirs, ln.number, nullptr);
      std::size_t k = n;
      for (std::size_t i = 0; i < n; ++i)
        if (labels[i] == t[2]) k = i;
      if (k == n) throw ParseError(ln.number, "unknown direction '" + t[2] + "'");
      if (!(m & (Mask(1) << k)))
        throw ParseError(ln.number, "direction '" + t[2] + "' is not in subset " + t[1]);
      std::size_t rows = to_size(t[3], ln.number, "row count");
      std::size_t cols = to_size(t[4], ln.number, "column count");
      if (bnds.count({m, k})) throw ParseError(ln.number, "boundary " + t[1] + " " + t[2] + " declared twice");
      bnds.emplace(std::make_pair(m, k), read_matrix_rows(cur, td.ctx, rows, cols));
    } else {
      throw ParseError(ln.number, "expected 'vertex', 'boundary' or 'end' in cube block");
    }
  }
  cur.take();  // end
  for (Mask m = 0; m < nverts; ++m) {
    if (!rels[m])
      throw ParseError(header_line, "cube '" + name + "': vertex for one subset is missing");
    for (std::size_t k = 0; k < n; ++k) {
      if (!(m & (Mask(1) << k))) continue;
      auto it = bnds.find({m, k});
      if (it == bnds.end())
        throw ParseError(header_line, "cube '" + name + "': a boundary block is missing");
      Mask tgt = m & ~(Mask(1) << k);
      if (it->second.rows() != rels[tgt]->rows() || it->second.cols() != rels[m]->rows())
        throw ParseError(header_line, "cube '" + name + "': boundary shape does not match vertex generators");
    }
  }
  try {
    td.cubes.emplace(name, Cube<R>(
                               td.ctx, dirs, [&](Mask m) { return PresentedModule<R>(*rels[m]); },
                               [&](Mask m, std::size_t k) { return bnds.at({m, k}); }));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(header_line, std::string("cube '") + name + "': " + e.what());
  }
}

// comp blocks shared by chainmap, cubemap and double entities
template <class R>
std::map<long, Matrix<R>> read_comp_blocks(Cursor& cur, const RingCtx<R>& ctx,
                                           const ChainComplex<R>& dom,
                                           const ChainComplex<R>& cod) {
  std::map<long, Matrix<R>> comps;
  while (cur.peek().text != "end") {
    Cursor::Line ln = cur.take();
    std::vector<std::string> t = split_ws(ln.text);
    if (t[0] != "comp" || t.size() != 4)
      throw ParseError(ln.number, "expected 'comp DEGREE rows cols'");
    long deg = to_long(t[1], ln.number, "degree");
    std::size_t rows = to_size(t[2], ln.number, "row count");
    std::size_t cols = to_size(t[3], ln.number, "column count");
    if (rows != cod.rank(deg) || cols != dom.rank(deg))
      throw ParseError(ln.number, "component shape disagrees with the declared complexes");
    if (comps.count(deg)) throw ParseError(ln.number, "component declared twice for one degree");
    comps.emplace(deg, read_matrix_rows(cur, ctx, rows, cols));
  }
  cur.take();  // end
  return comps;
}

template <class R>
ChainMap<R> build_chainmap(const RingCtx<R>&, const ChainComplex<R>& dom,
                           const ChainComplex<R>& cod, const std::map<long, Matrix<R>>& comps,
                           std::size_t line, const std::string& what) {
  try {
    return ChainMap<R>(dom, cod, [&](long n) {
      auto it = comps.find(n);
      if (it != comps.end()) return it->second;
      return Matrix<R>(cod.rank(n), dom.rank(n));
    });
  } catch (const std::exception& e) {
    throw ParseError(line, what + ": " + e.what());
  }
}

template <class R>
void parse_entity(Cursor& cur, TypedDoc<R>& td, Document& doc, NameRegistry& names) {
  Cursor::Line header = cur.take();
  std::vector<std::string> toks = split_ws(header.text);
  const std::string& kind = toks[0];

  if (kind == "poly") {
    std::size_t eq = header.text.find('=');
    if (toks.size() < 3 || eq == std::string::npos || toks[2] != "=")
      throw ParseError(header.number, "usage: poly NAME = ELEMENT");
    names.claim(toks[1], header.number);
    td.polys.emplace(toks[1], parse_element(td.ctx, header.text.substr(eq + 1), header.number));
  } else if (kind == "sequence") {
    if (toks.size() != 2) throw ParseError(header.number, "usage: sequence NAME");
    names.claim(toks[1], header.number);
    parse_sequence_block(cur, td, toks[1], header.number);
  } else if (kind == "ideal") {
    if (toks.size() != 2) throw ParseError(header.number, "usage: ideal NAME");
    names.claim(toks[1], header.number);
    std::vector<R> gens;
    while (cur.peek().text != "end")
      gens.push_back(parse_element(td.ctx, cur.take().text, header.number));
    cur.take();
    td.ideals.emplace(toks[1], std::move(gens));
  } else if (kind == "matrix") {
    if (toks.size() != 4) throw ParseError(header.number, "usage: matrix NAME rows cols");
    names.claim(toks[1], header.number);
    std::size_t rows = to_size(toks[2], header.number, "row count");
    std::size_t cols = to_size(toks[3], header.number, "column count");
    td.matrices.emplace(toks[1], read_matrix_rows(cur, td.ctx, rows, cols));
  } else if (kind == "complex") {
    if (toks.size() < 6 || toks[2] != "lo" || toks[4] != "ranks")
      throw ParseError(header.number, "usage: complex NAME lo N ranks r0 r1 ...");
    names.claim(toks[1], header.number);
    long lo = to_long(toks[3], header.number, "bottom degree");
    std::vector<std::size_t> ranks;
    for (std::size_t i = 5; i < toks.size(); ++i)
      ranks.push_back(to_size(toks[i], header.number, "rank"));
    std::vector<Matrix<R>> diffs;
    long expect = lo + 1;
    while (cur.peek().text != "end") {
      Cursor::Line ln = cur.take();
      std::vector<std::string> t = split_ws(ln.text);
      if (t[0] != "diff" || t.size() != 4) throw ParseError(ln.number, "expected 'diff DEGREE rows cols'");
      long deg = to_long(t[1], ln.number, "degree");
      if (deg != expect)
        throw ParseError(ln.number, "differentials must appear in ascending degree order");
      std::size_t rows = to_size(t[2], ln.number, "row count");
      std::size_t cols = to_size(t[3], ln.number, "column count");
      std::size_t i = (std::size_t)(deg - lo);
      if (i >= ranks.size() || rows != ranks[i - 1] || cols != ranks[i])
        throw ParseError(ln.number, "differential shape disagrees with the rank list");
      diffs.push_back(read_matrix_rows(cur, td.ctx, rows, cols));
      ++expect;
    }
    cur.take();
    if (!ranks.empty() && diffs.size() + 1 != ranks.size())
      throw ParseError(header.number, "complex '" + toks[1] + "' is missing differential blocks");
    try {
      td.complexes.emplace(toks[1], ChainComplex<R>(lo, std::move(ranks), std::move(diffs)));
    } catch (const std::exception& e) {
      throw ParseError(header.number, std::string("complex '") + toks[1] + "': " + e.what());
    }
  } else if (kind == "chainmap") {
    if (toks.size() != 4) throw ParseError(header.number, "usage: chainmap NAME DOM COD");
    names.claim(toks[1], header.number);
    auto dom = td.complexes.find(toks[2]);
    auto cod = td.complexes.find(toks[3]);
    if (dom == td.complexes.end()) throw ParseError(header.number, "unknown complex '" + toks[2] + "'");
    if (cod == td.complexes.end()) throw ParseError(header.number, "unknown complex '" + toks[3] + "'");
    auto comps = read_comp_blocks(cur, td.ctx, dom->second, cod->second);
    td.chainmaps.emplace(
        toks[1], ChainMapEntity<R>{toks[2], toks[3],
                                   build_chainmap(td.ctx, dom->second, cod->second, comps,
                                                  header.number, "chainmap '" + toks[1] + "'")});
  } else if (kind == "cube") {
    if (toks.size() < 3) throw ParseError(header.number, "usage: cube NAME dirs ... | cube NAME typ ...");
    parse_cube_block(cur, td, toks, header.number, names);
  } else if (kind == "cubemap") {
    if (toks.size() != 4) throw ParseError(header.number, "usage: cubemap NAME DOM COD");
    names.claim(toks[1], header.number);
    auto dom = td.cubes.find(toks[2]);
    auto cod = td.cubes.find(toks[3]);
    if (dom == td.cubes.end()) throw ParseError(header.number, "unknown cube '" + toks[2] + "'");
    if (cod == td.cubes.end()) throw ParseError(header.number, "unknown cube '" + toks[3] + "'");
    std::map<Mask, Matrix<R>> comps;
    while (cur.peek().text != "end") {
      Cursor::Line ln = cur.take();
      std::vector<std::string> t = split_ws(ln.text);
      if (t[0] != "comp" || t.size() != 4)
        throw ParseError(ln.number, "expected 'comp SUBSET rows cols'");
      Mask m = parse_subset<R>(t[1], dom->second.dirs(), ln.number, nullptr);
      std::size_t rows = to_size(t[2], ln.number, "row count");
      std::size_t cols = to_size(t[3], ln.number, "column count");
      if (rows != cod->second.vertex(m).gens() || cols != dom->second.vertex(m).gens())
        throw ParseError(ln.number, "component shape disagrees with the cubes' vertex generators");
      if (comps.count(m)) throw ParseError(ln.number, "component declared twice for one subset");
      comps.emplace(m, read_matrix_rows(cur, td.ctx, rows, cols));
    }
    cur.take();
    try {
      td.cubemaps.emplace(
          toks[1],
          CubeMapEntity<R>{toks[2], toks[3],
                           CubeMap<R>(td.ctx, dom->second, cod->second, [&](Mask m) {
                             auto it = comps.find(m);
                             if (it != comps.end()) return it->second;
                             return Matrix<R>(cod->second.vertex(m).gens(),
                                              dom->second.vertex(m).gens());
                           })});
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(header.number, std::string("cubemap '") + toks[1] + "': " + e.what());
    }
  } else if (kind == "double") {
    if (toks.size() < 6 || toks[2] != "lo" || toks[4] != "entries")
      throw ParseError(header.number, "usage: double NAME lo N entries X0 X1 ...");
    names.claim(toks[1], header.number);
    long lo = to_long(toks[3], header.number, "bottom degree");
    std::vector<std::string> entry_names(toks.begin() + 5, toks.end());
    std::vector<ChainComplex<R>> entries;
    for (const auto& en : entry_names) {
      auto it = td.complexes.find(en);
      if (it == td.complexes.end()) throw ParseError(header.number, "unknown complex '" + en + "'");
      entries.push_back(it->second);
    }
    std::map<long, std::map<long, Matrix<R>>> outer;
    while (cur.peek().text != "end") {
      Cursor::Line ln = cur.take();
      std::vector<std::string> t = split_ws(ln.text);
      if (t[0] != "outer" || t.size() != 2) throw ParseError(ln.number, "expected 'outer DEGREE'");
      long deg = to_long(t[1], ln.number, "degree");
      if (deg <= lo || deg >= lo + (long)entries.size())
        throw ParseError(ln.number, "outer degree out of range");
      if (outer.count(deg)) throw ParseError(ln.number, "outer block declared twice for one degree");
      outer.emplace(deg, read_comp_blocks(cur, td.ctx, entries[(std::size_t)(deg - lo)],
                                          entries[(std::size_t)(deg - lo - 1)]));
    }
    cur.take();
    std::vector<ChainMap<R>> diffs;
    for (long n = lo + 1; n < lo + (long)entries.size(); ++n) {
      static const std::map<long, Matrix<R>> none;
      auto it = outer.find(n);
      diffs.push_back(build_chainmap(td.ctx, entries[(std::size_t)(n - lo)],
                                     entries[(std::size_t)(n - lo - 1)],
                                     it == outer.end() ? none : it->second, header.number,
                                     "double '" + toks[1] + "' outer " + std::to_string(n)));
    }
    DoubleComplex<R> obj;
    try {
      obj = DoubleComplex<R>(lo, std::move(entries), std::move(diffs));
    } catch (const std::exception& e) {
      throw ParseError(header.number, std::string("double '") + toks[1] + "': " + e.what());
    }
    if (obj.is_empty() || obj.lo() != lo || obj.hi() != lo + (long)entry_names.size() - 1)
      throw ParseError(header.number,
                       "double '" + toks[1] + "': end entries must have nonzero total rank");
    td.doubles.emplace(toks[1], DoubleEntity<R>{std::move(entry_names), std::move(obj)});
  } else if (kind == "suite") {
    if (toks.size() != 2) throw ParseError(header.number, "usage: suite NAME");
    names.claim(toks[1], header.number);
    SuiteConfig sc;
    bool have_criteria = false;
    while (cur.peek().text != "end") {
      Cursor::Line ln = cur.take();
      std::vector<std::string> t = split_ws(ln.text);
      if (t[0] == "criteria") {
        if (have_criteria) throw ParseError(ln.number, "criteria declared twice");
        have_criteria = true;
        if (t.size() < 2) throw ParseError(ln.number, "criteria line needs at least one name");
        sc.criteria.assign(t.begin() + 1, t.end());
        if (sc.criteria.size() == 1 && sc.criteria[0] == "all") {
          // keep the shorthand
        } else {
          for (const auto& c : sc.criteria)
            if (!is_suite_name(c)) throw ParseError(ln.number, "unknown criterion '" + c + "'");
          std::sort(sc.criteria.begin(), sc.criteria.end());
          sc.criteria.erase(std::unique(sc.criteria.begin(), sc.criteria.end()),
                            sc.criteria.end());
        }
      } else if (t[0] == "count" && t.size() == 2) {
        if (sc.count) throw ParseError(ln.number, "count declared twice");
        sc.count = to_size(t[1], ln.number, "count");
      } else if (t[0] == "seed" && t.size() == 2) {
        if (sc.seed) throw ParseError(ln.number, "seed declared twice");
        sc.seed = to_u64(t[1], ln.number, "seed");
      } else if (t[0] == "bound" && t.size() == 2) {
        if (sc.bound) throw ParseError(ln.number, "bound declared twice");
        sc.bound = (unsigned)to_size(t[1], ln.number, "bound");
      } else {
        throw ParseError(ln.number, "expected 'criteria', 'count', 'seed', 'bound' or 'end'");
      }
    }
    cur.take();
    doc.suites.emplace(toks[1], std::move(sc));
  } else {
    throw ParseError(header.number, "unknown entity kind '" + kind + "'");
  }
}

template <class R>
void serialize_typed(std::vector<std::string>& out, const TypedDoc<R>& td) {
  const RingCtx<R>& ctx = td.ctx;
  for (const auto& [name, p] : td.polys) {
    out.push_back("");
    out.push_back("poly " + name + " = " + ctx.print_scalar(p));
  }
  for (const auto& [name, s] : td.sequences) {
    out.push_back("");
    out.push_back("sequence " + name);
    for (std::size_t i = 0; i < s.labels.size(); ++i)
      out.push_back("  " + s.labels[i] + " " + ctx.print_scalar(s.polys[i]));
    out.push_back("end");
  }
  for (const auto& [name, gens] : td.ideals) {
    out.push_back("");
    out.push_back("ideal " + name);
    for (const auto& g : gens) out.push_back("  " + ctx.print_scalar(g));
    out.push_back("end");
  }
  for (const auto& [name, m] : td.matrices) {
    out.push_back("");
    out.push_back("matrix " + name + " " + std::to_string(m.rows()) + " " +
                  std::to_string(m.cols()));
    write_matrix_rows(out, ctx, m, "");
  }
  for (const auto& [name, x] : td.complexes) {
    out.push_back("");
    write_complex_lines(out, ctx, x, "complex " + name, "");
  }
  for (const auto& [name, e] : td.chainmaps) {
    out.push_back("");
    out.push_back("chainmap " + name + " " + e.dom + " " + e.cod);
    write_chainmap_comps(out, ctx, e.map, "  ");
    out.push_back("end");
  }
  for (const auto& [name, x] : td.cubes) {
    out.push_back("");
    write_cube_lines(out, ctx, x, "cube " + name, "");
  }
  for (const auto& [name, e] : td.cubemaps) {
    out.push_back("");
    out.push_back("cubemap " + name + " " + e.dom + " " + e.cod);
    for (Mask m = 0; m < e.map.dom().nverts(); ++m) {
      Matrix<R> c = e.map.vertex_map(m).f;
      out.push_back("  comp " + e.map.dom().subset_name(m) + " " + std::to_string(c.rows()) +
                    " " + std::to_string(c.cols()));
      write_matrix_rows(out, ctx, c, "  ");
    }
    out.push_back("end");
  }
  for (const auto& [name, e] : td.doubles) {
    out.push_back("");
    std::string hdr = "double " + name + " lo " + std::to_string(e.object.lo()) + " entries";
    for (const auto& en : e.entry_names) hdr += " " + en;
    out.push_back(std::move(hdr));
    for (long n = e.object.lo() + 1; n <= e.object.hi(); ++n) {
      out.push_back("  outer " + std::to_string(n));
      write_chainmap_comps(out, ctx, e.object.outer_diff(n), "    ");
      out.push_back("  end");
    }
    out.push_back("end");
  }
}

}  // namespace

Document parse_document_text(const std::string& text) {
  Cursor cur(text);
  Cursor::Line hdr = cur.take();
  if (hdr.text != "koszulkit-doc 1")
    throw ParseError(hdr.number, "expected the header 'koszulkit-doc 1'");
  Cursor::Line ringln = cur.take();
  std::vector<std::string> rt = split_ws(ringln.text);
  if (rt.empty() || rt[0] != "ring") throw ParseError(ringln.number, "expected a 'ring' line");
  Document doc;
  doc.ring = parse_ring_line(rt, ringln.number);
  with_ring(doc.ring, [&](auto ctx) {
    using R = std::decay_t<decltype(scalar_from_long(ctx, 0))>;
    TypedDoc<R> td;
    td.ctx = ctx;
    NameRegistry names;
    while (!cur.done()) parse_entity(cur, td, doc, names);
    doc.typed = std::move(td);
  });
  return doc;
}

Document parse_document_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read document '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_document_text(ss.str());
}

std::string serialize_document(const Document& doc) {
  std::vector<std::string> out;
  out.push_back("koszulkit-doc 1");
  out.push_back("ring " + doc.ring.to_string());
  doc.visit([&](const auto& td) { serialize_typed(out, td); });
  for (const auto& [name, sc] : doc.suites) {
    out.push_back("");
    out.push_back("suite " + name);
    out.push_back("  criteria " + docdetail::join(sc.criteria, " "));
    if (sc.count) out.push_back("  count " + std::to_string(*sc.count));
    if (sc.seed) out.push_back("  seed " + std::to_string(*sc.seed));
    if (sc.bound) out.push_back("  bound " + std::to_string(*sc.bound));
    out.push_back("end");
  }
  std::string s;
  for (const auto& l : out) {
    s += l;
    s += '\n';
  }
  return s;
}

std::string document_digest(const Document& doc) {
  return hex64(fnv1a64(serialize_document(doc)));
}

}  // namespace koszulkit
