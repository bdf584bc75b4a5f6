#pragma once

// Line-oriented document format for rings, ring elements, sequences, ideals,
// matrices, complexes, cubes, maps, double complexes and suite configurations.
//
// Shape: a `koszulkit-doc 1` header, one `ring` line, then named entity
// blocks.  Blocks nest matrix literals as `row a, b, c` lines; subsets of
// direction labels print as `{dx,dy}` in the cube's label order.  Parsing
// reports errors with the source line; entities must be declared before they
// are referenced.  serialize_document emits the canonical form: entities
// grouped by kind, name-sorted, every optional field made explicit, elements
// printed canonically — so equal documents serialize to equal bytes and the
// serialization is a fixed point of parse-then-serialize.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "koszulkit/koszul.hpp"
#include "koszulkit/report.hpp"
#include "koszulkit/suite.hpp"
#include "koszulkit/witness.hpp"

namespace koszulkit {

struct ParseError : std::runtime_error {
  std::size_t line;
  ParseError(std::size_t ln, const std::string& msg)
      : std::runtime_error("line " + std::to_string(ln) + ": " + msg), line(ln) {}
};

struct SuiteConfig {
  std::vector<std::string> criteria{"all"};
  std::optional<std::size_t> count;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> bound;
};

template <class R>
struct SequenceEntity {
  std::vector<std::string> labels;
  std::vector<R> polys;
};

template <class R>
struct ChainMapEntity {
  std::string dom, cod;
  ChainMap<R> map;
};

template <class R>
struct CubeMapEntity {
  std::string dom, cod;
  CubeMap<R> map;
};

template <class R>
struct DoubleEntity {
  std::vector<std::string> entry_names;
  DoubleComplex<R> object;
};

template <class R>
struct TypedDoc {
  RingCtx<R> ctx;
  std::map<std::string, R> polys;
  std::map<std::string, SequenceEntity<R>> sequences;
  std::map<std::string, std::vector<R>> ideals;
  std::map<std::string, Matrix<R>> matrices;
  std::map<std::string, ChainComplex<R>> complexes;
  std::map<std::string, ChainMapEntity<R>> chainmaps;
  std::map<std::string, Cube<R>> cubes;
  std::map<std::string, CubeMapEntity<R>> cubemaps;
  std::map<std::string, DoubleEntity<R>> doubles;
};

struct Document {
  RingDescriptor ring;
  std::variant<TypedDoc<Int>, TypedDoc<Rat>, TypedDoc<Fp>, TypedDoc<PolyQ>, TypedDoc<PolyFp>>
      typed;
  std::map<std::string, SuiteConfig> suites;

  template <class Fn>
  decltype(auto) visit(Fn&& fn) const {
    return std::visit(std::forward<Fn>(fn), typed);
  }
};

Document parse_document_text(const std::string& text);
Document parse_document_file(const std::string& path);
std::string serialize_document(const Document& doc);
std::string document_digest(const Document& doc);

// --- implementation helpers (shared with the report writers) -----------------

namespace docdetail {

std::vector<std::string> split_ws(const std::string& s);
bool is_identifier(const std::string& s);
std::string join(const std::vector<std::string>& parts, const std::string& sep);
std::size_t to_size(const std::string& tok, std::size_t line, const char* what);
long to_long(const std::string& tok, std::size_t line, const char* what);
std::uint64_t to_u64(const std::string& tok, std::size_t line, const char* what);

struct Cursor {
  struct Line {
    std::size_t number;
    std::string text;
  };
  std::vector<Line> lines;
  std::size_t idx = 0;

  explicit Cursor(const std::string& text);
  bool done() const { return idx >= lines.size(); }
  const Line& peek() const;
  Line take();
  [[noreturn]] void fail(const std::string& msg) const;
};

}  // namespace docdetail

// --- canonical writers for engine objects ------------------------------------
//
// These emit the same literal sub-grammar the parser reads (row lines etc.)
// and are reused for inline report payloads such as certificates, which must
// be self-contained.

template <class R>
void write_matrix_rows(std::vector<std::string>& out, const RingCtx<R>& ctx, const Matrix<R>& m,
                       const std::string& indent) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::string line = indent + "  row";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      line += (j == 0 ? " " : ", ") + ctx.print_scalar(m.at(i, j));
    }
    out.push_back(std::move(line));
  }
  out.push_back(indent + "end");
}

template <class R>
void write_complex_lines(std::vector<std::string>& out, const RingCtx<R>& ctx,
                         const ChainComplex<R>& x, const std::string& head,
                         const std::string& indent) {
  std::string hdr = indent + head + " lo " + std::to_string(x.is_empty() ? 0 : x.lo()) + " ranks";
  if (x.is_empty()) {
    hdr += " 0";
    out.push_back(std::move(hdr));
    out.push_back(indent + "end");
    return;
  }
  for (long n = x.lo(); n <= x.hi(); ++n) hdr += " " + std::to_string(x.rank(n));
  out.push_back(std::move(hdr));
  for (long n = x.lo() + 1; n <= x.hi(); ++n) {
    const Matrix<R>& d = x.diff(n);
    out.push_back(indent + "  diff " + std::to_string(n) + " " + std::to_string(d.rows()) + " " +
                  std::to_string(d.cols()));
    write_matrix_rows(out, ctx, d, indent + "  ");
  }
  out.push_back(indent + "end");
}

template <class R>
void write_chainmap_comps(std::vector<std::string>& out, const RingCtx<R>& ctx,
                          const ChainMap<R>& f, const std::string& indent) {
  if (f.dom().is_empty() || f.cod().is_empty()) return;
  long lo = std::max(f.dom().lo(), f.cod().lo());
  long hi = std::min(f.dom().hi(), f.cod().hi());
  for (long n = lo; n <= hi; ++n) {
    Matrix<R> c = f.comp(n);
    out.push_back(indent + "comp " + std::to_string(n) + " " + std::to_string(c.rows()) + " " +
                  std::to_string(c.cols()));
    write_matrix_rows(out, ctx, c, indent);
  }
}

template <class R>
void write_cube_lines(std::vector<std::string>& out, const RingCtx<R>& ctx, const Cube<R>& x,
                      const std::string& head, const std::string& indent) {
  std::string hdr = indent + head + " dirs";
  for (const auto& l : x.dirs().labels()) hdr += " " + l;
  out.push_back(std::move(hdr));
  for (Mask m = 0; m < x.nverts(); ++m) {
    const Matrix<R>& rel = x.vertex(m).rel;
    out.push_back(indent + "  vertex " + x.subset_name(m) + " " + std::to_string(rel.rows()) +
                  " " + std::to_string(rel.cols()));
    write_matrix_rows(out, ctx, rel, indent + "  ");
  }
  for (Mask m = 0; m < x.nverts(); ++m)
    for (std::size_t k = 0; k < x.dirs().size(); ++k) {
      if (!(m & (Mask(1) << k))) continue;
      const Matrix<R>& b = x.boundary_matrix(m, k);
      out.push_back(indent + "  boundary " + x.subset_name(m) + " " + x.dirs().label(k) + " " +
                    std::to_string(b.rows()) + " " + std::to_string(b.cols()));
      write_matrix_rows(out, ctx, b, indent + "  ");
    }
  out.push_back(indent + "end");
}

}  // namespace koszulkit
