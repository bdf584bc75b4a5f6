#include "koszulkit/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "koszulkit/document.hpp"
#include "koszulkit/suite.hpp"

namespace koszulkit {

namespace {

struct CliArgs {
  std::string doc_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t count = 0;
  bool count_given = false;
  unsigned bound = 16;
  bool bound_given = false;
  std::string out_path;
  std::string format = "text";
  std::string mutate;
};

template <class Fn>
void guarded(Report& rep, const std::string& label, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    rep.add(label, Outcome::error, e.what());
  }
}

Outcome verdict_outcome(Verdict v) {
  switch (v) {
    case Verdict::pass: return Outcome::pass;
    case Verdict::fail: return Outcome::fail;
    case Verdict::inconclusive: return Outcome::inconclusive;
  }
  return Outcome::error;
}

// The unique declared sequence whose labels cover the cube's directions.
template <class R>
const SequenceEntity<R>& sequence_for(const TypedDoc<R>& td, const Cube<R>& x,
                                      const std::string& cube_name) {
  const SequenceEntity<R>* found = nullptr;
  for (const auto& [name, ent] : td.sequences) {
    bool covers = true;
    for (const auto& l : x.dirs().labels())
      if (std::find(ent.labels.begin(), ent.labels.end(), l) == ent.labels.end()) covers = false;
    if (!covers) continue;
    if (found)
      throw std::runtime_error("multiple sequences cover the directions of cube " + cube_name);
    found = &ent;
  }
  if (!found)
    throw std::runtime_error("no declared sequence covers the directions of cube " + cube_name);
  return *found;
}

template <class R>
void homology_table(Report& rep, const RingCtx<R>& ctx, const ChainComplex<R>& x,
                    const std::string& head) {
  rep.payload.push_back("homology " + head);
  if (!x.is_empty())
    for (long n = x.lo(); n <= x.hi(); ++n) {
      PresentedModule<R> h = homology(ctx, x, n);
      rep.payload.push_back("  h " + std::to_string(n) + " gens " + std::to_string(h.gens()) +
                            " rels " + std::to_string(h.rel.cols()) + " trivial " +
                            (is_zero_module(ctx, h) ? "yes" : "no"));
    }
  rep.payload.push_back("end");
}

template <class R>
void write_double_block(std::vector<std::string>& out, const RingCtx<R>& ctx,
                        const DoubleComplex<R>& z, const std::string& head,
                        const std::string& indent) {
  if (z.is_empty()) {
    out.push_back(indent + head + " entries 0");
    out.push_back(indent + "end");
    return;
  }
  out.push_back(indent + head + " lo " + std::to_string(z.lo()) + " entries " +
                std::to_string(z.hi() - z.lo() + 1));
  for (long n = z.lo(); n <= z.hi(); ++n)
    write_complex_lines(out, ctx, z.entry(n), "entry " + std::to_string(n), indent + "  ");
  for (long n = z.lo() + 1; n <= z.hi(); ++n) {
    out.push_back(indent + "  outer " + std::to_string(n));
    write_chainmap_comps(out, ctx, z.outer_diff(n), indent + "    ");
    out.push_back(indent + "  end");
  }
  out.push_back(indent + "end");
}

template <class R>
void write_doublemap_block(std::vector<std::string>& out, const RingCtx<R>& ctx,
                           const DoubleComplexMap<R>& f, const std::string& head,
                           const std::string& indent) {
  out.push_back(indent + head);
  const DoubleComplex<R>& d = f.dom();
  const DoubleComplex<R>& c = f.cod();
  if (!d.is_empty() && !c.is_empty()) {
    long lo = std::max(d.lo(), c.lo());
    long hi = std::min(d.hi(), c.hi());
    for (long n = lo; n <= hi; ++n) {
      out.push_back(indent + "  outer " + std::to_string(n));
      write_chainmap_comps(out, ctx, f.comp(n), indent + "    ");
      out.push_back(indent + "  end");
    }
  }
  out.push_back(indent + "end");
}

template <class R>
void write_cubemap_comps(std::vector<std::string>& out, const RingCtx<R>& ctx,
                         const CubeMap<R>& f, const std::string& indent) {
  for (Mask m = 0; m < f.dom().nverts(); ++m) {
    Matrix<R> c = f.vertex_map(m).f;
    out.push_back(indent + "comp " + f.dom().subset_name(m) + " " + std::to_string(c.rows()) +
                  " " + std::to_string(c.cols()));
    write_matrix_rows(out, ctx, c, indent);
  }
}

void cmd_check_koszul(Report& rep, const Document& doc, const CliArgs& a) {
  doc.visit([&](const auto& td) {
    using R = std::decay_t<decltype(scalar_from_long(td.ctx, 0))>;
    if constexpr (RingTraits<R>::is_polynomial) {
      if (td.cubes.empty()) {
        rep.add("check-koszul", Outcome::error, "document declares no cube");
        return;
      }
      for (const auto& [name, cube] : td.cubes)
        guarded(rep, name, [&, &name = name, &cube = cube] {
          const auto& ent = sequence_for(td, cube, name);
          RegularSequence fs(td.ctx, ent.labels, ent.polys);
          KoszulCheck kc = is_koszul_cube(td.ctx, cube, fs, a.bound);
          rep.add(name, verdict_outcome(kc.verdict), kc.detail);
        });
    } else {
      rep.add("check-koszul", Outcome::error, "requires a polynomial coefficient ring");
    }
  });
}

void cmd_check_admissible(Report& rep, const Document& doc, const CliArgs&) {
  doc.visit([&](const auto& td) {
    if (td.cubes.empty()) {
      rep.add("check-admissible", Outcome::error, "document declares no cube");
      return;
    }
    for (const auto& [name, cube] : td.cubes)
      guarded(rep, name, [&, &name = name, &cube = cube] {
        bool ok = is_admissible(td.ctx, cube);
        rep.add(name, ok ? Outcome::pass : Outcome::fail,
                ok ? "" : "some boundary fails injectivity or support");
      });
  });
}

void cmd_tot(Report& rep, const Document& doc, const CliArgs&) {
  doc.visit([&](const auto& td) {
    using R = std::decay_t<decltype(scalar_from_long(td.ctx, 0))>;
    if (td.cubes.empty()) {
      rep.add("tot", Outcome::error, "document declares no cube");
      return;
    }
    for (const auto& [name, cube] : td.cubes)
      guarded(rep, name, [&, &name = name, &cube = cube] {
        ChainComplex<R> t = totalize(cube);
        write_complex_lines(rep.payload, td.ctx, t, "complex " + name + ".tot", "");
        homology_table(rep, td.ctx, t, name + ".tot");
        rep.add(name, Outcome::pass,
                t.is_empty() ? "empty total complex"
                             : "degrees " + std::to_string(t.lo()) + ".." +
                                   std::to_string(t.hi()));
      });
  });
}

void cmd_homology(Report& rep, const Document& doc, const CliArgs&) {
  doc.visit([&](const auto& td) {
    if (td.complexes.empty()) {
      rep.add("homology", Outcome::error, "document declares no complex");
      return;
    }
    for (const auto& [name, x] : td.complexes)
      guarded(rep, name, [&, &name = name, &x = x] {
        homology_table(rep, td.ctx, x, name);
        rep.add(name, Outcome::pass);
      });
  });
}

void cmd_tq(Report& rep, const Document& doc, const CliArgs&) {
  doc.visit([&](const auto& td) {
    if (td.cubemaps.empty()) {
      rep.add("tq", Outcome::error, "document declares no cubemap");
      return;
    }
    for (const auto& [name, ent] : td.cubemaps)
      guarded(rep, name, [&, &name = name, &ent = ent] {
        bool ok = is_total_quasi_iso(td.ctx, ent.map);
        rep.add(name, ok ? Outcome::pass : Outcome::fail,
                ok ? "" : "induced map on iterated degree-zero homology is not invertible");
      });
  });
}

void cmd_zigzag(Report& rep, const Document& doc, const CliArgs&) {
  doc.visit([&](const auto& td) {
    using R = std::decay_t<decltype(scalar_from_long(td.ctx, 0))>;
    if (td.doubles.empty()) {
      rep.add("zigzag", Outcome::error, "document declares no double complex");
      return;
    }
    for (const auto& [name, ent] : td.doubles)
      guarded(rep, name, [&, &name = name, &ent = ent] {
        ZigzagCertificate<R> cert = zigzag_to_tot(td.ctx, ent.object);
        CertificateCheck chk = verify_certificate(td.ctx, cert);
        rep.payload.push_back("zigzag " + name + " shift " + std::to_string(cert.shift_k) +
                              " steps " + std::to_string(cert.steps.size()));
        write_double_block(rep.payload, td.ctx, cert.start, "start", "  ");
        for (std::size_t i = 0; i < cert.steps.size(); ++i) {
          const auto& s = cert.steps[i];
          rep.payload.push_back(
              "  step " + std::to_string(i) + " " +
              (s.dir == StepDir::forward ? "forward" : "backward") + " " + step_tag_name(s.tag));
          write_double_block(rep.payload, td.ctx, s.before, "before", "    ");
          write_doublemap_block(rep.payload, td.ctx, s.map, "map", "    ");
          write_double_block(rep.payload, td.ctx, s.after, "after", "    ");
        }
        rep.payload.push_back("end");
        if (chk.pass)
          rep.add(name, Outcome::pass,
                  std::to_string(cert.steps.size()) + " steps, shift " +
                      std::to_string(cert.shift_k));
        else
          rep.add(name, Outcome::fail,
                  "step " + std::to_string(chk.failed_step) + ": " + chk.reason);
      });
  });
}

void cmd_wgp(Report& rep, const Document& doc, const CliArgs& a) {
  doc.visit([&](const auto& td) {
    using R = std::decay_t<decltype(scalar_from_long(td.ctx, 0))>;
    if constexpr (RingTraits<R>::is_polynomial) {
      if (td.cubes.empty()) {
        rep.add("wgp", Outcome::error, "document declares no cube");
        return;
      }
      for (const auto& [name, cube] : td.cubes)
        guarded(rep, name, [&, &name = name, &cube = cube] {
          const auto& ent = sequence_for(td, cube, name);
          RegularSequence fs(td.ctx, ent.labels, ent.polys);
          WgpReport w = wgp_check(td.ctx, cube, fs, a.bound);
          std::string detail = std::string("chain-map ") + (w.chain_map_ok ? "ok" : "bad") +
                               ", higher-vanishing " + (w.higher_vanish ? "ok" : "bad") +
                               ", h0 " + (w.h0_iso ? "iso" : "not-iso");
          if (w.koszul == Verdict::inconclusive)
            rep.add(name, Outcome::inconclusive, "koszul check exhausted its bound");
          else
            rep.add(name, w.pass ? Outcome::pass : Outcome::fail, detail);
        });
    } else {
      rep.add("wgp", Outcome::error, "requires a polynomial coefficient ring");
    }
  });
}

void cmd_quasi_split(Report& rep, const Document& doc, const CliArgs&) {
  doc.visit([&](const auto& td) {
    using R = std::decay_t<decltype(scalar_from_long(td.ctx, 0))>;
    if (td.cubes.empty()) {
      rep.add("quasi-split", Outcome::error, "document declares no cube");
      return;
    }
    for (const auto& [name, cube] : td.cubes)
      guarded(rep, name, [&, &name = name, &cube = cube] {
        QuasiSplitWitness<R> w = quasi_split_witness(td.ctx, cube);
        rep.payload.push_back("quasi-split " + name);
        write_cube_lines(rep.payload, td.ctx, w.r, "kernel", "  ");
        write_cube_lines(rep.payload, td.ctx, w.s, "quotient", "  ");
        rep.payload.push_back("  incl");
        write_cubemap_comps(rep.payload, td.ctx, w.incl, "    ");
        rep.payload.push_back("  end");
        rep.payload.push_back("  quot");
        write_cubemap_comps(rep.payload, td.ctx, w.quot, "    ");
        rep.payload.push_back("  end");
        rep.payload.push_back("end");
        rep.add(name, w.pass ? Outcome::pass : Outcome::fail, w.detail);
      });
  });
}

void cmd_gb(Report& rep, const Document& doc, const CliArgs&) {
  doc.visit([&](const auto& td) {
    using R = std::decay_t<decltype(scalar_from_long(td.ctx, 0))>;
    if constexpr (RingTraits<R>::is_polynomial) {
      if (td.ideals.empty()) {
        rep.add("gb", Outcome::error, "document declares no ideal");
        return;
      }
      for (const auto& [name, gens] : td.ideals)
        guarded(rep, name, [&, &name = name, &gens = gens] {
          Matrix<R> gm(1, gens.size());
          for (std::size_t j = 0; j < gens.size(); ++j) gm.at(0, j) = gens[j];
          ModuleBasis basis(gm, td.ctx.order);
          rep.payload.push_back("gb " + name + " size " + std::to_string(basis.size()));
          for (std::size_t j = 0; j < basis.size(); ++j)
            rep.payload.push_back("  g" + std::to_string(j) + " = " +
                                  td.ctx.print_scalar(basis.element(j)[0]));
          rep.payload.push_back("end");
          rep.add(name, Outcome::pass, std::to_string(basis.size()) + " basis elements");
          for (const auto& [pname, p] : td.polys) {
            bool in = basis.contains({p});
            rep.add(name + ":" + pname, in ? Outcome::pass : Outcome::fail,
                    in ? "member" : "not a member");
          }
        });
    } else {
      rep.add("gb", Outcome::error, "requires a polynomial coefficient ring");
    }
  });
}

void cmd_snf(Report& rep, const Document& doc, const CliArgs&) {
  doc.visit([&](const auto& td) {
    using R = std::decay_t<decltype(scalar_from_long(td.ctx, 0))>;
    constexpr bool integer_ring = std::is_same_v<R, Int>;
    if constexpr (integer_ring || RingTraits<R>::is_polynomial) {
      if constexpr (RingTraits<R>::is_polynomial) {
        if (td.ctx.nvars() != 1) {
          rep.add("snf", Outcome::error,
                  "requires the integers or a univariate polynomial ring");
          return;
        }
      }
      if (td.matrices.empty()) {
        rep.add("snf", Outcome::error, "document declares no matrix");
        return;
      }
      for (const auto& [name, m] : td.matrices)
        guarded(rep, name, [&, &name = name, &m = m] {
          SmithResult<R> s = smith_normal_form(m);
          bool ok = smith_verify(m, s);
          std::string inv = "  invariants";
          for (const auto& v : s.invariants) inv += " " + td.ctx.print_scalar(v);
          rep.payload.push_back("snf " + name);
          rep.payload.push_back(inv);
          for (const char* part : {"u", "d", "v"}) {
            const Matrix<R>& mm = part[0] == 'u' ? s.u : part[0] == 'd' ? s.d : s.v;
            rep.payload.push_back("  " + std::string(part) + " " + std::to_string(mm.rows()) +
                                  " " + std::to_string(mm.cols()));
            write_matrix_rows(rep.payload, td.ctx, mm, "  ");
          }
          rep.payload.push_back("end");
          rep.add(name, ok ? Outcome::pass : Outcome::fail,
                  ok ? std::to_string(s.invariants.size()) + " invariant factors"
                     : "transform identity fails");
        });
    } else {
      rep.add("snf", Outcome::error, "requires the integers or a univariate polynomial ring");
    }
  });
}

void cmd_suite(Report& rep, const Document* doc, const CliArgs& a) {
  SuiteOptions base;
  base.count_given = a.count_given;
  base.count = a.count;
  base.seed = a.seed;
  base.bound = a.bound;
  base.mutate = a.mutate;
  if (a.count_given && a.count == 0) return;  // empty pass report

  auto expand = [](const std::vector<std::string>& criteria) {
    for (const auto& c : criteria)
      if (c == "all") return suite_names();
    return criteria;
  };

  if (doc && !doc->suites.empty()) {
    for (const auto& [cfg_name, cfg] : doc->suites) {
      SuiteOptions opt = base;
      if (!a.count_given && cfg.count) {
        opt.count_given = true;
        opt.count = *cfg.count;
      }
      if (!a.seed_given && cfg.seed) opt.seed = *cfg.seed;
      if (!a.bound_given && cfg.bound) opt.bound = *cfg.bound;
      if (opt.count_given && opt.count == 0) continue;
      for (const auto& name : expand(cfg.criteria))
        guarded(rep, cfg_name + ":" + name, [&, &cfg_name = cfg_name, &name = name] {
          CheckRecord cr = run_suite(name, opt).to_check();
          cr.label = cfg_name + ":" + cr.label;
          rep.checks.push_back(std::move(cr));
        });
    }
  } else {
    for (const auto& name : suite_names())
      guarded(rep, name, [&, &name = name] { rep.checks.push_back(run_suite(name, base).to_check()); });
  }
}

}  // namespace

int run_cli(int argc, char** argv) {
  auto t0 = std::chrono::steady_clock::now();
  CLI::App app{"exact calculus of Koszul cubes, chain complexes, and certificates"};
  app.require_subcommand(1);
  CliArgs a;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"check-koszul", "decide whether each declared cube is a Koszul cube"},
      {"check-admissible", "check boundary injectivity and support for each cube"},
      {"tot", "totalize each cube and print its homology table"},
      {"homology", "print the homology table of each declared complex"},
      {"tq", "test each cube map for total quasi-isomorphism"},
      {"zigzag", "build and verify the zig-zag certificate of each double complex"},
      {"wgp", "check the weak geometric presentation property for each cube"},
      {"quasi-split", "produce and verify the quasi-split kernel witness for each cube"},
      {"gb", "print module bases of declared ideals and test declared polynomials"},
      {"snf", "diagonalize each declared matrix and verify the transforms"},
      {"suite", "run the named property suites"},
  };
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--doc", a.doc_path, "input document file");
    sub->add_option("--seed", a.seed, "base seed for randomized runs");
    sub->add_option("--count", a.count, "sample count override");
    sub->add_option("--bound", a.bound, "search bound for power checks");
    sub->add_option("--out", a.out_path, "write the report to this file");
    sub->add_option("--format", a.format, "report format")
        ->check(CLI::IsMember({"text", "structured"}));
    if (name == "suite") sub->add_option("--mutate", a.mutate)->group("");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  CLI::App* sub = app.get_subcommands().front();
  a.seed_given = sub->count("--seed") > 0;
  a.count_given = sub->count("--count") > 0;
  a.bound_given = sub->count("--bound") > 0;
  const std::string cmd = sub->get_name();

  std::optional<Document> doc;
  if (!a.doc_path.empty()) {
    try {
      doc = parse_document_file(a.doc_path);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }

  Report rep;
  rep.command = cmd;
  rep.seed = a.seed;
  rep.digest = doc ? document_digest(*doc) : "-";

  if (cmd == "suite") {
    cmd_suite(rep, doc ? &*doc : nullptr, a);
  } else {
    if (!doc) {
      std::cerr << "error: " << cmd << " requires --doc\n";
      return 2;
    }
    if (cmd == "check-koszul") cmd_check_koszul(rep, *doc, a);
    else if (cmd == "check-admissible") cmd_check_admissible(rep, *doc, a);
    else if (cmd == "tot") cmd_tot(rep, *doc, a);
    else if (cmd == "homology") cmd_homology(rep, *doc, a);
    else if (cmd == "tq") cmd_tq(rep, *doc, a);
    else if (cmd == "zigzag") cmd_zigzag(rep, *doc, a);
    else if (cmd == "wgp") cmd_wgp(rep, *doc, a);
    else if (cmd == "quasi-split") cmd_quasi_split(rep, *doc, a);
    else if (cmd == "gb") cmd_gb(rep, *doc, a);
    else if (cmd == "snf") cmd_snf(rep, *doc, a);
  }

  std::string text = a.format == "structured" ? rep.to_structured() : rep.to_text();
  if (!a.out_path.empty()) {
    std::ofstream f(a.out_path, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write " << a.out_path << "\n";
      return 2;
    }
    f << text;
  } else {
    std::cout << text;
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0).count();
  std::cerr << "elapsed " << ms << " ms\n";
  return outcome_exit_code(rep.outcome());
}

}  // namespace koszulkit
