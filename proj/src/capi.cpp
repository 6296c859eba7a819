#include "whp/whp.h"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>

#include "whp/canonical.hpp"
#include "whp/io.hpp"
#include "whp/oracle.hpp"
#include "whp/surface.hpp"
#include "whp/whitehead.hpp"

using json = nlohmann::json;
using namespace whp;

struct whp_group {
  std::optional<Alphabet> free;
  std::shared_ptr<const gog::Splitting> split;
};

struct whp_tuple {
  const whp_group* group = nullptr;
  std::optional<TupleInstance> free;
  std::optional<canon::GTuple> gog;
};

struct whp_auto {
  std::optional<Automorphism> free;
  std::shared_ptr<const gog::Splitting> split;
  std::optional<gog::GAutomorphism> gog;
};

struct whp_result {
  whp_verdict verdict = WHP_INCONCLUSIVE;
  std::string note;
  std::unique_ptr<whp_auto> witness;
  json report;
};

struct whp_qh_result {
  struct Candidate {
    long m = 0, n = 0;
    whp_auto witness;
  };
  std::vector<Candidate> candidates;
  json report;
};

namespace {

thread_local std::string last_error;

/// Signals a caller mistake detected at the C boundary.
struct ArgumentError : Error {
  using Error::Error;
};

whp_status fail(whp_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
whp_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return WHP_OK;
  } catch (const ArgumentError& e) {
    return fail(WHP_ERR_ARGUMENT, e.what());
  } catch (const io::IoError& e) {
    return fail(WHP_ERR_IO, e.what());
  } catch (const ParseError& e) {
    return fail(WHP_ERR_PARSE, e.what());
  } catch (const Error& e) {
    const std::string m = e.what();
    if (m.rfind("internal:", 0) == 0) return fail(WHP_ERR_INTERNAL, m);
    if (m.find("state limit") != std::string::npos || m.find("state cap") != std::string::npos ||
        m.find("too large") != std::string::npos)
      return fail(WHP_ERR_LIMIT, m);
    return fail(WHP_ERR_INVALID, m);
  } catch (const std::bad_alloc&) {
    return fail(WHP_ERR_LIMIT, "out of memory");
  } catch (const std::exception& e) {
    return fail(WHP_ERR_INTERNAL, std::string("internal: ") + e.what());
  }
}

void need(const void* p, const char* what) {
  if (!p) throw ArgumentError(std::string("null ") + what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string label(const char* source) { return source ? source : "<input>"; }

whp_verdict to_c(Verdict v) {
  switch (v) {
    case Verdict::Equivalent: return WHP_EQUIVALENT;
    case Verdict::Inequivalent: return WHP_INEQUIVALENT;
    case Verdict::Inconclusive: return WHP_INCONCLUSIVE;
  }
  return WHP_INCONCLUSIVE;
}

void check_pair(const whp_group* g, const whp_tuple* u, const whp_tuple* v) {
  need(g, "group");
  need(u, "tuple");
  need(v, "tuple");
  if (u->group != g || v->group != g) throw ArgumentError("tuple was parsed against a different group");
  if (g->free) {
    try {
      check_compatible(*u->free, *v->free);
    } catch (const Error& e) {
      throw ArgumentError(std::string("incompatible tuples: ") + e.what());
    }
  } else if (u->gog->cyclic != v->gog->cyclic) {
    throw ArgumentError("incompatible tuples: lengths or coordinate kinds differ");
  }
}

std::string verdict_text(whp_verdict v) { return whp_verdict_name(v); }

SurfaceSpec surface(int genus, int boundary) {
  if (genus < 0 || boundary < 1) throw ArgumentError("surface needs genus >= 0 and boundary >= 1");
  return SurfaceSpec::standard(genus, boundary);
}

}  // namespace

extern "C" {

void whp_options_init(whp_options* opt) {
  if (!opt) return;
  opt->threads = 1;
  opt->bound = -1;
}

const char* whp_version(void) { return "1.0.0"; }
const char* whp_last_error(void) { return last_error.c_str(); }

const char* whp_status_name(whp_status s) {
  switch (s) {
    case WHP_OK: return "ok";
    case WHP_ERR_ARGUMENT: return "argument error";
    case WHP_ERR_IO: return "i/o error";
    case WHP_ERR_PARSE: return "parse error";
    case WHP_ERR_INVALID: return "invalid input";
    case WHP_ERR_LIMIT: return "limit exceeded";
    case WHP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* whp_verdict_name(whp_verdict v) {
  switch (v) {
    case WHP_EQUIVALENT: return "equivalent";
    case WHP_INEQUIVALENT: return "inequivalent";
    case WHP_INCONCLUSIVE: return "inconclusive";
  }
  return "unknown";
}

void whp_string_free(char* s) { std::free(s); }

// Groups.

whp_status whp_group_new_free(int rank, whp_group** out) {
  return guarded([&] {
    need(out, "output");
    if (rank < 1 || rank > 64) throw ArgumentError("rank must be between 1 and 64");
    *out = new whp_group{Alphabet::standard(rank), nullptr};
  });
}

whp_status whp_group_parse(const char* text, const char* source, whp_group** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "output");
    auto s = std::make_shared<const gog::Splitting>(io::load_group(text, label(source)));
    *out = new whp_group{std::nullopt, std::move(s)};
  });
}

whp_status whp_group_load(const char* path, whp_group** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "output");
    auto s = std::make_shared<const gog::Splitting>(io::load_group(io::read_file(path), path));
    *out = new whp_group{std::nullopt, std::move(s)};
  });
}

int whp_group_is_free(const whp_group* g) { return g && g->free ? 1 : 0; }

whp_status whp_group_format(const whp_group* g, char** out) {
  return guarded([&] {
    need(g, "group");
    need(out, "output");
    if (g->free) {
      std::string names;
      for (const auto& n : g->free->names()) names += (names.empty() ? "" : ",") + n;
      *out = dup_string("vertex F free gens=" + names + "\n");
    } else {
      *out = dup_string(io::format_group(g->split->graph()));
    }
  });
}

void whp_group_destroy(whp_group* g) { delete g; }

// Tuples.

whp_status whp_tuple_parse(const whp_group* g, const char* text, const char* source, whp_tuple** out) {
  return guarded([&] {
    need(g, "group");
    need(text, "text");
    need(out, "output");
    auto t = std::make_unique<whp_tuple>();
    t->group = g;
    if (g->free) t->free = io::parse_free_tuple(text, *g->free, label(source));
    else t->gog = io::parse_gog_tuple(text, *g->split, label(source));
    *out = t.release();
  });
}

whp_status whp_tuple_load(const whp_group* g, const char* path, whp_tuple** out) {
  std::string text;
  if (whp_status s = guarded([&] {
        need(path, "path");
        text = io::read_file(path);
      }))
    return s;
  return whp_tuple_parse(g, text.c_str(), path, out);
}

size_t whp_tuple_size(const whp_tuple* t) {
  if (!t) return 0;
  return t->free ? t->free->coords.size() : t->gog->size();
}

whp_status whp_tuple_format(const whp_tuple* t, char** out) {
  return guarded([&] {
    need(t, "tuple");
    need(out, "output");
    *out = dup_string(t->free ? io::format_free_tuple(*t->free) : io::format_gog_tuple(*t->group->split, *t->gog));
  });
}

void whp_tuple_destroy(whp_tuple* t) { delete t; }

// Automorphisms.

whp_status whp_auto_parse(const whp_group* g, const char* text, const char* source, whp_auto** out) {
  return guarded([&] {
    need(g, "group");
    need(text, "text");
    need(out, "output");
    auto a = std::make_unique<whp_auto>();
    if (g->free) {
      a->free = io::parse_free_auto(text, *g->free, label(source));
    } else {
      a->split = g->split;
      a->gog = io::parse_gog_auto(text, *g->split, label(source));
    }
    *out = a.release();
  });
}

whp_status whp_auto_load(const whp_group* g, const char* path, whp_auto** out) {
  std::string text;
  if (whp_status s = guarded([&] {
        need(path, "path");
        text = io::read_file(path);
      }))
    return s;
  return whp_auto_parse(g, text.c_str(), path, out);
}

whp_status whp_auto_format(const whp_auto* a, char** out) {
  return guarded([&] {
    need(a, "automorphism");
    need(out, "output");
    *out = dup_string(a->free ? io::format_free_auto(*a->free) : io::format_gog_auto(*a->split, *a->gog));
  });
}

whp_status whp_auto_save(const whp_auto* a, const char* path) {
  return guarded([&] {
    need(a, "automorphism");
    need(path, "path");
    io::write_file(path, a->free ? io::format_free_auto(*a->free) : io::format_gog_auto(*a->split, *a->gog));
  });
}

void whp_auto_destroy(whp_auto* a) { delete a; }

// Decisions.

whp_status whp_decide(const whp_group* g, const whp_tuple* u, const whp_tuple* v, const whp_auto* const* coset_reps,
                      size_t n_reps, const whp_options* opt, whp_result** out) {
  return guarded([&] {
    check_pair(g, u, v);
    need(out, "output");
    if (n_reps) need(coset_reps, "coset representative list");
    whp_options o;
    whp_options_init(&o);
    if (opt) o = *opt;
    if (o.threads < 1) throw ArgumentError("threads must be at least 1");
    auto r = std::make_unique<whp_result>();
    if (g->free) {
      if (n_reps) throw ArgumentError("coset representatives apply to graphs of groups only");
      FreeSearchOptions fo;
      fo.threads = o.threads;
      if (o.bound >= 0) fo.slack = static_cast<int>(o.bound);
      OrbitResult res = equivalent(*u->free, *v->free, fo);
      r->verdict = to_c(res.verdict);
      r->note = res.note;
      if (res.witness) {
        if (!verify_witness(*u->free, *v->free, *res.witness)) throw Error("internal: witness does not verify");
        r->witness = std::make_unique<whp_auto>();
        r->witness->free = res.witness->composed;
        r->report["witness_steps"] = res.witness->steps.size();
      }
      r->report["bounds"] = {{"slack", fo.slack}, {"max_states", fo.max_states}};
      r->report["group"] = "free";
    } else {
      std::vector<gog::GAutomorphism> reps;
      for (size_t i = 0; i < n_reps; ++i) {
        need(coset_reps[i], "coset representative");
        if (coset_reps[i]->split != g->split) throw ArgumentError("coset representative belongs to a different group");
        reps.push_back(*coset_reps[i]->gog);
      }
      canon::OrbitOptions co;
      co.threads = o.threads;
      if (o.bound >= 0) co.qh_radius = static_cast<int>(o.bound), co.abelian_box = o.bound;
      canon::OrbitResult res = canon::canonical_orbit_decide(*g->split, *u->gog, *v->gog, reps, co);
      r->verdict = to_c(res.verdict);
      r->note = res.note;
      if (res.witness) {
        r->witness = std::make_unique<whp_auto>();
        r->witness->split = g->split;
        r->witness->gog = *res.witness;
        r->report["coset_index"] = res.coset_index;
        r->report["twist"] = res.twist;
      }
      r->report["truncated"] = res.truncated;
      r->report["coset_reps"] = reps.empty() ? 1 : reps.size();
      r->report["bounds"] = {{"qh_radius", co.qh_radius}, {"abelian_box", co.abelian_box}};
      r->report["group"] = "graph of groups";
    }
    r->report["decision"] = verdict_text(r->verdict);
    r->report["note"] = r->note;
    *out = r.release();
  });
}

whp_status whp_oracle(const whp_group* g, const whp_tuple* u, const whp_tuple* v, int radius, const whp_options* opt,
                      whp_result** out) {
  return guarded([&] {
    check_pair(g, u, v);
    need(out, "output");
    if (!g->free) throw ArgumentError("the orbit oracle works over free groups only");
    if (radius < 0) throw ArgumentError("radius must be nonnegative");
    oracle::BruteForceOptions bo;
    if (opt) bo.threads = std::max(1, opt->threads);
    std::vector<Automorphism> gens;
    for (const auto& w : enumerate_whitehead_autos(*g->free)) gens.push_back(w.to_automorphism(*g->free));
    auto found = oracle::orbit_bruteforce(gens, *u->free, *v->free, radius, bo);
    auto r = std::make_unique<whp_result>();
    if (found) {
      OrbitWitness w{{}, found->composed, found->conjugators};
      if (!verify_witness(*u->free, *v->free, w)) throw Error("internal: oracle witness does not verify");
      r->verdict = WHP_EQUIVALENT;
      r->note = "orbit path of length " + std::to_string(found->path.size());
      r->witness = std::make_unique<whp_auto>();
      r->witness->free = found->composed;
      r->report["path"] = found->path;
    } else {
      r->verdict = WHP_INCONCLUSIVE;
      r->note = "no orbit path within radius " + std::to_string(radius);
    }
    r->report["generators"] = gens.size();
    r->report["bounds"] = {{"radius", radius}, {"max_states", bo.max_states}};
    r->report["group"] = "free";
    r->report["decision"] = verdict_text(r->verdict);
    r->report["note"] = r->note;
    *out = r.release();
  });
}

whp_status whp_verify(const whp_group* g, const whp_auto* a, const whp_tuple* u, const whp_tuple* v, int* ok) {
  return guarded([&] {
    check_pair(g, u, v);
    need(a, "automorphism");
    need(ok, "output");
    if (g->free) {
      if (!a->free || !(a->free->alphabet() == *g->free)) throw ArgumentError("automorphism belongs to a different group");
      *ok = witness_from_map(*u->free, *v->free, *a->free).has_value();
    } else {
      if (a->split != g->split) throw ArgumentError("automorphism belongs to a different group");
      *ok = canon::verify_witness(*g->split, *a->gog, *u->gog, *v->gog);
    }
  });
}

whp_verdict whp_result_verdict(const whp_result* r) { return r ? r->verdict : WHP_INCONCLUSIVE; }
const char* whp_result_note(const whp_result* r) { return r ? r->note.c_str() : ""; }
const whp_auto* whp_result_witness(const whp_result* r) { return r ? r->witness.get() : nullptr; }

whp_status whp_result_json(const whp_result* r, char** out) {
  return guarded([&] {
    need(r, "result");
    need(out, "output");
    *out = dup_string(r->report.dump());
  });
}

void whp_result_destroy(whp_result* r) { delete r; }

// Surfaces.

whp_status whp_self_intersection(int genus, int boundary, const char* word, long* out) {
  return guarded([&] {
    need(word, "word");
    need(out, "output");
    SurfaceSpec s = surface(genus, boundary);
    *out = self_intersection(s, parse_word(word, s.alphabet));
  });
}

whp_status whp_si_numeric(int genus, int boundary, const char* word, long* out) {
  return guarded([&] {
    need(word, "word");
    need(out, "output");
    SurfaceSpec s = surface(genus, boundary);
    *out = oracle::si_numeric(s, parse_word(word, s.alphabet));
  });
}

whp_status whp_qh_bound(const char* text, const char* source, const whp_options* opt, whp_qh_result** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "output");
    QHExponentQuery q = io::parse_qh_query(text, label(source));
    QHSearchOptions qo;
    if (opt) {
      if (opt->bound >= 0) qo.bound = opt->bound;
      qo.free.threads = std::max(1, opt->threads);
    }
    QHResult res = qh_exponent_candidates(q, qo);
    auto r = std::make_unique<whp_qh_result>();
    json cands = json::array();
    for (const auto& c : res.candidates) {
      if (!verify_candidate(q.surface, {q.u}, {q.v}, q.c, q.d, c)) throw Error("internal: candidate does not verify");
      whp_qh_result::Candidate k{c.m.at(0), c.n.at(0), whp_auto{}};
      k.witness.free = c.witness;
      cands.push_back({{"m", k.m}, {"n", k.n}});
      r->candidates.push_back(std::move(k));
    }
    r->report["candidates"] = cands;
    r->report["bounds"] = {{"exponent_box", res.bound}};
    r->report["points_checked"] = res.points_checked;
    r->report["points_inconclusive"] = res.inconclusive;
    *out = r.release();
  });
}

whp_status whp_qh_bound_load(const char* path, const whp_options* opt, whp_qh_result** out) {
  std::string text;
  if (whp_status s = guarded([&] {
        need(path, "path");
        text = io::read_file(path);
      }))
    return s;
  return whp_qh_bound(text.c_str(), path, opt, out);
}

size_t whp_qh_result_count(const whp_qh_result* r) { return r ? r->candidates.size() : 0; }

whp_status whp_qh_result_candidate(const whp_qh_result* r, size_t i, long* m, long* n, const whp_auto** witness) {
  return guarded([&] {
    need(r, "result");
    if (i >= r->candidates.size()) throw ArgumentError("candidate index out of range");
    if (m) *m = r->candidates[i].m;
    if (n) *n = r->candidates[i].n;
    if (witness) *witness = &r->candidates[i].witness;
  });
}

whp_status whp_qh_result_json(const whp_qh_result* r, char** out) {
  return guarded([&] {
    need(r, "result");
    need(out, "output");
    *out = dup_string(r->report.dump());
  });
}

void whp_qh_result_destroy(whp_qh_result* r) { delete r; }

}  // extern "C"
