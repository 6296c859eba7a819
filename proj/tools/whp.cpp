// Command-line front end. Uses only the C interface of libwhp.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "whp/whp.h"

using json = nlohmann::json;

namespace {

enum Exit { kEquivalent = 0, kNegative = 1, kError = 2, kInconclusive = 3 };

/// Thrown for any failure reported by the library or the environment.
struct Failure {
  std::string message;
};

void check(whp_status s) {
  if (s != WHP_OK) throw Failure{std::string(whp_status_name(s)) + ": " + whp_last_error()};
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using Group = std::unique_ptr<whp_group, Deleter<whp_group, whp_group_destroy>>;
using Tuple = std::unique_ptr<whp_tuple, Deleter<whp_tuple, whp_tuple_destroy>>;
using Auto = std::unique_ptr<whp_auto, Deleter<whp_auto, whp_auto_destroy>>;
using Result = std::unique_ptr<whp_result, Deleter<whp_result, whp_result_destroy>>;
using QHResult = std::unique_ptr<whp_qh_result, Deleter<whp_qh_result, whp_qh_result_destroy>>;

std::string take(char* s) {
  std::string out = s ? s : "";
  whp_string_free(s);
  return out;
}

Group free_group(int rank) {
  whp_group* g = nullptr;
  check(whp_group_new_free(rank, &g));
  return Group(g);
}

Group load_group(const std::string& path) {
  whp_group* g = nullptr;
  check(whp_group_load(path.c_str(), &g));
  return Group(g);
}

Tuple load_tuple(const whp_group* g, const std::string& path) {
  whp_tuple* t = nullptr;
  check(whp_tuple_load(g, path.c_str(), &t));
  return Tuple(t);
}

Auto load_auto(const whp_group* g, const std::string& path) {
  whp_auto* a = nullptr;
  check(whp_auto_load(g, path.c_str(), &a));
  return Auto(a);
}

struct Common {
  bool json = false;
  int threads = 1;
  std::optional<long> bound;
};

/// --bound wins over WHP_DEFAULT_BOUND; otherwise library defaults.
std::pair<long, std::string> resolve_bound(const Common& c) {
  if (c.bound) return {*c.bound, "flag"};
  if (const char* env = std::getenv("WHP_DEFAULT_BOUND"); env && *env) {
    char* end = nullptr;
    long b = std::strtol(env, &end, 10);
    if (*end != '\0' || b < 0) throw Failure{"WHP_DEFAULT_BOUND must be a nonnegative integer"};
    return {b, "environment"};
  }
  return {-1, "default"};
}

whp_options options(const Common& c, long bound) {
  whp_options o;
  whp_options_init(&o);
  o.threads = c.threads;
  o.bound = bound;
  return o;
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void emit(const Common& c, json report, Clock::time_point start, const std::string& text) {
  if (c.json) {
    report["timing_ms"] = elapsed_ms(start);
    std::cout << report.dump(2) << '\n';
  } else {
    std::cout << text;
  }
}

int exit_for(whp_verdict v) {
  switch (v) {
    case WHP_EQUIVALENT: return kEquivalent;
    case WHP_INEQUIVALENT: return kNegative;
    case WHP_INCONCLUSIVE: return kInconclusive;
  }
  return kError;
}

/// Prints a decision, writes the witness if asked, returns the exit code.
int finish(const Common& c, const std::string& command, const whp_result* r, const std::string& witness_path,
           const std::pair<long, std::string>& bound, Clock::time_point start) {
  json report = json::parse(take([&] {
    char* s = nullptr;
    check(whp_result_json(r, &s));
    return s;
  }()));
  report["command"] = command;
  report["bound_source"] = bound.second;
  const whp_auto* w = whp_result_witness(r);
  report["witness"] = nullptr;
  if (w && !witness_path.empty()) {
    check(whp_auto_save(w, witness_path.c_str()));
    report["witness"] = witness_path;
  }
  std::string text = std::string(whp_verdict_name(whp_result_verdict(r))) + "\n";
  if (*whp_result_note(r)) text += std::string("note: ") + whp_result_note(r) + "\n";
  if (w && !witness_path.empty()) text += "witness: " + witness_path + "\n";
  emit(c, report, start, text);
  return exit_for(whp_result_verdict(r));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orbit decisions for tuples in free groups and graphs of groups.\n"
               "Exit codes: 0 equivalent/success, 1 decisive negative, 2 error, 3 inconclusive.\n"
               "WHP_DEFAULT_BOUND sets the search bound when --bound is absent.",
               "whp"};
  app.fallthrough();
  app.require_subcommand(1);
  Common common;
  app.add_flag("--json", common.json, "Print a JSON report (decision, witness path, bounds used, timing)");
  app.add_option("--threads", common.threads, "Worker threads for library searches")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();

  std::string from, to, witness, group_path, auto_path, word, query, prefix;
  std::vector<std::string> coset_reps;
  int rank = 0, radius = 0, genus = 0, boundary = 1;
  auto add_bound = [&](CLI::App* sub, const std::string& meaning) {
    sub->add_option_function<long>(
           "--bound", [&](long b) { common.bound = b; }, "Search bound: " + meaning)
        ->check(CLI::NonNegativeNumber);
  };

  auto* free_cmd = app.add_subcommand("free", "Whitehead orbit decision for tuples in a free group");
  free_cmd->add_option("--rank", rank, "Rank of the free group (generators a, b, c, ...)")->required()->check(CLI::Range(1, 64));
  free_cmd->add_option("--from", from, "Source tuple file")->required();
  free_cmd->add_option("--to", to, "Target tuple file")->required();
  free_cmd->add_option("--witness", witness, "Write the witness automorphism here");
  add_bound(free_cmd, "extra total length for mixed or grouped tuples (default 2)");

  auto* gog_cmd = app.add_subcommand("gog", "Canonical orbit decision over a graph of groups");
  gog_cmd->add_option("--group", group_path, "Group file")->required();
  gog_cmd->add_option("--from", from, "Source tuple file")->required();
  gog_cmd->add_option("--to", to, "Target tuple file")->required();
  gog_cmd->add_option("--coset-reps", coset_reps, "Automorphism files of coset representatives (comma separated)")
      ->delimiter(',');
  gog_cmd->add_option("--witness", witness, "Write the witness automorphism here");
  add_bound(gog_cmd, "surface twist radius and abelian coefficient box (defaults 5 and 3)");

  auto* si_cmd = app.add_subcommand("si", "Combinatorial self-intersection number");
  auto* num_cmd = app.add_subcommand("si-numeric", "Self-intersection number from hyperbolic geometry");
  for (auto* sub : {si_cmd, num_cmd}) {
    sub->add_option("--genus", genus, "Genus")->required()->check(CLI::NonNegativeNumber);
    sub->add_option("--boundary", boundary, "Number of boundary components")->required()->check(CLI::PositiveNumber);
    sub->add_option("--word", word, "Word in a, b (genus 1), a1, b1, ... and c1, c2, ...")->required();
  }

  auto* qh_cmd = app.add_subcommand("qh-bound", "Exponent candidates for a surface query file");
  qh_cmd->add_option("query", query, "Query file")->required();
  qh_cmd->add_option("--witness-prefix", prefix, "Witness files are <prefix><i>.auto (default: <query>.cand)");
  add_bound(qh_cmd, "exponent box half-width (default derived from the words)");

  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force orbit search over Whitehead automorphisms");
  oracle_cmd->add_option("--rank", rank, "Rank of the free group")->required()->check(CLI::Range(1, 64));
  oracle_cmd->add_option("--radius", radius, "Maximal product length")->required()->check(CLI::NonNegativeNumber);
  oracle_cmd->add_option("--from", from, "Source tuple file")->required();
  oracle_cmd->add_option("--to", to, "Target tuple file")->required();
  oracle_cmd->add_option("--witness", witness, "Write the witness automorphism here");

  auto* verify_cmd = app.add_subcommand("verify", "Check that an automorphism file maps one tuple to another");
  auto* vg = verify_cmd->add_option("--group", group_path, "Group file");
  auto* vr = verify_cmd->add_option("--rank", rank, "Free group rank instead of a group file")->check(CLI::Range(1, 64));
  vg->excludes(vr);
  verify_cmd->add_option("--auto", auto_path, "Automorphism file")->required();
  verify_cmd->add_option("--from", from, "Source tuple file")->required();
  verify_cmd->add_option("--to", to, "Target tuple file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "whp: " << e.what() << "\n\n" << app.help();
    return kError;
  }

  const auto start = Clock::now();
  try {
    if (*free_cmd || *oracle_cmd) {
      const auto b = resolve_bound(common);
      Group g = free_group(rank);
      Tuple u = load_tuple(g.get(), from), v = load_tuple(g.get(), to);
      const whp_options o = options(common, b.first);
      whp_result* r = nullptr;
      if (*free_cmd) check(whp_decide(g.get(), u.get(), v.get(), nullptr, 0, &o, &r));
      else check(whp_oracle(g.get(), u.get(), v.get(), radius, &o, &r));
      Result res(r);
      return finish(common, *free_cmd ? "free" : "oracle", res.get(), witness, b, start);
    }
    if (*gog_cmd) {
      const auto b = resolve_bound(common);
      Group g = load_group(group_path);
      Tuple u = load_tuple(g.get(), from), v = load_tuple(g.get(), to);
      std::vector<Auto> reps;
      std::vector<const whp_auto*> raw;
      for (const auto& p : coset_reps) {
        reps.push_back(load_auto(g.get(), p));
        raw.push_back(reps.back().get());
      }
      const whp_options o = options(common, b.first);
      whp_result* r = nullptr;
      check(whp_decide(g.get(), u.get(), v.get(), raw.data(), raw.size(), &o, &r));
      Result res(r);
      return finish(common, "gog", res.get(), witness, b, start);
    }
    if (*si_cmd || *num_cmd) {
      long value = 0;
      if (*si_cmd) check(whp_self_intersection(genus, boundary, word.c_str(), &value));
      else check(whp_si_numeric(genus, boundary, word.c_str(), &value));
      json report = {{"command", *si_cmd ? "si" : "si-numeric"},
                     {"genus", genus},
                     {"boundary", boundary},
                     {"word", word},
                     {"value", value}};
      emit(common, report, start, std::to_string(value) + "\n");
      return kEquivalent;
    }
    if (*qh_cmd) {
      const auto b = resolve_bound(common);
      const whp_options o = options(common, b.first);
      whp_qh_result* r = nullptr;
      check(whp_qh_bound_load(query.c_str(), &o, &r));
      QHResult res(r);
      if (prefix.empty()) prefix = query + ".cand";
      json report = json::parse(take([&] {
        char* s = nullptr;
        check(whp_qh_result_json(res.get(), &s));
        return s;
      }()));
      report["command"] = "qh-bound";
      report["bound_source"] = b.second;
      std::string text;
      json files = json::array();
      for (size_t i = 0; i < whp_qh_result_count(res.get()); ++i) {
        long m = 0, n = 0;
        const whp_auto* w = nullptr;
        check(whp_qh_result_candidate(res.get(), i, &m, &n, &w));
        const std::string path = prefix + std::to_string(i + 1) + ".auto";
        check(whp_auto_save(w, path.c_str()));
        files.push_back(path);
        text += std::to_string(m) + " " + std::to_string(n) + " " + path + "\n";
      }
      report["witness"] = files;
      emit(common, report, start, text);
      return kEquivalent;
    }
    if (*verify_cmd) {
      if (group_path.empty() && rank == 0) throw Failure{"verify needs --group or --rank"};
      Group g = group_path.empty() ? free_group(rank) : load_group(group_path);
      Tuple u = load_tuple(g.get(), from), v = load_tuple(g.get(), to);
      Auto a = load_auto(g.get(), auto_path);
      int ok = 0;
      check(whp_verify(g.get(), a.get(), u.get(), v.get(), &ok));
      json report = {{"command", "verify"}, {"decision", ok ? "verified" : "not verified"}, {"auto", auto_path}};
      emit(common, report, start, ok ? "verified\n" : "not verified\n");
      return ok ? kEquivalent : kNegative;
    }
  } catch (const Failure& f) {
    std::cerr << "whp: " << f.message << '\n';
    return kError;
  }
  return kError;
}
