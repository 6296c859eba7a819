#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace whp::testing {

struct CliCase {
  std::string name;
  std::string args;      ///< appended to the binary path; paths already absolute
  int exit_code = 0;
  std::string contains;  ///< substring expected in stdout (or stderr for errors)
  std::string env;       ///< shell assignments placed before the command
};

struct CliRun {
  int exit_code = -1;
  std::string out, err;
};

inline std::string quoted(const std::string& s) { return "'" + s + "'"; }

inline CliRun run_cli(const std::string& binary, const CliCase& c, const std::string& scratch) {
  const std::string err_path = scratch + "/" + c.name + ".stderr";
  const std::string cmd = (c.env.empty() ? "" : "env " + c.env + " ") + quoted(binary) + " " + c.args + " 2>" +
                          quoted(err_path);
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  const int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err_path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.err = ss.str();
  return r;
}

/// The command-line suite. Witness files go to `out`; cases that verify a
/// witness come after the case producing it.
inline std::vector<CliCase> cli_cases(const std::string& data, const std::string& out) {
  auto d = [&](const std::string& f) { return quoted(data + "/" + f); };
  auto o = [&](const std::string& f) { return quoted(out + "/" + f); };
  return {
      {"help", "--help", 0, "WHP_DEFAULT_BOUND", ""},
      {"gog_help", "gog --help", 0, "--coset-reps", ""},
      {"free_equal", "free --rank 2 --from " + d("free_u.tup") + " --to " + d("free_u.tup"), 0, "equivalent", ""},
      {"free_shapes", "free --rank 2 --from " + d("free_u.tup") + " --to " + d("free_short.tup"), 2,
       "incompatible tuples", ""},
      {"free_positive",
       "free --rank 2 --from " + d("free_u.tup") + " --to " + d("free_v.tup") + " --witness " + o("free.auto"), 0,
       "witness:", ""},
      {"free_verify",
       "verify --rank 2 --auto " + o("free.auto") + " --from " + d("free_u.tup") + " --to " + d("free_v.tup"), 0,
       "verified", ""},
      {"free_verify_wrong",
       "verify --rank 2 --auto " + o("free.auto") + " --from " + d("free_u.tup") + " --to " + d("free_u.tup"), 1,
       "not verified", ""},
      {"free_cyclic_positive", "free --rank 2 --from " + d("free_short.tup") + " --to " + d("free_short_v.tup"), 0,
       "equivalent", ""},
      {"free_negative", "free --rank 2 --from " + d("free_short.tup") + " --to " + d("free_square.tup"), 1,
       "inequivalent", ""},
      {"free_grouped_bound",
       "free --rank 2 --bound 0 --from " + d("free_grouped_u.tup") + " --to " + d("free_grouped_v.tup"), 3,
       "inconclusive", ""},
      {"free_json", "--json free --rank 2 --from " + d("free_u.tup") + " --to " + d("free_v.tup"), 0,
       "\"decision\": \"equivalent\"", ""},
      {"free_env_bound", "--json free --rank 2 --from " + d("free_grouped_u.tup") + " --to " + d("free_grouped_v.tup"),
       3, "\"bound_source\": \"environment\"", "WHP_DEFAULT_BOUND=1"},
      {"gog_positive",
       "gog --group " + d("pipeline.grp") + " --from " + d("pipe_u.tup") + " --to " + d("pipe_v.tup") + " --witness " +
           o("pipe.auto"),
       0, "equivalent", ""},
      {"gog_verify",
       "verify --group " + d("pipeline.grp") + " --auto " + o("pipe.auto") + " --from " + d("pipe_u.tup") + " --to " +
           d("pipe_v.tup"),
       0, "verified", ""},
      {"gog_coset_reps",
       "gog --group " + d("pipeline.grp") + " --from " + d("pipe_u.tup") + " --to " + d("pipe_v.tup") +
           " --coset-reps " + o("pipe.auto") + " --bound 3",
       0, "equivalent", ""},
      {"gog_negative", "gog --group " + d("pipeline.grp") + " --from " + d("pipe_u.tup") + " --to " + d("pipe_far.tup"),
       1, "inequivalent", ""},
      {"gog_json", "gog --json --group " + d("pipeline.grp") + " --from " + d("pipe_u.tup") + " --to " + d("pipe_v.tup"),
       0, "\"qh_radius\": 5", ""},
      {"hnn_positive",
       "gog --group " + d("hnn.grp") + " --from " + d("hnn_u.tup") + " --to " + d("hnn_v.tup") + " --witness " +
           o("hnn.auto"),
       0, "equivalent", ""},
      {"hnn_verify",
       "verify --group " + d("hnn.grp") + " --auto " + o("hnn.auto") + " --from " + d("hnn_u.tup") + " --to " +
           d("hnn_v.tup"),
       0, "verified", ""},
      {"hnn_negative", "gog --group " + d("hnn.grp") + " --from " + d("hnn_u.tup") + " --to " + d("hnn_far.tup"), 1,
       "inequivalent", ""},
      {"group_parse_error",
       "gog --group " + d("bad_vertex.grp") + " --from " + d("pipe_u.tup") + " --to " + d("pipe_v.tup"), 2,
       "bad_vertex.grp:2: undeclared vertex 'G'", ""},
      {"group_validation_error",
       "gog --group " + d("adjacent_abelian.grp") + " --from " + d("pipe_u.tup") + " --to " + d("pipe_v.tup"), 2,
       "adjacent abelian vertices", ""},
      {"tuple_parse_error", "gog --group " + d("hnn.grp") + " --from " + d("pipe_u.tup") + " --to " + d("hnn_v.tup"),
       2, "pipe_u.tup:1: unknown generator 'p'", ""},
      {"missing_file", "free --rank 2 --from " + d("no_such.tup") + " --to " + d("free_u.tup"), 2, "cannot read", ""},
      {"unknown_flag", "free --rank 2 --from " + d("free_u.tup") + " --to " + d("free_u.tup") + " --frobnicate", 2,
       "Usage:", ""},
      {"si", "si --genus 1 --boundary 1 --word 'a^2 b^2'", 0, "1\n", ""},
      {"si_numeric", "si-numeric --genus 1 --boundary 1 --word 'a^2 b^2'", 0, "1\n", ""},
      {"si_pants", "si --genus 0 --boundary 3 --word 'c1 c2^-1'", 0, "", ""},
      {"qh_bound", "qh-bound " + d("pants.qh") + " --bound 2 --witness-prefix " + o("pants.cand"), 0, "0 0 ", ""},
      {"oracle_positive",
       "oracle --rank 2 --radius 3 --from " + d("free_u.tup") + " --to " + d("free_v.tup") + " --witness " +
           o("oracle.auto"),
       0, "equivalent", ""},
      {"oracle_verify",
       "verify --rank 2 --auto " + o("oracle.auto") + " --from " + d("free_u.tup") + " --to " + d("free_v.tup"), 0,
       "verified", ""},
      {"oracle_radius", "oracle --rank 2 --radius 0 --from " + d("free_u.tup") + " --to " + d("free_v.tup"), 3,
       "inconclusive", ""},
  };
}

/// Drops "timing_ms" lines so reports can be compared byte for byte.
inline std::string without_timing(const std::string& s) {
  std::istringstream in(s);
  std::string out;
  for (std::string line; std::getline(in, line);)
    if (line.find("\"timing_ms\"") == std::string::npos) out += line + '\n';
  return out;
}

/// Runs every case; returns the concatenated transcript (stdout, stderr and
/// exit code per case, timing removed). Mismatched expectations are listed in
/// `failures`.
inline std::string run_cli_suite(const std::string& binary, const std::string& data, const std::string& out,
                                 std::vector<std::string>& failures) {
  std::filesystem::create_directories(out);
  std::string transcript;
  for (const auto& c : cli_cases(data, out)) {
    CliRun r = run_cli(binary, c, out);
    if (r.exit_code != c.exit_code)
      failures.push_back(c.name + ": exit " + std::to_string(r.exit_code) + ", expected " +
                         std::to_string(c.exit_code) + "\n" + r.out + r.err);
    else if (!c.contains.empty() && r.out.find(c.contains) == std::string::npos &&
             r.err.find(c.contains) == std::string::npos)
      failures.push_back(c.name + ": output lacks '" + c.contains + "'\n" + r.out + r.err);
    transcript += "== " + c.name + " exit " + std::to_string(r.exit_code) + "\n" + without_timing(r.out) +
                  "-- stderr\n" + r.err;
  }
  return transcript;
}

}  // namespace whp::testing
