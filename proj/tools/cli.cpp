#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "acceptance.hpp"
#include "sgg/covering.hpp"
#include "sgg/digraph.hpp"
#include "sgg/errors.hpp"
#include "sgg/synthesis.hpp"

namespace sgg::cli {

namespace {

using nlohmann::json;

// Malformed user input: exit 64 with usage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::uint64_t seed = 1;
  int precision_bits = 128;
  std::size_t budget = 10000;
  std::string output_path;
  std::string format = "json";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream o(path);
  if (!o) throw UsageError("cannot write " + path);
  o << text;
}

// Everything a command prints goes through here so --out can redirect it.
struct Sink {
  const Config& cfg;
  std::ostream& out;
  std::ostringstream buf;
  ~Sink() = default;
  void flush() {
    if (cfg.output_path.empty())
      out << buf.str();
    else
      write_file(cfg.output_path, buf.str());
  }
};

json word_json(const Word& w) { return json::parse(word_to_json(w)); }

std::string fmt17(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

const GateSet& lookup(const std::string& name) {
  for (const auto& gs : catalog())
    if (gs.name == name) return gs;
  for (const auto& gs : nonexamples())
    if (gs.name == name) return gs;
  throw UsageError("unknown gate set: " + name);
}

const GateSet& pick(const std::string& positional, const std::string& option) {
  if (!positional.empty() && !option.empty() && positional != option)
    throw UsageError("gate set given twice: " + positional + " and " + option);
  const std::string& name = positional.empty() ? option : positional;
  if (name.empty()) throw UsageError("a gate set name is required");
  return lookup(name);
}

Quaternion parse_quaternion_arg(const std::string& text) {
  try {
    return parse_quaternion(text);
  } catch (const DomainError& e) {
    throw UsageError(std::string("bad quaternion: ") + e.what());
  }
}

UnitaryMatrix parse_matrix(const std::string& text) {
  std::string t = text;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream in(t);
  std::vector<double> v;
  double x;
  while (in >> x) v.push_back(x);
  if (!in.eof() || v.size() != 8) throw UsageError("--matrix needs 8 numbers: re,im of m00 m01 m10 m11");
  UnitaryMatrix m;
  for (int e = 0; e < 4; ++e) m[e] = Complex(v[2 * e], v[2 * e + 1]);
  return m;
}

json synthesis_json(const SynthesisResult& r, const GateSet& gs, const UnitaryMatrix& target, const Config& cfg) {
  if (!r.success) throw NoSolution("no word found within the T-count and candidate budget");
  json j = word_json(r.word);
  j["distance"] = pu2_distance(to_su2(evaluate(r.word, gs), cfg.precision_bits), target);
  j["candidates"] = r.candidates;
  return j;
}

void require_not_csv(const Config& cfg, const char* what) {
  if (cfg.format == "csv") throw UsageError(std::string("--format csv is not available for ") + what);
}

void emit_word(Sink& s, const Word& w, json j) {
  if (s.cfg.format == "text")
    s.buf << word_to_string(w) << "\n";
  else if (s.cfg.format == "csv")
    s.buf << w.gateset << "," << w.tcount << "," << word_to_string(w) << "\n";
  else
    s.buf << j.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"super-golden-gate toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--precision-bits", cfg.precision_bits, "working precision for matrices")->capture_default_str();
  app.add_option("--budget", cfg.budget, "candidate budget per T-count level")->capture_default_str();
  app.add_option("--out", cfg.output_path, "write the result to a file");
  app.add_option("--format", cfg.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}))->capture_default_str();

  std::string name, gateset_opt;
  auto add_name = [&](CLI::App* sub) {
    sub->add_option("name", name, "gate set");
    sub->add_option("--gateset", gateset_opt, "gate set");
  };

  auto* catalog_cmd = app.add_subcommand("catalog", "list gate sets with their matrices");
  catalog_cmd->add_option("name", name, "one gate set");
  bool with_nonexamples = false;
  catalog_cmd->add_flag("--nonexamples", with_nonexamples, "include the non-transitive examples");

  auto* validate_cmd = app.add_subcommand("validate", "check the gate set axioms");
  add_name(validate_cmd);

  auto* synth = app.add_subcommand("synth", "exact or approximate synthesis");
  synth->require_subcommand(1);
  std::string quaternion_text, word_file, matrix_text;
  double theta = 0, eps = 0;
  int max_tcount = -1;
  auto* exact_cmd = synth->add_subcommand("exact", "word of an exact element");
  add_name(exact_cmd);
  auto* qopt = exact_cmd->add_option("--quaternion", quaternion_text, "element as a,b,c,d/den@ring, e.g. 1,1,1,1/2@int or 0,1+w,1,-2+w/w@sqrt2");
  auto* fopt = exact_cmd->add_option("--word-file", word_file, "word JSON, or a words document");
  qopt->excludes(fopt);
  auto* diag_cmd = synth->add_subcommand("diag", "approximate a Z rotation");
  add_name(diag_cmd);
  diag_cmd->add_option("--theta", theta, "rotation angle")->required();
  diag_cmd->add_option("--eps", eps, "target distance")->required()->check(CLI::Range(1e-12, 1.0));
  diag_cmd->add_option("--max-tcount", max_tcount, "T-count cap");
  auto* general_cmd = synth->add_subcommand("general", "approximate a unitary");
  add_name(general_cmd);
  general_cmd->add_option("--matrix", matrix_text, "re,im of m00 m01 m10 m11")->required();
  general_cmd->add_option("--eps", eps, "target distance")->required()->check(CLI::Range(1e-12, 1.0));
  general_cmd->add_option("--max-tcount", max_tcount, "T-count cap per factor");

  auto* words_cmd = app.add_subcommand("words", "all words of one T-count");
  add_name(words_cmd);
  int tcount = 0;
  bool count_only = false;
  words_cmd->add_option("--tcount", tcount, "T-count")->required()->check(CLI::NonNegativeNumber);
  words_cmd->add_flag("--count-only", count_only, "print the number of distinct elements");

  auto* cover_cmd = app.add_subcommand("cover", "covering report for the words of one T-count");
  add_name(cover_cmd);
  std::size_t samples = 100000;
  cover_cmd->add_option("--tcount", tcount, "T-count")->required()->check(CLI::NonNegativeNumber);
  cover_cmd->add_option("--samples", samples, "Haar samples")->capture_default_str();

  auto* digraph_cmd = app.add_subcommand("digraph", "Cayley digraph of a finite quotient");
  add_name(digraph_cmd);
  std::int64_t modulus = 0;
  std::string spectrum_path, edges_path;
  digraph_cmd->add_option("--modulus", modulus, "odd prime q")->required();
  digraph_cmd->add_option("--spectrum", spectrum_path, "write eigenvalues as re,im lines");
  digraph_cmd->add_option("--edges", edges_path, "write the edge list");

  auto* selftest_cmd = app.add_subcommand("selftest", "run the acceptance criteria");
  acceptance::Options acc;
  selftest_cmd->add_flag("--slow", acc.slow, "include the 6072-vertex digraph");
  selftest_cmd->add_option("--only", acc.only, "criterion numbers");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    Sink sink{cfg, out, {}};
    if (*catalog_cmd) {
      require_not_csv(cfg, "catalog");
      auto entry = [](const GateSet& gs) { return json::parse(gateset_to_json(gs)); };
      json j;
      j["schema"] = 1;
      if (!name.empty()) {
        j["gatesets"] = json::array({entry(lookup(name))});
      } else {
        j["gatesets"] = json::array();
        for (const auto& gs : catalog()) j["gatesets"].push_back(entry(gs));
        if (with_nonexamples)
          for (const auto& gs : nonexamples()) j["gatesets"].push_back(entry(gs));
      }
      sink.buf << j.dump(2) << "\n";
      sink.flush();
      return kOk;
    }
    if (*validate_cmd) {
      require_not_csv(cfg, "validate");
      const GateSet& gs = pick(name, gateset_opt);
      ValidationReport r = validate(gs);
      json j;
      j["schema"] = 1;
      j["gateset"] = r.gateset;
      j["pass"] = r.all_pass();
      j["checks"] = json::array();
      for (const auto& c : r.checks) j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
      sink.buf << j.dump(2) << "\n";
      sink.flush();
      if (!r.all_pass()) {
        err << gs.name << " fails validation\n";
        return kDomain;
      }
      return kOk;
    }
    if (*synth) {
      const GateSet& gs = pick(name, gateset_opt);
      SynthesisOptions opts;
      opts.max_tcount = max_tcount;
      opts.budget = cfg.budget;
      if (*exact_cmd) {
        if (!quaternion_text.empty()) {
          Quaternion q = parse_quaternion_arg(quaternion_text);
          Word w = exact_synthesize(q, gs);
          json j = word_json(w);
          j["element"] = to_string(gs.canonical(q));
          emit_word(sink, w, j);
        } else if (!word_file.empty()) {
          json doc;
          try {
            doc = json::parse(read_file(word_file));
          } catch (const json::exception& e) {
            throw UsageError(std::string("bad JSON in ") + word_file + ": " + e.what());
          }
          std::vector<json> items = doc.contains("words") ? doc["words"].get<std::vector<json>>() : std::vector<json>{doc};
          for (const auto& item : items) {
            Word w = word_from_json(item.dump());
            if (w.gateset != gs.name) throw UsageError("word file is for " + w.gateset);
            Word back = exact_synthesize(evaluate(w, gs), gs);
            emit_word(sink, back, word_json(back));
          }
          if (cfg.format == "json") {
            // re-emit in the same shape as the input
            std::istringstream lines(sink.buf.str());
            std::vector<json> back;
            for (std::string l; std::getline(lines, l);) back.push_back(json::parse(l));
            sink.buf.str("");
            if (doc.contains("words")) {
              json d = doc;
              d["words"] = back;
              sink.buf << d.dump() << "\n";
            } else {
              sink.buf << back.front().dump() << "\n";
            }
          }
        } else {
          throw UsageError("synth exact needs --quaternion or --word-file");
        }
      } else if (*diag_cmd) {
        SynthesisResult r = approx_diagonal(theta, eps, gs, opts);
        json j = synthesis_json(r, gs, rz(theta), cfg);
        j["theta"] = theta;
        j["eps"] = eps;
        emit_word(sink, r.word, j);
      } else {
        UnitaryMatrix m = parse_matrix(matrix_text);
        SynthesisResult r = approx_general(m, eps, gs, opts);
        json j = synthesis_json(r, gs, m, cfg);
        j["eps"] = eps;
        emit_word(sink, r.word, j);
      }
      sink.flush();
      return kOk;
    }
    if (*words_cmd) {
      const GateSet& gs = pick(name, gateset_opt);
      if (count_only) {
        std::uint64_t n = word_count(gs, tcount) <= kEnumerationGuard ? enumerate_words(gs, tcount).size()
                                                                       : count_distinct_words(gs, tcount);
        sink.buf << n << "\n";
      } else {
        std::vector<Quaternion> elems = enumerate_words(gs, tcount);
        if (cfg.format != "json") {
          for (const auto& q : elems) emit_word(sink, exact_synthesize(q, gs), {});
        } else {
          json j;
          j["schema"] = 1;
          j["gateset"] = gs.name;
          j["tcount"] = tcount;
          j["count"] = elems.size();
          j["words"] = json::array();
          for (const auto& q : elems) j["words"].push_back(word_json(exact_synthesize(q, gs)));
          sink.buf << j.dump() << "\n";
        }
      }
      sink.flush();
      return kOk;
    }
    if (*cover_cmd) {
      require_not_csv(cfg, "cover");
      const GateSet& gs = pick(name, gateset_opt);
      sink.buf << cover_report_to_json(covering_stats(gs, tcount, samples, cfg.seed)) << "\n";
      sink.flush();
      return kOk;
    }
    if (*digraph_cmd) {
      const GateSet& gs = pick(name, gateset_opt);
      CayleyDigraph d = build_cayley(gs, modulus);
      sink.buf << cayley_header(d) << "\n";
      if (!edges_path.empty()) write_file(edges_path, edge_list(d));
      if (!spectrum_path.empty() || cfg.format == "csv") {
        Spectrum s = spectrum(d);
        std::string csv;
        for (auto l : s.eigenvalues) csv += fmt17(l.real()) + "," + fmt17(l.imag()) + "\n";
        if (!spectrum_path.empty()) write_file(spectrum_path, csv);
        if (cfg.format == "csv") {
          sink.buf << csv;
          sink.flush();
          return kOk;
        }
        RamanujanReport r = ramanujan_check(d.adjacency, d.k);
        json j{{"schema", 1},
               {"group_tag", d.group_tag},
               {"k", d.k},
               {"vertices", d.vertices.size()},
               {"full_quotient", d.full_quotient},
               {"converged", s.converged},
               {"trivial", r.trivial},
               {"exceptional", r.exceptional},
               {"bulk", r.bulk},
               {"max_bulk", r.max_bulk},
               {"bound", r.bound},
               {"minus_k", r.has_minus_k},
               {"ramanujan", r.pass}};
        sink.buf << j.dump() << "\n";
      }
      sink.flush();
      return kOk;
    }
    if (*selftest_cmd) {
      bool ok = true;
      acceptance::run(acc, [&](const acceptance::Result& r) {
        ok = ok && r.pass;
        out << acceptance::format(r) << std::endl;
      });
      return ok ? kOk : kInternal;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}

}  // namespace sgg::cli
