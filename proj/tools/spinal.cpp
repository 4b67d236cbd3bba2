#include <algorithm>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "spinal/catalog.hpp"
#include "spinal/certifier.hpp"
#include "spinal/errors.hpp"
#include "spinal/rab_graph.hpp"
#include "spinal/spec_io.hpp"
#include "spinal/tree.hpp"

using namespace spinal;

namespace {

enum Exit { kOk = 0, kRefuted = 1, kInconclusive = 2, kInput = 3, kBudget = 4 };

int exit_for(const Verdict &v) {
  switch (v.status) {
  case Status::Certified: return kOk;
  case Status::Refuted: return kRefuted;
  case Status::Inconclusive: break;
  }
  return v.budget_exceeded ? kBudget : kInconclusive;
}

int report(const SpinalSpec &spec, const Verdict &v, bool json) {
  std::cout << (json ? verdict_json(spec, v) : verdict_text(spec, v));
  return exit_for(v);
}

Word directed_word(const SpinalSpec &spec, const std::string &text) {
  auto w = parse_gword(spec, text);
  for (auto const &s : w)
    if (s.is_rooted())
      throw Error(ErrorKind::Parse, "'" + text + "' is not a directed word");
  return w;
}

std::string join(const std::vector<std::string> &v, const char *sep) {
  std::string out;
  for (auto const &s : v)
    out += (out.empty() ? "" : sep) + s;
  return out;
}

int cmd_validate(const SpinalSpec &spec, std::size_t d_cap) {
  auto rep = validate(spec, d_cap);
  auto const &r = spec.rooted();
  std::cout << "spec " << spec.name() << ": |R| = " << r.size()
            << ", directed generators " << spec.directed().size() << "\n";
  std::vector<std::string> vals;
  for (auto x : rep.gen_witness)
    vals.push_back(r.word(x));
  std::cout << "gen: " << (rep.gen_holds ? "holds" : "fails")
            << ", table values generate a subgroup of order "
            << rep.reached_order << "\n";
  if (vals.size() <= 12)
    std::cout << "  values: " << join(vals, ", ") << "\n";
  else
    std::cout << "  values: " << vals.size() << " distinct\n";
  if (rep.d_order)
    std::cout << "|D| = " << *rep.d_order << "\n";
  else
    std::cout << "|D|: cap " << rep.d_cap << " exceeded\n";
  for (auto const &[name, ok] : rep.compatible_generators)
    std::cout << "compatible " << name << ": " << (ok ? "yes" : "no") << "\n";
  for (auto const &n : rep.notes)
    std::cout << "note: " << n << "\n";
  return rep.gen_holds ? kOk : kRefuted;
}

int cmd_graph(const SpinalSpec &spec, const std::string &element,
              const std::string &out) {
  auto d = spec.tuple_of(directed_word(spec, element));
  auto g = build_rab_graph(spec, d);
  CosetSet marks;
  if (g.simply_labelled())
    for (auto const &w : forking_points(g).witnesses)
      marks.insert(w.vertex);
  auto dot = export_dot(g, marks);
  if (out.empty()) {
    std::cout << dot;
  } else {
    std::ofstream f(out);
    if (!f)
      throw Error(ErrorKind::Input, "cannot write " + out);
    f << dot;
  }
  return kOk;
}

int cmd_eval(const SpinalSpec &spec, const std::string &word,
             const std::string &vertex, std::size_t depth) {
  auto w = parse_gword(spec, word);
  auto v = parse_vertex(spec, vertex);
  auto const &r = spec.rooted();
  std::cout << "word: " << word_str(spec, w) << "\n";
  std::cout << "top: " << r.word(top_permutation(spec, w)) << "\n";
  if (!v.empty()) {
    std::cout << "vertex " << vertex_str(spec, v) << " -> "
              << vertex_str(spec, act_on_vertex(spec, w, v)) << "\n";
    std::cout << "section: " << word_str(spec, section(spec, w, v)) << "\n";
    std::cout << "label: " << r.word(label_at(spec, w, v)) << "\n";
  }
  auto p = portrait(spec, w, depth);
  std::cout << "portrait to depth " << p.depth << ": " << p.labels.size()
            << " nontrivial labels\n";
  for (auto const &[u, l] : p.labels)
    std::cout << "  " << vertex_str(spec, u) << " " << r.word(l) << "\n";
  return kOk;
}

int cmd_syllable(const SpinalSpec &spec, const std::string &word, bool exact,
                 std::size_t budget, std::size_t d_cap) {
  auto w = parse_gword(spec, word);
  auto f = syllable_reduce(spec, w);
  std::cout << "form: " << form_str(spec, f) << "\n";
  std::cout << "length: " << f.length() << "\n";
  if (!exact)
    return kOk;
  auto dg = build_directed_group(spec, d_cap);
  auto e = syllable_exact(spec, dg, w, budget);
  if (!e) {
    std::cout << "exact: above " << budget << "\n";
    return kBudget;
  }
  std::cout << "exact: " << *e << "\n";
  return kOk;
}

int cmd_maximal(const SpinalSpec &spec, const std::string &subgroup,
                const std::string &witness, const Caps &caps, bool json) {
  auto def = spec.subgroup(subgroup);
  if (!def)
    throw Error(ErrorKind::Input, "no subgroup named " + subgroup);
  auto dg = build_directed_group(spec, caps.d_cap);
  MaximalityWitnesses w;
  if (!witness.empty()) {
    auto at = witness.rfind('@');
    if (at == std::string::npos)
      throw Error(ErrorKind::Parse, "witness must be <word>@<letter>");
    LayeredCertificate c;
    c.witness = free_reduce(parse_gword(spec, witness.substr(0, at)),
                            spec.rooted());
    c.vertex = parse_rword(spec.rooted(), witness.substr(at + 1));
    auto sec = section(spec, c.witness, {c.vertex});
    c.target = top_permutation(spec, sec);
    ElementId t[] = {c.target};
    c.normal_closure_full = normal_closure(spec.rooted_ptr(), t).is_whole();
    c.subject = def->name;
    w.h = c;
    c.subject = "G";
    w.g = c;
  }
  return report(spec, certify_maximal_infinite_index(spec, dg, *def, w, caps),
                json);
}

CatalogParams parse_params(const std::vector<std::string> &ps) {
  CatalogParams out;
  for (auto const &p : ps) {
    auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error(ErrorKind::Parse, "parameter must be name=value: " + p);
    try {
      std::size_t used = 0;
      auto v = std::stoll(p.substr(eq + 1), &used);
      if (used != p.size() - eq - 1)
        throw std::invalid_argument(p);
      out[p.substr(0, eq)] = v;
    } catch (const std::logic_error &) {
      throw Error(ErrorKind::Parse, "bad parameter value: " + p);
    }
  }
  return out;
}

int cmd_catalog_run(const std::string &name, const CatalogParams &params) {
  auto rep = run_regressions(name, params);
  for (auto const &c : rep.claims) {
    std::cout << (c.passed ? "pass" : "FAIL") << " [" << c.tag << "] "
              << c.operation << ": expected " << c.expected;
    if (!c.detail.empty())
      std::cout << " (" << c.detail << ")";
    std::cout << "\n";
  }
  std::cout << rep.entry << ": "
            << std::count_if(rep.claims.begin(), rep.claims.end(),
                             [](auto const &c) { return c.passed; })
            << "/" << rep.claims.size() << " claims pass\n";
  return rep.all_passed() ? kOk : kRefuted;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"spinal: constant spinal groups, certificates and catalog"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 1;
  app.add_option("--threads", threads, "worker threads")
      ->check(CLI::PositiveNumber);

  Caps caps;
  std::string file, element, out, word, vertex, subgroup, witness, entry;
  bool json = false, exact = false;
  std::size_t depth = 2, budget = 6;
  std::vector<std::string> params;

  auto *validate_cmd = app.add_subcommand("validate", "check (Gen), |D| and compatibility");
  validate_cmd->add_option("file", file)->required();

  auto *graph_cmd = app.add_subcommand("graph", "DOT of the R^ab graph of a directed element");
  graph_cmd->add_option("file", file)->required();
  graph_cmd->add_option("--element", element, "word over directed generators")
      ->required();
  graph_cmd->add_option("--out", out);

  auto *mf_cmd = app.add_subcommand("certify-mf", "MF certificate via forking and filling");
  mf_cmd->add_option("file", file)->required();
  mf_cmd->add_option("--cycle-bound", caps.cycle_bound);
  mf_cmd->add_option("--lift-cap", caps.lift_cap);
  mf_cmd->add_option("--sigma-max-iter", caps.sigma_max_iter);
  mf_cmd->add_flag("--json", json);

  auto *per_cmd = app.add_subcommand("periodicity", "sigma criterion for periodicity");
  per_cmd->add_option("file", file)->required();
  per_cmd->add_option("--sigma-max-iter", caps.sigma_max_iter);
  per_cmd->add_flag("--json", json);

  auto *max_cmd = app.add_subcommand("certify-maximal", "maximal subgroup of infinite index");
  max_cmd->add_option("file", file)->required();
  max_cmd->add_option("--subgroup", subgroup)->required();
  max_cmd->add_option("--witness", witness, "<word>@<letter>");
  max_cmd->add_option("--search-budget", caps.search_budget);
  max_cmd->add_flag("--json", json);

  auto *eval_cmd = app.add_subcommand("eval", "action, section and portrait of a word");
  eval_cmd->add_option("file", file)->required();
  eval_cmd->add_option("--word", word)->required();
  eval_cmd->add_option("--vertex", vertex, "comma separated letters");
  eval_cmd->add_option("--depth", depth);

  auto *syl_cmd = app.add_subcommand("syllable", "syllable form and length");
  syl_cmd->add_option("file", file)->required();
  syl_cmd->add_option("--word", word)->required();
  syl_cmd->add_flag("--exact", exact);
  syl_cmd->add_option("--budget", budget);

  auto *cat_cmd = app.add_subcommand("catalog", "built-in examples");
  cat_cmd->require_subcommand(1);
  auto *cat_list = cat_cmd->add_subcommand("list", "list entries");
  auto *cat_run = cat_cmd->add_subcommand("run", "replay the claims of an entry");
  cat_run->add_option("name", entry)->required();
  cat_run->add_option("--param", params, "name=value");
  auto *cat_export = cat_cmd->add_subcommand("export", "write an entry as a spec file");
  cat_export->add_option("name", entry)->required();
  cat_export->add_option("--param", params, "name=value");
  cat_export->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    auto code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }
  caps.threads = threads;

  try {
    if (cat_cmd->parsed()) {
      if (cat_list->parsed()) {
        for (auto const &e : catalog_entries()) {
          std::cout << e.name << "  " << e.summary;
          if (!e.params.empty())
            std::cout << "  [" << e.params << "]";
          std::cout << "\n";
          if (!e.note.empty())
            std::cout << "    note: " << e.note << "\n";
        }
        return kOk;
      }
      if (cat_run->parsed())
        return cmd_catalog_run(entry, parse_params(params));
      auto text = export_spec(instantiate(entry, parse_params(params)));
      if (out.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(out);
        if (!f)
          throw Error(ErrorKind::Input, "cannot write " + out);
        f << text;
      }
      return kOk;
    }

    auto spec = load_spec(file);
    if (validate_cmd->parsed())
      return cmd_validate(spec, caps.d_cap);
    if (graph_cmd->parsed())
      return cmd_graph(spec, element, out);
    if (mf_cmd->parsed())
      return report(spec, certify_mf(spec, caps), json);
    if (per_cmd->parsed())
      return report(spec, periodicity_certificate(spec, caps), json);
    if (max_cmd->parsed())
      return cmd_maximal(spec, subgroup, witness, caps, json);
    if (eval_cmd->parsed())
      return cmd_eval(spec, word, vertex, depth);
    if (syl_cmd->parsed())
      return cmd_syllable(spec, word, exact, budget, caps.d_cap);
  } catch (const Error &e) {
    std::cerr << "error: " << error_kind_name(e.kind()) << ": " << e.what()
              << "\n";
    return e.kind() == ErrorKind::BudgetExceeded ? kBudget : kInput;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kOk;
}
