#include "spinal/spec_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "spinal/errors.hpp"

namespace spinal {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void parse_error(const std::string &msg) {
  throw Error(ErrorKind::Parse, msg);
}

struct Token {
  std::string name;
  long long exp = 1;
};

std::vector<Token> tokenize(const std::string &text) {
  std::istringstream is(text);
  std::vector<Token> out;
  std::string tok;
  while (is >> tok) {
    if (tok == "id")
      continue;
    Token t;
    auto caret = tok.find('^');
    t.name = tok.substr(0, caret);
    if (t.name.empty())
      parse_error("bad token '" + tok + "'");
    if (caret != std::string::npos) {
      auto e = tok.substr(caret + 1);
      std::size_t used = 0;
      try {
        t.exp = std::stoll(e, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (e.empty() || used != e.size())
        parse_error("bad exponent in '" + tok + "'");
    }
    out.push_back(t);
  }
  return out;
}

} // namespace

ElementId parse_rword(const GroupTable &r, const std::string &text) {
  ElementId x = r.identity();
  for (auto const &t : tokenize(text)) {
    auto i = r.generator_index(t.name);
    if (!i)
      parse_error("unknown rooted generator '" + t.name + "'");
    x = r.mul(x, r.pow(r.generators()[*i], t.exp));
  }
  return x;
}

Word parse_gword(const SpinalSpec &spec, const std::string &text) {
  auto const &r = spec.rooted();
  Word w;
  for (auto const &t : tokenize(text)) {
    if (auto i = r.generator_index(t.name)) {
      w.push_back(Symbol::rooted(r.pow(r.generators()[*i], t.exp)));
    } else if (auto d = spec.directed_index(t.name)) {
      for (long long k = 0; k < (t.exp < 0 ? -t.exp : t.exp); ++k)
        w.push_back(Symbol::directed(*d, t.exp < 0 ? -1 : 1));
    } else {
      parse_error("unknown generator '" + t.name + "'");
    }
  }
  return free_reduce(w, r);
}

std::string word_str(const SpinalSpec &spec, const Word &w) {
  auto const &r = spec.rooted();
  std::string s;
  auto add = [&s](const std::string &t) {
    if (!s.empty())
      s += ' ';
    s += t;
  };
  for (std::size_t i = 0; i < w.size();) {
    auto const &sym = w[i];
    if (sym.is_rooted()) {
      if (sym.id != r.identity())
        add(r.word(sym.id));
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < w.size() && w[j] == sym)
      ++j;
    auto n = static_cast<long long>(j - i) * sym.sign;
    auto const &name = spec.directed()[sym.id].name;
    add(n == 1 ? name : name + "^" + std::to_string(n));
    i = j;
  }
  return s.empty() ? "id" : s;
}

Vertex parse_vertex(const SpinalSpec &spec, const std::string &text) {
  Vertex v;
  if (text.find_first_not_of(" \t") == std::string::npos)
    return v;
  std::string part;
  std::istringstream is(text);
  while (std::getline(is, part, ','))
    v.push_back(parse_rword(spec.rooted(), part));
  return v;
}

SpinalSpec parse_spec(const std::string &json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error &e) {
    parse_error(std::string("invalid JSON: ") + e.what());
  }
  try {
    auto name = j.at("name").get<std::string>();
    auto const &rj = j.at("rooted");
    auto degree = rj.at("degree").get<unsigned>();
    std::vector<std::pair<std::string, Permutation>> gens;
    for (auto const &[gname, cyc] : rj.at("generators").items()) {
      std::vector<std::vector<unsigned>> cycles;
      for (auto const &c : cyc) {
        std::vector<unsigned> cc;
        for (auto const &x : c) {
          auto p = x.get<unsigned>();
          if (p == 0 || p > degree)
            parse_error("cycle point out of range in " + gname);
          cc.push_back(p - 1);
        }
        cycles.push_back(cc);
      }
      gens.emplace_back(gname, Permutation::from_cycles(degree, cycles));
    }
    auto r = GroupTable::from_permutations(degree, gens);
    auto derived = derived_subgroup(r);
    auto ab = coset_space(whole_group(r), derived);

    std::vector<DirectedTable> directed;
    if (j.contains("directed"))
      for (auto const &[dname, dj] : j.at("directed").items()) {
        DirectedTable t{dname, {}};
        std::set<Letter> seen;
        for (auto const &e : dj.at("sections")) {
          auto value = parse_rword(*r, e.at("value").get<std::string>());
          std::vector<Letter> at;
          if (e.contains("at") == e.contains("at_coset"))
            parse_error("section of " + dname +
                        " needs exactly one of at, at_coset");
          if (e.contains("at")) {
            auto x = parse_rword(*r, e.at("at").get<std::string>());
            if (x == r->identity())
              parse_error("section entry at the identity in " + dname);
            at.push_back(x);
          } else {
            auto c = ab.coset_of(
                parse_rword(*r, e.at("at_coset").get<std::string>()));
            for (auto x : ab.members(c))
              if (x != r->identity())
                at.push_back(x);
          }
          for (auto x : at) {
            if (!seen.insert(x).second)
              parse_error("overlapping section entries in " + dname + " at " +
                          r->word(x));
            if (value != r->identity())
              t.sections[x] = value;
          }
        }
        directed.push_back(std::move(t));
      }

    Assumptions as;
    if (j.contains("assumptions") && j["assumptions"].contains("assertedPeriodic")) {
      auto const &ap = j["assumptions"]["assertedPeriodic"];
      as.asserted_periodic = ap.at("value").get<bool>();
      as.note = ap.value("note", "");
    }

    // subgroups need the directed names, so parse them against a bare spec
    SpinalSpec bare(name, r, directed, {}, as);
    std::vector<SubgroupDef> subs;
    if (j.contains("subgroups"))
      for (auto const &[sname, sj] : j.at("subgroups").items()) {
        SubgroupDef def{sname, {}};
        for (auto const &w : sj) {
          auto word = parse_gword(bare, w.get<std::string>());
          for (auto const &sym : word)
            if (sym.is_rooted())
              parse_error("subgroup " + sname + " uses a rooted generator");
          def.generators.push_back(word);
        }
        subs.push_back(std::move(def));
      }
    return SpinalSpec(name, r, directed, subs, as);
  } catch (const nlohmann::json::exception &e) {
    parse_error(std::string("malformed spec: ") + e.what());
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::Parse)
      throw;
    parse_error(e.what());
  }
}

SpinalSpec load_spec(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::Input, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

std::string export_spec(const SpinalSpec &spec) {
  auto const &r = spec.rooted();
  auto const &ab = spec.rooted_ab();
  ordered_json j;
  j["name"] = spec.name();
  ordered_json gens = ordered_json::object();
  for (std::size_t i = 0; i < r.generators().size(); ++i) {
    ordered_json cycles = ordered_json::array();
    for (auto c : r.permutation(r.generators()[i]).cycles()) {
      for (auto &x : c)
        ++x;
      cycles.push_back(c);
    }
    gens[r.generator_names()[i]] = cycles;
  }
  j["rooted"] = {{"degree", r.permutation(r.identity()).degree()},
                 {"generators", gens}};
  ordered_json dir = ordered_json::object();
  for (auto const &t : spec.directed()) {
    ordered_json secs = ordered_json::array();
    auto val = [&](Letter x) {
      auto f = t.sections.find(x);
      return f == t.sections.end() ? r.identity() : f->second;
    };
    for (std::uint32_t c = 0; c < ab.size(); ++c) {
      auto const &mem = ab.members(c);
      bool constant = c != ab.identity() && mem.size() > 1;
      for (auto x : mem)
        constant = constant && val(x) == val(mem.front());
      if (constant) {
        if (val(mem.front()) != r.identity())
          secs.push_back({{"at_coset", r.word(ab.rep(c))},
                          {"value", r.word(val(mem.front()))}});
        continue;
      }
      for (auto x : mem)
        if (x != r.identity() && val(x) != r.identity())
          secs.push_back({{"at", r.word(x)}, {"value", r.word(val(x))}});
    }
    dir[t.name] = {{"sections", secs}};
  }
  j["directed"] = dir;
  ordered_json subs = ordered_json::object();
  for (auto const &s : spec.subgroups()) {
    ordered_json ws = ordered_json::array();
    for (auto const &w : s.generators)
      ws.push_back(word_str(spec, w));
    subs[s.name] = ws;
  }
  j["subgroups"] = subs;
  ordered_json as = ordered_json::object();
  if (spec.assumptions().asserted_periodic)
    as["assertedPeriodic"] = {{"value", *spec.assumptions().asserted_periodic},
                              {"note", spec.assumptions().note}};
  j["assumptions"] = as;
  return j.dump(2) + "\n";
}

} // namespace spinal
