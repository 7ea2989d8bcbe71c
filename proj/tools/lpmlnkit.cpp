#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lpmln/engine.hpp"
#include "lpmln/ground.hpp"
#include "lpmln/parser.hpp"
#include "lpmln/plog.hpp"
#include "lpmln/translate.hpp"

namespace {

using namespace lpmln;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string atom_list(const std::set<Atom>& atoms) {
  std::string s;
  for (const auto& a : atoms) {
    if (!s.empty()) s += ",";
    std::string t = a.str();
    t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
    s += t;
  }
  return s.empty() ? "-" : s;
}

struct Options {
  std::string file;
  std::string format = "human";
  std::string mode = "wc";
  std::string emit = "lpmln";
  long long scale = 1000;
  bool strict_hard = false;
  bool simplify = false;
  bool all = false;
  double tol = 1e-9;
  EnumCaps caps;
  std::string query;
};

GroundProgram load_ground(const Options& opt, const std::string& text) {
  LpmlnProgram p = parse_lpmln(text);
  (void)opt;
  return ground(p);
}

int cmd_solve(const Options& opt) {
  std::string text = read_file(opt.file);
  GroundProgram g;
  FormulaPtr query;
  if (opt.query.empty()) {
    g = load_ground(opt, text);
  } else {
    // Parse the query in the scope of the program, then drop the carrier rule.
    LpmlnProgram p = parse_lpmln(text + "\n0 :: " + opt.query + ".");
    int carrier = p.rules.back().index;
    GroundProgram full = ground(p);
    for (std::size_t i = 0; i < full.rules.size(); ++i) {
      if (full.source_index[i] != carrier) {
        g.rules.push_back(full.rules[i]);
        g.source_index.push_back(full.source_index[i]);
        continue;
      }
      if (query) throw std::runtime_error("query must ground to a single formula");
      query = full.rules[i].formula;
    }
    for (const auto& r : g.rules) collect_atoms(r.formula, g.signature);
    for (const auto& a : full.signature) g.signature.insert(a);
    std::set<Atom> qa;
    collect_atoms(query, qa);
  }
  ModelTable table = probability_table(g, opt.caps, opt.all);
  const bool records = opt.format == "records";
  if (records)
    std::cout << "k_max=" << table.k_max << " models=" << table.entries.size() << "\n";
  else
    std::cout << "hard rules satisfiable at k = " << table.k_max << ", "
              << table.entries.size() << " model(s)\n";
  int i = 0;
  for (const auto& e : table.entries) {
    ++i;
    if (records) {
      std::cout << "model=" << i << " probability=" << e.probability
                << " hard=" << e.weight.hard << " soft=" << e.weight.soft
                << " atoms=" << atom_list(e.interpretation) << "\n";
    } else {
      std::cout << "model " << i << ": {" << atom_list(e.interpretation)
                << "}  probability " << e.probability << "  (hard " << e.weight.hard
                << ", soft " << e.weight.soft << ")\n";
    }
  }
  if (query) {
    double m = 0.0;
    for (const auto& e : table.entries)
      if (satisfies(query, e.interpretation)) m += e.probability;
    if (records)
      std::cout << "query_probability=" << m << "\n";
    else
      std::cout << "query probability: " << m << "\n";
  }
  return 0;
}

int cmd_map(const Options& opt) {
  GroundProgram g = load_ground(opt, read_file(opt.file));
  auto models = map_models(g, opt.caps, opt.tol);
  const bool records = opt.format == "records";
  int i = 0;
  for (const auto& m : models) {
    ++i;
    if (records)
      std::cout << "map=" << i << " atoms=" << atom_list(m) << "\n";
    else
      std::cout << "map " << i << ": {" << atom_list(m) << "}\n";
  }
  return 0;
}

int cmd_translate(const Options& opt) {
  GroundProgram g = load_ground(opt, read_file(opt.file));
  TranslationOutput t;
  if (opt.mode == "wc")
    t = lpmln2wc(g, opt.strict_hard);
  else if (opt.mode == "pnt")
    t = lpmln2wc_pnt(g);
  else if (opt.mode == "pnt-rule")
    t = lpmln2wc_pnt_rule(g);
  else if (opt.mode == "clingo")
    t = lpmln2wc_rule_clingo(g, opt.simplify);
  else if (opt.mode == "mln")
    t = mln2wc(g);
  else
    throw std::runtime_error("unknown mode " + opt.mode);
  std::cout << emit_aspcore2(t, opt.scale);
  return 0;
}

void require_conditions(const plog::PlogProgram& p, const EnumCaps& caps) {
  auto viols = plog::validate_conditions(p, caps);
  if (viols.empty()) return;
  for (const auto& v : viols)
    std::cerr << "condition " << v.condition << " violated: " << v.detail << "\n";
  throw ConditionError(viols.front().detail);
}

int cmd_plog_solve(const Options& opt) {
  plog::PlogProgram p = plog::parse_plog(read_file(opt.file));
  require_conditions(p, opt.caps);
  auto worlds = plog::possible_worlds(p, opt.caps);
  const bool records = opt.format == "records";
  int i = 0;
  for (const auto& w : worlds) {
    ++i;
    if (records) {
      std::cout << "world=" << i << " mu_hat=" << w.mu_hat.str() << " mu=" << w.mu
                << " atoms=" << atom_list(w.world) << "\n";
      for (const auto& h : w.happen)
        std::cout << "world=" << i << " attr=" << h.target.str()
                  << " value=" << h.value.str() << " p=" << h.probability.str()
                  << " assigned=" << (h.assigned ? 1 : 0) << "\n";
    } else {
      std::cout << "world " << i << ": probability " << w.mu << " (unnormalized "
                << w.mu_hat.str() << ")\n";
      std::cout << "  atoms: " << atom_list(w.world) << "\n";
      for (const auto& h : w.happen)
        std::cout << "  " << h.target.str() << " = " << h.value.str() << " with p = "
                  << h.probability.str() << (h.assigned ? " (assigned)" : " (default)")
                  << "\n";
    }
  }
  return 0;
}

int cmd_plog_translate(const Options& opt) {
  plog::PlogProgram p = plog::parse_plog(read_file(opt.file));
  if (opt.emit == "lpmln")
    std::cout << print_lpmln(plog::plog2lpmln(p));
  else if (opt.emit == "clingo")
    std::cout << plog::emit_clingo(p, opt.scale);
  else
    throw std::runtime_error("unknown emit target " + opt.emit);
  return 0;
}

int cmd_plog_crosscheck(const Options& opt) {
  plog::PlogProgram p = plog::parse_plog(read_file(opt.file));
  auto rep = plog::crosscheck(p, opt.caps);
  const bool records = opt.format == "records";
  if (records)
    std::cout << "bijection=" << (rep.bijection_ok ? 1 : 0) << " worlds=" << rep.worlds
              << " max_deviation=" << rep.max_deviation << "\n";
  else
    std::cout << (rep.bijection_ok ? "bijection holds" : "bijection FAILS") << ": "
              << rep.worlds << " world(s), max probability deviation "
              << rep.max_deviation << "\n";
  if (!rep.bijection_ok) {
    if (!rep.detail.empty()) std::cerr << rep.detail << "\n";
    return 6;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LPMLN and P-log toolkit"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* c, bool with_file = true) {
    if (with_file) c->add_option("file", opt.file, "input program")->required();
    c->add_option("--format", opt.format, "human|records")
        ->check(CLI::IsMember({"human", "records"}));
    c->add_option("--max-atoms", opt.caps.max_atoms, "fallback enumeration cap");
    c->add_option("--max-component", opt.caps.max_component, "splitting component cap");
    c->add_option("--tol", opt.tol, "comparison tolerance");
  };

  auto* solve = app.add_subcommand("solve", "probabilities of the stable models");
  add_common(solve);
  solve->add_option("--query", opt.query, "formula whose probability is reported");
  solve->add_flag("--all", opt.all, "also list stable models with probability 0");

  auto* map = app.add_subcommand("map", "most probable stable models");
  add_common(map);

  auto* translate = app.add_subcommand("translate", "weak constraint translations");
  add_common(translate);
  translate->add_option("--mode", opt.mode, "wc|pnt|pnt-rule|clingo|mln")
      ->check(CLI::IsMember({"wc", "pnt", "pnt-rule", "clingo", "mln"}));
  translate->add_option("--scale", opt.scale, "integer weight scale");
  translate->add_flag("--strict-hard", opt.strict_hard, "keep hard rules as rules");
  translate->add_flag("--simplify", opt.simplify,
                      "emit constraint rules directly as weak constraints");

  auto* plogc = app.add_subcommand("plog", "P-log front end");
  plogc->require_subcommand(1);
  auto* psolve = plogc->add_subcommand("solve", "possible worlds and probabilities");
  add_common(psolve);
  auto* ptrans = plogc->add_subcommand("translate", "compile to LPMLN or clingo");
  add_common(ptrans);
  ptrans->add_option("--emit", opt.emit, "lpmln|clingo")
      ->check(CLI::IsMember({"lpmln", "clingo"}));
  ptrans->add_option("--scale", opt.scale, "integer weight scale");
  auto* pcheck = plogc->add_subcommand("crosscheck",
                                       "compare the translation against the reference");
  add_common(pcheck);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(opt);
    if (map->parsed()) return cmd_map(opt);
    if (translate->parsed()) return cmd_translate(opt);
    if (psolve->parsed()) return cmd_plog_solve(opt);
    if (ptrans->parsed()) return cmd_plog_translate(opt);
    if (pcheck->parsed()) return cmd_plog_crosscheck(opt);
  } catch (const lpmln::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const lpmln::CapError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const lpmln::InconsistentError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const lpmln::RuleFormError& e) {
    std::cerr << e.what() << "\n";
    return 4;
  } catch (const lpmln::ConditionError& e) {
    std::cerr << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 70;
  }
  return 0;
}
