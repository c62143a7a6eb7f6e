// Command line front end: family / norm / index subcommands, JSON (or CSV
// for bench) on stdout. Exit codes: 0 ok, 1 property violation, 2 parse
// error, 3 resource cap, 4 precondition failure.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "schreier/errors.hpp"
#include "schreier/families.hpp"
#include "schreier/indices.hpp"
#include "schreier/norms.hpp"
#include "schreier/ordinal.hpp"
#include "schreier/trees.hpp"

using json = nlohmann::ordered_json;
using namespace schreier;

namespace {

Rat parse_rat(const std::string& text) {
  try {
    return Rat(text);
  } catch (const std::exception&) {
    throw ParseError("bad rational '" + text + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string utc_now() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char out[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(out, sizeof out, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return out;
}

struct Output {
  bool no_meta = false;
  std::string path;  // empty: stdout

  void text(const std::string& body) const {
    if (path.empty()) {
      std::fputs(body.c_str(), stdout);
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file '" + path + "'");
    out << body;
  }

  void emit(json j, const std::string& command) const {
    if (!no_meta)
      j["meta"] = {{"tool", "schreier"},
                   {"command", command},
                   {"generated", utc_now()}};
    text(j.dump(2) + "\n");
  }
};

json finset_json(const FinSet& f) {
  json a = json::array();
  for (int x : f.elems()) a.push_back(x);
  return a;
}

json witness_json(const PartitionNode& w) {
  json j;
  j["value"] = render(w.value);
  if (w.leaf) {
    j["member"] = finset_json(w.base_witness);
    return j;
  }
  j["cuts"] = w.cuts;
  json blocks = json::array();
  for (const PartitionNode& b : w.blocks) blocks.push_back(witness_json(b));
  j["blocks"] = blocks;
  return j;
}

json certificate_json(const L1Certificate& c) {
  json j;
  j["hypothesis"] = c.hypothesis_ok;
  j["conclusion"] = c.conclusion_ok;
  j["constant"] = render(c.constant);
  j["sign_patterns_checked"] = c.sign_patterns_checked;
  j["random_trials_checked"] = c.random_trials_checked;
  if (!c.hypothesis_ok) j["dead_pattern"] = c.dead_pattern;
  return j;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find(sep, start);
    if (end == std::string::npos) {
      out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text, char sep) {
  std::vector<int> out;
  for (const std::string& piece : split(text, sep)) {
    if (piece.empty()) continue;
    try {
      std::size_t used = 0;
      const int v = std::stoi(piece, &used);
      if (used != piece.size()) throw std::invalid_argument(piece);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ParseError("bad integer '" + piece + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact calculator for adequate families, implicit norms, and "
               "transfinite indices"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file merged under explicit flags");

  Output out;
  app.add_flag("--no-meta", out.no_meta,
               "omit the meta block so output is byte-stable");
  app.add_option("--out", out.path, "write output to a file instead of stdout");

  int exit_code = 0;

  // family ------------------------------------------------------------
  auto* family = app.add_subcommand("family", "membership, ranks, derivatives");
  family->require_subcommand(1);

  struct {
    std::string spec, set = "[]", rho = "1";
    int max = 10;
    std::size_t cap = std::size_t{1} << 22;
  } fam;

  auto* fam_member = family->add_subcommand("member", "is the set a member");
  fam_member->add_option("--spec", fam.spec)->required();
  fam_member->add_option("--set", fam.set);
  fam_member->callback([&] {
    const bool ok = member(parse_familyspec(fam.spec), parse_finset(fam.set));
    out.emit({{"member", ok}}, "family member");
  });

  auto* fam_rank = family->add_subcommand("rank", "rank of a member");
  fam_rank->add_option("--spec", fam.spec)->required();
  fam_rank->add_option("--set", fam.set);
  fam_rank->callback([&] {
    const Ordinal r = cb_rank(parse_familyspec(fam.spec), parse_finset(fam.set));
    out.emit({{"rank", render(r)}}, "family rank");
  });

  auto* fam_deriv =
      family->add_subcommand("derivative", "membership in an iterated derivative");
  fam_deriv->add_option("--spec", fam.spec)->required();
  fam_deriv->add_option("--set", fam.set);
  fam_deriv->add_option("--rho", fam.rho, "derivative order, an ordinal");
  fam_deriv->callback([&] {
    const bool ok = in_derivative(parse_familyspec(fam.spec),
                                  parse_finset(fam.set), parse_ordinal(fam.rho));
    out.emit({{"in_derivative", ok}}, "family derivative");
  });

  auto* fam_restrict =
      family->add_subcommand("restrict", "members inside [1..max]");
  fam_restrict->add_option("--spec", fam.spec)->required();
  fam_restrict->add_option("--max", fam.max)->check(CLI::PositiveNumber);
  fam_restrict->add_option("--cap", fam.cap, "abort past this many members");
  fam_restrict->callback([&] {
    const ExplicitFamily cut =
        restrict_family(parse_familyspec(fam.spec), fam.max, fam.cap);
    json members = json::array();
    for (const FinSet& f : cut.members()) members.push_back(render(f));
    out.emit({{"count", cut.size()}, {"members", members}}, "family restrict");
  });

  auto* fam_check =
      family->add_subcommand("check", "adequacy and spreading report");
  fam_check->add_option("--spec", fam.spec)->required();
  fam_check->add_option("--truncation", fam.max, "spreading check horizon");
  fam_check->callback([&] {
    const FamilySpec spec = parse_familyspec(fam.spec);
    json j;
    j["spec"] = render(spec);
    const bool adequate = is_adequate(spec);
    j["adequate"] = adequate;
    j["spreading"] = is_spreading(spec, fam.max);
    j["truncation"] = fam.max;
    if (const auto* ex = std::get_if<ExplicitFamily>(&spec)) {
      const AdequacyReport rep = adequacy_report(*ex);
      j["hereditary"] = rep.hereditary;
      j["contains_empty"] = rep.contains_empty;
      j["singletons_present"] = rep.singletons_present;
      j["ground_max"] = ex->ground_max();
    }
    out.emit(j, "family check");
    if (!adequate) exit_code = 1;
  });

  // norm --------------------------------------------------------------
  auto* norm = app.add_subcommand("norm", "evaluation and implicit norms");
  norm->require_subcommand(1);

  struct {
    std::string spec, vec, alpha = "0", engine = "memoized", rule = "support-end";
    std::string rows, r = "0", delta = "1/2";
    bool witness = false;
    int min_support = 4, max_support = 16, step = 4, naive_cap = 12;
  } nrm;

  auto* norm_family =
      norm->add_subcommand("family", "evaluation norm against a family");
  norm_family->add_option("--spec", nrm.spec)->required();
  norm_family->add_option("--vec", nrm.vec)->required();
  norm_family->callback([&] {
    const NormResult res =
        family_norm(parse_familyspec(nrm.spec), parse_coeffvec(nrm.vec));
    json j;
    j["value"] = render(res.value);
    j["witness"] = finset_json(res.witness.base_witness);
    out.emit(j, "norm family");
  });

  auto* norm_tsi = norm->add_subcommand("tsirelson", "implicit-equation norm");
  norm_tsi->add_option("--alpha", nrm.alpha, "base family level, an ordinal");
  norm_tsi->add_option("--vec", nrm.vec)->required();
  norm_tsi->add_option("--engine", nrm.engine)
      ->check(CLI::IsMember({"naive", "memoized"}));
  norm_tsi->add_option("--rule", nrm.rule)
      ->check(CLI::IsMember({"support-end", "free-end"}));
  norm_tsi->add_flag("--witness", nrm.witness, "include the evaluation record");
  norm_tsi->callback([&] {
    const NormEngine engine =
        nrm.engine == "naive" ? NormEngine::naive : NormEngine::memoized;
    const EndpointRule rule = nrm.rule == "free-end" ? EndpointRule::free_end
                                                     : EndpointRule::support_end;
    const NormResult res = tsirelson_norm(parse_ordinal(nrm.alpha),
                                          parse_coeffvec(nrm.vec), engine, rule);
    json j;
    j["value"] = render(res.value);
    j["iterations"] = res.iterations;
    if (nrm.witness) j["witness"] = witness_json(res.witness);
    out.emit(j, "norm tsirelson");
  });

  auto* norm_bench =
      norm->add_subcommand("bench", "CSV of engine timings over growing supports");
  norm_bench->add_option("--alpha", nrm.alpha);
  norm_bench->add_option("--min-support", nrm.min_support)->check(CLI::PositiveNumber);
  norm_bench->add_option("--max-support", nrm.max_support)->check(CLI::PositiveNumber);
  norm_bench->add_option("--step", nrm.step)->check(CLI::PositiveNumber);
  norm_bench->add_option("--naive-cap", nrm.naive_cap,
                         "largest support the naive engine is asked to run");
  norm_bench->callback([&] {
    const Ordinal alpha = parse_ordinal(nrm.alpha);
    std::ostringstream csv;
    csv << "support,engine,wall_us,value\n";
    for (int n = nrm.min_support; n <= nrm.max_support; n += nrm.step) {
      CoeffVec x;
      std::string text;
      for (int i = 1; i <= n; ++i)
        text += (i > 1 ? "," : "") + std::to_string(i) + ":1";
      x = parse_coeffvec(text);
      for (const char* engine : {"naive", "memoized"}) {
        if (engine[0] == 'n' && n > nrm.naive_cap) continue;
        const auto t0 = std::chrono::steady_clock::now();
        const NormResult res = tsirelson_norm(
            alpha, x,
            engine[0] == 'n' ? NormEngine::naive : NormEngine::memoized);
        const auto wall = std::chrono::duration_cast<std::chrono::microseconds>(
            std::chrono::steady_clock::now() - t0);
        csv << n << ',' << engine << ',' << wall.count() << ','
            << render(res.value) << '\n';
      }
    }
    out.text(csv.str());
  });

  auto* norm_cert =
      norm->add_subcommand("certify-l1", "certify a lower-l1 system of functions");
  norm_cert->add_option("--rows", nrm.rows,
                        "function rows, ';' between rows, ',' between values")
      ->required();
  norm_cert->add_option("--r", nrm.r, "lower level");
  norm_cert->add_option("--delta", nrm.delta, "separation");
  norm_cert->callback([&] {
    std::vector<std::vector<Rat>> rows;
    for (const std::string& row : split(nrm.rows, ';')) {
      std::vector<Rat> vals;
      for (const std::string& piece : split(row, ','))
        vals.push_back(parse_rat(piece));
      rows.push_back(std::move(vals));
    }
    const L1Certificate cert =
        boolean_l1_certify(rows, parse_rat(nrm.r), parse_rat(nrm.delta));
    out.emit(certificate_json(cert), "norm certify-l1");
    if (!cert.hypothesis_ok || !cert.conclusion_ok) exit_code = 1;
  });

  // index -------------------------------------------------------------
  auto* index = app.add_subcommand("index", "transfinite indices");
  index->require_subcommand(1);

  struct {
    std::string spec, set = "[]", lambda, epsilon = "1/2", mode = "symbolic";
    std::string fn, c = "1/4", d = "3/4", tree_spec, tuples, pairs;
    int order = 3, level = 3, window = 10, depth = 8;
    bool chain = false;
  } idx;

  auto* idx_osc = index->add_subcommand(
      "oscillation", "oscillation index, or survival at a given level");
  idx_osc->add_option("--spec", idx.spec)->required();
  idx_osc->add_option("--set", idx.set);
  idx_osc->add_option("--lambda", idx.lambda,
                      "level to test; when absent the index is computed");
  idx_osc->add_option("--epsilon", idx.epsilon);
  idx_osc->add_option("--mode", idx.mode)
      ->check(CLI::IsMember({"symbolic", "direct"}));
  idx_osc->callback([&] {
    const IndicatorSeq seq{parse_familyspec(idx.spec)};
    if (idx.lambda.empty()) {
      out.emit({{"index", render(oscillation_index(seq))}}, "index oscillation");
      return;
    }
    const bool ok = oscillation_membership(
        seq, parse_finset(idx.set), parse_ordinal(idx.lambda),
        parse_rat(idx.epsilon),
        idx.mode == "direct" ? OscMode::direct : OscMode::symbolic);
    out.emit({{"member", ok}}, "index oscillation");
  });

  auto* idx_lav = index->add_subcommand("lavrentiev", "alternation chain index");
  idx_lav->add_option("--fn", idx.fn, "step function file")->required();
  idx_lav->add_option("--c", idx.c);
  idx_lav->add_option("--d", idx.d);
  idx_lav->add_flag("--chain", idx.chain, "include the chain itself");
  idx_lav->callback([&] {
    const StepFn f = parse_stepfn(read_file(idx.fn));
    const LavrentievResult res =
        lavrentiev_index(f, parse_rat(idx.c), parse_rat(idx.d));
    json j;
    j["index"] = render(res.index);
    if (idx.chain) {
      json chain = json::array();
      for (const IntervalSet& s : res.chain) chain.push_back(render(s));
      j["chain"] = chain;
    }
    out.emit(j, "index lavrentiev");
  });

  auto* idx_l1 =
      index->add_subcommand("l1tree", "difference tree with branch certificates");
  idx_l1->add_option("--spec", idx.spec)->required();
  idx_l1->add_option("--order", idx.order)->check(CLI::PositiveNumber);
  idx_l1->add_option("--epsilon", idx.epsilon);
  idx_l1->callback([&] {
    const L1Tree t = build_l1_tree(IndicatorSeq{parse_familyspec(idx.spec)},
                                   idx.order, parse_rat(idx.epsilon));
    json j;
    j["order"] = render(wf_order(t.tree));
    j["gap"] = render(t.gap);
    j["index_half"] = render(t.index_half);
    json branches = json::array();
    for (const L1Branch& b : t.branches) {
      json jb;
      json pairs = json::array();
      for (const DiffPair& p : b.pairs) pairs.push_back({p.hi, p.lo});
      jb["pairs"] = pairs;
      jb["full_member"] = render(b.full_member);
      jb["points"] = b.points.size();
      jb["certificate"] = certificate_json(b.certificate);
      branches.push_back(jb);
    }
    j["branches"] = branches;
    out.emit(j, "index l1tree");
  });

  auto* idx_cons =
      index->add_subcommand("consistency", "cross-check the finite stages");
  idx_cons->add_option("--spec", idx.spec)->required();
  idx_cons->add_option("--level", idx.level)->check(CLI::PositiveNumber);
  idx_cons->add_option("--window", idx.window)->check(CLI::PositiveNumber);
  idx_cons->callback([&] {
    const ConsistencyReport rep = index_consistency_report(
        IndicatorSeq{parse_familyspec(idx.spec)}, idx.level, idx.window);
    json entries = json::array();
    for (const ConsistencyEntry& e : rep.entries)
      entries.push_back({{"claim", e.claim},
                         {"instance", e.instance},
                         {"pass", e.pass},
                         {"detail", e.detail}});
    out.emit({{"entries", entries}, {"all_pass", rep.all_pass}},
             "index consistency");
    if (!rep.all_pass) exit_code = 1;
  });

  auto* idx_tree =
      index->add_subcommand("tree", "delta order, well-founded order, boolean index");
  auto* mode = idx_tree->add_option_group("mode", "exactly one kind of input");
  auto* opt_delta = mode->add_option("--delta", idx.tree_spec,
                                     "tree spec text, e.g. L(schreier(1),2)");
  auto* opt_wf = mode->add_option(
      "--wf", idx.tuples, "tuples of an order tree: '1;1 2;1 2 3'");
  mode->add_option("--boolean", idx.pairs, "set pairs: '1,2|3,4;5|6,7'");
  mode->require_option(1);
  idx_tree->add_option("--depth", idx.depth, "boolean tree depth cap");
  idx_tree->callback([&] {
    if (!opt_delta->empty()) {
      out.emit({{"order", render(delta_order(parse_treespec(idx.tree_spec)))}},
               "index tree");
      return;
    }
    if (!opt_wf->empty()) {
      std::set<std::vector<int>> tuples;
      for (const std::string& line : split(idx.tuples, ';')) {
        std::vector<int> tuple = parse_int_list(line, ' ');
        if (!tuple.empty()) tuples.insert(std::move(tuple));
      }
      const OrderTree<int> tree(std::move(tuples));
      out.emit({{"order", render(wf_order(tree))}}, "index tree");
      return;
    }
    std::vector<BooleanPair> pairs;
    for (const std::string& piece : split(idx.pairs, ';')) {
      const std::vector<std::string> sides = split(piece, '|');
      if (sides.size() != 2)
        throw ParseError("boolean pairs: expected 'A|B' in '" + piece + "'");
      BooleanPair p;
      for (int v : parse_int_list(sides[0], ',')) p.a.insert(v);
      for (int v : parse_int_list(sides[1], ',')) p.b.insert(v);
      pairs.push_back(std::move(p));
    }
    const BooleanTreeResult res = boolean_tree(pairs, idx.depth);
    json j;
    j["order"] = render(wf_order(res.tree));
    j["lower_bound_only"] = res.lower_bound_only;
    j["overlap_warning"] = res.overlap_warning;
    out.emit(j, "index tree");
  });

  // Global flags may sit after the subcommand words.
  std::function<void(CLI::App*)> fall_through = [&](CLI::App* a) {
    a->fallthrough();
    for (CLI::App* s : a->get_subcommands({})) fall_through(s);
  };
  fall_through(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 2;
  } catch (const ResourceCapError& e) {
    std::fprintf(stderr, "resource cap: %s\n", e.what());
    return 3;
  } catch (const PreconditionError& e) {
    std::fprintf(stderr, "precondition: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return exit_code;
}
