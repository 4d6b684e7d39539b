// Command-line front end: parses diagram/amalgam JSON, dispatches to the
// library, and emits JSON reports or human-readable tables.
//
// Exit codes: 0 ok/isomorphic, 1 distinct/invalid, 2 budget exceeded,
// 3 malformed input.

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "ctphan/json_io.hpp"
#include "ctphan/rootdetect.hpp"

using namespace ctphan;
using nlohmann::json;

namespace {

struct Options {
  bool json_out = false;
  bool slow = false;
  bool timing = false;
  int threads = 1;
};

size_t resolve_budget(const Options& opt) {
  if (const char* env = std::getenv("CTPHAN_BUDGET")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end && *end == '\0' && v > 0) return size_t(v);
    throw ParseError("CTPHAN_BUDGET must be a positive integer");
  }
  return opt.slow ? GroupHandle::kDefaultBudget : 1'000'000;
}

struct Report {
  std::string command;
  std::string status = "ok";
  json payload = json::object();
  double ms = 0;

  int emit(const Options& opt, int code) const {
    if (opt.json_out) {
      json j;
      j["v"] = 1;
      j["command"] = command;
      j["status"] = status;
      j["payload"] = payload;
      if (opt.timing) j["timing_ms"] = ms;
      std::cout << j.dump(2) << "\n";
    }
    return code;
  }
};

int cmd_group_order(const Options& opt, const std::string& type, int q) {
  Report rep;
  rep.command = "group order";
  long long n = classical_order(type, q);
  rep.payload["type"] = type;
  rep.payload["q"] = q;
  rep.payload["order"] = n;
  if (!opt.json_out) std::cout << n << "\n";
  return rep.emit(opt, 0);
}

int cmd_pair_verify(const Options& opt, const std::string& kind_s, const std::string& type_s,
                    int q) {
  Report rep;
  rep.command = "pair verify";
  Kind kind = kind_from_name(kind_s);
  PairType type = pair_type_from_name(type_s);
  size_t budget = resolve_budget(opt);
  const StandardPair& pr = get_standard_pair(kind, type, q, budget);
  rep.payload["kind"] = kind_s;
  rep.payload["type"] = pair_type_name(type);
  rep.payload["q"] = q;
  rep.payload["ambient_order"] = pr.ambient.order();
  rep.payload["classical_order"] = pr.expected_order();
  if (kind == Kind::CT && type != PairType::A1A1) {
    json sides = json::array();
    for (int side : {1, 2}) {
      SylowVerdict v = classify_sylows(pr, side, opt.threads);
      json js;
      js["side"] = side;
      json entries = json::array();
      for (size_t k = 0; k < v.entries.size(); ++k) {
        json je;
        je["index"] = k;
        je["tag"] = sylow_tag_name(v.entries[k].tag);
        je["closure_order"] = v.entries[k].closure_order;
        je["witness"] = v.entries[k].witness;
        entries.push_back(je);
      }
      js["sylows"] = entries;
      sides.push_back(js);
      if (!opt.json_out) {
        std::cout << "side " << side << " (" << v.entries.size() << " Sylow subgroups)\n";
        for (size_t k = 0; k < v.entries.size(); ++k)
          std::cout << "  #" << k << "  " << sylow_tag_name(v.entries[k].tag) << "  closure "
                    << v.entries[k].closure_order << "  " << v.entries[k].witness << "\n";
      }
    }
    rep.payload["sides"] = sides;
  } else if (kind == Kind::Phan && type != PairType::A1A1) {
    auto [d12, d21] = phan_tori_brute_force(pr);
    auto counts = torus_uniqueness_counts(pr);
    rep.payload["torus_orders"] = {d12.order(), d21.order()};
    rep.payload["explicit_matches_bruteforce"] =
        d12.same_elements(pr.phan_torus_explicit[0]) &&
        d21.same_elements(pr.phan_torus_explicit[1]);
    rep.payload["normalized_torus_counts"] = {counts[0], counts[1]};
    rep.payload["torus_uniqueness"] = counts[0] == 1 && counts[1] == 1;
    if (!opt.json_out) {
      std::cout << "edge tori: |D_1^2| = " << d12.order() << ", |D_2^1| = " << d21.order()
                << "\n"
                << "normalized-conjugate counts: " << counts[0] << ", " << counts[1] << "\n";
    }
  }
  if (!opt.json_out)
    std::cout << "ambient order " << pr.ambient.order() << " (classical "
              << pr.expected_order() << ")\n";
  return rep.emit(opt, 0);
}

int cmd_amalgam_check(const Options& opt, const std::string& file) {
  Report rep;
  rep.command = "amalgam check";
  AmalgamSpec spec = amalgam_from_json(load_json_file(file));
  rep.payload["kind"] = kind_name(spec.kind);
  rep.payload["q"] = spec.diagram.q();
  rep.payload["homotopy_rank"] = spec.diagram.homotopy_rank();
  size_t budget = resolve_budget(opt);
  // coordinate-form validation already ran in the parser; the realized
  // precheck needs the enumeration budget (use --slow or CTPHAN_BUDGET
  // for the big edge groups)
  RealizedAmalgam ra = realize(spec, budget);
  PrecheckResult pre = noncollapse_precheck(ra);
  rep.payload["noncollapse"] = pre.ok;
  if (!pre.ok) rep.payload["witness"] = pre.witness;
  if (!opt.json_out)
    std::cout << (pre.ok ? "ok: coordinates valid, detection system found\n"
                         : "invalid: " + pre.witness + "\n");
  rep.status = pre.ok ? "ok" : "invalid";
  return rep.emit(opt, pre.ok ? 0 : 1);
}

int cmd_amalgam_normalize(const Options& opt, const std::string& file) {
  Report rep;
  rep.command = "amalgam normalize";
  AmalgamSpec spec = amalgam_from_json(load_json_file(file));
  NormalizeResult res = normalize(spec);
  rep.payload["kappa"] = kappa_to_json(res.kappa);
  rep.payload["normal_form"] = amalgam_to_json(res.normal_form);
  rep.payload["witness"] = witness_to_json(spec, res.witness);
  if (!opt.json_out) {
    std::cout << "kappa:";
    if (res.kappa.entries.empty()) std::cout << " (tree: trivial class)";
    for (const auto& e : res.kappa.entries)
      std::cout << "  {" << e.i << "," << e.j << "}: r=" << e.c.r << " s=" << e.c.s;
    std::cout << "\n";
  }
  return rep.emit(opt, 0);
}

int cmd_amalgam_iso(const Options& opt, const std::string& fa, const std::string& fb) {
  Report rep;
  rep.command = "amalgam iso";
  AmalgamSpec a = amalgam_from_json(load_json_file(fa));
  AmalgamSpec b = amalgam_from_json(load_json_file(fb));
  IsoResult r = iso_decide(a, b);
  rep.status = r.isomorphic ? "isomorphic" : "distinct";
  rep.payload["isomorphic"] = r.isomorphic;
  rep.payload["kappa_a"] = kappa_to_json(r.kappa_a);
  rep.payload["kappa_b"] = kappa_to_json(r.kappa_b);
  if (!opt.json_out) std::cout << rep.status << "\n";
  return rep.emit(opt, r.isomorphic ? 0 : 1);
}

int cmd_amalgam_classify(const Options& opt, const std::string& file, const std::string& kind_s) {
  Report rep;
  rep.command = "amalgam classify";
  Kind kind = kind_from_name(kind_s);
  Diagram d = diagram_from_json(load_json_file(file), true);
  auto reps = classify(d, kind);
  rep.payload["count"] = reps.size();
  rep.payload["closed_form_count"] = classify_count(d, kind);
  json arr = json::array();
  for (const auto& r : reps) arr.push_back(kappa_to_json(r.kappa));
  rep.payload["classes"] = arr;
  if (!opt.json_out) {
    std::cout << reps.size() << " isomorphism classes\n";
    for (const auto& r : reps) {
      std::cout << "  kappa:";
      if (r.kappa.entries.empty()) std::cout << " (trivial)";
      for (const auto& e : r.kappa.entries)
        std::cout << "  {" << e.i << "," << e.j << "}: r=" << e.c.r << " s=" << e.c.s;
      std::cout << "\n";
    }
  }
  return rep.emit(opt, 0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curtis-Tits and Phan amalgams over small finite fields"};
  app.require_subcommand(1);
  Options opt;
  app.add_flag("--json", opt.json_out, "machine-readable JSON report");
  app.add_flag("--slow", opt.slow, "allow enumerations above 10^6 elements");
  app.add_flag("--timing", opt.timing, "include timing in reports (non-canonical output)");
  app.add_option("--threads", opt.threads, "internal parallelism limit");

  auto* pair = app.add_subcommand("pair", "standard pair operations");
  pair->fallthrough();
  auto* pair_verify = pair->add_subcommand("verify", "build a standard pair and verify it");
  pair_verify->fallthrough();
  std::string pv_kind = "ct", pv_type = "A2";
  int pv_q = 2;
  pair_verify->add_option("--kind", pv_kind, "ct | phan")->required();
  pair_verify->add_option("--type", pv_type, "A1A1 | A2 | C2 | 2A3")->required();
  pair_verify->add_option("--q", pv_q, "base prime power")->required();

  auto* group = app.add_subcommand("group", "classical group helpers");
  group->fallthrough();
  auto* group_order = group->add_subcommand("order", "textbook order of a classical group");
  group_order->fallthrough();
  std::string go_type = "SL2";
  int go_q = 2;
  group_order->add_option("--type", go_type, "SL2 | SL3 | Sp4 | SU2 | SU3 | SU4")->required();
  group_order->add_option("--q", go_q, "prime power")->required();

  auto* amalgam = app.add_subcommand("amalgam", "amalgam operations");
  amalgam->fallthrough();
  auto* am_check = amalgam->add_subcommand("check", "validate a spec and run the precheck");
  am_check->fallthrough();
  std::string check_file;
  am_check->add_option("file", check_file, "amalgam JSON file")->required();
  auto* am_norm = amalgam->add_subcommand("normalize", "normal form, kappa and witness");
  am_norm->fallthrough();
  std::string norm_file;
  am_norm->add_option("file", norm_file, "amalgam JSON file")->required();
  auto* am_iso = amalgam->add_subcommand("iso", "decide isomorphism of two amalgams");
  am_iso->fallthrough();
  std::string iso_a, iso_b;
  am_iso->add_option("a", iso_a, "first amalgam JSON file")->required();
  am_iso->add_option("b", iso_b, "second amalgam JSON file")->required();
  auto* am_cls = amalgam->add_subcommand("classify", "enumerate isomorphism classes");
  am_cls->fallthrough();
  std::string cls_diagram, cls_kind = "ct";
  am_cls->add_option("--diagram", cls_diagram, "diagram JSON file")->required();
  am_cls->add_option("--kind", cls_kind, "ct | phan")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (pair_verify->parsed()) return cmd_pair_verify(opt, pv_kind, pv_type, pv_q);
    if (group_order->parsed()) return cmd_group_order(opt, go_type, go_q);
    if (am_check->parsed()) return cmd_amalgam_check(opt, check_file);
    if (am_norm->parsed()) return cmd_amalgam_normalize(opt, norm_file);
    if (am_iso->parsed()) return cmd_amalgam_iso(opt, iso_a, iso_b);
    if (am_cls->parsed()) return cmd_amalgam_classify(opt, cls_diagram, cls_kind);
    std::cerr << "missing subcommand\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return 3;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const AmalgamError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return 1;
  } catch (const DiagramError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return 1;
  } catch (const FieldError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
