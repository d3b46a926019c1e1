#include <CLI11.hpp>

#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "snacert/construct.hpp"
#include "snacert/document.hpp"
#include "snacert/error.hpp"
#include "snacert/interval.hpp"
#include "snacert/json_util.hpp"
#include "snacert/rng.hpp"

using namespace snacert;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kInput = 2, kExhausted = 3 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

SpacePtr load_space(const std::string& path) { return share(parse_space(read_file(path))); }

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

int verdict_exit(const json& doc) { return doc.at("verdict") == "valid" ? kOk : kInvalid; }

// {"values": [...]} or a bare array, one value per point.
RationalVector load_values(const std::string& path, std::string_view key) {
  const json j = json_util::parse_document(read_file(path));
  return json_util::to_vector(j.is_object() ? j.at(std::string(key)) : j);
}

json witness_pairs_json(const LipNorm& n) {
  json out = json::array();
  for (const auto& w : n.witnesses) out.push_back({{"pair", {w.x, w.y}}, {"quotient", w.quotient.str()}});
  return out;
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t i) { return seed * 1'000'003ULL + i; }

RandomMethod method_for(std::uint64_t s) { return s % 2 ? RandomMethod::euclidean : RandomMethod::range; }

struct TrialConfig {
  std::string op;
  std::size_t count = 100;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::size_t points = 0;
  std::size_t k = 0;
};

// One trial; returns success.
bool run_trial(const TrialConfig& c, std::size_t i) {
  const std::uint64_t s = trial_seed(c.seed, i);
  if (c.op == "four-point") {
    return four_point_basis(share(random_space(4, s, method_for(s)))).certificate.valid;
  }
  if (c.op == "pipeline") {
    const std::size_t k = c.k ? c.k : 2;
    const std::size_t lo = std::size_t{1} << k;
    const std::size_t n = c.points ? c.points : lo + s % (lo + 1);
    return theorem_pipeline(share(random_space(n, s, method_for(s))), k).success();
  }
  if (c.op == "direct-search") {
    const std::size_t k = c.k ? c.k : 3;
    const std::size_t n = c.points ? c.points : std::size_t{1} << k;
    const auto r = direct_search_l1(share(random_space(n, s, method_for(s))), k);
    return r.certificate && r.certificate->valid;
  }
  if (c.op == "free-duality") {
    const std::size_t n = c.points ? c.points : 2 + s % 5;
    const auto space = share(random_space(n, s, method_for(s)));
    Rng rng(s);
    FreeVector v = FreeVector::zero(space);
    for (auto& x : v.coeffs) x = Rational(rng.uniform(-12, 12), rng.uniform(1, 6));
    return free_norm_primal(v).value == free_norm_dual(v).value;
  }
  if (c.op == "c0") {
    const std::size_t n = c.points ? c.points : 1 + s % 10;
    Rng rng(s);
    RationalVector a(n);
    for (auto& x : a) x = Rational(rng.uniform(-20, 20), rng.uniform(1, 6));
    return pwl_norm(c0_block(a)).norm == linf_norm(a);
  }
  if (c.op == "hybrid") {
    const HybridSpace h = random_hybrid(s);
    const PwlFunctional f = random_pwl(s + 1);
    return cert::hybrid_document(h, f).at("verdict") == "valid";
  }
  throw InputError("unknown trial op \"" + c.op + "\"");
}

int run_trials(const TrialConfig& c) {
  std::vector<char> ok(c.count, 0);
  std::vector<std::string> errors(c.count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < c.count; i = next++) {
      try {
        ok[i] = run_trial(c, i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < std::max<std::size_t>(1, c.jobs); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  json failures = json::array();
  std::size_t successes = 0;
  for (std::size_t i = 0; i < c.count; ++i) {
    if (ok[i]) {
      ++successes;
    } else {
      json f = {{"trial", i}, {"seed", trial_seed(c.seed, i)}};
      if (!errors[i].empty()) f["error"] = errors[i];
      failures.push_back(std::move(f));
    }
  }
  emit({{"op", c.op},
        {"count", c.count},
        {"seed", c.seed},
        {"successes", successes},
        {"summary", std::to_string(successes) + "/" + std::to_string(c.count) + " valid"},
        {"failures", failures}});
  return successes == c.count ? kOk : kInvalid;
}

int run(int argc, char** argv) {
  CLI::App app{"Certified isometric l1 and l_inf subspaces of finite Lipschitz-free and Lip_0 spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cert::kToolVersion));

  std::string space_path, aux_path;
  std::size_t k = 0, m = 0, d = 0, n_blocks = 0, budget = 1'000'000;
  std::string kind;
  bool lp_trace = false;
  TrialConfig trials;
  std::uint64_t seed = 0;
  std::size_t count = 20;

  auto* validate_cmd = app.add_subcommand("validate", "check metric axioms of a space file");
  validate_cmd->add_option("space", space_path)->required();
  auto* norm = app.add_subcommand("norm", "Lipschitz norm and attaining pairs of a functional");
  norm->add_option("space", space_path)->required();
  norm->add_option("functional", aux_path, "JSON {\"values\": [...]} with one value per point")->required();
  auto* free = app.add_subcommand("free-norm", "Lipschitz-free norm by the transport LP and its dual");
  free->add_option("space", space_path)->required();
  free->add_option("vector", aux_path, "JSON {\"coeffs\": [...]} on points 1..n-1")->required();
  free->add_flag("--lp-trace", lp_trace, "log simplex pivots to stderr");
  auto* four = app.add_subcommand("four-point", "explicit l1^2 basis on a 4-point space");
  four->add_option("space", space_path)->required();
  auto* complement = app.add_subcommand("complement", "search for a 1-complemented l1^m spanned by molecules");
  complement->add_option("space", space_path)->required();
  complement->add_option("-m", m, "dimension")->required()->check(CLI::PositiveNumber);
  auto* pipeline = app.add_subcommand("pipeline", "l1^k in Lip_0 via a complemented l1 in the free space of 2^k points");
  pipeline->add_option("space", space_path)->required();
  pipeline->add_option("-k", k, "dimension")->required()->check(CLI::PositiveNumber);
  auto* direct = app.add_subcommand("direct-search", "witness-assignment search for l1^k in Lip_0");
  direct->add_option("space", space_path)->required();
  direct->add_option("-k", k, "dimension")->required()->check(CLI::PositiveNumber);
  direct->add_option("--budget", budget, "feasibility probe budget");
  auto* eval = app.add_subcommand("eval-embed", "evaluation functionals on the dual ball of l1^d or l_inf^d");
  eval->add_option("--kind", kind)->required()->check(CLI::IsMember({"l1", "linf"}));
  eval->add_option("-d", d)->required()->check(CLI::Range(1, 6));
  auto* c0 = app.add_subcommand("c0-demo", "c0 blocks on [0,1]: exact l_inf^N identity on random coefficients");
  c0->add_option("-N", n_blocks)->required()->check(CLI::Range(1, 64));
  c0->add_option("--seed", seed);
  c0->add_option("--count", count);
  auto* hybrid = app.add_subcommand("hybrid", "embed a functional on [0,1] into a hybrid space by the retraction");
  hybrid->add_option("hybrid", space_path)->required();
  hybrid->add_option("--embed", aux_path, "JSON {\"breakpoints\": [...], \"values\": [...]}")->required();
  auto* trial = app.add_subcommand("trials", "randomized property harness");
  trial->add_option("--op", trials.op)
      ->required()
      ->check(CLI::IsMember({"four-point", "pipeline", "direct-search", "free-duality", "c0", "hybrid"}));
  trial->add_option("--count", trials.count)->check(CLI::PositiveNumber);
  trial->add_option("--seed", trials.seed);
  trial->add_option("--jobs", trials.jobs)->check(CLI::PositiveNumber);
  trial->add_option("--points", trials.points, "space size (op default when omitted)");
  trial->add_option("-k", trials.k, "dimension (op default when omitted)");
  auto* verify_cmd = app.add_subcommand("verify", "re-derive every check of a certificate document");
  verify_cmd->add_option("certificate", space_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*validate_cmd) {
      const std::string text = read_file(space_path);
      const json doc = json_util::parse_document(text);
      if (!doc.is_object() || !doc.contains("dist")) throw InputError("space needs a \"dist\" matrix");
      const auto violations = validate(json_util::to_matrix(doc.at("dist")));
      json out = {{"valid", violations.empty()}, {"violations", json::array()}};
      for (const auto& v : violations) {
        out["violations"].push_back({{"kind", to_string(v.kind)}, {"indices", v.indices}, {"message", v.message}});
      }
      emit(out);
      return violations.empty() ? kOk : kInput;
    }
    if (*norm) {
      const auto space = load_space(space_path);
      const LipFunctional f(space, load_values(aux_path, "values"));
      const auto n = lip_norm(f);
      emit({{"norm", n.norm.str()}, {"witnesses", witness_pairs_json(n)}});
      return kOk;
    }
    if (*free) {
      const auto space = load_space(space_path);
      FreeVector v{space, load_values(aux_path, "coeffs")};
      if (v.coeffs.size() + 1 != space->size()) throw InputError("free vector needs one coefficient per non-base point");
      lp::SolveOptions opts;
      if (lp_trace) opts.trace = &std::cerr;
      const auto primal = free_norm_primal(v, opts);
      const auto dual = free_norm_dual(v, opts);
      json steps = json::array();
      for (const auto& s : primal.decomposition) steps.push_back({{"from", s.from}, {"to", s.to}, {"amount", s.amount.str()}});
      emit({{"norm", primal.value.str()},
            {"dual_norm", dual.value.str()},
            {"agree", primal.value == dual.value},
            {"decomposition", steps},
            {"dual_witness", json_util::from_vector(dual.witness.values())}});
      return primal.value == dual.value ? kOk : kInvalid;
    }
    if (*four) {
      const auto doc = cert::l1_document(four_point_basis(load_space(space_path)).certificate,
                                         {{"construction", "four-point"}});
      emit(doc);
      return verdict_exit(doc);
    }
    if (*complement) {
      const auto search = search_one_complemented(load_space(space_path), m);
      if (!search.certificate) {
        std::cerr << search.report << '\n';
        emit({{"kind", "complementation"}, {"verdict", "exhausted"}, {"report", search.report}});
        return kExhausted;
      }
      const auto doc = cert::complementation_document(*search.certificate, {{"m", m}});
      emit(doc);
      return verdict_exit(doc);
    }
    if (*pipeline) {
      const auto result = theorem_pipeline(load_space(space_path), k);
      if (!result.success()) {
        std::cerr << result.search.report << '\n';
        emit({{"kind", "pipeline"}, {"verdict", "exhausted"}, {"report", result.search.report}});
        return kExhausted;
      }
      const auto doc = cert::pipeline_document(result);
      emit(doc);
      return verdict_exit(doc);
    }
    if (*direct) {
      const auto result = direct_search_l1(load_space(space_path), k, {.probe_budget = budget});
      std::cerr << result.report << '\n';
      if (!result.certificate) {
        emit({{"kind", "l1-isometry"}, {"verdict", "exhausted"}, {"report", result.report}, {"probes", result.probes}});
        return kExhausted;
      }
      const auto doc = cert::l1_document(*result.certificate, {{"construction", "direct-search"}, {"k", k}});
      emit(doc);
      return verdict_exit(doc);
    }
    if (*eval) {
      const auto e = evaluation_embedding(kind == "l1" ? EmbedKind::l1 : EmbedKind::linf, d);
      json config = {{"construction", "evaluation"}, {"kind", kind}, {"d", d}};
      json doc = e.l1 ? cert::l1_document(*e.l1, config) : cert::linf_document(*e.linf, config);
      doc["designated_witnesses"] = e.designated_witnesses;
      emit(doc);
      return e.valid() ? kOk : kInvalid;
    }
    if (*c0) {
      Rng rng(seed);
      json rows = json::array();
      bool all = true;
      for (std::size_t t = 0; t < count; ++t) {
        RationalVector a(n_blocks);
        for (auto& x : a) x = Rational(rng.uniform(-20, 20), rng.uniform(1, 6));
        const auto f = c0_block(a);
        const auto pn = pwl_norm(f);
        const bool ok = pn.norm == linf_norm(a);
        all = all && ok;
        json pieces = json::array();
        for (const auto& p : pn.attaining) pieces.push_back({p.left.str(), p.right.str()});
        rows.push_back({{"coefficients", json_util::from_vector(a)},
                        {"norm", pn.norm.str()},
                        {"max_abs", linf_norm(a).str()},
                        {"attaining", pieces}});
      }
      emit({{"N", n_blocks}, {"seed", seed}, {"identity_holds", all}, {"trials", rows}});
      return all ? kOk : kInvalid;
    }
    if (*hybrid) {
      const HybridSpace h = parse_hybrid(read_file(space_path));
      const auto violations = hybrid_validate(h);
      if (!violations.empty()) throw InputError("invalid hybrid space: " + violations.front().message);
      const auto doc = cert::hybrid_document(h, parse_pwl(read_file(aux_path)));
      emit(doc);
      return verdict_exit(doc);
    }
    if (*trial) return run_trials(trials);
    if (*verify_cmd) {
      const auto v = cert::verify(json_util::parse_document(read_file(space_path)));
      emit(v.to_json());
      if (!v.failing_check.empty()) std::cerr << "failing check " << v.failing_check << ": " << v.detail << '\n';
      return v.valid && v.reproduced ? kOk : kInvalid;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const PreconditionError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  }
  return kInput;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 70;
  }
}
