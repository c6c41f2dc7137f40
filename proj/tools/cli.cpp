#include "cli.hpp"

#include "manifest.hpp"
#include "ucodes/abelian.hpp"
#include "ucodes/certify.hpp"
#include "ucodes/constructions.hpp"
#include "ucodes/expanders.hpp"
#include "ucodes/groups.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

namespace ucodes::cli {
namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Result of a command: JSON body plus whether verification held.
struct Outcome {
  json body;
  bool ok = true;
};

struct Context {
  RunManifest manifest;
  unsigned threads = 1;
  std::uint64_t budget = std::uint64_t{1} << 24;
  std::size_t cap = FiniteGroup::kDefaultCap;

  std::string read(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    std::string bytes = ss.str();
    manifest.inputs.push_back({path, sha256_hex(bytes)});
    return bytes;
  }

  json load(const std::string& path) {
    const std::string bytes = read(path);
    try {
      return json::parse(bytes);
    } catch (const json::parse_error& e) {
      throw UsageError(path + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
  }
};

std::uint64_t env_number(const char* name, std::uint64_t fallback) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v, &end, 10);
  if (*end != '\0' || x == 0) throw UsageError(std::string(name) + " must be a positive integer");
  return x;
}

Rational rational_arg(const std::string& text, const char* what) {
  try {
    return parse_rational(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
}

json lengths_json(const LengthStats& s) { return {{"max", s.max_len}, {"avg", to_string(s.avg_len)}}; }

json block_json(const BlockCertificate& c) {
  return {{"value", to_string(c.value)},
          {"worst_syndrome", c.worst_syndrome},
          {"max_miss_fraction", to_string(c.max_miss_fraction)}};
}

// ---------------------------------------------------------------------------
// Group specs: {"kind":"zmr","m":..,"r":..} or {"moduli":[..]}, {"kind":"perm","degree":n},
// {"kind":"product","factors":[a,b]}; "generators" lists the images of x_1..x_k
// as coordinate vectors (image lists for permutations).

FiniteGroup group_from_spec(const json& j, std::size_t cap) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "zmr") {
    if (j.contains("moduli")) return FiniteGroup::abelian(j.at("moduli").get<std::vector<int>>(), cap);
    return FiniteGroup::cyclic_power(j.at("m").get<int>(), j.at("r").get<int>(), cap);
  }
  if (kind == "perm") {
    if (j.contains("symmetric")) return FiniteGroup::symmetric(j.at("symmetric").get<int>(), cap);
    return FiniteGroup::permutation(j.at("degree").get<int>(),
                                    j.at("generators").get<std::vector<std::vector<int>>>(), cap);
  }
  if (kind == "product") {
    const auto& f = j.at("factors");
    if (!f.is_array() || f.size() < 2) throw ValidationError("product needs at least two factors");
    FiniteGroup g = group_from_spec(f[0], cap);
    for (std::size_t i = 1; i < f.size(); ++i) g = FiniteGroup::direct_product(g, group_from_spec(f[i], cap), cap);
    return g;
  }
  throw ValidationError("unknown group kind \"" + kind + "\"");
}

GroupBackend backend_from_spec(const json& j, std::size_t cap) {
  auto g = std::make_shared<const FiniteGroup>(group_from_spec(j, cap));
  GroupBackend b{g, {}};
  if (j.contains("generators")) {
    for (const auto& c : j.at("generators")) b.generators.push_back(g->at(c.get<std::vector<int>>()));
  } else {
    b.generators = g->defining_generators();
  }
  return b;
}

std::vector<GroupBackend> backends(Context& ctx, const std::vector<std::string>& paths) {
  std::vector<GroupBackend> out;
  for (const auto& p : paths) out.push_back(backend_from_spec(ctx.load(p), ctx.cap));
  return out;
}

// ---------------------------------------------------------------------------

struct ConstructArgs {
  std::string kind;
  int k = 3;
  int c = 0;  // 0: module default
  int t = 2;
  int steps = 3;
  int groups = 0;
  int max_resamples = 0;
  std::string in;
  std::string delta_in;
};

Outcome construct(Context& ctx, const ConstructArgs& a) {
  const std::uint64_t seed = ctx.manifest.seed;
  CertifyOptions copts;
  copts.threads = ctx.threads;
  copts.seed = seed;
  Outcome o;
  json params;
  json cert;
  std::optional<WordSet> words;

  if (a.kind == "hadamard") {
    words = hadamard_code(a.k);
    params = {{"k", a.k}};
    cert["syndrome"] = to_json(certified_delta(*words, copts));
    cert["matching"] = to_json(hadamard_matching_certificate(*words, 4096, seed));
  } else if (a.kind == "syndrome") {
    SyndromeParams p;
    p.k = a.k;
    p.seed = seed;
    p.certify = copts;
    if (a.c > 0) p.reps_per_level = a.c;
    if (a.max_resamples > 0) p.max_resamples = a.max_resamples;
    auto code = random_syndrome_code(p);
    params = {{"k", p.k}, {"c", p.reps_per_level}, {"levels", ceil_log2(p.k)}, {"max_resamples", p.max_resamples}};
    cert = to_json(code.certificate);
    cert["threshold"] = to_string(code.threshold);
    cert["attempts"] = code.attempts;
    words = std::move(code.words);
  } else if (a.kind == "amplify") {
    if (a.in.empty()) throw UsageError("construct amplify needs --in");
    const WordSet input = word_set_from_json(ctx.load(a.in));
    AmplifyParams p;
    p.seed = seed;
    if (a.c > 0) p.groups = a.c;
    if (a.max_resamples > 0) p.max_resamples = a.max_resamples;
    p.delta_in = a.delta_in.empty() ? certified_delta(input, copts).delta_lower
                                    : rational_arg(a.delta_in, "--delta-in");
    auto code = amplify(input, p);
    params = {{"delta_in", to_string(p.delta_in)}, {"c_amp", p.groups}, {"max_resamples", p.max_resamples}};
    cert = block_json(code.certificate);
    cert["d"] = code.d;
    cert["attempts"] = code.attempts;
    cert["input"] = to_json(code.input_certificate);
    words = std::move(code.words);
  } else if (a.kind == "compose") {
    ComposeParams p;
    p.t = a.t;
    p.seed = seed;
    if (a.c > 0) p.reps_per_level = a.c;
    if (a.groups > 0) p.groups = a.groups;
    if (a.max_resamples > 0) p.max_resamples = a.max_resamples;
    auto code = iterative_compose(a.k, p);
    params = {{"k", a.k}, {"t", p.t}, {"c", p.reps_per_level}, {"groups", p.groups}};
    cert = {{"value", to_string(code.certified)},
            {"target", code.target},
            {"subset_sizes", code.subset_sizes},
            {"predicted_size", code.predicted_size},
            {"attempts", code.attempts}};
    words = std::move(code.words);
  } else if (a.kind == "spielman") {
    SpielmanParams p;
    p.k0 = a.k;
    p.steps = a.steps;
    p.seed = seed;
    auto chain = spielman_chain(p);
    params = {{"k0", p.k0},
              {"steps", p.steps},
              {"d", p.d},
              {"alpha", to_string(p.alpha)},
              {"epsilon", to_string(p.epsilon)},
              {"s_max", p.s_max}};
    json records = json::array();
    for (const auto& r : chain.records) {
      records.push_back({{"rank", r.rank},
                         {"size", r.size},
                         {"lengths", lengths_json(r.lengths)},
                         {"graph2k", to_json(r.cert2k)},
                         {"graph4k", to_json(r.cert4k)},
                         {"graph_attempts", r.graph_attempts},
                         {"certificate", to_json(r.certificate)},
                         {"f2_delta", to_string(r.f2_delta)},
                         {"f2_rank", r.f2_rank}});
    }
    json graphs = json::array();
    for (const auto& g : chain.graphs) graphs.push_back(to_json(g));
    cert = {{"steps", records}, {"graphs", graphs}};
    words = std::move(chain.words);
  } else {
    throw UsageError("unknown construction " + a.kind);
  }

  o.body = to_json(*words);
  o.body["params"] = params;
  o.body["certificate"] = cert;
  return o;
}

Outcome certify(Context& ctx, const std::string& in, int max_k, std::uint64_t samples,
                const std::vector<std::string>& groups, const std::string& target) {
  const WordSet a = word_set_from_json(ctx.load(in));
  CertifyOptions opts;
  opts.exhaustive_max_k = max_k;
  opts.samples = samples;
  opts.seed = ctx.manifest.seed;
  opts.threads = ctx.threads;
  auto r = report(a, backends(ctx, groups), opts);
  Outcome o{to_json(r), true};
  if (!target.empty()) {
    const Rational t = rational_arg(target, "--target");
    o.ok = r.certified >= t;
    o.body["target"] = to_string(t);
    o.body["meets_target"] = o.ok;
  }
  return o;
}

json bridge_json(const WordSet& a, int p, std::uint64_t budget, Outcome& o) {
  const int k = a.rank();
  IntMatrix gen = abelianized_matrix(a);
  for (std::size_t r = 0; r < gen.rows(); ++r) {
    for (std::size_t c = 0; c < gen.cols(); ++c) {
      BigInt v = gen(r, c) % p;
      if (v < 0) v += p;
      gen(r, c) = v;
    }
  }
  const auto dist = distance_exact(gen, p, budget);
  json out = {{"p", p},
              {"n", a.size()},
              {"k", k},
              {"generator", to_json(gen)},
              {"dimension", rank_mod_p(gen, p)},
              {"rate", to_string(Rational(static_cast<std::int64_t>(rank_mod_p(gen, p)),
                                          static_cast<std::int64_t>(a.size())))},
              {"distance", dist.distance},
              {"distance_exact", dist.exact},
              {"relative_distance", to_string(Rational(dist.distance, static_cast<std::int64_t>(a.size())))}};
  if (dist.exact) {
    const Rational delta = exact_delta_vector_space(a, p, k, budget);
    const bool same = delta == Rational(dist.distance, static_cast<std::int64_t>(a.size()));
    out["delta"] = to_string(delta);
    out["identity_holds"] = same;
    o.ok = o.ok && same;
  }
  return out;
}

Outcome bridge(Context& ctx, const std::string& in, int p) {
  if (!is_prime(p)) throw UsageError("--p must be prime");
  const WordSet a = word_set_from_json(ctx.load(in));
  Outcome o;
  o.body = bridge_json(a, p, ctx.budget, o);
  return o;
}

Outcome full_report(Context& ctx, const std::string& in, const std::vector<std::string>& groups,
                    const std::vector<int>& primes, int max_k) {
  const WordSet a = word_set_from_json(ctx.load(in));
  CertifyOptions opts;
  opts.exhaustive_max_k = max_k;
  opts.seed = ctx.manifest.seed;
  opts.threads = ctx.threads;
  auto r = report(a, backends(ctx, groups), opts);
  Outcome o{to_json(r), true};
  // Average reduced length is at least δk for any certified δ.
  const bool length_ok = r.lengths.avg_len >= r.certified * Rational(a.rank());
  o.body["length_bound"] = {{"avg_len", to_string(r.lengths.avg_len)},
                            {"bound", to_string(r.certified * Rational(a.rank()))},
                            {"holds", length_ok}};
  o.ok = length_ok;
  json br = json::array();
  for (int p : primes) {
    if (!is_prime(p)) throw UsageError("--primes must list primes");
    br.push_back(bridge_json(a, p, ctx.budget, o));
  }
  o.body["bridge"] = br;
  return o;
}

// ---------------------------------------------------------------------------

Outcome groups_delta(Context& ctx, const std::string& in, const std::string& group) {
  const WordSet a = word_set_from_json(ctx.load(in));
  const auto b = backend_from_spec(ctx.load(group), ctx.cap);
  if (b.rank() != a.rank()) {
    throw ValidationError("group spec has " + std::to_string(b.rank()) + " generators, word set has rank " +
                          std::to_string(a.rank()));
  }
  const Rational d = exact_delta(a, b);
  return {{{"group", b.group->name()},
           {"order", b.group->order()},
           {"generates", b.generates()},
           {"delta", to_string(d)}},
          true};
}

Outcome groups_lattice(Context& ctx, const std::string& group, bool list) {
  const auto b = backend_from_spec(ctx.load(group), ctx.cap);
  const auto lat = subgroup_lattice(*b.group, ctx.cap);
  json maximal = json::array();
  for (std::size_t i : lat.maximal) {
    json m = {{"order", lat.order(i)}, {"index", lat.index(i)}};
    if (list) {
      json els = json::array();
      for (Element e : lat.subgroups[i].elements()) els.push_back(b.group->describe(e));
      m["elements"] = els;
    }
    maximal.push_back(m);
  }
  json orders = json::array();
  for (std::size_t i = 0; i < lat.subgroups.size(); ++i) orders.push_back(lat.order(i));
  return {{{"group", b.group->name()},
           {"order", b.group->order()},
           {"subgroups", lat.subgroups.size()},
           {"subgroup_orders", orders},
           {"maximal", maximal},
           {"solvable", is_solvable(*b.group)}},
          true};
}

Outcome groups_pmsg(Context& ctx, const std::string& e_prime, const std::string& delta, int k,
                    const std::string& group, int max_resamples) {
  PMSGParams p{rational_arg(e_prime, "--e-prime"), rational_arg(delta, "--delta"), k};
  Outcome o;
  if (!group.empty()) {
    const auto b = backend_from_spec(ctx.load(group), ctx.cap);
    p.k = b.rank();
    const auto bound = pmsg_sample_size(p);
    o.body = {{"n", bound.n}, {"k", p.k}};
    try {
      auto code = solvable_random_code(*b.group, p, ctx.manifest.seed, max_resamples);
      json els = json::array();
      for (Element e : code.elements) els.push_back(b.group->describe(e));
      o.body["code"] = {{"group", b.group->name()},
                        {"elements", els},
                        {"delta", to_string(code.delta)},
                        {"attempts", code.attempts}};
    } catch (const CertificationFailure& e) {
      o.body["code"] = {{"group", b.group->name()}, {"error", e.what()}};
      o.ok = false;
    }
  }
  const auto bound = pmsg_sample_size(p);
  o.body["n"] = bound.n;
  o.body["k"] = p.k;
  o.body["denominator"] = bound.denominator;
  o.body["proof_constant"] = bound.proof_constant;
  o.body["ratio"] = static_cast<double>(bound.n) / p.k;
  o.body["stated_envelope"] = bound.stated_envelope;
  return o;
}

// ---------------------------------------------------------------------------

std::vector<std::int64_t> prime_list(const std::vector<int>& primes) {
  std::vector<std::int64_t> out;
  for (int p : primes) {
    if (!is_prime(p)) throw UsageError("--primes must list primes");
    out.push_back(p);
  }
  return out;
}

Outcome abelian_build(Context& ctx, const std::string& graph, const std::string& alpha,
                      const std::vector<int>& primes) {
  const auto g = graph_from_json(ctx.load(graph));
  const Rational a = rational_arg(alpha, "--alpha");
  auto code = build_abelian_code(g, a, prime_list(primes), ctx.budget);
  return {{{"graph", to_json(g)},
           {"alpha", to_string(a)},
           {"parity", to_json(parity_matrix(g))},
           {"encoder", to_json(code.encoder)},
           {"report", to_json(code.report)}},
          code.report.pass};
}

Outcome abelian_verify(Context& ctx, const std::string& in, const std::vector<int>& primes) {
  const json j = ctx.load(in);
  const auto g = graph_from_json(j.at("graph"));
  const IntMatrix enc = matrix_from_json(j.at("encoder"));
  const Rational alpha = parse_rational(j.at("alpha").get<std::string>());
  const IntMatrix pi = parity_matrix(g);
  if (enc.rows() != pi.cols()) throw ValidationError("encoder rows do not match the left side of the graph");
  Outcome o;
  const bool in_kernel = (pi * enc).is_zero();
  const bool rank_bound = enc.cols() + static_cast<std::size_t>(g.right_size()) >= enc.rows();
  const bool full_rank = rank_rational(enc) == enc.cols();
  o.ok = in_kernel && rank_bound && full_rank;
  json checks = json::array();
  for (std::int64_t p : prime_list(primes)) {
    const bool indep = mod_p_independence(enc, p);
    const auto dist = distance_exact(enc, p, ctx.budget);
    const bool far = Rational(dist.distance) >= alpha * Rational(g.left_size());
    o.ok = o.ok && indep && (!dist.exact || far);
    checks.push_back({{"p", p},
                      {"independent", indep},
                      {"distance", dist.distance},
                      {"distance_exact", dist.exact},
                      {"meets_alpha_n", far}});
  }
  o.body = {{"n", enc.rows()},     {"k", enc.cols()},    {"in_kernel", in_kernel}, {"rank_bound", rank_bound},
            {"full_rank", full_rank}, {"primes", checks}, {"pass", o.ok}};
  return o;
}

Outcome abelian_distance(Context& ctx, const std::string& in, int p) {
  if (!is_prime(p)) throw UsageError("--p must be prime");
  json j = ctx.load(in);
  if (j.contains("encoder")) j = j.at("encoder");
  const auto dist = distance_exact(matrix_from_json(j), p, ctx.budget, std::uint64_t{1} << 20, ctx.manifest.seed);
  return {{{"p", p}, {"distance", dist.distance}, {"exact", dist.exact}, {"messages", dist.messages}}, true};
}

Outcome expander_sample(Context& ctx, int n, int m, int d, bool search, const std::string& alpha,
                        const std::string& eps, int s_max) {
  if (!search) return {to_json(sample_left_regular(n, m, d, ctx.manifest.seed)), true};
  const Rational a = rational_arg(alpha, "--alpha");
  const Rational e = rational_arg(eps, "--epsilon");
  auto found = search_verified_graph(n, m, d, a, e, s_max, ctx.manifest.seed);
  if (!found) {
    return {{{"error", "no graph passed exhaustive verification"}}, false};
  }
  json body = to_json(found->graph);
  body["certificate"] = to_json(found->cert);
  body["restarts"] = found->restarts;
  body["redraws"] = found->redraws;
  return {body, true};
}

Outcome expander_verify(Context& ctx, const std::string& in, const std::string& alpha, const std::string& eps,
                        int s_max) {
  const auto g = graph_from_json(ctx.load(in));
  const auto cert = verify_unique_neighbors(g, rational_arg(alpha, "--alpha"), rational_arg(eps, "--epsilon"),
                                            s_max, ctx.budget, 200000, ctx.manifest.seed);
  return {to_json(cert), cert.pass};
}

// Options of every parsed (sub)command, with defaults, keyed by long name.
void collect_params(const CLI::App* app, json& out) {
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_lnames().empty() && opt->get_name().empty()) continue;
    const std::string name = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
    if (name == "help" || name == "out") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      out[name] = res.size() == 1 ? json(res.front()) : json(res);
    } else if (!opt->get_default_str().empty()) {
      out[name] = opt->get_default_str();
    }
  }
  for (const CLI::App* sub : app->get_subcommands()) {
    json inner = json::object();
    collect_params(sub, inner);
    out[sub->get_name()] = inner;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  CLI::App app{"Universal test subsets in free groups: construction and verification", "ucodes"};
  app.fallthrough();
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out_path;
  app.add_option("--seed", seed, "seed for every random stream")->capture_default_str();
  app.add_option("--threads", threads, "worker threads for certificates")->capture_default_str()->check(
      CLI::Range(1u, 256u));
  app.add_option("--out", out_path, "write JSON here instead of stdout");

  ConstructArgs ca;
  auto* construct_cmd = app.add_subcommand("construct", "build a test subset");
  construct_cmd->add_option("kind", ca.kind)
      ->required()
      ->check(CLI::IsMember({"hadamard", "syndrome", "amplify", "compose", "spielman"}));
  construct_cmd->add_option("--k", ca.k, "rank (base rank k0 for spielman)")->capture_default_str();
  construct_cmd->add_option("--c", ca.c, "repetitions per level (syndrome, compose) or c_amp (amplify)");
  construct_cmd->add_option("--t", ca.t, "composition rounds")->capture_default_str();
  construct_cmd->add_option("--steps", ca.steps, "doubling steps")->capture_default_str();
  construct_cmd->add_option("--groups", ca.groups, "block groups per level (compose)");
  construct_cmd->add_option("--max-resamples", ca.max_resamples);
  construct_cmd->add_option("--in", ca.in, "input word set (amplify)");
  construct_cmd->add_option("--delta-in", ca.delta_in, "certified input density (amplify)");

  std::string in;
  int max_k = 24;
  std::uint64_t samples = 1 << 16;
  std::vector<std::string> group_files;
  std::string target;
  auto* certify_cmd = app.add_subcommand("certify", "certificates and exact quotients for a word set");
  certify_cmd->add_option("--in", in)->required();
  certify_cmd->add_option("--exhaustive-max-k", max_k)->capture_default_str();
  certify_cmd->add_option("--samples", samples, "syndromes drawn above the exhaustive cap")->capture_default_str();
  certify_cmd->add_option("--group", group_files, "group spec JSON to evaluate in (repeatable)");
  certify_cmd->add_option("--target", target, "exit 1 when the certified bound is below this");

  std::string group_file;
  auto* groups_cmd = app.add_subcommand("groups", "finite group backends");
  groups_cmd->require_subcommand(1);
  auto* delta_cmd = groups_cmd->add_subcommand("delta", "exact detection probability");
  delta_cmd->add_option("--in", in)->required();
  delta_cmd->add_option("--group", group_file)->required();
  bool list = false;
  auto* lattice_cmd = groups_cmd->add_subcommand("lattice", "subgroup lattice");
  lattice_cmd->add_option("--group", group_file)->required();
  lattice_cmd->add_flag("--list", list, "print elements of maximal subgroups");
  std::string e_prime = "17/4";
  std::string delta = "1/10";
  int k = 10;
  int max_resamples = 20;
  auto* pmsg_cmd = groups_cmd->add_subcommand("pmsg", "sample-size bound and random codes in solvable groups");
  pmsg_cmd->add_option("--e-prime", e_prime)->capture_default_str();
  pmsg_cmd->add_option("--delta", delta)->capture_default_str();
  pmsg_cmd->add_option("--k", k)->capture_default_str();
  pmsg_cmd->add_option("--group", group_file, "sample a code in this group");
  pmsg_cmd->add_option("--max-resamples", max_resamples)->capture_default_str();

  std::string graph_file;
  std::string alpha = "1/8";
  std::vector<int> primes{2, 3, 5, 7, 11};
  int p = 2;
  auto* abelian_cmd = app.add_subcommand("abelian", "integer kernel codes of bipartite graphs");
  abelian_cmd->require_subcommand(1);
  auto* build_cmd = abelian_cmd->add_subcommand("build", "kernel basis and per-prime checks");
  build_cmd->add_option("--graph", graph_file)->required();
  build_cmd->add_option("--alpha", alpha)->capture_default_str();
  build_cmd->add_option("--primes", primes)->delimiter(',')->capture_default_str();
  auto* averify_cmd = abelian_cmd->add_subcommand("verify", "recheck a built code");
  averify_cmd->add_option("--in", in)->required();
  averify_cmd->add_option("--primes", primes)->delimiter(',')->capture_default_str();
  auto* distance_cmd = abelian_cmd->add_subcommand("distance", "minimum distance of a generator matrix mod p");
  distance_cmd->add_option("--in", in)->required();
  distance_cmd->add_option("--p", p)->capture_default_str();

  int n = 16, m = 8, d = 3, s_max = 4;
  std::string eps = "9/20";
  bool search = false;
  auto* expander_cmd = app.add_subcommand("expander", "bipartite graphs");
  expander_cmd->require_subcommand(1);
  auto* sample_cmd = expander_cmd->add_subcommand("sample", "left-regular random graph");
  sample_cmd->add_option("--n", n)->capture_default_str();
  sample_cmd->add_option("--m", m)->capture_default_str();
  sample_cmd->add_option("--d", d)->capture_default_str();
  sample_cmd->add_flag("--search", search, "redraw witness rows until verification passes");
  sample_cmd->add_option("--alpha", alpha)->capture_default_str();
  sample_cmd->add_option("--epsilon", eps)->capture_default_str();
  sample_cmd->add_option("--s-max", s_max)->capture_default_str();
  auto* everify_cmd = expander_cmd->add_subcommand("verify", "unique-neighbor verification");
  everify_cmd->add_option("--in", in)->required();
  everify_cmd->add_option("--alpha", alpha)->capture_default_str();
  everify_cmd->add_option("--epsilon", eps)->capture_default_str();
  everify_cmd->add_option("--s-max", s_max)->capture_default_str();

  auto* bridge_cmd = app.add_subcommand("bridge", "abelianize to a linear code over F_p");
  bridge_cmd->add_option("--in", in)->required();
  bridge_cmd->add_option("--p", p)->capture_default_str();

  std::vector<int> report_primes{2};
  auto* report_cmd = app.add_subcommand("report", "certificates, bridge and length bound");
  report_cmd->add_option("--in", in)->required();
  report_cmd->add_option("--group", group_files, "group spec JSON (repeatable)");
  report_cmd->add_option("--primes", report_primes)->delimiter(',')->capture_default_str();
  report_cmd->add_option("--exhaustive-max-k", max_k)->capture_default_str();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run with --help for options\n";
    return kUsage;
  }

  Context ctx;
  ctx.manifest.command.assign(args.begin() + (args.empty() ? 0 : 1), args.end());
  ctx.manifest.seed = seed;
  ctx.threads = threads;
  collect_params(&app, ctx.manifest.params);

  Outcome o;
  try {
    ctx.budget = env_number("UCODES_ENUM_BUDGET", ctx.budget);
    ctx.cap = env_number("UCODES_GROUP_CAP", ctx.cap);
    if (app.got_subcommand(construct_cmd)) {
      o = construct(ctx, ca);
    } else if (app.got_subcommand(certify_cmd)) {
      o = certify(ctx, in, max_k, samples, group_files, target);
    } else if (groups_cmd->got_subcommand(delta_cmd)) {
      o = groups_delta(ctx, in, group_file);
    } else if (groups_cmd->got_subcommand(lattice_cmd)) {
      o = groups_lattice(ctx, group_file, list);
    } else if (groups_cmd->got_subcommand(pmsg_cmd)) {
      o = groups_pmsg(ctx, e_prime, delta, k, group_file, max_resamples);
    } else if (abelian_cmd->got_subcommand(build_cmd)) {
      o = abelian_build(ctx, graph_file, alpha, primes);
    } else if (abelian_cmd->got_subcommand(averify_cmd)) {
      o = abelian_verify(ctx, in, primes);
    } else if (abelian_cmd->got_subcommand(distance_cmd)) {
      o = abelian_distance(ctx, in, p);
    } else if (expander_cmd->got_subcommand(sample_cmd)) {
      o = expander_sample(ctx, n, m, d, search, alpha, eps, s_max);
    } else if (expander_cmd->got_subcommand(everify_cmd)) {
      o = expander_verify(ctx, in, alpha, eps, s_max);
    } else if (app.got_subcommand(bridge_cmd)) {
      o = bridge(ctx, in, p);
    } else if (app.got_subcommand(report_cmd)) {
      o = full_report(ctx, in, group_files, report_primes, max_k);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    err << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const CertificationFailure& e) {
    err << "verification failed: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kVerificationFailed;
  }

  o.body["manifest"] = to_json(ctx.manifest);
  o.body["manifest_digest"] = manifest_digest(ctx.manifest);
  const std::string text = o.body.dump() + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      err << "cannot write " << out_path << "\n";
      return kUsage;
    }
    f << text;
    f.close();
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_sidecar(out_path, ctx.manifest, text, wall);
  }
  if (!o.ok) err << "verification failed\n";
  return o.ok ? kOk : kVerificationFailed;
}

}  // namespace ucodes::cli
