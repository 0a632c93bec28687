#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vcdisj.hpp"

using namespace vcdisj;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_config = 2;

struct RunConfig {
  std::string subcommand;
  std::string geometry = "interval";
  std::int64_t n = 12;
  std::int64_t d = 2;
  std::uint64_t k = 60;
  double delta = 0.1;
  std::uint64_t seed = 1;
  std::size_t trials = 200;
  std::string out;
  std::string format = "csv";
  bool dump_transcript = false;
  bool all = false;
  std::string protocol;
  std::string family = "R";
  std::string instance_path;
  std::vector<std::int64_t> alice;
  std::vector<std::int64_t> bob;
  std::vector<std::uint64_t> ks = {1U << 8U, 1U << 12U, 1U << 16U, 1U << 20U};
  std::vector<std::int64_t> ms = {4, 8, 16};
};

void echo(std::ostream& os, const RunConfig& c, const std::vector<std::pair<std::string, std::string>>& extra) {
  os << "# vcdisj " << c.subcommand;
  for (const auto& [k, v] : extra) os << ' ' << k << '=' << v;
  os << '\n';
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << v;
  return os.str();
}

std::string join(const std::vector<std::int64_t>& v, char sep = ' ') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? std::string(1, sep) : "") + std::to_string(v[i]);
  return s;
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty())
    std::cout << text;
  else
    write_file_atomic(c.out, text);
}

AnyInstance load_instance(const RunConfig& c) {
  if (!c.instance_path.empty()) return read_instance_file(c.instance_path).instance;
  if (c.geometry == "interval") return build_interval_instance(c.n, c.d);
  if (c.geometry == "grid") return build_grid_instance(c.n, c.d);
  throw InvalidParameters("unknown geometry '" + c.geometry + "'");
}

GridInstance load_grid(const RunConfig& c) {
  auto inst = load_instance(c);
  if (auto* g = std::get_if<GridInstance>(&inst)) return *g;
  throw InvalidParameters("this protocol needs a grid instance (--geometry grid)");
}

/// Deterministic choice in [0, size) for draw number `i`.
std::size_t pick(std::uint64_t seed, std::uint64_t i, std::size_t size) {
  return static_cast<std::size_t>(derive_seed(seed ^ 0x5eedULL, i) % size);
}

FamilyKind family_kind(const std::string& name, Geometry g) {
  if (g == Geometry::interval) {
    if (name == "R") return FamilyKind::anchored;
    if (name == "R0") return FamilyKind::left_anchored;
    if (name == "Rm1") return FamilyKind::right_anchored;
  } else {
    if (name == "T1") return FamilyKind::slope_lines;
    if (name == "T2") return FamilyKind::vertical_lines;
  }
  throw InvalidParameters("family '" + name + "' does not exist for geometry " + to_string(g));
}

int cmd_build(const RunConfig& c) {
  const auto inst = load_instance(c);
  std::ostringstream os;
  echo(os, c, {{"geometry", c.geometry}, {"n", std::to_string(c.n)}, {"d", std::to_string(c.d)},
               {"seed", std::to_string(c.seed)}});
  write_instance(os, inst, c.seed);
  emit(c, os.str());
  return exit_ok;
}

int cmd_vcdim(const RunConfig& c) {
  const auto inst = load_instance(c);
  std::string family = c.family;
  if (std::holds_alternative<GridInstance>(inst) && family == "R") family = "T1";
  std::vector<FamilyMember> members;
  PointSet ground;
  std::int64_t m = 0;
  std::visit(
      [&](const auto& i) {
        members = enumerate_family(i, family_kind(family, i.key()->geometry));
        ground = i.ground();
        m = i.m();
      },
      inst);
  const auto fam = make_family(ground, members);
  const auto vc = vc_dimension(fam);
  const auto ss = sauer_shelah_check(fam);
  std::ostringstream os;
  echo(os, c, {{"geometry", c.geometry}, {"n", std::to_string(c.n)}, {"d", std::to_string(c.d)},
               {"family", family}});
  os << "geometry,n,d,m,family,members,distinct_members,vc,witness,sauer_bound,sauer_slack,sauer_holds\n";
  std::ostringstream witness;
  for (std::size_t i = 0; i < vc.witness_points.size(); ++i)
    witness << (i ? " " : "") << vc.witness_points[i].x << ':' << vc.witness_points[i].y;
  os << std::visit([](const auto& i) { return std::string(to_string(i.key()->geometry)); }, inst) << ','
     << ground.size() << ',' << std::visit([](const auto& i) { return i.d(); }, inst) << ',' << m << ',' << family
     << ',' << members.size() << ',' << ss.distinct_members << ',' << vc.dimension << ',' << witness.str() << ','
     << fmt(ss.bound) << ',' << fmt(ss.slack()) << ',' << (ss.holds ? 1 : 0) << '\n';
  emit(c, os.str());
  return ss.holds ? exit_ok : exit_failure;
}

int cmd_verify(const RunConfig& c) {
  if (!c.all) throw InvalidParameters("verify-claims: pass --all to run the suite");
  if (c.format != "csv" && c.format != "pretty") throw InvalidParameters("--format must be csv or pretty");
  const auto reports = run_all_claims(c.seed);
  std::ostringstream os;
  echo(os, c, {{"seed", std::to_string(c.seed)}, {"format", c.format}});
  if (c.format == "csv")
    write_reports_csv(os, reports);
  else
    write_reports_pretty(os, reports);
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.passed();
  emit(c, os.str());
  return ok ? exit_ok : exit_failure;
}

struct SimResult {
  std::string params;
  std::string answer;
  Transcript transcript;
};

SimResult simulate_gcd(const RunConfig& c) {
  const std::uint64_t a = c.alice.empty() ? 1 + derive_seed(c.seed, 0) % c.k : static_cast<std::uint64_t>(c.alice[0]);
  const std::uint64_t b = c.bob.empty() ? 1 + derive_seed(c.seed, 1) % c.k : static_cast<std::uint64_t>(c.bob[0]);
  const auto out = run(gcd_protocol(c.k, c.delta), a, b, c.seed);
  if (out.bob_output != gcd(a, b)) throw ProtocolError("gcd protocol returned a wrong answer");
  return {"k=" + std::to_string(c.k) + " a=" + std::to_string(a) + " b=" + std::to_string(b) +
              " delta=" + fmt(c.delta),
          std::to_string(out.bob_output), out.transcript};
}

std::pair<FamilyMember, FamilyMember> grid_pair(const RunConfig& c, const GridInstance& inst, bool promise) {
  if (!c.alice.empty() || !c.bob.empty()) {
    if (c.alice.empty() || c.bob.empty()) throw InvalidParameters("give both --alice and --bob or neither");
    return {generate_T1(inst, c.alice), generate_T2(inst, c.bob)};
  }
  const auto t1 = enumerate_family(inst, FamilyKind::slope_lines);
  const auto t2 = enumerate_family(inst, FamilyKind::vertical_lines);
  if (!promise) return {t1[pick(c.seed, 0, t1.size())], t2[pick(c.seed, 1, t2.size())]};
  std::vector<std::pair<std::size_t, std::size_t>> ok;
  for (std::size_t i = 0; i < t1.size(); ++i)
    for (std::size_t j = 0; j < t2.size(); ++j)
      if (satisfies_learn_promise(t1[i], t2[j], inst)) ok.emplace_back(i, j);
  if (ok.empty()) throw InvalidParameters("no pair on this instance satisfies |A & B| = d");
  const auto [i, j] = ok[pick(c.seed, 0, ok.size())];
  return {t1[i], t2[j]};
}

std::string inst_params(const InstanceKey& key) {
  return std::string(to_string(key.geometry)) + " n=" + std::to_string(key.n) + " d=" + std::to_string(key.d) +
         " m=" + std::to_string(key.m);
}

SimResult simulate_line_disj(const RunConfig& c) {
  const auto inst = load_grid(c);
  const auto [a, b] = grid_pair(c, inst, false);
  const auto out = run(line_disj_protocol(inst, c.delta), a, b, c.seed);
  return {inst_params(*inst.key()) + " alice=" + join(a.params, ':') + " bob=" + join(b.params, ':') +
              " delta=" + fmt(c.delta),
          out.bob_output ? "disjoint" : "intersecting", out.transcript};
}

SimResult simulate_learn(const RunConfig& c) {
  const auto inst = load_grid(c);
  const auto [a, b] = grid_pair(c, inst, true);
  const auto out = learn_via_intersection(default_intersection_protocol(inst), a, b, inst, c.seed);
  return {inst_params(*inst.key()) + " alice=" + join(a.params, ':') + " bob=" + join(b.params, ':'),
          "bob_learned=" + join(out.a_learned_by_bob.params, ':') +
              " alice_learned=" + join(out.b_learned_by_alice.params, ':'),
          out.transcript};
}

SimResult simulate_full_disclosure(const RunConfig& c) {
  const auto inst = load_instance(c);
  FamilyMember a;
  FamilyMember b;
  DisjointnessProtocol proto;
  if (const auto* iv = std::get_if<IntervalInstance>(&inst)) {
    const auto left = enumerate_family(*iv, FamilyKind::left_anchored);
    const auto right = enumerate_family(*iv, FamilyKind::right_anchored);
    const auto d = static_cast<std::size_t>(iv->d());
    a = c.alice.empty() ? left[pick(c.seed, 0, left.size())]
                        : anchored_member(*iv, std::vector<Side>(d, Side::left), c.alice);
    b = c.bob.empty() ? right[pick(c.seed, 1, right.size())]
                      : anchored_member(*iv, std::vector<Side>(d, Side::right), c.bob);
    proto = full_disclosure_disj(left);
  } else {
    const auto& g = std::get<GridInstance>(inst);
    std::tie(a, b) = grid_pair(c, g, false);
    proto = full_disclosure_disj(g, FamilyKind::slope_lines);
  }
  const auto out = run(proto, a, b, c.seed);
  return {inst_params(*a.instance) + " alice=" + join(a.params, ':') + " bob=" + join(b.params, ':'),
          out.bob_output ? "disjoint" : "intersecting", out.transcript};
}

int cmd_simulate(const RunConfig& c) {
  SimResult res;
  if (c.protocol == "gcd")
    res = simulate_gcd(c);
  else if (c.protocol == "line-disj")
    res = simulate_line_disj(c);
  else if (c.protocol == "learn")
    res = simulate_learn(c);
  else if (c.protocol == "full-disclosure")
    res = simulate_full_disclosure(c);
  else
    throw InvalidParameters("unknown protocol '" + c.protocol + "'");
  std::ostringstream os;
  echo(os, c, {{"protocol", c.protocol}, {"seed", std::to_string(c.seed)}});
  os << transcript_csv_header << '\n';
  write_transcript_row(os, make_transcript_row(0, c.protocol, res.params, c.seed, res.transcript, res.answer));
  if (c.dump_transcript) {
    os << '\n';
    write_transcript_dump(os, res.transcript);
  }
  emit(c, os.str());
  return exit_ok;
}

struct Stats {
  double mean_bits = 0;
  double stddev_bits = 0;
  double mean_rounds = 0;
};

Stats summarize(const std::vector<double>& bits, const std::vector<double>& rounds) {
  Stats s;
  for (auto b : bits) s.mean_bits += b;
  for (auto r : rounds) s.mean_rounds += r;
  s.mean_bits /= static_cast<double>(bits.size());
  s.mean_rounds /= static_cast<double>(rounds.size());
  for (auto b : bits) s.stddev_bits += (b - s.mean_bits) * (b - s.mean_bits);
  s.stddev_bits = std::sqrt(s.stddev_bits / static_cast<double>(bits.size()));
  return s;
}

int cmd_sweep(const RunConfig& c) {
  if (c.trials == 0) throw InvalidParameters("--trials must be positive");
  std::ostringstream os;
  std::uint64_t run_id = 0;
  if (c.protocol == "gcd") {
    echo(os, c, {{"protocol", "gcd"}, {"trials", std::to_string(c.trials)}, {"delta", fmt(c.delta)},
                 {"seed", std::to_string(c.seed)}});
    os << "protocol,k,runs,mean_bits,stddev_bits,mean_rounds,bits_per_log2k\n";
    std::vector<double> means;
    std::vector<double> per_log;
    for (auto k : c.ks) {
      if (k < 2) throw InvalidParameters("sweep: every k must be >= 2");
      const auto proto = gcd_protocol(k, c.delta);
      std::vector<double> bits;
      std::vector<double> rounds;
      for (std::size_t t = 0; t < c.trials; ++t, ++run_id) {
        const auto seed = derive_seed(c.seed, run_id);
        const std::uint64_t a = 1 + derive_seed(seed, 1) % k;
        const std::uint64_t b = 1 + derive_seed(seed, 2) % k;
        const auto out = run(proto, a, b, seed);
        if (out.bob_output != gcd(a, b)) throw ProtocolError("gcd protocol returned a wrong answer");
        bits.push_back(static_cast<double>(out.transcript.total_bits()));
        rounds.push_back(static_cast<double>(out.transcript.rounds()));
      }
      const auto s = summarize(bits, rounds);
      means.push_back(s.mean_bits);
      per_log.push_back(s.mean_bits / std::log2(static_cast<double>(k)));
      os << "gcd," << k << ',' << c.trials << ',' << fmt(s.mean_bits) << ',' << fmt(s.stddev_bits) << ','
         << fmt(s.mean_rounds) << ',' << fmt(per_log.back()) << '\n';
    }
    bool monotone = true;
    for (std::size_t i = 1; i < means.size(); ++i)
      monotone = monotone && means[i] >= means[i - 1] && per_log[i] <= per_log[i - 1];
    emit(c, os.str());
    if (!monotone) std::cerr << "sweep: mean bits not monotone in k\n";
    return monotone ? exit_ok : exit_failure;
  }
  if (c.protocol == "line-disj") {
    echo(os, c, {{"protocol", "line-disj"}, {"d", std::to_string(c.d)}, {"trials", std::to_string(c.trials)},
                 {"delta", fmt(c.delta)}, {"seed", std::to_string(c.seed)}});
    os << "protocol,n,d,m,runs,mean_bits,stddev_bits,mean_rounds\n";
    for (auto m : c.ms) {
      const auto inst = build_grid_instance(c.d * m * m, c.d);
      const auto proto = line_disj_protocol(inst, c.delta);
      const auto t1 = enumerate_family(inst, FamilyKind::slope_lines);
      const auto t2 = enumerate_family(inst, FamilyKind::vertical_lines);
      std::vector<double> bits;
      std::vector<double> rounds;
      for (std::size_t t = 0; t < c.trials; ++t, ++run_id) {
        const auto seed = derive_seed(c.seed, run_id);
        const auto& a = t1[derive_seed(seed, 1) % t1.size()];
        const auto& b = t2[derive_seed(seed, 2) % t2.size()];
        const auto out = run(proto, a, b, seed);
        if (out.bob_output != intersect(a, b).empty()) throw ProtocolError("line-disj returned a wrong answer");
        bits.push_back(static_cast<double>(out.transcript.total_bits()));
        rounds.push_back(static_cast<double>(out.transcript.rounds()));
      }
      const auto s = summarize(bits, rounds);
      os << "line-disj," << inst.n() << ',' << c.d << ',' << m << ',' << c.trials << ',' << fmt(s.mean_bits) << ','
         << fmt(s.stddev_bits) << ',' << fmt(s.mean_rounds) << '\n';
    }
    emit(c, os.str());
    return exit_ok;
  }
  throw InvalidParameters("sweep: --protocol must be gcd or line-disj");
}

constexpr const char* csv_help = R"(
Output starts with one '# vcdisj <command> key=value ...' line echoing the configuration.
CSV headers (always emitted):
  vcdim           geometry,n,d,m,family,members,distinct_members,vc,witness,sauer_bound,sauer_slack,sauer_holds
  verify-claims   claim,params,cases,failures,status,note,counterexample
  simulate        run_id,protocol,params,seed,total_bits,rounds,answer
                  with --dump-transcript, a blank line then index,sender,bits,hex
  sweep gcd       protocol,k,runs,mean_bits,stddev_bits,mean_rounds,bits_per_log2k
  sweep line-disj protocol,n,d,m,runs,mean_bits,stddev_bits,mean_rounds
Exit status: 0 ok, 1 verification failure, 2 configuration error.)";

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Set-system disjointness toolkit: instances, VC dimension, claim checks, protocol runs"};
  app.footer(csv_help);
  app.require_subcommand(1);

  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("--geometry", c.geometry, "interval or grid")->check(CLI::IsMember({"interval", "grid"}));
    sub->add_option("--n", c.n, "ground set size");
    sub->add_option("--d", c.d, "number of blocks");
    sub->add_option("--instance", c.instance_path, "read the instance from a file instead of --geometry/--n/--d");
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "base seed");
    sub->add_option("--out", c.out, "output path (written atomically); stdout if omitted");
  };

  auto* build = app.add_subcommand("build", "write an instance description file");
  add_instance(build);
  add_common(build);

  auto* vcdim = app.add_subcommand("vcdim", "VC dimension, witness and Sauer-Shelah slack of a family");
  add_instance(vcdim);
  add_common(vcdim);
  vcdim->add_option("--family", c.family, "R, R0, Rm1 (interval) or T1, T2 (grid)");

  auto* verify = app.add_subcommand("verify-claims", "run the exhaustive claim suite");
  verify->add_flag("--all", c.all, "run every claim");
  verify->add_option("--format", c.format, "csv or pretty")->check(CLI::IsMember({"csv", "pretty"}));
  add_common(verify);

  auto* simulate = app.add_subcommand("simulate", "run one protocol and print its transcript summary");
  simulate->add_option("protocol", c.protocol, "gcd, line-disj, learn or full-disclosure")
      ->required()
      ->check(CLI::IsMember({"gcd", "line-disj", "learn", "full-disclosure"}));
  add_instance(simulate);
  add_common(simulate);
  simulate->add_option("--k", c.k, "gcd input range [1, k]");
  simulate->add_option("--delta", c.delta, "error budget");
  simulate->add_option("--alice", c.alice, "Alice's input: integer for gcd, per-block parameters otherwise")->delimiter(',');
  simulate->add_option("--bob", c.bob, "Bob's input, same shape as --alice")->delimiter(',');
  simulate->add_flag("--dump-transcript", c.dump_transcript, "append per-message hex payloads");

  auto* sweep = app.add_subcommand("sweep", "mean transcript bits across a parameter grid");
  sweep->add_option("protocol", c.protocol, "gcd or line-disj")->required()->check(CLI::IsMember({"gcd", "line-disj"}));
  sweep->add_option("--k", c.ks, "gcd k values")->delimiter(',');
  sweep->add_option("--m", c.ms, "line-disj grid sides")->delimiter(',');
  sweep->add_option("--d", c.d, "line-disj number of grids");
  sweep->add_option("--trials", c.trials, "runs per parameter point");
  sweep->add_option("--delta", c.delta, "error budget");
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }
  c.subcommand = app.get_subcommands().front()->get_name();

  try {
    if (c.subcommand == "build") return cmd_build(c);
    if (c.subcommand == "vcdim") return cmd_vcdim(c);
    if (c.subcommand == "verify-claims") return cmd_verify(c);
    if (c.subcommand == "simulate") return cmd_simulate(c);
    return cmd_sweep(c);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const PromiseViolated& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const CapExceeded& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  }
}
