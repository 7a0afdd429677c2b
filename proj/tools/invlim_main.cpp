#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "invlim/io.hpp"

namespace {

using invlim::io::json;

struct RunReport {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
  std::string outcome = "error";
  std::vector<std::string> artifacts;
  double duration_ms = 0.0;
  json payload = json::object();
};

json report_to_json(const RunReport& r) {
  json out;
  out["command"] = r.command;
  json inputs = json::array();
  for (const auto& [path, digest] : r.inputs)
    inputs.push_back({{"path", path}, {"digest", digest}});
  out["inputs"] = std::move(inputs);
  out["outcome"] = r.outcome;
  out["artifacts"] = r.artifacts;
  out["duration_ms"] = r.duration_ms;
  out["payload"] = r.payload;
  return out;
}

void note_input(RunReport& r, const std::filesystem::path& path) {
  r.inputs.push_back({path.string(), invlim::io::file_digest(path)});
}

// The two files name the same system if they are the same file or carry the
// same bytes.
void require_same_system(const std::filesystem::path& given,
                         const std::filesystem::path& referenced) {
  std::error_code ec;
  if (std::filesystem::equivalent(given, referenced, ec)) return;
  if (invlim::io::file_digest(given) == invlim::io::file_digest(referenced))
    return;
  throw invlim::error(invlim::errc::input_error,
                      "element file references system '" +
                          referenced.string() + "', not '" + given.string() +
                          "'");
}

bool cmd_validate(RunReport& r, const std::string& path) {
  note_input(r, path);
  const json j = invlim::io::read_json_file(path);
  const invlim::io::InputKind kind = invlim::io::classify(j);
  r.payload["kind"] = invlim::io::input_kind_name(kind);
  switch (kind) {
    case invlim::io::InputKind::poset: {
      const invlim::DirectedSet d = invlim::io::poset_from_json(j);
      r.payload["elements"] = d.size();
      break;
    }
    case invlim::io::InputKind::system: {
      const invlim::InverseSystem sys = invlim::io::system_from_json(j);
      r.payload["base_size"] = sys.base().size();
      r.payload["max_fiber"] = sys.max_fiber_size();
      break;
    }
    case invlim::io::InputKind::tree: {
      const invlim::Tree t = invlim::io::tree_from_json(j);
      r.payload["nodes"] = t.node_count();
      r.payload["height"] = t.height();
      break;
    }
    case invlim::io::InputKind::group_system: {
      const invlim::FiniteGroupSystem sys =
          invlim::io::group_system_from_json(j);
      r.payload["base_size"] = sys.base.size();
      break;
    }
    case invlim::io::InputKind::element: {
      const invlim::io::LoadedElement le = invlim::io::element_from_json(
          j, std::filesystem::path(path).parent_path());
      note_input(r, le.system_path);
      r.payload["variant"] =
          invlim::variant_name(le.system->variant);
      break;
    }
  }
  std::cout << "valid " << r.payload["kind"].get<std::string>() << ": " << path
            << "\n";
  return true;
}

bool cmd_threads(RunReport& r, const std::string& path, std::size_t limit) {
  note_input(r, path);
  const invlim::InverseSystem sys = invlim::io::load_system(path);
  const std::vector<invlim::Thread> threads = invlim::enumerate_threads(sys);
  r.payload["count"] = threads.size();
  std::cout << threads.size() << " threads\n";
  json listed = json::array();
  for (std::size_t i = 0; i < threads.size() && i < limit; ++i) {
    json t = invlim::io::thread_to_json(sys, threads[i]);
    std::cout << "  " << t.dump() << "\n";
    listed.push_back(std::move(t));
  }
  if (threads.size() > limit)
    std::cout << "  ... " << threads.size() - limit << " more\n";
  r.payload["threads"] = std::move(listed);
  return true;
}

bool cmd_decompose(RunReport& r, const std::string& system_path,
                   const std::string& element_path) {
  note_input(r, system_path);
  note_input(r, element_path);
  const invlim::io::LoadedElement le = invlim::io::load_element(element_path);
  require_same_system(system_path, le.system_path);

  const invlim::Decomposition d = invlim::decompose(le.element);
  const invlim::LimitElement back = invlim::recompose(le.system, d);
  const bool roundtrip = back == le.element;

  const json dj = invlim::io::decomposition_to_json(*le.system->carrier, d);
  std::cout << dj.dump(2) << "\n";
  std::cout << "recompose " << (roundtrip ? "matches" : "DIFFERS") << "\n";
  r.payload["decomposition"] = dj;
  r.payload["roundtrip"] = roundtrip;
  return roundtrip;
}

bool cmd_model(RunReport& r, const std::string& path) {
  note_input(r, path);
  const invlim::FiniteGroupSystem sys = invlim::io::load_group_system(path);
  const invlim::PhiReport rep = invlim::verify_phi_isomorphism(sys);
  std::cout << "|Aut(M)| = " << rep.automorphism_count
            << ", coherent families = " << rep.family_count << "\n";
  std::cout << "coefficient map: " << (rep.injective ? "injective" : "NOT injective")
            << ", " << (rep.surjective ? "surjective" : "NOT surjective")
            << ", " << (rep.homomorphic ? "multiplicative" : "NOT multiplicative")
            << "\n";
  if (!rep.detail.empty()) std::cout << rep.detail << "\n";
  r.payload["automorphisms"] = rep.automorphism_count;
  r.payload["families"] = rep.family_count;
  r.payload["injective"] = rep.injective;
  r.payload["surjective"] = rep.surjective;
  r.payload["homomorphic"] = rep.homomorphic;
  return rep.pass;
}

bool cmd_game(RunReport& r, const std::string& path, std::size_t rounds,
              std::uint64_t seed) {
  if (rounds == 0)
    throw invlim::error(invlim::errc::input_error,
                        "the game needs at least one round");
  note_input(r, path);
  const invlim::DirectedSet d = invlim::io::load_poset(path);
  const invlim::GameStrategy one = invlim::player_one_bound_strategy(d);
  const invlim::GameStrategy two = invlim::seeded_random_strategy(
      d, invlim::GameStrategy::Side::two, seed);
  const invlim::GameTranscript t = invlim::play_bounded(d, one, two, rounds);

  for (std::size_t i = 0; i < t.moves.size(); ++i)
    std::cout << (i % 2 == 0 ? "I :" : "II:") << " " << t.moves[i] << "\n";
  std::cout << "verdict: " << invlim::verdict_name(t.verdict) << " (round "
            << t.decided_round << ")\n";
  r.payload["moves"] = t.moves;
  r.payload["verdict"] = invlim::verdict_name(t.verdict);
  r.payload["decided_round"] = t.decided_round;
  return t.verdict == invlim::Verdict::i_immediate ||
         t.verdict == invlim::Verdict::i_provisional;
}

bool cmd_good(RunReport& r, const std::string& path, std::size_t lambda,
              std::size_t nu) {
  note_input(r, path);
  const invlim::InverseSystem sys = invlim::io::load_system(path);
  const invlim::GoodnessReport g = invlim::check_good(sys, lambda, nu);

  const char* game =
      g.game_condition == invlim::GoodnessReport::Game::holds_with_witness
          ? "holds (climbing witness)"
          : "unknown";
  std::cout << "(1) game condition: " << game << "\n";
  std::cout << "(2) sizes: base " << g.base_size << ", max fiber "
            << g.max_fiber << (g.sizes_ok ? " <= " : " !<= ") << g.lambda
            << "\n";
  if (g.thread_count)
    std::cout << "(3) threads: " << *g.thread_count
              << (g.count_ok ? " = " : " != ") << g.nu << "\n";
  else
    std::cout << "(3) threads: not enumerable\n";
  const char* verdict = g.verdict == invlim::GoodnessReport::Outcome::good
                            ? "good"
                        : g.verdict == invlim::GoodnessReport::Outcome::not_good
                            ? "not good"
                            : "unknown";
  std::cout << "verdict: " << verdict;
  if (!g.failing_clause.empty()) std::cout << " at clause " << g.failing_clause;
  std::cout << "\n";

  r.payload["game_condition"] = game;
  r.payload["sizes_ok"] = g.sizes_ok;
  if (g.thread_count) r.payload["thread_count"] = *g.thread_count;
  r.payload["count_ok"] = g.count_ok;
  r.payload["verdict"] = verdict;
  r.payload["failing_clause"] = g.failing_clause;
  r.payload["note"] = g.note;
  return g.verdict == invlim::GoodnessReport::Outcome::good;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for inverse systems over directed posets"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_path;
  std::uint64_t seed = 0;
  std::size_t limit = 64;
  app.add_option("--out", out_path, "write the run report as JSON");
  app.add_option("--seed", seed, "seed for randomized opponents");
  app.add_option("--limit", limit, "cap on listed items");

  std::string in_a;
  std::string in_b;
  std::size_t rounds = 8;
  std::size_t lambda = 0;
  std::size_t nu = 0;

  CLI::App* validate =
      app.add_subcommand("validate", "load a file and run its invariants");
  validate->add_option("path", in_a, "input file")->required();

  CLI::App* threads =
      app.add_subcommand("threads", "enumerate the threads of a system");
  threads->add_option("path", in_a, "system file")->required();

  CLI::App* decompose = app.add_subcommand(
      "decompose", "write a limit element as a product of basis elements");
  decompose->add_option("system", in_a, "system file")->required();
  decompose->add_option("element", in_b, "element file")->required();

  CLI::App* model = app.add_subcommand(
      "model", "build the relational structure and verify its automorphisms");
  model->add_option("path", in_a, "group system file")->required();

  CLI::App* game =
      app.add_subcommand("game", "play the climbing strategy on a poset");
  game->add_option("path", in_a, "poset file")->required();
  game->add_option("--rounds", rounds, "rounds to play");

  CLI::App* good =
      app.add_subcommand("good", "check the goodness clauses of a system");
  good->add_option("path", in_a, "system file")->required();
  good->add_option("--lambda", lambda, "size bound for base and fibers")
      ->required();
  good->add_option("--nu", nu, "required thread count")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunReport report;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) report.command += ' ';
    report.command += argv[i];
  }

  const auto start = std::chrono::steady_clock::now();
  int exit_code = 0;
  try {
    bool pass = false;
    if (validate->parsed()) pass = cmd_validate(report, in_a);
    else if (threads->parsed()) pass = cmd_threads(report, in_a, limit);
    else if (decompose->parsed()) pass = cmd_decompose(report, in_a, in_b);
    else if (model->parsed()) pass = cmd_model(report, in_a);
    else if (game->parsed()) pass = cmd_game(report, in_a, rounds, seed);
    else if (good->parsed()) pass = cmd_good(report, in_a, lambda, nu);
    report.outcome = pass ? "pass" : "fail";
    exit_code = pass ? 0 : 1;
  } catch (const invlim::error& e) {
    const int cls = invlim::exit_class(e.code());
    report.outcome = cls == 2 ? "error" : "fail";
    report.payload["error"] = e.what();
    std::cerr << e.what() << "\n";
    exit_code = cls;
  } catch (const std::exception& e) {
    report.outcome = "error";
    report.payload["error"] = e.what();
    std::cerr << e.what() << "\n";
    exit_code = 2;
  }
  report.duration_ms =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - start)
          .count();

  if (!out_path.empty()) {
    report.artifacts.push_back(out_path);
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write report to '" << out_path << "'\n";
      return 2;
    }
    out << report_to_json(report).dump(2) << "\n";
  }
  std::cout << "outcome: " << report.outcome << "\n";
  return exit_code;
}
