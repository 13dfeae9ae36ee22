// noisygame: solve, tabulate, simulate and serve combinatorial games played
// through a noisy channel.

#include <csignal>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "noisygame/analysis.hpp"
#include "noisygame/game_spec.hpp"
#include "noisygame/http_api.hpp"
#include "noisygame/montecarlo.hpp"
#include "noisygame/session.hpp"
#include "noisygame/solver.hpp"

namespace {

using namespace noisygame;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GameFlags {
  std::string spec_path;
  std::string game;
  unsigned chips = 3;
  std::optional<double> p;
  std::vector<unsigned> piles;
  unsigned rows = 2;
  unsigned cols = 2;
  std::string variant = "n8";

  void add_to(CLI::App& cmd, bool allow_spec_file) {
    if (allow_spec_file) cmd.add_option("--spec", spec_path, "JSON game spec file");
    cmd.add_option("--game", game, "builtin family: nim1, nim or chomp");
    cmd.add_option("--chips", chips, "nim1: chips on the heap");
    cmd.add_option("--p", p, "nim1: bit-flip probability; chomp: accuracy");
    cmd.add_option("--piles", piles, "nim: pile sizes, e.g. 2,2,3")->delimiter(',');
    cmd.add_option("--rows", rows, "chomp: bar rows");
    cmd.add_option("--cols", cols, "chomp: bar columns");
    cmd.add_option("--variant", variant, "chomp error model: n8, n4, lower_left, uniform");
  }

  double require_p() const {
    if (!p) throw UsageError("--p is required for --game " + game);
    return *p;
  }

  GameSpec resolve() const {
    if (!spec_path.empty()) {
      if (!game.empty()) throw UsageError("give either --spec or --game, not both");
      std::ifstream in(spec_path);
      if (!in) throw SpecError("cannot read spec file '" + spec_path + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      try {
        return parse_game_spec(ss.str());
      } catch (const SpecError& e) {
        throw SpecError(spec_path + ": " + e.what());
      }
    }
    if (game == "nim1") {
      const double prob = require_p();
      check_probability(prob);
      return Nim1Spec{chips, prob};
    }
    if (game == "nim") {
      if (piles.empty()) throw UsageError("--piles is required for --game nim");
      return NimSpec{piles};
    }
    if (game == "chomp") {
      const auto kind = parse_chomp_variant(variant);
      const double prob = kind == ChompVariant::uniform ? p.value_or(1.0) : require_p();
      check_probability(prob);
      if (rows == 0 || cols == 0) throw UsageError("--rows and --cols must be positive");
      return ChompSpec{rows, cols, kind, prob};
    }
    if (game.empty()) throw UsageError("one of --game or --spec is required");
    throw UsageError("unknown --game '" + game + "' (expected nim1, nim or chomp)");
  }
};

std::string join_labels(const std::vector<std::string>& labels, const std::vector<std::size_t>& moves) {
  std::string s;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    if (i) s += " | ";
    s += labels.at(moves[i]);
  }
  return s;
}

int cmd_solve(const GameFlags& flags, bool as_json) {
  const Game game = build_game(flags.resolve());
  const auto solved = solve(game.graph, game.model);
  if (as_json) {
    std::cout << api::solution_json(game, solved).dump(2) << '\n';
    return kExitOk;
  }
  const PositionId start = game.graph.start();
  const auto& s = solved.at(start);
  std::cout << "start " << game.graph.label(start) << ": N = " << format_value(s.value) << " ("
            << to_string(s.cls) << ")";
  if (!s.optimal_moves.empty()) std::cout << ", optimal: " << join_labels(game.move_labels[start], s.optimal_moves);
  std::cout << "\n\nposition,label,class,N,move_values,optimal_moves\n";
  for (PositionId v = 0; v < game.graph.position_count(); ++v) {
    const auto& sv = solved.at(v);
    std::cout << v << ",\"" << game.graph.label(v) << "\"," << to_string(sv.cls) << ',' << format_value(sv.value)
              << ',';
    for (std::size_t w = 0; w < sv.move_values.size(); ++w) {
      if (w) std::cout << ';';
      std::cout << format_value(sv.move_values[w]);
    }
    std::cout << ',' << format_moves(sv.optimal_moves) << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const GameFlags& flags, std::size_t points, const std::string& out_path) {
  if (points < 2) throw UsageError("--points must be at least 2");
  std::vector<SweepRow> rows;
  if (flags.game == "nim1") {
    rows = sweep_nim1(flags.chips, points);
  } else if (flags.game == "chomp") {
    rows = sweep_chomp(flags.rows, flags.cols, parse_chomp_variant(flags.variant), points);
  } else {
    throw UsageError("sweep supports --game nim1 or --game chomp");
  }
  if (out_path.empty() || out_path == "-") {
    write_sweep_csv(std::cout, rows);
    return kExitOk;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return kExitFailure;
  }
  write_sweep_csv(out, rows);
  out.close();
  if (!out) {
    std::cerr << "error: failed writing '" << out_path << "'\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_verify_appendix(const std::string& table_path, double tolerance) {
  std::vector<SpotValue> expected;
  if (table_path.empty()) {
    expected = appendix_spot_values();
  } else {
    std::ifstream in(table_path);
    if (!in) throw SpecError("cannot read table '" + table_path + "'");
    expected = read_spot_values(in);
  }
  const auto report = verify_spot_values(expected, tolerance);
  std::size_t failed = 0;
  for (const auto& c : report.checks) {
    char delta[32];
    std::snprintf(delta, sizeof delta, "%.3e", c.abs_error);
    std::cout << (c.pass() ? "PASS" : "FAIL") << "  N_" << c.expected.chips << '('
              << format_p(c.expected.p(), 101) << ") = " << format_value(c.computed) << "  expected "
              << format_value(c.expected.value) << "  |delta| = " << delta << "  optimal {"
              << format_moves(c.computed_moves, ",") << "}";
    if (!c.moves_ok) std::cout << " expected {" << format_moves(c.expected.optimal_moves, ",") << "}";
    std::cout << '\n';
    if (!c.pass()) ++failed;
  }
  std::cout << (report.checks.size() - failed) << "/" << report.checks.size() << " spot values match\n";
  return failed == 0 ? kExitOk : kExitFailure;
}

int cmd_conjecture_scan(unsigned max_chips, std::size_t points, bool strict) {
  if (max_chips < 1) throw UsageError("--max-chips must be at least 1");
  if (points < 2) throw UsageError("--points must be at least 2");
  const auto report = conjecture_scan(max_chips, points);
  std::cout << "checked " << report.points_checked << " (k, p) pairs for k <= " << max_chips << '\n';
  if (report.counterexamples.empty()) {
    std::cout << "no counterexample candidates\n";
  } else {
    for (const auto& c : report.counterexamples) {
      std::cout << "conjecture " << c.conjecture << " candidate: k=" << c.chips << " p=" << format_p(c.p, points)
                << " N=" << format_value(c.value) << " optimal {" << format_moves(c.optimal_moves, ",")
                << "}: " << c.reason << '\n';
    }
  }
  std::cout << "optimal-move switches:\n";
  for (const auto& s : report.switches) {
    std::cout << "  k=" << s.chips << ": {" << format_moves(s.before, ",") << "} at p=" << format_p(s.p_before, points)
              << " -> {" << format_moves(s.after, ",") << "} at p=" << format_p(s.p_after, points) << '\n';
  }
  return strict && !report.counterexamples.empty() ? kExitFailure : kExitOk;
}

int cmd_simulate(const GameFlags& flags, std::uint64_t games, std::uint64_t seed) {
  if (games == 0) throw UsageError("--games must be at least 1");
  const Game game = build_game(flags.resolve());
  const auto solved = solve(game.graph, game.model);
  const auto report = estimate_win_probability(game.graph, game.model, games, seed);
  const double expected = solved.value(game.graph.start());
  std::cout << "games            " << report.games_played << '\n'
            << "first-player wins " << report.first_player_wins << '\n'
            << "estimate         " << format_value(report.estimate) << '\n'
            << "standard error   " << format_value(report.standard_error) << '\n'
            << "solver value     " << format_value(expected) << '\n';
  if (report.standard_error > 0.0) {
    std::cout << "z-score          " << (report.estimate - expected) / report.standard_error << '\n';
  }
  return kExitOk;
}

httplib::Server* g_server = nullptr;

int cmd_serve(const std::string& host, int port, const std::string& web_root) {
  SessionStore store;
  httplib::Server server;
  api::install_routes(server, store);
  if (!web_root.empty() && !server.set_mount_point("/", web_root)) {
    std::cerr << "error: web root '" << web_root << "' is not a directory\n";
    return kExitFailure;
  }
  if (!server.bind_to_port(host, port)) {
    std::cerr << "error: cannot listen on " << host << ":" << port << " (port in use?)\n";
    return kExitFailure;
  }
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  std::cerr << "serving /api/v1 on http://" << host << ":" << port << '\n';
  server.listen_after_bind();
  g_server = nullptr;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solve and play combinatorial games transmitted through a noisy channel"};
  app.require_subcommand(1);

  GameFlags solve_flags;
  bool solve_json = false;
  auto* solve_cmd = app.add_subcommand("solve", "solve a game and list every position");
  solve_flags.add_to(*solve_cmd, true);
  solve_cmd->add_flag("--json", solve_json, "print the solution as JSON");

  GameFlags sweep_flags;
  std::size_t sweep_points = 101;
  std::string sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "tabulate the start value over a p-grid as CSV");
  sweep_flags.add_to(*sweep_cmd, false);
  sweep_cmd->add_option("--points", sweep_points, "grid points p = i/(points-1)");
  sweep_cmd->add_option("--out", sweep_out, "output CSV path (default stdout)");

  std::string verify_table;
  double verify_tolerance = 1e-9;
  auto* verify_cmd = app.add_subcommand("verify-appendix", "recompute the published 1-pile Nim spot values");
  verify_cmd->add_option("--table", verify_table, "alternative expectations: chips,p,value,optimal per line");
  verify_cmd->add_option("--tolerance", verify_tolerance, "absolute tolerance on values");

  unsigned scan_max_chips = 10;
  std::size_t scan_points = 101;
  bool scan_strict = false;
  auto* scan_cmd = app.add_subcommand("conjecture-scan", "scan 1-pile Nim for counterexamples to the conjectures");
  scan_cmd->add_option("--max-chips", scan_max_chips, "largest heap to scan");
  scan_cmd->add_option("--points", scan_points, "grid points p = i/(points-1)");
  scan_cmd->add_flag("--strict", scan_strict, "exit 1 when a candidate counterexample is found");

  GameFlags sim_flags;
  std::uint64_t sim_games = 100000;
  std::uint64_t sim_seed = 1;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo estimate of the first player's win rate");
  sim_flags.add_to(*sim_cmd, true);
  sim_cmd->add_option("--games", sim_games, "number of games");
  sim_cmd->add_option("--seed", sim_seed, "random seed");

  int serve_port = 8080;
  std::string serve_host = "127.0.0.1";
  std::string serve_web_root;
  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP play service");
  serve_cmd->add_option("--port", serve_port, "TCP port");
  serve_cmd->add_option("--host", serve_host, "bind address");
  serve_cmd->add_option("--web-root", serve_web_root, "directory of static web assets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_flags, solve_json);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_flags, sweep_points, sweep_out);
    if (verify_cmd->parsed()) return cmd_verify_appendix(verify_table, verify_tolerance);
    if (scan_cmd->parsed()) return cmd_conjecture_scan(scan_max_chips, scan_points, scan_strict);
    if (sim_cmd->parsed()) return cmd_simulate(sim_flags, sim_games, sim_seed);
    if (serve_cmd->parsed()) return cmd_serve(serve_host, serve_port, serve_web_root);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
