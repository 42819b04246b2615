#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mb/query.hpp"
#include "mb/textio.hpp"

namespace {

using mb::io::Query;
using mb::io::QueryKind;

struct SetFlags {
  std::vector<std::string> b, c, d, e, x, y, z;
};

void add_set_option(CLI::App* sub, const char* flag,
                    std::vector<std::string>& target, const char* help,
                    bool required) {
  auto* opt = sub->add_option(flag, target, help);
  opt->delimiter(',');
  if (required) opt->required();
}

// Splits "label=value" intervention arguments.
std::vector<std::pair<std::string, int>> parse_assignments(
    const std::vector<std::string>& raw) {
  std::vector<std::pair<std::string, int>> out;
  for (const auto& item : raw) {
    auto pos = item.find('=');
    if (pos == std::string::npos || pos == 0 || pos + 1 >= item.size())
      throw CLI::ValidationError("-B", "expected label=value, got '" + item +
                                          "'");
    int value = 0;
    try {
      std::size_t used = 0;
      value = std::stoi(item.substr(pos + 1), &used);
      if (used != item.size() - pos - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw CLI::ValidationError("-B", "expected an integer value in '" +
                                          item + "'");
    }
    if (value < 0)
      throw CLI::ValidationError("-B", "values must be non-negative");
    out.emplace_back(item.substr(0, pos), value);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Separation, Markov blanket, and causal adjustment queries on "
      "graphical models"};
  app.require_subcommand(1);

  std::string graph_path, model_path;
  SetFlags sets;
  bool with_oracle = false;
  std::uint64_t seed_value = 0;

  auto add_graph = [&](CLI::App* sub) {
    sub->add_option("--graph", graph_path, "graph description file")
        ->required();
  };
  auto add_oracle = [&](CLI::App* sub) {
    sub->add_flag("--oracle", with_oracle,
                  "cross-check against the brute-force reference "
                  "(small graphs only)");
  };

  auto* dsep = app.add_subcommand(
      "dsep", "Test whether Z separates X from Y (d-separation on directed "
              "graphs, path blocking on undirected ones)");
  add_graph(dsep);
  add_set_option(dsep, "-X", sets.x, "first vertex set", true);
  add_set_option(dsep, "-Y", sets.y, "second vertex set", true);
  add_set_option(dsep, "-Z", sets.z, "conditioning set", false);
  add_oracle(dsep);
  auto* seed_opt = dsep->add_option(
      "--seed", seed_value,
      "also sample a random model with this seed and check the verdict "
      "against exact inference");

  auto* mb_cmd = app.add_subcommand("mb", "Markov blanket of B given E");
  add_graph(mb_cmd);
  add_set_option(mb_cmd, "-B", sets.b, "target set", true);
  add_set_option(mb_cmd, "-E", sets.e, "conditioning set", false);
  add_oracle(mb_cmd);

  auto* mb_in = app.add_subcommand(
      "mb-in", "Markov blanket of B restricted to candidate set C, given E");
  add_graph(mb_in);
  add_set_option(mb_in, "-B", sets.b, "target set", true);
  add_set_option(mb_in, "-C", sets.c, "candidate set", true);
  add_set_option(mb_in, "-E", sets.e, "conditioning set", false);
  add_oracle(mb_in);

  auto* mb_dir = app.add_subcommand(
      "mb-dir", "Directional Markov blanket of B towards D, given E");
  add_graph(mb_dir);
  add_set_option(mb_dir, "-B", sets.b, "source set", true);
  add_set_option(mb_dir, "-D", sets.d, "destination set", true);
  add_set_option(mb_dir, "-E", sets.e, "conditioning set", false);
  add_oracle(mb_dir);

  auto* mb_dir_ext = app.add_subcommand(
      "mb-dir-ext",
      "Extended directional Markov blanket (total: absorbs the part of D "
      "that cannot be separated)");
  add_graph(mb_dir_ext);
  add_set_option(mb_dir_ext, "-B", sets.b, "source set", true);
  add_set_option(mb_dir_ext, "-D", sets.d, "destination set", true);
  add_set_option(mb_dir_ext, "-E", sets.e, "conditioning set", false);

  auto* adjust = app.add_subcommand(
      "adjust", "Back-door adjustment set for the effect of B on D");
  add_graph(adjust);
  add_set_option(adjust, "-B", sets.b, "cause set", true);
  add_set_option(adjust, "-D", sets.d, "effect set", true);
  add_oracle(adjust);

  auto* effect = app.add_subcommand(
      "effect", "Interventional distribution of D under do(B = b), via "
                "back-door adjustment");
  effect->add_option("--model", model_path, "model description file")
      ->required();
  std::vector<std::string> interventions;
  effect
      ->add_option("-B", interventions,
                   "intervened assignment(s), label=value")
      ->delimiter(',')
      ->required();
  add_set_option(effect, "-D", sets.d, "effect set", true);
  add_oracle(effect);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  Query q;
  if (app.got_subcommand(dsep))
    q.kind = QueryKind::DSeparation;
  else if (app.got_subcommand(mb_cmd))
    q.kind = QueryKind::Blanket;
  else if (app.got_subcommand(mb_in))
    q.kind = QueryKind::BlanketIn;
  else if (app.got_subcommand(mb_dir))
    q.kind = QueryKind::Directional;
  else if (app.got_subcommand(mb_dir_ext))
    q.kind = QueryKind::DirectionalExtended;
  else if (app.got_subcommand(adjust))
    q.kind = QueryKind::Adjust;
  else
    q.kind = QueryKind::Effect;

  q.b = sets.b;
  q.c = sets.c;
  q.d = sets.d;
  q.e = sets.e;
  q.x = sets.x;
  q.y = sets.y;
  q.z = sets.z;
  q.with_oracle = with_oracle;
  if (seed_opt->count() > 0) q.seed = seed_value;

  try {
    if (q.kind == QueryKind::Effect) {
      q.intervention = parse_assignments(interventions);
      q.model_text = mb::io::read_text_file(model_path);
    } else {
      q.graph_text = mb::io::read_text_file(graph_path);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const mb::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  mb::io::QueryOutcome outcome = mb::io::run_query(q);
  std::cout << outcome.json;
  return outcome.exit_code;
}
