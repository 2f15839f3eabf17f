#include "qsure/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsure/acceptance.hpp"
#include "qsure/continuum.hpp"
#include "qsure/core.hpp"
#include "qsure/lp.hpp"
#include "qsure/market.hpp"
#include "qsure/optimize.hpp"
#include "qsure/report.hpp"
#include "qsure/risk.hpp"
#include "qsure/scenario.hpp"
#include "qsure/sensitivity.hpp"

namespace qsure::cli {
namespace {

using nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kVerdict = 2;

std::string join_rats(const std::vector<Rat>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += " ";
    out += format_rational(values[i]);
  }
  return out;
}

ordered_json rat_array(const std::vector<Rat>& values) {
  ordered_json arr = ordered_json::array();
  for (const Rat& v : values) arr.push_back(format_rational(v));
  return arr;
}

// Output routing shared by every subcommand: human table to `out` or the JSON
// payload when --format machine, plus an optional <command>.json drop.
struct Sink {
  std::string format;
  std::string out_dir;
  std::ostream& out;

  int finish(const std::string& command, const std::string& table_text,
             const ordered_json& payload) const {
    if (format == "machine")
      out << payload.dump(2) << "\n";
    else
      out << table_text;
    if (!out_dir.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(out_dir, ec);
      std::string path = out_dir + "/" + command + ".json";
      std::ofstream file(path);
      if (!file) throw std::invalid_argument("cannot write " + path);
      file << payload.dump(2) << "\n";
    }
    return kOk;
  }
};

const core::RobustModel& require_model(const scenario::Scenario& scn) {
  if (!scn.model) throw std::invalid_argument("scenario declares no model");
  return *scn.model;
}

const market::MarketModel& resolve_market(const scenario::Scenario& scn,
                                          const std::string& name) {
  if (!name.empty()) {
    const auto* found = scn.find_market(name);
    if (!found) throw std::invalid_argument("unknown market: " + name);
    return *found;
  }
  if (scn.markets.size() == 1) return scn.markets.front().second;
  throw std::invalid_argument(scn.markets.empty()
                                  ? "scenario declares no market"
                                  : "several markets declared; pass --market");
}

const core::Rv& resolve_rv(const scenario::Scenario& scn, const std::string& name) {
  const auto* found = scn.find_rv(name);
  if (!found) throw std::invalid_argument("unknown rv: " + name);
  return *found;
}

const core::ProbabilityMeasure& resolve_measure(const scenario::Scenario& scn,
                                                const std::string& name) {
  const auto* found = scn.find_measure(name);
  if (!found) throw std::invalid_argument("unknown measure: " + name);
  return *found;
}

ordered_json strategy_json(const market::Strategy& strategy) {
  return rat_array(strategy.holdings);
}

// ------------------------------------------------------------------ na-check

int cmd_na_check(const Sink& sink, const std::string& scenario_path,
                 const std::string& market_name) {
  scenario::Scenario scn = scenario::parse_scenario_file(scenario_path);
  const core::RobustModel& model = require_model(scn);
  const market::MarketModel& mkt = resolve_market(scn, market_name);
  market::NaReport rep = market::check_NA_geometric(model, mkt);

  std::string text;
  ordered_json payload;
  payload["command"] = "na-check";
  payload["no_arbitrage"] = rep.no_arbitrage;
  if (rep.no_arbitrage) {
    text = "no arbitrage on the model support\n";
  } else {
    text = "ARBITRAGE: holdings " + join_rats(rep.witness->holdings) +
           ", gain strictly positive at outcome " + std::to_string(*rep.witness_outcome) +
           "\n";
    payload["witness"] = {{"holdings", strategy_json(*rep.witness)},
                          {"outcome", *rep.witness_outcome}};
  }
  int sink_code = sink.finish("na-check", text, payload);
  if (sink_code != kOk) return sink_code;
  return rep.no_arbitrage ? kOk : kVerdict;
}

// ---------------------------------------------------------------- superhedge

int cmd_superhedge(const Sink& sink, const std::string& scenario_path,
                   const std::string& market_name, const std::string& claim_name,
                   const std::string& view_name) {
  scenario::Scenario scn = scenario::parse_scenario_file(scenario_path);
  const core::RobustModel& model = require_model(scn);
  const market::MarketModel& mkt = resolve_market(scn, market_name);
  const core::Rv& x = resolve_rv(scn, claim_name);

  market::HedgeResult seller = market::superhedge(model, mkt, x);
  market::HedgeResult buyer = market::subhedge(model, mkt, x);
  ExtRat dual = market::superhedge_dual(model, mkt, x, market::MartingaleSetSelector{});

  report::Table table;
  table.header({"quantity", "value", "holdings"});
  table.row({"seller price", seller.price.str(),
             seller.strategy ? join_rats(seller.strategy->holdings) : "-"});
  table.row({"buyer price", buyer.price.str(),
             buyer.strategy ? join_rats(buyer.strategy->holdings) : "-"});
  table.row({"pricing supremum", dual.str(), "-"});

  ordered_json payload;
  payload["command"] = "superhedge";
  payload["claim"] = claim_name;
  payload["seller_price"] = seller.price.str();
  if (seller.strategy) payload["seller_holdings"] = strategy_json(*seller.strategy);
  payload["buyer_price"] = buyer.price.str();
  if (buyer.strategy) payload["buyer_holdings"] = strategy_json(*buyer.strategy);
  payload["pricing_supremum"] = dual.str();

  if (!view_name.empty()) {
    core::QView q = core::make_qview(model, resolve_measure(scn, view_name));
    market::HedgeResult local = market::superhedge_Q(model, mkt, q, x);
    table.row({"seller price on view", local.price.str(),
               local.strategy ? join_rats(local.strategy->holdings) : "-"});
    payload["view"] = view_name;
    payload["view_seller_price"] = local.price.str();
    if (local.strategy) payload["view_seller_holdings"] = strategy_json(*local.strategy);
  }

  int sink_code = sink.finish("superhedge", table.render(), payload);
  if (sink_code != kOk) return sink_code;
  return seller.price.is_finite() ? kOk : kVerdict;
}

// ---------------------------------------------------------------------- ftap

int cmd_ftap(const Sink& sink, const std::string& scenario_path,
             const std::string& market_name, const std::string& selector_name,
             const std::string& base_name) {
  scenario::Scenario scn = scenario::parse_scenario_file(scenario_path);
  const core::RobustModel& model = require_model(scn);
  const market::MarketModel& mkt = resolve_market(scn, market_name);

  market::MartingaleSetSelector selector;
  if (selector_name == "martingale") {
    selector.kind = market::SelectorKind::Martingale;
  } else if (selector_name == "equivalent-to-some-martingale") {
    selector.kind = market::SelectorKind::EquivalentToSomeMartingale;
  } else if (selector_name == "dominated-by-prior") {
    selector.kind = market::SelectorKind::DominatedByPrior;
  } else if (selector_name == "equivalent-to-prior") {
    selector.kind = market::SelectorKind::EquivalentToPrior;
  } else {
    selector.kind = market::SelectorKind::EquivalentTo;
    if (base_name.empty())
      throw std::invalid_argument("--selector equivalent-to needs --base");
    selector.base = resolve_measure(scn, base_name);
  }
  if (!base_name.empty() && selector.kind != market::SelectorKind::EquivalentTo)
    throw std::invalid_argument("--base only applies to --selector equivalent-to");

  market::FtapReport rep = market::ftap_check(model, mkt, selector);

  std::string text;
  text += std::string("geometric check: ") +
          (rep.na_geometric ? "no arbitrage" : "arbitrage") + "\n";
  text += std::string("pricing check:   ") +
          (rep.all_dominated ? "every model measure dominated" : "domination fails") + "\n";
  text += std::string("verdicts ") + (rep.consistent ? "agree" : "DISAGREE") + "\n";
  report::Table table;
  table.header({"prior", "dominated", "pricing measure"});
  for (const auto& row : rep.per_prior)
    table.row({std::to_string(row.prior_index), row.dominating ? "yes" : "no",
               row.dominating ? join_rats(row.dominating->mass) : "-"});
  text += table.render();
  if (rep.arbitrage_witness)
    text += "arbitrage witness: holdings " + join_rats(rep.arbitrage_witness->holdings) +
            ", strictly positive at outcome " + std::to_string(*rep.witness_outcome) + "\n";

  ordered_json payload;
  payload["command"] = "ftap";
  payload["selector"] = selector_name;
  payload["no_arbitrage"] = rep.na_geometric;
  payload["all_dominated"] = rep.all_dominated;
  payload["consistent"] = rep.consistent;
  ordered_json rows = ordered_json::array();
  for (const auto& row : rep.per_prior) {
    ordered_json entry;
    entry["prior"] = row.prior_index;
    entry["dominated"] = row.dominating.has_value();
    if (row.dominating) entry["pricing_measure"] = rat_array(row.dominating->mass);
    rows.push_back(std::move(entry));
  }
  payload["per_prior"] = std::move(rows);
  if (rep.arbitrage_witness)
    payload["witness"] = {{"holdings", strategy_json(*rep.arbitrage_witness)},
                          {"outcome", *rep.witness_outcome}};

  int sink_code = sink.finish("ftap", text, payload);
  if (sink_code != kOk) return sink_code;
  return rep.consistent ? kOk : kVerdict;
}

// ------------------------------------------------------------------ localize

int cmd_localize(const Sink& sink, const std::string& scenario_path,
                 const std::string& risk_name, const std::string& claim_name,
                 const std::string& view_name) {
  scenario::Scenario scn = scenario::parse_scenario_file(scenario_path);
  const core::RobustModel& model = require_model(scn);
  const auto* rho = scn.find_risk(risk_name);
  if (!rho) throw std::invalid_argument("unknown risk: " + risk_name);
  const core::Rv& x = resolve_rv(scn, claim_name);
  core::QView q = core::make_qview(model, resolve_measure(scn, view_name));

  Rat direct = risk::evaluate(*rho, x);
  ExtRat restricted = risk::localize_primal_E(*rho, q, x);
  ExtRat represented = risk::localize_dual_D(*rho, q, x);
  ExtRat gap = risk::bubble_gap(*rho, q, x);
  bool relevant = risk::is_relevant(*rho, q);

  report::Table table;
  table.header({"quantity", "value"});
  table.row({"direct value", format_rational(direct)});
  table.row({"restriction localization", restricted.str()});
  table.row({"representation localization", represented.str()});
  table.row({"gap", gap.str()});
  table.row({"view relevant", relevant ? "yes" : "no"});

  ordered_json payload;
  payload["command"] = "localize";
  payload["risk"] = risk_name;
  payload["claim"] = claim_name;
  payload["view"] = view_name;
  payload["direct"] = format_rational(direct);
  payload["restriction"] = restricted.str();
  payload["representation"] = represented.str();
  payload["gap"] = gap.str();
  payload["relevant"] = relevant;

  return sink.finish("localize", table.render(), payload);
}

// ---------------------------------------------------------------- risk-table

int cmd_risk_table(const Sink& sink, const std::string& scenario_path,
                   const std::string& risk_name) {
  scenario::Scenario scn = scenario::parse_scenario_file(scenario_path);
  const core::RobustModel& model = require_model(scn);
  const auto* rho = scn.find_risk(risk_name);
  if (!rho) throw std::invalid_argument("unknown risk: " + risk_name);

  std::vector<std::pair<std::string, core::QView>> views;
  for (const auto& [name, measure] : scn.measures)
    views.emplace_back(name, core::make_qview(model, measure));

  report::Table table;
  std::vector<std::string> head = {"position", "direct"};
  for (const auto& [name, view] : views) head.push_back("on " + name);
  table.header(std::move(head));

  ordered_json rows = ordered_json::array();
  for (const auto& [rv_name, x] : scn.rvs) {
    std::vector<std::string> cells = {rv_name, format_rational(risk::evaluate(*rho, x))};
    ordered_json entry;
    entry["position"] = rv_name;
    entry["direct"] = format_rational(risk::evaluate(*rho, x));
    ordered_json localized;
    for (const auto& [view_name, view] : views) {
      ExtRat value = risk::localize_primal_E(*rho, view, x);
      cells.push_back(value.str());
      localized[view_name] = value.str();
    }
    entry["localized"] = std::move(localized);
    rows.push_back(std::move(entry));
    table.row(std::move(cells));
  }

  ordered_json payload;
  payload["command"] = "risk-table";
  payload["risk"] = risk_name;
  payload["rows"] = std::move(rows);
  return sink.finish("risk-table", table.render(), payload);
}

// ----------------------------------------------------------------- aggregate

int cmd_aggregate(const Sink& sink, const std::string& scenario_path,
                  const std::string& family_name) {
  scenario::Scenario scn = scenario::parse_scenario_file(scenario_path);
  const core::RobustModel& model = require_model(scn);
  const auto* family_spec = scn.find_family(family_name);
  if (!family_spec) throw std::invalid_argument("unknown family: " + family_name);

  sensitivity::RvFamily family;
  for (const auto& entry : *family_spec) {
    core::QView view = core::make_qview(model, resolve_measure(scn, entry.measure));
    family.entries.emplace_back(std::move(view), core::make_rv(model, entry.values));
  }
  sensitivity::CoherenceResult res = sensitivity::is_coherent(model, family);

  std::string text;
  ordered_json payload;
  payload["command"] = "aggregate";
  payload["family"] = family_name;
  payload["coherent"] = res.coherent();
  if (res.coherent()) {
    auto cls = sensitivity::classify_aggregator(model, family, *res.aggregator);
    text = "coherent; aggregator " + join_rats(res.aggregator->values) + "\n";
    text += cls.trivial ? "aggregator equals entry " + std::to_string(cls.entry_index) +
                              " globally (trivial)\n"
                        : "aggregator is a proper patchwork\n";
    payload["aggregator"] = rat_array(res.aggregator->values);
    payload["trivial"] = cls.trivial;
    if (cls.trivial) payload["entry"] = cls.entry_index;
  } else {
    const auto& c = *res.conflict;
    text = "CONFLICT: entries " + std::to_string(c.first_entry) + " and " +
           std::to_string(c.second_entry) + " disagree at outcome " +
           std::to_string(c.outcome) + " (" + format_rational(c.first_value) + " vs " +
           format_rational(c.second_value) + ")\n";
    payload["conflict"] = {{"first_entry", c.first_entry},
                           {"second_entry", c.second_entry},
                           {"outcome", c.outcome},
                           {"first_value", format_rational(c.first_value)},
                           {"second_value", format_rational(c.second_value)}};
  }
  int sink_code = sink.finish("aggregate", text, payload);
  if (sink_code != kOk) return sink_code;
  return res.coherent() ? kOk : kVerdict;
}

// --------------------------------------------------------------------- bliss

int cmd_bliss(const Sink& sink, const std::string& scenario_path,
              const std::string& targets_name, const std::string& box_name) {
  scenario::Scenario scn = scenario::parse_scenario_file(scenario_path);
  const core::RobustModel& model = require_model(scn);
  const auto* targets_spec = scn.find_targets(targets_name);
  if (!targets_spec) throw std::invalid_argument("unknown targets: " + targets_name);
  const auto* box_spec = scn.find_interval(box_name);
  if (!box_spec) throw std::invalid_argument("unknown interval: " + box_name);

  optimize::IntervalSet box =
      optimize::make_interval(model, core::make_rv(model, box_spec->lower),
                              core::make_rv(model, box_spec->upper));
  sensitivity::RvFamily targets;
  std::vector<std::pair<core::QView, optimize::PerViewObjective>> objectives;
  for (const auto& [prior_index, values] : targets_spec->per_prior) {
    core::QView view = core::make_qview(model, model.priors()[prior_index]);
    core::Rv target = core::make_rv(model, values);
    targets.entries.emplace_back(view, target);
    objectives.emplace_back(std::move(view), optimize::SquaredError{std::move(target)});
  }
  optimize::LocalizedProblem problem =
      optimize::make_problem(model, std::move(objectives), box);

  try {
    core::Rv closest = optimize::bliss_point(model, box, targets);
    optimize::SolveResult solved = optimize::solve_localized(model, problem);

    report::Table table;
    table.header({"quantity", "value"});
    table.row({"minimizer", join_rats(solved.minimizer.values)});
    table.row({"objective", format_rational(solved.value)});
    table.row({"clamped patch", join_rats(closest.values)});

    ordered_json payload;
    payload["command"] = "bliss";
    payload["targets"] = targets_name;
    payload["box"] = box_name;
    payload["minimizer"] = rat_array(solved.minimizer.values);
    payload["objective"] = format_rational(solved.value);
    payload["clamped_patch"] = rat_array(closest.values);
    ordered_json per_view = ordered_json::array();
    for (const auto& m : solved.per_view_minimizers) per_view.push_back(rat_array(m.values));
    payload["per_view_minimizers"] = std::move(per_view);
    return sink.finish("bliss", table.render(), payload);
  } catch (const optimize::IncoherentOptimizersError& e) {
    const auto& c = e.conflict;
    std::string text = "CONFLICT: per-view minimizers for entries " +
                       std::to_string(c.first_entry) + " and " +
                       std::to_string(c.second_entry) + " disagree at outcome " +
                       std::to_string(c.outcome) + "\n";
    ordered_json payload;
    payload["command"] = "bliss";
    payload["targets"] = targets_name;
    payload["box"] = box_name;
    payload["conflict"] = {{"first_entry", c.first_entry},
                           {"second_entry", c.second_entry},
                           {"outcome", c.outcome},
                           {"first_value", format_rational(c.first_value)},
                           {"second_value", format_rational(c.second_value)}};
    int sink_code = sink.finish("bliss", text, payload);
    if (sink_code != kOk) return sink_code;
    return kVerdict;
  }
}

// --------------------------------------------------------------- bubble-demo

int cmd_bubble_demo(const Sink& sink, const std::string& scenario_path, long truncation) {
  std::vector<Rat> m_grid = {Rat(1), Rat(2), Rat(5), Rat(10)};
  std::vector<long> n_grid = {10, 100, truncation};
  if (!scenario_path.empty()) {
    scenario::Scenario scn = scenario::parse_scenario_file(scenario_path);
    if (scn.continuum) {
      m_grid = scn.continuum->m_grid;
      n_grid = scn.continuum->n_grid;
    }
  }

  continuum::PiecewisePoly claim = continuum::benchmark_claim();
  report::Table members;
  members.header({"member", "claim expectation"});
  for (long n = 1; n <= 10; ++n)
    members.row({std::to_string(n),
                 format_rational(continuum::member_expectation(n, claim))});

  continuum::TruncatedGapReport rep = continuum::truncated_gap_report(m_grid, n_grid);
  report::Table cells;
  cells.header({"cutoff", "depth", "localized value", "gap", "gap approx"});
  for (const auto& row : rep.rows)
    cells.row({format_rational(row.m), std::to_string(row.n_max),
               format_rational(row.kappa), format_rational(row.gap),
               decimal_approx(row.gap)});

  std::string text = "benchmark claim expectations under the scale family\n" +
                     members.render() + "\nreference-view dual value: " +
                     format_rational(rep.dual_value) +
                     "\nlocalized values of the cut-off claim\n" + cells.render();

  ordered_json payload;
  payload["command"] = "bubble-demo";
  payload["dual_value"] = format_rational(rep.dual_value);
  ordered_json member_rows = ordered_json::array();
  for (long n = 1; n <= 10; ++n)
    member_rows.push_back({{"member", n},
                           {"expectation",
                            format_rational(continuum::member_expectation(n, claim))}});
  payload["member_expectations"] = std::move(member_rows);
  ordered_json cell_rows = ordered_json::array();
  for (const auto& row : rep.rows)
    cell_rows.push_back({{"cutoff", format_rational(row.m)},
                         {"depth", row.n_max},
                         {"localized", format_rational(row.kappa)},
                         {"gap", format_rational(row.gap)},
                         {"gap_approx", decimal_approx(row.gap)}});
  payload["cells"] = std::move(cell_rows);
  return sink.finish("bubble-demo", text, payload);
}

// ------------------------------------------------------------------ selftest

int cmd_selftest(const Sink& sink, std::uint64_t seed, std::ostream& err) {
  auto results = acceptance::run_acceptance(seed, &err);
  std::ostringstream text;
  bool all = acceptance::print_results(results, text);

  ordered_json payload;
  payload["command"] = "selftest";
  payload["seed"] = seed;
  payload["passed"] = all;
  ordered_json rows = ordered_json::array();
  for (const auto& r : results)
    rows.push_back({{"criterion", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  payload["criteria"] = std::move(rows);

  int sink_code = sink.finish("selftest", text.str(), payload);
  if (sink_code != kOk) return sink_code;
  return all ? kOk : kVerdict;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact tools for finite robust models: hedging, localization, aggregation"};
  app.require_subcommand(1);

  std::string format = "table";
  const char* env_dir = std::getenv("QSURE_OUT");
  std::string out_dir = env_dir ? env_dir : "";
  long max_pivots = 100000;
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"table", "machine"}));
  app.add_option("--out", out_dir, "directory for <command>.json drops (env QSURE_OUT)");
  app.add_option("--max-pivots", max_pivots, "pivot budget for every internal solve")
      ->check(CLI::PositiveNumber);

  std::string scenario_path, market_name, claim_name, view_name, risk_name;
  std::string selector_name = "martingale", base_name, family_name, targets_name, box_name;
  long truncation = 1000;
  std::uint64_t seed = 2024;
  int code = kOk;
  auto sink = [&] {
    lp::set_default_max_pivots(max_pivots);
    return Sink{format, out_dir, out};
  };

  CLI::App* na = app.add_subcommand("na-check", "decide quasi-sure no-arbitrage");
  na->fallthrough();
  na->add_option("--scenario", scenario_path, "scenario file")->required();
  na->add_option("--market", market_name, "market name (defaults to the only one)");
  na->callback([&] { code = cmd_na_check(sink(), scenario_path, market_name); });

  CLI::App* hedge = app.add_subcommand("superhedge", "price a claim by superhedging");
  hedge->fallthrough();
  hedge->add_option("--scenario", scenario_path, "scenario file")->required();
  hedge->add_option("--market", market_name, "market name (defaults to the only one)");
  hedge->add_option("--claim", claim_name, "rv to price")->required();
  hedge->add_option("--view", view_name, "also hedge only on this measure's support");
  hedge->callback(
      [&] { code = cmd_superhedge(sink(), scenario_path, market_name, claim_name, view_name); });

  CLI::App* ftap = app.add_subcommand(
      "ftap", "compare no-arbitrage with domination by pricing measures");
  ftap->fallthrough();
  ftap->add_option("--scenario", scenario_path, "scenario file")->required();
  ftap->add_option("--market", market_name, "market name (defaults to the only one)");
  ftap->add_option("--selector", selector_name, "pricing measure family")
      ->check(CLI::IsMember({"martingale", "equivalent-to-some-martingale",
                             "dominated-by-prior", "equivalent-to-prior", "equivalent-to"}));
  ftap->add_option("--base", base_name, "base measure for --selector equivalent-to");
  ftap->callback([&] {
    code = cmd_ftap(sink(), scenario_path, market_name, selector_name, base_name);
  });

  CLI::App* localize = app.add_subcommand("localize", "localize a risk value to a view");
  localize->fallthrough();
  localize->add_option("--scenario", scenario_path, "scenario file")->required();
  localize->add_option("--risk", risk_name, "risk measure name")->required();
  localize->add_option("--claim", claim_name, "rv to evaluate")->required();
  localize->add_option("--view", view_name, "measure whose support localizes")->required();
  localize->callback(
      [&] { code = cmd_localize(sink(), scenario_path, risk_name, claim_name, view_name); });

  CLI::App* rtable = app.add_subcommand(
      "risk-table", "tabulate direct and localized values for every rv");
  rtable->fallthrough();
  rtable->add_option("--scenario", scenario_path, "scenario file")->required();
  rtable->add_option("--risk", risk_name, "risk measure name")->required();
  rtable->callback([&] { code = cmd_risk_table(sink(), scenario_path, risk_name); });

  CLI::App* aggregate =
      app.add_subcommand("aggregate", "patch per-view prescriptions into one rv");
  aggregate->fallthrough();
  aggregate->add_option("--scenario", scenario_path, "scenario file")->required();
  aggregate->add_option("--family", family_name, "family name")->required();
  aggregate->callback([&] { code = cmd_aggregate(sink(), scenario_path, family_name); });

  CLI::App* bliss =
      app.add_subcommand("bliss", "closest feasible point to per-view targets");
  bliss->fallthrough();
  bliss->add_option("--scenario", scenario_path, "scenario file")->required();
  bliss->add_option("--targets", targets_name, "targets name")->required();
  bliss->add_option("--box", box_name, "interval name")->required();
  bliss->callback([&] { code = cmd_bliss(sink(), scenario_path, targets_name, box_name); });

  CLI::App* bubble = app.add_subcommand(
      "bubble-demo", "localization gap of the scale-family benchmark");
  bubble->fallthrough();
  bubble->add_option("--scenario", scenario_path, "scenario with a continuum block");
  bubble->add_option("--truncation", truncation, "deepest family member")
      ->check(CLI::PositiveNumber);
  bubble->callback([&] { code = cmd_bubble_demo(sink(), scenario_path, truncation); });

  CLI::App* selftest = app.add_subcommand("selftest", "run the full acceptance battery");
  selftest->fallthrough();
  selftest->add_option("--seed", seed, "seed for the randomized batteries");
  selftest->callback([&] { code = cmd_selftest(sink(), seed, err); });

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const scenario::ScenarioError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const market::ArbitrageError& e) {
    err << "error: " << e.what() << "\n";
    return kVerdict;
  } catch (const sensitivity::SearchBudgetError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const lp::PivotLimitError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInputError;
  }
  return code;
}

}  // namespace qsure::cli
