#include "qsure/scenario.hpp"

#include <fstream>
#include <sstream>

namespace qsure::scenario {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::string clean = line.substr(0, line.find('#'));
  std::istringstream ss(clean);
  std::vector<std::string> tokens;
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  return tokens;
}

Rat parse_rat_or_throw(const std::string& tok, int line) {
  auto r = parse_rational(tok);
  if (!r) throw ScenarioError(line, "malformed rational '" + tok + "'");
  return *r;
}

std::vector<Rat> parse_rats(const std::vector<std::string>& tokens, std::size_t from,
                            int line) {
  std::vector<Rat> out;
  for (std::size_t i = from; i < tokens.size(); ++i)
    out.push_back(parse_rat_or_throw(tokens[i], line));
  return out;
}

long parse_long_or_throw(const std::string& tok, int line) {
  try {
    std::size_t used = 0;
    long v = std::stol(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ScenarioError(line, "malformed integer '" + tok + "'");
  }
}

// Builder state for the block under construction.
struct ModelDraft {
  int outcomes = 0;
  std::vector<core::ProbabilityMeasure> priors;
  bool convex = false;
  int start_line = 0;
};

struct RiskDraft {
  std::string name;
  std::vector<risk::Constraint> constraints;
  int start_line = 0;
};

struct MarketDraft {
  std::string name;
  std::vector<Rat> initial;
  std::vector<std::vector<Rat>> terminal;
  int start_line = 0;
};

struct IntervalDraft {
  std::string name;
  IntervalSpec spec;
  int start_line = 0;
};

struct FamilyDraft {
  std::string name;
  std::vector<FamilyEntry> entries;
  int start_line = 0;
};

struct TargetsDraft {
  std::string name;
  TargetsSpec spec;
  int start_line = 0;
};

struct ContinuumDraft {
  ContinuumSpec spec;
  int start_line = 0;
};

}  // namespace

const core::Rv* Scenario::find_rv(const std::string& name) const {
  for (const auto& [n, v] : rvs)
    if (n == name) return &v;
  return nullptr;
}
const core::ProbabilityMeasure* Scenario::find_measure(const std::string& name) const {
  for (const auto& [n, v] : measures)
    if (n == name) return &v;
  return nullptr;
}
const risk::MaxAffineRiskMeasure* Scenario::find_risk(const std::string& name) const {
  for (const auto& [n, v] : risks)
    if (n == name) return &v;
  return nullptr;
}
const market::MarketModel* Scenario::find_market(const std::string& name) const {
  for (const auto& [n, v] : markets)
    if (n == name) return &v;
  return nullptr;
}
const IntervalSpec* Scenario::find_interval(const std::string& name) const {
  for (const auto& [n, v] : intervals)
    if (n == name) return &v;
  return nullptr;
}
const std::vector<FamilyEntry>* Scenario::find_family(const std::string& name) const {
  for (const auto& [n, v] : families)
    if (n == name) return &v;
  return nullptr;
}
const TargetsSpec* Scenario::find_targets(const std::string& name) const {
  for (const auto& [n, v] : targets)
    if (n == name) return &v;
  return nullptr;
}

Scenario parse_scenario(std::istream& in) {
  Scenario sc;
  enum class Block { None, Model, Risk, Market, Interval, Family, Targets, Continuum };
  Block block = Block::None;
  ModelDraft model_draft;
  RiskDraft risk_draft;
  MarketDraft market_draft;
  IntervalDraft interval_draft;
  FamilyDraft family_draft;
  TargetsDraft targets_draft;
  ContinuumDraft continuum_draft;

  auto require_model = [&sc](int line) -> const core::RobustModel& {
    if (!sc.model) throw ScenarioError(line, "a model block must come first");
    return *sc.model;
  };
  auto check_fresh_name = [&sc](const std::string& name, int line) {
    if (sc.find_rv(name) || sc.find_measure(name) || sc.find_risk(name) ||
        sc.find_market(name) || sc.find_interval(name) || sc.find_family(name) ||
        sc.find_targets(name))
      throw ScenarioError(line, "name '" + name + "' is already taken");
  };

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto tokens = tokenize(raw);
    if (tokens.empty()) continue;
    const std::string& head = tokens.front();

    if (block == Block::None) {
      if (head == "model" && tokens.size() == 2 && tokens[1] == "{") {
        if (sc.model) throw ScenarioError(line, "duplicate model block");
        block = Block::Model;
        model_draft = ModelDraft{};
        model_draft.start_line = line;
      } else if (head == "rv" && tokens.size() >= 3) {
        const auto& model = require_model(line);
        check_fresh_name(tokens[1], line);
        auto values = parse_rats(tokens, 2, line);
        if (static_cast<int>(values.size()) != model.n_outcomes())
          throw ScenarioError(line, "rv needs one value per outcome");
        sc.rvs.emplace_back(tokens[1], core::make_rv(model, std::move(values)));
      } else if (head == "measure" && tokens.size() >= 3) {
        const auto& model = require_model(line);
        check_fresh_name(tokens[1], line);
        auto mass = parse_rats(tokens, 2, line);
        if (static_cast<int>(mass.size()) != model.n_outcomes())
          throw ScenarioError(line, "measure needs one mass per outcome");
        try {
          sc.measures.emplace_back(tokens[1], core::make_probability(std::move(mass)));
        } catch (const std::invalid_argument& e) {
          throw ScenarioError(line, e.what());
        }
      } else if (head == "risk" && tokens.size() == 3 && tokens[2] == "{") {
        require_model(line);
        check_fresh_name(tokens[1], line);
        risk_draft = RiskDraft{};
        risk_draft.name = tokens[1];
        risk_draft.start_line = line;
        block = Block::Risk;
      } else if (head == "market" && tokens.size() == 3 && tokens[2] == "{") {
        require_model(line);
        check_fresh_name(tokens[1], line);
        market_draft = MarketDraft{};
        market_draft.name = tokens[1];
        market_draft.start_line = line;
        block = Block::Market;
      } else if (head == "interval" && tokens.size() == 3 && tokens[2] == "{") {
        require_model(line);
        check_fresh_name(tokens[1], line);
        interval_draft = IntervalDraft{};
        interval_draft.name = tokens[1];
        interval_draft.start_line = line;
        block = Block::Interval;
      } else if (head == "family" && tokens.size() == 3 && tokens[2] == "{") {
        require_model(line);
        check_fresh_name(tokens[1], line);
        family_draft = FamilyDraft{};
        family_draft.name = tokens[1];
        family_draft.start_line = line;
        block = Block::Family;
      } else if (head == "targets" && tokens.size() == 3 && tokens[2] == "{") {
        require_model(line);
        check_fresh_name(tokens[1], line);
        targets_draft = TargetsDraft{};
        targets_draft.name = tokens[1];
        targets_draft.start_line = line;
        block = Block::Targets;
      } else if (head == "continuum" && tokens.size() == 2 && tokens[1] == "{") {
        if (sc.continuum) throw ScenarioError(line, "duplicate continuum block");
        continuum_draft = ContinuumDraft{};
        continuum_draft.start_line = line;
        block = Block::Continuum;
      } else {
        throw ScenarioError(line, "unrecognized directive '" + head + "'");
      }
      continue;
    }

    if (head == "}") {
      if (tokens.size() != 1) throw ScenarioError(line, "unexpected text after '}'");
      try {
        switch (block) {
          case Block::Model:
            sc.model.emplace(model_draft.outcomes, std::move(model_draft.priors),
                             model_draft.convex);
            break;
          case Block::Risk:
            sc.risks.emplace_back(
                risk_draft.name,
                risk::make_risk_measure(*sc.model, std::move(risk_draft.constraints)));
            break;
          case Block::Market:
            sc.markets.emplace_back(
                market_draft.name,
                market::make_market(*sc.model, std::move(market_draft.initial),
                                    std::move(market_draft.terminal)));
            break;
          case Block::Interval: {
            const auto& model = *sc.model;
            const auto& spec = interval_draft.spec;
            if (static_cast<int>(spec.lower.size()) != model.n_outcomes() ||
                static_cast<int>(spec.upper.size()) != model.n_outcomes())
              throw std::invalid_argument("interval needs lower and upper lines");
            if (!core::qs_leq(model, core::make_rv(model, spec.lower),
                              core::make_rv(model, spec.upper)))
              throw std::invalid_argument("interval: lower bound exceeds upper bound");
            sc.intervals.emplace_back(interval_draft.name, std::move(interval_draft.spec));
            break;
          }
          case Block::Family:
            if (family_draft.entries.empty())
              throw std::invalid_argument("family needs at least one entry");
            sc.families.emplace_back(family_draft.name, std::move(family_draft.entries));
            break;
          case Block::Targets:
            if (targets_draft.spec.per_prior.empty())
              throw std::invalid_argument("targets needs at least one prior line");
            sc.targets.emplace_back(targets_draft.name, std::move(targets_draft.spec));
            break;
          case Block::Continuum:
            if (continuum_draft.spec.m_grid.empty() || continuum_draft.spec.n_grid.empty())
              throw std::invalid_argument("continuum needs m_grid and n_grid lines");
            sc.continuum = std::move(continuum_draft.spec);
            break;
          case Block::None:
            throw std::invalid_argument("unmatched '}'");
        }
      } catch (const ScenarioError&) {
        throw;
      } catch (const std::invalid_argument& e) {
        throw ScenarioError(line, e.what());
      }
      block = Block::None;
      continue;
    }

    try {
      switch (block) {
        case Block::Model: {
          if (head == "outcomes" && tokens.size() == 2) {
            model_draft.outcomes = static_cast<int>(parse_long_or_throw(tokens[1], line));
          } else if (head == "prior" && tokens.size() >= 2) {
            auto mass = parse_rats(tokens, 1, line);
            if (model_draft.outcomes == 0)
              throw std::invalid_argument("outcomes must come before priors");
            if (static_cast<int>(mass.size()) != model_draft.outcomes)
              throw std::invalid_argument("prior needs one mass per outcome");
            model_draft.priors.push_back(core::make_probability(std::move(mass)));
          } else if (head == "convex" && tokens.size() == 1) {
            model_draft.convex = true;
          } else {
            throw std::invalid_argument("unrecognized model line '" + head + "'");
          }
          break;
        }
        case Block::Risk: {
          if (head != "constraint" || tokens.size() < 4 ||
              tokens[tokens.size() - 2] != "penalty")
            throw std::invalid_argument(
                "risk lines look like: constraint <masses> penalty <value>");
          std::vector<std::string> mass_tokens(tokens.begin() + 1, tokens.end() - 2);
          std::vector<Rat> mass;
          for (const auto& t : mass_tokens) mass.push_back(parse_rat_or_throw(t, line));
          if (static_cast<int>(mass.size()) != sc.model->n_outcomes())
            throw std::invalid_argument("constraint needs one mass per outcome");
          risk_draft.constraints.push_back(
              risk::Constraint{core::make_probability(std::move(mass)),
                               parse_rat_or_throw(tokens.back(), line)});
          break;
        }
        case Block::Market: {
          if (head == "initial" && tokens.size() >= 2) {
            if (!market_draft.initial.empty())
              throw std::invalid_argument("duplicate initial line");
            market_draft.initial = parse_rats(tokens, 1, line);
          } else if (head == "terminal" && tokens.size() >= 2) {
            auto prices = parse_rats(tokens, 1, line);
            if (static_cast<int>(prices.size()) != sc.model->n_outcomes())
              throw std::invalid_argument("terminal needs one price per outcome");
            market_draft.terminal.push_back(std::move(prices));
          } else {
            throw std::invalid_argument("unrecognized market line '" + head + "'");
          }
          break;
        }
        case Block::Interval: {
          if (head == "lower" && tokens.size() >= 2 && interval_draft.spec.lower.empty())
            interval_draft.spec.lower = parse_rats(tokens, 1, line);
          else if (head == "upper" && tokens.size() >= 2 && interval_draft.spec.upper.empty())
            interval_draft.spec.upper = parse_rats(tokens, 1, line);
          else
            throw std::invalid_argument("interval lines are one 'lower' and one 'upper'");
          break;
        }
        case Block::Family: {
          if (head != "entry" || tokens.size() < 3)
            throw std::invalid_argument("family lines look like: entry <measure> <values>");
          if (!sc.find_measure(tokens[1]))
            throw std::invalid_argument("unknown measure '" + tokens[1] + "'");
          FamilyEntry entry;
          entry.measure = tokens[1];
          entry.values = parse_rats(tokens, 2, line);
          if (static_cast<int>(entry.values.size()) != sc.model->n_outcomes())
            throw std::invalid_argument("entry needs one value per outcome");
          family_draft.entries.push_back(std::move(entry));
          break;
        }
        case Block::Targets: {
          if (head != "prior" || tokens.size() < 3)
            throw std::invalid_argument("targets lines look like: prior <index> <values>");
          long idx = parse_long_or_throw(tokens[1], line);
          if (idx < 1 || idx > static_cast<long>(sc.model->priors().size()))
            throw std::invalid_argument("prior index out of range");
          auto values = parse_rats(tokens, 2, line);
          if (static_cast<int>(values.size()) != sc.model->n_outcomes())
            throw std::invalid_argument("target needs one value per outcome");
          targets_draft.spec.per_prior.emplace_back(static_cast<std::size_t>(idx - 1),
                                                    std::move(values));
          break;
        }
        case Block::Continuum: {
          if (head == "m_grid" && tokens.size() >= 2) {
            continuum_draft.spec.m_grid = parse_rats(tokens, 1, line);
          } else if (head == "n_grid" && tokens.size() >= 2) {
            for (std::size_t i = 1; i < tokens.size(); ++i) {
              long v = parse_long_or_throw(tokens[i], line);
              if (v < 1) throw std::invalid_argument("truncation indices must be positive");
              continuum_draft.spec.n_grid.push_back(v);
            }
          } else {
            throw std::invalid_argument("unrecognized continuum line '" + head + "'");
          }
          break;
        }
        case Block::None:
          break;
      }
    } catch (const ScenarioError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(line, e.what());
    }
  }
  if (block != Block::None) throw ScenarioError(line, "unterminated block at end of input");
  return sc;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  return parse_scenario(in);
}

}  // namespace qsure::scenario
