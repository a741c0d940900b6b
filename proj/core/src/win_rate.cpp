#include <algorithm>
#include <charconv>
#include <cmath>

#include <json.hpp>

#include "transtab/stability.hpp"

namespace transtab {
namespace {

double percent(std::uint64_t part, std::uint64_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

std::string fmt6(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

}  // namespace

double WinRateTable::win_percent(std::size_t measure, std::size_t metric) const {
  return percent(wins[measure][metric], experiments[measure]);
}

double WinRateTable::tie_percent(std::size_t measure) const {
  return percent(ties[measure], experiments[measure]);
}

double WinRateTable::no_contest_percent(std::size_t measure) const {
  return percent(no_contest[measure], experiments[measure]);
}

double WinRateTable::average_percent(std::size_t metric) const {
  std::uint64_t w = 0, n = 0;
  for (std::size_t e = 0; e < measures.size(); ++e) {
    w += wins[e][metric];
    n += experiments[e];
  }
  return percent(w, n);
}

WinRateTable win_rate(const ExperimentSet& xs) {
  WinRateTable t;
  t.metrics = xs.metrics;
  t.measures = xs.measures;
  const std::size_t n_metrics = t.metrics.size();
  const std::size_t n_measures = t.measures.size();
  t.wins.assign(n_measures, std::vector<std::uint64_t>(n_metrics, 0));
  t.undefined.assign(n_measures, std::vector<std::uint64_t>(n_metrics, 0));
  t.ties.assign(n_measures, 0);
  t.no_contest.assign(n_measures, 0);
  t.experiments.assign(n_measures, 0);

  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto e = static_cast<std::size_t>(
        std::find(t.measures.begin(), t.measures.end(), xs.experiments[i].measure) -
        t.measures.begin());
    ++t.experiments[e];
    const auto q = xs.outcome(i);
    std::size_t best = n_metrics;
    std::size_t at_best = 0;
    for (std::size_t m = 0; m < n_metrics; ++m) {
      if (std::isnan(q[m])) {
        ++t.undefined[e][m];
        continue;
      }
      if (best == n_metrics || q[m] > q[best]) {
        best = m;
        at_best = 1;
      } else if (q[m] == q[best]) {
        ++at_best;
      }
    }
    if (best == n_metrics) ++t.no_contest[e];
    else if (at_best > 1) ++t.ties[e];
    else ++t.wins[e][best];
  }
  return t;
}

std::string stability_csv(const StabilityReport& report) {
  std::string out = "component,ss,mode,total_pairs,evaluated_pairs,undefined_pairs\n";
  for (const auto& c : report.components) {
    out += to_string(c.component);
    out += ',';
    out += c.ss ? fmt6(*c.ss) : std::string("undefined");
    out += ',';
    out += c.exact ? "exact" : "sampled";
    out += ',' + std::to_string(c.total_pairs) + ',' + std::to_string(c.evaluated_pairs) + ',' +
           std::to_string(c.undefined_pairs) + '\n';
  }
  return out;
}

std::string win_rate_csv(const WinRateTable& t) {
  std::string out = "metric";
  for (auto e : t.measures) out += ",win%_" + std::string(to_string(e));
  out += ",avg\n";
  for (std::size_t m = 0; m < t.metrics.size(); ++m) {
    out += to_string(t.metrics[m]);
    for (std::size_t e = 0; e < t.measures.size(); ++e) out += ',' + fmt6(t.win_percent(e, m));
    out += ',' + fmt6(t.average_percent(m)) + '\n';
  }
  auto extra_row = [&](const char* name, const std::vector<std::uint64_t>& counts) {
    out += name;
    std::uint64_t c = 0, n = 0;
    for (std::size_t e = 0; e < t.measures.size(); ++e) {
      out += ',' + fmt6(percent(counts[e], t.experiments[e]));
      c += counts[e];
      n += t.experiments[e];
    }
    out += ',' + fmt6(percent(c, n)) + '\n';
  };
  extra_row("(tie)", t.ties);
  extra_row("(no_contest)", t.no_contest);
  return out;
}

std::string stability_json(const StabilityReport& report, const WinRateTable* table) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["mode"] = report.options.mode == PairMode::kExact ? "exact" : "sampled";
  doc["budget"] = report.options.budget;
  doc["seed"] = report.options.seed;
  ordered_json comps = ordered_json::array();
  for (const auto& c : report.components) {
    ordered_json j;
    j["component"] = std::string(to_string(c.component));
    j["ss"] = c.ss ? ordered_json(*c.ss) : ordered_json(nullptr);
    j["exact"] = c.exact;
    j["total_pairs"] = c.total_pairs;
    j["evaluated_pairs"] = c.evaluated_pairs;
    j["undefined_pairs"] = c.undefined_pairs;
    if (!c.note.empty()) j["note"] = c.note;
    comps.push_back(std::move(j));
  }
  doc["setup_stability"] = comps;
  if (table) {
    ordered_json wr;
    for (std::size_t e = 0; e < table->measures.size(); ++e) {
      ordered_json j;
      j["experiments"] = table->experiments[e];
      j["ties"] = table->ties[e];
      j["no_contest"] = table->no_contest[e];
      for (std::size_t m = 0; m < table->metrics.size(); ++m) {
        const std::string name(to_string(table->metrics[m]));
        j["wins"][name] = table->wins[e][m];
        j["win_percent"][name] = table->win_percent(e, m);
        j["undefined"][name] = table->undefined[e][m];
      }
      wr[std::string(to_string(table->measures[e]))] = std::move(j);
    }
    ordered_json avg;
    for (std::size_t m = 0; m < table->metrics.size(); ++m) {
      avg[std::string(to_string(table->metrics[m]))] = table->average_percent(m);
    }
    wr["average_percent"] = avg;
    doc["win_rate"] = wr;
  }
  return doc.dump(2) + "\n";
}

}  // namespace transtab
